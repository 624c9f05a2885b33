//! Lie algebra cohomology and homology with exact coefficients.

mod cochain;
pub mod forms;
mod homology;
pub mod nr;

use std::collections::BTreeMap;

use crate::exactmath::{kernel_basis, Field, IncrementalEchelon};

pub use cochain::{key_index, Cochain, CochainComplex};
pub use homology::{quintic_stabilizer, Chain, HarmonicDecomposition, HomologyComplex, QuinticBasis};

pub use crate::liealg::Weight;

/// Cohomology of one weight block in one cochain degree.
#[derive(Clone, Debug)]
pub struct BlockCohomology<F: Field> {
    pub weight: Weight,
    pub p: usize,
    pub keys: Vec<(u32, usize)>,
    pub cocycle_dim: usize,
    pub boundary_dim: usize,
    /// Cocycles completing a basis of the boundaries to one of the cocycles.
    pub representatives: Vec<Cochain<F>>,
}

impl<F: Field> BlockCohomology<F> {
    pub fn dim(&self) -> usize {
        self.cocycle_dim - self.boundary_dim
    }
}

impl<F: Field> CochainComplex<F> {
    pub fn block_cohomology(&self, p: usize, w: Weight) -> BlockCohomology<F> {
        let keys = self.block(p, w);
        let next = self.block(p + 1, w);
        let dp = self.d_matrix(p, &keys, &next);
        let mut ech = IncrementalEchelon::new(keys.len());
        let mut boundary_dim = 0;
        if p > 0 {
            let prev = self.block(p - 1, w);
            if !prev.is_empty() && !keys.is_empty() {
                let dm = self.d_matrix(p - 1, &prev, &keys);
                for j in 0..dm.cols() {
                    if ech.insert(&dm.col(j)) {
                        boundary_dim += 1;
                    }
                }
            }
        }
        let z = if keys.is_empty() {
            Vec::new()
        } else if next.is_empty() {
            (0..keys.len())
                .map(|i| (0..keys.len()).map(|j| if i == j { F::one() } else { F::zero() }).collect())
                .collect()
        } else {
            kernel_basis(&dp)
        };
        let mut reps = Vec::new();
        for v in &z {
            if ech.insert(v) {
                reps.push(Cochain::from_coords(p, &keys, v));
            }
        }
        BlockCohomology {
            weight: w,
            p,
            keys,
            cocycle_dim: z.len(),
            boundary_dim,
            representatives: reps,
        }
    }

    /// Weights occurring in `C^p`.
    pub fn weights(&self, p: usize) -> Vec<Weight> {
        self.blocks(p).into_keys().collect()
    }

    /// Betti numbers `b^p_i` with `i` the E-weight, summed over the weight
    /// blocks accepted by `keep`.
    pub fn betti(&self, p: usize, keep: impl Fn(&Weight) -> bool) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for w in self.weights(p) {
            if !keep(&w) {
                continue;
            }
            let h = self.block_cohomology(p, w);
            if h.dim() > 0 {
                *out.entry(w[1]).or_insert(0) += h.dim();
            }
        }
        out
    }
}

/// Acceptance test for the weight blocks invariant under a torus spanned by
/// elements `a_j = cH·H + cE·E + cE′·E′` of the Cartan subalgebra.
pub fn torus_invariant<F: Field>(torus: &[[F; 3]]) -> impl Fn(&Weight) -> bool + '_ {
    move |w: &Weight| {
        torus.iter().all(|a| {
            let mut s = F::zero();
            for (c, x) in a.iter().zip(w) {
                s = s.add(&c.mul(&F::from_i64(*x)));
            }
            s.is_zero()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Rational;
    use crate::liealg::heisenberg;

    #[test]
    fn heisenberg_trivial_cohomology() {
        // Heisenberg algebra of dim 3: Betti numbers 1, 2, 2, 1.
        let h = heisenberg::<Rational>().into_inner();
        let cx = CochainComplex::trivial(&h, None);
        let tot: Vec<usize> = (0..4).map(|p| cx.betti(p, |_| true).values().sum()).collect();
        assert_eq!(tot, vec![1, 2, 2, 1]);
    }

    #[test]
    fn representatives_are_cocycles() {
        let h = heisenberg::<Rational>().into_inner();
        let cx = CochainComplex::adjoint(&h, None);
        for w in cx.weights(1) {
            let b = cx.block_cohomology(1, w);
            for r in &b.representatives {
                assert!(cx.d(r).is_zero());
            }
            assert_eq!(b.representatives.len(), b.dim());
        }
    }
}
