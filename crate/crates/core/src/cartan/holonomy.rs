use crate::exactmath::{Field, IncrementalEchelon, Matrix};

use super::{AlgebraicCartanConnection, CartanContext, CurvatureChain};

/// α: k → End g and its curvature R on pairs of basis vectors of k.
#[derive(Clone, Debug)]
pub struct HolonomySystem<G: Field> {
    pub alpha: Vec<Matrix<G>>,
    pub r: Vec<((usize, usize), Matrix<G>)>,
}

impl<G: Field> HolonomySystem<G> {
    fn saturate(&self, right: bool) -> usize {
        let dg = self.alpha.first().map_or(0, |a| a.rows());
        let mut ech = IncrementalEchelon::new(dg);
        let mut queue: Vec<Vec<G>> = Vec::new();
        for (_, r) in &self.r {
            for row in r.to_rows() {
                if ech.insert(&row) {
                    queue.push(row);
                }
            }
        }
        if right {
            while let Some(row) = queue.pop() {
                for a in &self.alpha {
                    let moved: Vec<G> = (0..dg)
                        .map(|c| {
                            let mut acc = G::zero();
                            for (k, x) in row.iter().enumerate() {
                                let y = a.get(k, c);
                                if !x.is_zero() && !y.is_zero() {
                                    acc = acc.add(&x.mul(y));
                                }
                            }
                            acc
                        })
                        .collect();
                    if ech.insert(&moved) {
                        queue.push(moved);
                    }
                }
            }
        }
        dg - ech.rank()
    }

    /// Dimension of the largest subspace of g annihilated by every R(X, Y)
    /// and preserved by every α(X): the annihilator rows are closed under
    /// `w ↦ w ∘ α(Xᵢ)` until stable.
    pub fn symmetry_dimension(&self) -> usize {
        self.saturate(true)
    }

    /// dim ∩ ker R(Xᵢ, Xⱼ), with no closure under α.
    pub fn curvature_kernel_dim(&self) -> usize {
        self.saturate(false)
    }
}

impl<G: Field> CartanContext<G> {
    /// α(X)Y = [ω̄X, Y] − κ̄(ω̄X, Y) and R(Xᵢ, Xⱼ) = [αᵢ, αⱼ] − α([Xᵢ, Xⱼ]_k).
    pub fn holonomy(&self, conn: &AlgebraicCartanConnection<G>, kappa: &CurvatureChain<G>) -> HolonomySystem<G> {
        let n = conn.dim();
        let dg = self.g.dim();
        let alpha: Vec<Matrix<G>> = (0..n)
            .map(|i| {
                let w = conn.omega_of(i);
                let mut m = self.g.ad(&w);
                for c in 0..self.neg {
                    let e = self.g.basis_vector(c);
                    for (r, x) in kappa.eval(&w, &e, self.neg).into_iter().enumerate() {
                        if !x.is_zero() {
                            let cur = m.get(r, c).sub(&x);
                            m.set(r, c, cur);
                        }
                    }
                }
                m
            })
            .collect();
        let mut r = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut m = alpha[i].mul(&alpha[j]).expect("square").sub(&alpha[j].mul(&alpha[i]).expect("square"));
                for (l, c) in conn.k.bracket_basis(i, j) {
                    m = m.sub(&alpha[*l].scale(c));
                }
                if !m.is_zero() {
                    r.push(((i, j), m));
                }
            }
        }
        debug_assert_eq!(alpha.first().map_or(dg, |a| a.rows()), dg);
        HolonomySystem { alpha, r }
    }

    pub fn symmetry_dimension(&self, conn: &AlgebraicCartanConnection<G>, kappa: &CurvatureChain<G>) -> usize {
        self.holonomy(conn, kappa).symmetry_dimension()
    }
}
