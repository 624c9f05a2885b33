//! Lie algebra homology of p₊ with values in g, and the harmonic part of H₂.

use std::collections::BTreeMap;

use crate::exactmath::{kernel_basis, Field, IncrementalEchelon, LinearSolver, Matrix, Rational};
use crate::liealg::{C3Algebra, LieAlgebra};

use super::cochain::{key_index, Cochain};
use super::forms::{bits, subsets, wedge};
use super::Weight;

/// Chains `Σ c · Z_S ⊗ v_k`; the mask indexes p₊ locally.
pub type Chain<F> = Cochain<F>;

#[derive(Clone, Debug)]
pub struct HomologyComplex<F: Field> {
    g: LieAlgebra<F>,
    weights: Vec<Weight>,
    /// g-indices of the basis of p₊.
    plus: Vec<usize>,
    local: BTreeMap<usize, usize>,
}

impl<F: Field> HomologyComplex<F> {
    pub fn new(c3: &C3Algebra) -> Self {
        let plus = c3.positive_indices();
        let local = plus.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        HomologyComplex {
            g: c3.g.lift(),
            weights: c3.weights.clone(),
            plus,
            local,
        }
    }

    pub fn plus(&self) -> &[usize] {
        &self.plus
    }

    pub fn dim_g(&self) -> usize {
        self.g.dim()
    }

    pub fn weight_of(&self, mask: u32, k: usize) -> Weight {
        let mut w = self.weights[k];
        for s in bits(mask) {
            for (x, y) in w.iter_mut().zip(self.weights[self.plus[s]]) {
                *x += y;
            }
        }
        w
    }

    /// `Z_{s}` as a p₊-vector wedged in front of `rest`.
    fn push_front(&self, out: &mut Chain<F>, gvec: &[(usize, F)], rest: u32, k: usize, c: &F) {
        for (gi, x) in gvec {
            let loc = self.local[gi];
            if let Some((m, neg)) = wedge(1 << loc, rest) {
                let v = c.mul(x);
                out.add_term((m, k), if neg { v.neg() } else { v });
            }
        }
    }

    /// ∂(Z_1∧…∧Z_q⊗v) = Σ_{i<j}(−1)^{i+j}[Z_i,Z_j]∧…⊗v + Σ_i(−1)^i …Ẑ_i…⊗[Z_i,v].
    pub fn boundary(&self, c: &Chain<F>) -> Chain<F> {
        let mut out = Chain::zero(c.p.saturating_sub(1));
        for ((mask, k), x) in &c.terms {
            let s = bits(*mask);
            for a in 0..s.len() {
                for b in a + 1..s.len() {
                    let rest = mask & !(1 << s[a]) & !(1 << s[b]);
                    let sign = if (a + b) % 2 == 0 { x.clone() } else { x.neg() };
                    let br = self.g.bracket_basis(self.plus[s[a]], self.plus[s[b]]);
                    self.push_front(&mut out, br, rest, *k, &sign);
                }
                let rest = mask & !(1 << s[a]);
                // 1-based position a+1
                let sign = if a % 2 == 1 { x.clone() } else { x.neg() };
                for (k2, y) in self.g.bracket_basis(self.plus[s[a]], *k) {
                    out.add_term((rest, *k2), sign.mul(y));
                }
            }
        }
        out
    }

    /// Action of `z ∈ g₀` (coordinates in g) on chains.
    pub fn act(&self, z: &[F], c: &Chain<F>) -> Chain<F> {
        let mut out = Chain::zero(c.p);
        for ((mask, k), x) in &c.terms {
            let s = bits(*mask);
            for (a, &loc) in s.iter().enumerate() {
                let rest = mask & !(1 << loc);
                let zb = self.g.bracket(z, &self.g.basis_vector(self.plus[loc]));
                let zb: Vec<(usize, F)> =
                    zb.into_iter().enumerate().filter(|(_, y)| !y.is_zero()).collect();
                let sign = if a % 2 == 0 { x.clone() } else { x.neg() };
                self.push_front(&mut out, &zb, rest, *k, &sign);
            }
            let zv = self.g.bracket(z, &self.g.basis_vector(*k));
            for (k2, y) in zv.iter().enumerate() {
                if !y.is_zero() {
                    out.add_term((*mask, k2), x.mul(y));
                }
            }
        }
        out
    }

    pub fn blocks(&self, q: usize) -> BTreeMap<Weight, Vec<(u32, usize)>> {
        let mut out: BTreeMap<Weight, Vec<(u32, usize)>> = BTreeMap::new();
        for mask in subsets(self.plus.len(), q) {
            for k in 0..self.g.dim() {
                out.entry(self.weight_of(mask, k)).or_default().push((mask, k));
            }
        }
        out
    }

    pub fn boundary_matrix(&self, q: usize, src: &[(u32, usize)], dst: &[(u32, usize)]) -> Matrix<F> {
        let index = key_index(dst);
        let mut m = Matrix::zeros(dst.len(), src.len());
        for (j, key) in src.iter().enumerate() {
            for (k, c) in self.boundary(&Chain::basis(q, key.0, key.1)).terms {
                m.set(*index.get(&k).expect("∂ preserves weight"), j, c);
            }
        }
        m
    }
}

/// One weight block of H₂(p₊, g).
#[derive(Clone, Debug)]
pub struct HarmonicBlock {
    pub weight: Weight,
    pub keys: Vec<(u32, usize)>,
    /// Chains representing a basis of the block of H₂.
    pub representatives: Vec<Chain<Rational>>,
    /// Solver for `[boundaries | representatives]`.
    solver: LinearSolver<Rational>,
    boundary_dim: usize,
}

/// H₂(p₊, g) in positive homogeneity, block by block.
#[derive(Clone, Debug)]
pub struct HarmonicDecomposition {
    pub blocks: Vec<HarmonicBlock>,
    pub complex: HomologyComplex<Rational>,
}

impl HarmonicDecomposition {
    pub fn compute(c3: &C3Algebra) -> Self {
        let hx = HomologyComplex::<Rational>::new(c3);
        let b2 = hx.blocks(2);
        let b3 = hx.blocks(3);
        let b1 = hx.blocks(1);
        let mut blocks = Vec::new();
        for (w, keys) in b2 {
            if w[1] < 1 {
                continue;
            }
            let mut ech = IncrementalEchelon::new(keys.len());
            let mut bcols = Vec::new();
            if let Some(src) = b3.get(&w) {
                let m = hx.boundary_matrix(3, src, &keys);
                for j in 0..m.cols() {
                    let c = m.col(j);
                    if ech.insert(&c) {
                        bcols.push(c);
                    }
                }
            }
            let z = match b1.get(&w) {
                Some(dst) => kernel_basis(&hx.boundary_matrix(2, &keys, dst)),
                None => (0..keys.len())
                    .map(|i| (0..keys.len()).map(|j| Rational::integer((i == j) as i64)).collect())
                    .collect(),
            };
            let mut reps = Vec::new();
            for v in z {
                if ech.insert(&v) {
                    reps.push(v);
                }
            }
            if reps.is_empty() {
                continue;
            }
            let boundary_dim = bcols.len();
            let mut cols = bcols;
            cols.extend(reps.iter().cloned());
            let solver = LinearSolver::new(&Matrix::from_cols(&cols, keys.len()).expect("shape"));
            let representatives = reps.iter().map(|v| Chain::from_coords(2, &keys, v)).collect();
            blocks.push(HarmonicBlock { weight: w, keys, representatives, solver, boundary_dim });
        }
        HarmonicDecomposition { blocks, complex: hx }
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.representatives.len()).sum()
    }

    pub fn block(&self, w: Weight) -> Option<&HarmonicBlock> {
        self.blocks.iter().find(|b| b.weight == w)
    }

    /// Harmonic coordinates of a 2-cycle, block by block. Terms of weight
    /// outside the positive-homogeneity blocks are ignored; `None` if the
    /// chain is not a cycle modulo boundaries in some block.
    pub fn project<F: Field>(&self, c: &Chain<F>) -> Option<Vec<(Weight, Vec<F>)>> {
        let mut out = Vec::new();
        for b in &self.blocks {
            let index = key_index(&b.keys);
            let mut v = vec![F::zero(); b.keys.len()];
            for (k, x) in &c.terms {
                if let Some(&i) = index.get(k) {
                    v[i] = x.clone();
                }
            }
            let sol = b.solver.solve(&v, |q| F::from_rational(q))?;
            out.push((b.weight, sol[b.boundary_dim..].to_vec()));
        }
        Some(out)
    }

    /// The sl₂-adapted basis `Y^j v₅` of the quintic part.
    pub fn quintic_basis(&self, c3: &C3Algebra) -> Option<QuinticBasis> {
        let top = self
            .blocks
            .iter()
            .find(|b| b.weight[0] == 5 && b.weight[1] == 1 && b.representatives.len() == 1)?;
        let y = &c3.grading.y;
        let mut chains = vec![top.representatives[0].clone()];
        for _ in 0..5 {
            let next = self.complex.act(y, chains.last().unwrap());
            chains.push(next);
        }
        let mut weights = Vec::new();
        for (j, ch) in chains.iter().enumerate() {
            let w = [5 - 2 * j as i64, top.weight[1], top.weight[2]];
            let b = self.block(w)?;
            if b.representatives.len() != 1 {
                return None;
            }
            weights.push(w);
            let proj = self.project(ch)?;
            let (_, coords) = proj.iter().find(|(pw, _)| *pw == w)?;
            if coords[0].is_zero() {
                return None;
            }
        }
        Some(QuinticBasis { chains, weights })
    }
}

/// Chains `Y^j v₅`, `j = 0..5`, whose classes span the quintic part.
#[derive(Clone, Debug)]
pub struct QuinticBasis {
    pub chains: Vec<Chain<Rational>>,
    pub weights: Vec<Weight>,
}

fn falling(j: usize) -> i64 {
    (0..j as i64).map(|i| 5 - i).product()
}

impl QuinticBasis {
    /// Binary quintic `Σ a_j z^{5−j} w^j` (returned as `[a_0..a_5]`) of the
    /// quintic part of a harmonic projection.
    pub fn quintic_of<F: Field>(&self, h: &HarmonicDecomposition, proj: &[(Weight, Vec<F>)]) -> Vec<F> {
        (0..6)
            .map(|j| {
                let w = self.weights[j];
                let Some((_, c)) = proj.iter().find(|(pw, _)| *pw == w) else {
                    return F::zero();
                };
                // coordinate of Y^j v₅ in the representative basis of its block
                let basis_proj = h.project(&self.chains[j]).expect("cycle");
                let (_, bc) = basis_proj.iter().find(|(pw, _)| *pw == w).expect("block");
                let scale = F::from_rational(&bc[0]);
                c[0].div(&scale).expect("nonzero").mul(&F::from_i64(falling(j)))
            })
            .collect()
    }

    /// Cycle representing the quintic `Σ a_j z^{5−j} w^j`.
    pub fn chain_of<F: Field>(&self, a: &[F]) -> Chain<F> {
        let mut out = Chain::zero(2);
        for (j, aj) in a.iter().enumerate() {
            let c = aj.div(&F::from_i64(falling(j))).expect("nonzero");
            out = out.add(&self.chains[j].map(|x| F::from_rational(x)).scale(&c));
        }
        out
    }
}

/// Elements of g₀ annihilating the class of the quintic `a`, as coordinate
/// vectors in g.
pub fn quintic_stabilizer(c3: &C3Algebra, h: &HarmonicDecomposition, qb: &QuinticBasis, a: &[Rational]) -> Vec<Vec<Rational>> {
    let ups = qb.chain_of(a);
    let g0 = c3.indices_of_degree(0);
    let mut cols = Vec::new();
    for &i in &g0 {
        let z = c3.g.basis_vector(i);
        let moved = h.complex.act(&z, &ups);
        let proj = h.project(&moved).expect("g₀ preserves cycles");
        cols.push(proj.into_iter().flat_map(|(_, v)| v).collect::<Vec<_>>());
    }
    let rows = cols[0].len();
    let m = Matrix::from_cols(&cols, rows).expect("shape");
    kernel_basis(&m)
        .into_iter()
        .map(|k| {
            let mut v = vec![Rational::integer(0); c3.dim()];
            for (c, &i) in k.iter().zip(&g0) {
                v[i] = c.clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_c3;

    #[test]
    fn boundary_squares_to_zero() {
        let c3 = build_c3();
        let hx = HomologyComplex::<Rational>::new(&c3);
        for q in 1..4 {
            for keys in hx.blocks(q).values().take(40) {
                for key in keys {
                    let c = Chain::basis(q, key.0, key.1);
                    assert!(hx.boundary(&hx.boundary(&c)).is_zero());
                }
            }
        }
    }

    #[test]
    fn harmonic_part_is_quintic_plus_scalar() {
        let c3 = build_c3();
        let h = HarmonicDecomposition::compute(&c3);
        assert_eq!(h.total_dim(), 7);
        let ones: Vec<i64> = h.blocks.iter().filter(|b| b.weight[1] == 1 && b.weight[2] == 0).map(|b| b.weight[0]).collect();
        assert_eq!(ones, vec![-5, -3, -1, 1, 3, 5]);
        assert!(h.quintic_basis(&c3).is_some());
    }

    #[test]
    fn stabilizer_dimensions() {
        let c3 = build_c3();
        let h = HarmonicDecomposition::compute(&c3);
        let qb = h.quintic_basis(&c3).unwrap();
        let e = |j: usize| (0..6).map(|i| Rational::integer((i == j) as i64)).collect::<Vec<_>>();
        assert_eq!(quintic_stabilizer(&c3, &h, &qb, &e(0)).len(), 3);
        assert_eq!(quintic_stabilizer(&c3, &h, &qb, &e(1)).len(), 2);
        assert_eq!(quintic_stabilizer(&c3, &h, &qb, &e(2)).len(), 2);
    }

    #[test]
    fn quintic_round_trip() {
        let c3 = build_c3();
        let h = HarmonicDecomposition::compute(&c3);
        let qb = h.quintic_basis(&c3).unwrap();
        let a: Vec<Rational> = [1, 0, -2, 3, 0, 7].iter().map(|&x| Rational::integer(x)).collect();
        let ch = qb.chain_of(&a);
        let proj = h.project(&ch).unwrap();
        assert_eq!(qb.quintic_of(&h, &proj), a);
    }
}
