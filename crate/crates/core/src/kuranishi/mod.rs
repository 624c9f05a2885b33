//! Deformation DGLA of a graded subalgebra, its Maurer–Cartan set, gauge
//! action and the global Kuranishi family.

mod family;
mod gauge;
mod representatives;

use std::collections::BTreeMap;

use crate::cohomology::{key_index, nr, Cochain, CochainComplex, Weight};
use crate::exactmath::{apply, kernel_basis, Embed, Field, IncrementalEchelon, Matrix, MathError, Rational};
use crate::liealg::{FilteredLieAlgebra, GradedSubalgebra, LieAlgebra, LieError};

pub use family::{decompose_locus, Component, Coordinate, KuranishiFamily};
pub use gauge::{bch, exp_nilpotent, from_matrix, log_unipotent, to_matrix};

#[derive(Debug, thiserror::Error)]
pub enum KuranishiError {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("H⁰ of the deformation complex is {0}-dimensional; the gauge action is not free")]
    NonzeroH0(usize),
    #[error("cochain has a component of weight {0:?} outside the complex")]
    OutsideComplex(Weight),
    #[error("not a Maurer–Cartan element")]
    NotMaurerCartan,
    #[error("{0}")]
    Invalid(String),
}

/// One weight block of `C^q` split as B ⊕ H ⊕ C.
#[derive(Clone, Debug)]
struct BlockSplit<F: Field> {
    keys: Vec<(u32, usize)>,
    index: BTreeMap<(u32, usize), usize>,
    nb: usize,
    nh: usize,
    /// Columns: B (= d of the C-basis one degree down, in order), then H, then C.
    basis: Matrix<F>,
    inv: Matrix<F>,
}

impl<F: Field> BlockSplit<F> {
    fn nc(&self) -> usize {
        self.keys.len() - self.nb - self.nh
    }

    fn col(&self, j: usize) -> Vec<F> {
        self.basis.col(j)
    }
}

/// 𝔏^p = C^{p+1}(k̲, k̲) in positive internal weight, optionally restricted
/// to the weight blocks invariant under the torus a ⊆ k̲₀.
#[derive(Clone, Debug)]
pub struct Dgla<F: Field> {
    pub k: GradedSubalgebra<F>,
    pub complex: CochainComplex<F>,
    pub invariant: bool,
    splits: BTreeMap<(usize, Weight), BlockSplit<F>>,
    mu: Cochain<F>,
}

/// The bracket of `alg` as a 2-cochain.
pub fn structure_cochain<F: Field>(alg: &LieAlgebra<F>) -> Cochain<F> {
    let mut c = Cochain::zero(2);
    for a in 0..alg.dim() {
        for b in a + 1..alg.dim() {
            for (k, x) in alg.bracket_basis(a, b) {
                c.add_term(((1 << a) | (1 << b), *k), x.clone());
            }
        }
    }
    c
}

fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()
}

impl<F: Field> Dgla<F> {
    pub fn new(k: GradedSubalgebra<F>, invariant: bool) -> Result<Self, KuranishiError> {
        if k.neg_dim != 8 || (0..8).any(|i| k.alg.degree(i) >= 0) {
            return Err(KuranishiError::Invalid("k̲ must contain g₋".into()));
        }
        let complex = CochainComplex::adjoint(&k.alg, Some(k.weights.clone()));
        let mut weights: Vec<Weight> = Vec::new();
        for q in 1..=3 {
            for w in complex.weights(q) {
                if w[1] > 0 && (!invariant || k.is_invariant(&w)) && !weights.contains(&w) {
                    weights.push(w);
                }
            }
        }
        weights.sort();
        let mut splits = BTreeMap::new();
        for w in weights {
            let mut c_prev: Vec<Vec<F>> = Vec::new();
            let mut keys_prev: Vec<(u32, usize)> = Vec::new();
            for q in 1..=3 {
                let keys = complex.block(q, w);
                let index = key_index(&keys);
                let n = keys.len();
                // B: images of the previous C-basis
                let mut bcols = Vec::new();
                if q > 1 && !c_prev.is_empty() {
                    let dm = complex.d_matrix(q - 1, &keys_prev, &keys);
                    for c in &c_prev {
                        bcols.push(dm.mul_vec(c));
                    }
                }
                let next = complex.block(q + 1, w);
                let z = if n == 0 {
                    Vec::new()
                } else if next.is_empty() {
                    (0..n).map(|i| unit(n, i)).collect()
                } else {
                    kernel_basis(&complex.d_matrix(q, &keys, &next))
                };
                let mut ech = IncrementalEchelon::new(n);
                for b in &bcols {
                    if !ech.insert(b) {
                        return Err(KuranishiError::Invalid("d not injective on complement".into()));
                    }
                }
                let mut hcols = Vec::new();
                for v in &z {
                    if ech.insert(v) {
                        hcols.push(v.clone());
                    }
                }
                let mut ccols = Vec::new();
                for i in 0..n {
                    let e = unit(n, i);
                    if ech.insert(&e) {
                        ccols.push(e);
                    }
                }
                let (nb, nh) = (bcols.len(), hcols.len());
                let mut cols = bcols;
                cols.extend(hcols);
                cols.extend(ccols.iter().cloned());
                if n > 0 {
                    let basis = Matrix::from_cols(&cols, n)?;
                    let inv = basis.inverse()?;
                    splits.insert((q, w), BlockSplit { keys: keys.clone(), index, nb, nh, basis, inv });
                }
                c_prev = ccols;
                keys_prev = keys;
            }
        }
        let mu = structure_cochain(&k.alg);
        Ok(Dgla { k, complex, invariant, splits, mu })
    }

    pub fn mu(&self) -> &Cochain<F> {
        &self.mu
    }

    /// Weights of the blocks of 𝔏^{q−1} = C^q.
    pub fn weights(&self, q: usize) -> Vec<Weight> {
        self.splits.keys().filter(|(p, _)| *p == q).map(|(_, w)| *w).collect()
    }

    /// Basis dimension of each block, keyed by (cochain degree, weight).
    pub fn block_dims(&self) -> BTreeMap<(usize, Weight), usize> {
        self.splits.iter().map(|(k, s)| (*k, s.keys.len())).collect()
    }

    /// All basis keys of 𝔏^{q−1} = C^q (restricted to the complex's blocks).
    pub fn keys(&self, q: usize) -> Vec<(u32, usize)> {
        self.splits
            .iter()
            .filter(|((p, _), _)| *p == q)
            .flat_map(|(_, s)| s.keys.iter().copied())
            .collect()
    }

    /// dim H^p(𝔏) for p = 0, 1, 2, summed over weights.
    pub fn h_dims(&self) -> [usize; 3] {
        let mut out = [0; 3];
        for ((q, _), s) in &self.splits {
            out[q - 1] += s.nh;
        }
        out
    }

    /// dim H^p(𝔏)_i by E-weight.
    pub fn betti(&self, p: usize) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for ((q, w), s) in &self.splits {
            if *q == p + 1 && s.nh > 0 {
                *out.entry(w[1]).or_insert(0) += s.nh;
            }
        }
        out
    }

    /// Harmonic representatives of H^p(𝔏) with their weights, ordered by
    /// E-weight, then descending H-weight, then echelon order.
    pub fn harmonic_basis(&self, p: usize) -> Vec<(Weight, Cochain<F>)> {
        let mut out = Vec::new();
        for ((q, w), s) in &self.splits {
            if *q != p + 1 {
                continue;
            }
            for j in s.nb..s.nb + s.nh {
                out.push((*w, Cochain::from_coords(*q, &s.keys, &s.col(j))));
            }
        }
        out.sort_by_key(|(w, _)| (w[1], -w[0], -w[2]));
        out
    }

    fn parts<G: Embed<F>>(&self, x: &Cochain<G>) -> Result<BTreeMap<Weight, Vec<G>>, KuranishiError> {
        let q = x.p;
        let mut vecs: BTreeMap<Weight, Vec<G>> = BTreeMap::new();
        for ((mask, k), c) in &x.terms {
            let w = self.complex.weight_of(*mask, *k);
            let s = self.splits.get(&(q, w)).ok_or(KuranishiError::OutsideComplex(w))?;
            let v = vecs.entry(w).or_insert_with(|| vec![G::zero(); s.keys.len()]);
            v[s.index[&(*mask, *k)]] = c.clone();
        }
        Ok(vecs
            .into_iter()
            .map(|(w, v)| {
                let s = &self.splits[&(q, w)];
                (w, apply(&s.inv, &v))
            })
            .collect())
    }

    fn assemble<G: Embed<F>>(&self, q: usize, w: Weight, cols: std::ops::Range<usize>, coeffs: &[G]) -> Cochain<G> {
        let s = &self.splits[&(q, w)];
        let mut v = vec![G::zero(); s.keys.len()];
        for (j, c) in cols.zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (x, b) in v.iter_mut().zip(s.col(j)) {
                if !b.is_zero() {
                    *x = x.add(&c.mul(&G::embed(&b)));
                }
            }
        }
        Cochain::from_coords(q, &s.keys, &v)
    }

    /// Components of `x` along B, H and C.
    pub fn decompose<G: Embed<F>>(&self, x: &Cochain<G>) -> Result<[Cochain<G>; 3], KuranishiError> {
        let q = x.p;
        let mut out = [Cochain::zero(q), Cochain::zero(q), Cochain::zero(q)];
        for (w, c) in self.parts(x)? {
            let s = &self.splits[&(q, w)];
            let (nb, nh, n) = (s.nb, s.nh, s.keys.len());
            out[0] = out[0].add(&self.assemble(q, w, 0..nb, &c[..nb]));
            out[1] = out[1].add(&self.assemble(q, w, nb..nb + nh, &c[nb..nb + nh]));
            out[2] = out[2].add(&self.assemble(q, w, nb + nh..n, &c[nb + nh..]));
        }
        Ok(out)
    }

    /// Coordinates of the H-component in the harmonic basis of [`Self::harmonic_basis`].
    pub fn harmonic_coords<G: Embed<F>>(&self, x: &Cochain<G>) -> Result<Vec<G>, KuranishiError> {
        let q = x.p;
        let parts = self.parts(x)?;
        let mut out = Vec::new();
        let mut ws: Vec<(Weight, usize)> = Vec::new();
        for ((qq, w), s) in &self.splits {
            if *qq == q {
                for j in 0..s.nh {
                    ws.push((*w, j));
                }
            }
        }
        ws.sort_by_key(|(w, j)| (w[1], -w[0], -w[2], *j));
        for (w, j) in ws {
            let s = &self.splits[&(q, w)];
            out.push(parts.get(&w).map(|c| c[s.nb + j].clone()).unwrap_or_else(G::zero));
        }
        Ok(out)
    }

    /// Homotopy δ = (d|_C)⁻¹ ∘ proj_B, lowering the cochain degree by one.
    pub fn delta<G: Embed<F>>(&self, x: &Cochain<G>) -> Result<Cochain<G>, KuranishiError> {
        let q = x.p;
        let mut out = Cochain::zero(q.saturating_sub(1));
        if q <= 1 {
            return Ok(out);
        }
        for (w, c) in self.parts(x)? {
            let s = &self.splits[&(q, w)];
            if s.nb == 0 {
                continue;
            }
            let prev = &self.splits[&(q - 1, w)];
            let start = prev.nb + prev.nh;
            debug_assert_eq!(prev.nc(), s.nb);
            out = out.add(&self.assemble(q - 1, w, start..start + s.nb, &c[..s.nb]));
        }
        Ok(out)
    }

    pub fn d<G: Embed<F>>(&self, x: &Cochain<G>) -> Cochain<G> {
        self.complex.d(x)
    }

    pub fn bracket<G: Embed<F>>(&self, x: &Cochain<G>, y: &Cochain<G>) -> Cochain<G> {
        nr::bracket(x, y)
    }

    /// `dx + ½[x, x]`.
    pub fn mc_residual<G: Embed<F>>(&self, x: &Cochain<G>) -> Cochain<G> {
        let half = G::from_rational(&Rational::new(1, 2).expect("nonzero"));
        self.d(x).add(&self.bracket(x, x).scale(&half))
    }

    /// Φ(x) = x + ½δ[x, x].
    pub fn phi<G: Embed<F>>(&self, x: &Cochain<G>) -> Result<Cochain<G>, KuranishiError> {
        let half = G::from_rational(&Rational::new(1, 2).expect("nonzero"));
        Ok(x.add(&self.delta(&self.bracket(x, x))?.scale(&half)))
    }

    /// Solves x + ½δ[x, x] = y by fixed-point iteration, exact after at most
    /// as many rounds as there are internal weights.
    pub fn phi_inverse<G: Embed<F>>(&self, y: &Cochain<G>) -> Result<Cochain<G>, KuranishiError> {
        let half = G::from_rational(&Rational::new(1, 2).expect("nonzero"));
        let mut x = y.clone();
        for _ in 0..=12 {
            let next = y.sub(&self.delta(&self.bracket(&x, &x))?.scale(&half));
            if next == x {
                return Ok(x);
            }
            x = next;
        }
        Err(KuranishiError::Invalid("Φ⁻¹ iteration did not stabilize".into()))
    }

    /// k̲ with bracket `[X,Y] + φ(X,Y)`.
    pub fn deformed_algebra<G: Embed<F>>(&self, phi: &Cochain<G>) -> Result<FilteredLieAlgebra<G>, KuranishiError> {
        if !self.mc_residual(phi).is_zero() {
            return Err(KuranishiError::NotMaurerCartan);
        }
        Ok(FilteredLieAlgebra::new(deformed_bracket(&self.k.alg, phi))?)
    }
}

/// k̲ with bracket `[X,Y] + φ(X,Y)`, without checking Jacobi.
pub fn deformed_bracket<F: Field, G: Embed<F>>(alg: &LieAlgebra<F>, phi: &Cochain<G>) -> LieAlgebra<G> {
    let base: LieAlgebra<G> = alg.map_field(|x| G::embed(x));
    let mut triples = base.triples();
    for ((mask, k), c) in &phi.terms {
        let ab = crate::cohomology::forms::bits(*mask);
        triples.push((ab[0], ab[1], *k, c.clone()));
    }
    base.with_bracket_triples(triples).expect("valid indices")
}

#[cfg(test)]
mod tests;
