use std::collections::BTreeMap;

use crate::exactmath::{add_mul, Embed, Field, Matrix};
use crate::liealg::LieAlgebra;

use super::forms::{bits, contract, sort_sign, subsets, wedge};
use super::Weight;

/// A p-cochain `Σ c · e^S ⊗ v_k`, keyed by `(mask of S, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<F: Field> {
    pub p: usize,
    pub terms: BTreeMap<(u32, usize), F>,
}

impl<F: Field> Cochain<F> {
    pub fn zero(p: usize) -> Self {
        Cochain { p, terms: BTreeMap::new() }
    }

    pub fn basis(p: usize, mask: u32, k: usize) -> Self {
        let mut c = Cochain::zero(p);
        c.terms.insert((mask, k), F::one());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: (u32, usize), c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&F::one().neg()))
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Cochain::zero(self.p);
        }
        Cochain {
            p: self.p,
            terms: self.terms.iter().map(|(k, x)| (*k, x.mul(c))).collect(),
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Cochain<G> {
        let mut r = Cochain::zero(self.p);
        for (k, c) in &self.terms {
            r.add_term(*k, f(c));
        }
        r
    }

    /// Value on basis vectors `e_{idx[0]}, …`, as a coordinate vector of length `m`.
    pub fn on_basis(&self, idx: &[usize], m: usize) -> Vec<F> {
        let mut out = vec![F::zero(); m];
        let Some((mask, odd)) = sort_sign(idx) else {
            return out;
        };
        for ((_, k), c) in self.terms.range((mask, 0)..(mask, usize::MAX)) {
            out[*k] = if odd { c.neg() } else { c.clone() };
        }
        out
    }

    /// Value on arbitrary vectors (coordinates in the source basis).
    pub fn evaluate(&self, xs: &[Vec<F>], m: usize) -> Vec<F> {
        assert_eq!(xs.len(), self.p);
        let mut out = vec![F::zero(); m];
        for ((mask, k), c) in &self.terms {
            let s = bits(*mask);
            let det = det_minor(xs, &s);
            add_mul(&mut out[*k], c, &det);
        }
        out
    }

    /// Coordinates in a block basis; `None` if some term lies outside it.
    pub fn coords(&self, index: &BTreeMap<(u32, usize), usize>) -> Option<Vec<F>> {
        let mut v = vec![F::zero(); index.len()];
        for (k, c) in &self.terms {
            v[*index.get(k)?] = c.clone();
        }
        Some(v)
    }

    pub fn from_coords(p: usize, keys: &[(u32, usize)], v: &[F]) -> Self {
        let mut r = Cochain::zero(p);
        for (k, c) in keys.iter().zip(v) {
            r.add_term(*k, c.clone());
        }
        r
    }
}

/// `det [xs[i][s[j]]]`, i.e. `(e^{s_0}∧…)(x_0, …)`.
fn det_minor<F: Field>(xs: &[Vec<F>], s: &[usize]) -> F {
    let n = s.len();
    if n == 0 {
        return F::one();
    }
    let mut m: Vec<Vec<F>> = xs.iter().map(|x| s.iter().map(|&j| x[j].clone()).collect()).collect();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return F::zero();
        };
        if p != c {
            m.swap(p, c);
            det = det.neg();
        }
        let piv = m[c][c].clone();
        det = det.mul(&piv);
        let inv = piv.inv().expect("nonzero pivot");
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].mul(&inv);
            for k in c..n {
                let t = f.mul(&m[c][k]);
                m[r][k] = m[r][k].sub(&t);
            }
        }
    }
    det
}

/// Chevalley–Eilenberg complex of `alg` with values in a module, with
/// weight bookkeeping for the block decomposition.
#[derive(Clone, Debug)]
pub struct CochainComplex<F: Field> {
    pub alg: LieAlgebra<F>,
    /// `action[a][j]`: `ρ(e_a) v_j` as sparse coordinates.
    action: Vec<Vec<Vec<(usize, F)>>>,
    mod_dim: usize,
    alg_weights: Vec<Weight>,
    mod_weights: Vec<Weight>,
    /// `d₀ e^s` as `(mask, coeff)` pairs.
    d0: Vec<Vec<(u32, F)>>,
}

impl<F: Field> CochainComplex<F> {
    /// Values in the algebra itself; weights default to `[0, degree, 0]`.
    pub fn adjoint(alg: &LieAlgebra<F>, weights: Option<Vec<Weight>>) -> Self {
        let n = alg.dim();
        let action = (0..n)
            .map(|a| (0..n).map(|j| alg.bracket_basis(a, j).to_vec()).collect())
            .collect();
        let w = weights.unwrap_or_else(|| default_weights(alg));
        Self::build(alg, action, n, w.clone(), w)
    }

    /// Module given by matrices `rho[a]` (m×m) for each basis vector of `alg`.
    pub fn with_module(
        alg: &LieAlgebra<F>,
        rho: &[Matrix<F>],
        alg_weights: Vec<Weight>,
        mod_weights: Vec<Weight>,
    ) -> Self {
        let m = mod_weights.len();
        let action = rho
            .iter()
            .map(|r| {
                (0..m)
                    .map(|j| (0..m).filter(|&k| !r.get(k, j).is_zero()).map(|k| (k, r.get(k, j).clone())).collect())
                    .collect()
            })
            .collect();
        Self::build(alg, action, m, alg_weights, mod_weights)
    }

    /// Trivial coefficients.
    pub fn trivial(alg: &LieAlgebra<F>, weights: Option<Vec<Weight>>) -> Self {
        let n = alg.dim();
        let w = weights.unwrap_or_else(|| default_weights(alg));
        let action = vec![vec![Vec::new()]; n];
        Self::build(alg, action, 1, w, vec![[0, 0, 0]])
    }

    fn build(
        alg: &LieAlgebra<F>,
        action: Vec<Vec<Vec<(usize, F)>>>,
        mod_dim: usize,
        alg_weights: Vec<Weight>,
        mod_weights: Vec<Weight>,
    ) -> Self {
        let n = alg.dim();
        let mut d0 = vec![Vec::new(); n];
        for a in 0..n {
            for b in a + 1..n {
                for (s, c) in alg.bracket_basis(a, b) {
                    d0[*s].push(((1u32 << a) | (1u32 << b), c.neg()));
                }
            }
        }
        CochainComplex {
            alg: alg.clone(),
            action,
            mod_dim,
            alg_weights,
            mod_weights,
            d0,
        }
    }

    pub fn n(&self) -> usize {
        self.alg.dim()
    }

    pub fn mod_dim(&self) -> usize {
        self.mod_dim
    }

    pub fn alg_weights(&self) -> &[Weight] {
        &self.alg_weights
    }

    pub fn mod_weights(&self) -> &[Weight] {
        &self.mod_weights
    }

    pub fn weight_of(&self, mask: u32, k: usize) -> Weight {
        let mut w = self.mod_weights[k];
        for s in bits(mask) {
            for (x, y) in w.iter_mut().zip(self.alg_weights[s]) {
                *x -= y;
            }
        }
        w
    }

    /// `ρ(e_a) v_k`.
    pub fn act(&self, a: usize, k: usize) -> &[(usize, F)] {
        &self.action[a][k]
    }

    /// Differential via `d(α⊗v) = d₀α⊗v + Σ_a (e^a∧α)⊗ρ(e_a)v`.
    pub fn d<G: Embed<F>>(&self, phi: &Cochain<G>) -> Cochain<G> {
        let mut out = Cochain::zero(phi.p + 1);
        for ((mask, k), c) in &phi.terms {
            for (j, s) in bits(*mask).into_iter().enumerate() {
                let rest = mask & !(1 << s);
                for (m2, c2) in &self.d0[s] {
                    if let Some((m, neg)) = wedge(*m2, rest) {
                        let mut x = c.mul(&G::embed(c2));
                        if neg != (j % 2 == 1) {
                            x = x.neg();
                        }
                        out.add_term((m, *k), x);
                    }
                }
            }
            for a in 0..self.n() {
                let Some((m, neg)) = wedge(1 << a, *mask) else {
                    continue;
                };
                for (k2, c2) in &self.action[a][*k] {
                    let x = c.mul(&G::embed(c2));
                    out.add_term((m, *k2), if neg { x.neg() } else { x });
                }
            }
        }
        out
    }

    /// Differential by direct evaluation of the defining formula.
    pub fn d_brute(&self, phi: &Cochain<F>) -> Cochain<F> {
        let n = self.n();
        let p = phi.p;
        let mut out = Cochain::zero(p + 1);
        for mask in subsets(n, p + 1) {
            let xs = bits(mask);
            let mut val = vec![F::zero(); self.mod_dim];
            for i in 0..=p {
                let others: Vec<usize> = xs.iter().enumerate().filter(|(t, _)| *t != i).map(|(_, &x)| x).collect();
                let v = phi.on_basis(&others, self.mod_dim);
                let sign = if i % 2 == 0 { F::one() } else { F::one().neg() };
                for (k, vk) in v.iter().enumerate() {
                    if vk.is_zero() {
                        continue;
                    }
                    for (k2, c2) in &self.action[xs[i]][k] {
                        add_mul(&mut val[*k2], &sign.mul(vk), c2);
                    }
                }
                for j in i + 1..=p {
                    let sign = if (i + j) % 2 == 0 { F::one() } else { F::one().neg() };
                    let rest: Vec<usize> =
                        xs.iter().enumerate().filter(|(t, _)| *t != i && *t != j).map(|(_, &x)| x).collect();
                    for (b, cb) in self.alg.bracket_basis(xs[i], xs[j]) {
                        let mut args = vec![*b];
                        args.extend(&rest);
                        let v = phi.on_basis(&args, self.mod_dim);
                        let f = sign.mul(cb);
                        for (x, y) in val.iter_mut().zip(&v) {
                            add_mul(x, &f, y);
                        }
                    }
                }
            }
            for (k, c) in val.into_iter().enumerate() {
                out.add_term((mask, k), c);
            }
        }
        out
    }

    /// All basis keys of `C^p` grouped by weight.
    pub fn blocks(&self, p: usize) -> BTreeMap<Weight, Vec<(u32, usize)>> {
        let mut out: BTreeMap<Weight, Vec<(u32, usize)>> = BTreeMap::new();
        if p > self.n() {
            return out;
        }
        for mask in subsets(self.n(), p) {
            for k in 0..self.mod_dim {
                out.entry(self.weight_of(mask, k)).or_default().push((mask, k));
            }
        }
        out
    }

    pub fn block(&self, p: usize, w: Weight) -> Vec<(u32, usize)> {
        self.blocks(p).remove(&w).unwrap_or_default()
    }

    /// Matrix of `d` between two block bases of the same weight.
    pub fn d_matrix(&self, p: usize, src: &[(u32, usize)], dst: &[(u32, usize)]) -> Matrix<F> {
        let index = key_index(dst);
        let mut m = Matrix::zeros(dst.len(), src.len());
        for (j, key) in src.iter().enumerate() {
            let dc = self.d(&Cochain::<F>::basis(p, key.0, key.1));
            for (k, c) in dc.terms {
                let i = *index.get(&k).expect("d preserves weight");
                m.set(i, j, c);
            }
        }
        m
    }

    /// Action of a derivation `D` of the algebra, extended to the module by
    /// `dv`: `(D·φ)(X…) = dv φ(X…) − Σ φ(…, D X_i, …)`.
    pub fn derivation_action(&self, dalg: &Matrix<F>, dv: &Matrix<F>, phi: &Cochain<F>) -> Cochain<F> {
        let n = self.n();
        let mut out = Cochain::zero(phi.p);
        for ((mask, k), c) in &phi.terms {
            for k2 in 0..self.mod_dim {
                let x = dv.get(k2, *k);
                if !x.is_zero() {
                    out.add_term((*mask, k2), c.mul(x));
                }
            }
            // pullback: e^s ↦ e^s ∘ D = Σ_t D[s][t] e^t
            for s in bits(*mask) {
                let rest = mask & !(1 << s);
                let pos = (mask & ((1u32 << s) - 1)).count_ones();
                for t in 0..n {
                    let dst = dalg.get(s, t);
                    if dst.is_zero() {
                        continue;
                    }
                    if let Some((m, neg)) = wedge(1 << t, rest) {
                        let odd = neg != (pos % 2 == 1);
                        let x = c.mul(dst);
                        out.add_term((m, *k), if odd { x } else { x.neg() });
                    }
                }
            }
        }
        out
    }
}

pub fn key_index(keys: &[(u32, usize)]) -> BTreeMap<(u32, usize), usize> {
    keys.iter().enumerate().map(|(i, k)| (*k, i)).collect()
}

fn default_weights<F: Field>(alg: &LieAlgebra<F>) -> Vec<Weight> {
    alg.degrees().iter().map(|&d| [0, d as i64, 0]).collect()
}

/// Removes `e_v` from the monomial; used by the insertion operator.
pub(crate) fn insert_sign(v: usize, mask: u32) -> Option<(u32, bool)> {
    contract(v, mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Rational;
    use crate::liealg::{build_c3, heisenberg};

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn sample(p: usize, n: usize, m: usize, seed: u64) -> Cochain<Rational> {
        let mut c = Cochain::zero(p);
        let mut s = seed;
        for mask in subsets(n, p) {
            for k in 0..m {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if (s >> 60) % 3 == 0 {
                    c.add_term((mask, k), q(((s >> 33) % 7) as i64 - 3));
                }
            }
        }
        c
    }

    #[test]
    fn fast_and_brute_differentials_agree_on_heisenberg() {
        let h = heisenberg::<Rational>();
        let cx = CochainComplex::adjoint(&h, None);
        for p in 0..3 {
            let phi = sample(p, 3, 3, p as u64 + 1);
            assert_eq!(cx.d(&phi), cx.d_brute(&phi));
            assert!(cx.d(&cx.d(&phi)).is_zero());
        }
    }

    #[test]
    fn fast_and_brute_agree_on_c3_negative_part() {
        let c = build_c3();
        let m = c.negative_part();
        let cx = CochainComplex::adjoint(&m, None);
        for p in 0..3 {
            let phi = sample(p, 8, 8, 11 + p as u64);
            assert_eq!(cx.d(&phi), cx.d_brute(&phi));
            assert!(cx.d(&cx.d(&phi)).is_zero());
        }
    }

    #[test]
    fn evaluation_matches_basis_lookup() {
        let phi = sample(2, 4, 2, 5);
        let e = |i: usize| (0..4).map(|j| q((i == j) as i64)).collect::<Vec<_>>();
        assert_eq!(phi.evaluate(&[e(2), e(0)], 2), phi.on_basis(&[2, 0], 2));
        let x = vec![q(1), q(2), q(0), q(-1)];
        let y = vec![q(0), q(1), q(3), q(1)];
        let a = phi.evaluate(&[x.clone(), y.clone()], 2);
        let b = phi.evaluate(&[y, x], 2);
        assert_eq!(a, b.iter().map(|t| t.neg()).collect::<Vec<_>>());
    }

    #[test]
    fn inner_derivation_acts_as_lie_derivative() {
        // For x in the algebra, ad x · φ = ι_x dφ + d ι_x φ (Cartan formula).
        let h = heisenberg::<Rational>();
        let cx = CochainComplex::adjoint(&h, None);
        let adx = h.ad(&h.basis_vector(0));
        let phi = sample(1, 3, 3, 9);
        let lhs = cx.derivation_action(&adx, &adx, &phi);
        let ix = |c: &Cochain<Rational>| {
            let mut r = Cochain::zero(c.p - 1);
            for ((mask, k), v) in &c.terms {
                if let Some((m, neg)) = insert_sign(0, *mask) {
                    r.add_term((m, *k), if neg { v.neg() } else { v.clone() });
                }
            }
            r
        };
        let rhs = ix(&cx.d(&phi)).add(&cx.d(&ix(&phi)));
        assert_eq!(lhs, rhs);
    }
}
