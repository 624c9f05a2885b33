//! Regular normal algebraic Cartan connections on filtered deformations,
//! their curvature, harmonic curvature and symmetry dimension.

mod holonomy;
mod quintic;

use std::collections::BTreeMap;

use crate::cohomology::{forms, Chain, HarmonicDecomposition, HomologyComplex, QuinticBasis, Weight};
use crate::exactmath::{Embed, Field, LinearSolver, MathError, Matrix, Rational};
use crate::liealg::{C3Algebra, FilteredLieAlgebra, GradedSubalgebra, LieAlgebra};

pub use holonomy::HolonomySystem;
pub use quintic::{classify_quintic, QuinticPattern};

#[derive(Debug, thiserror::Error)]
pub enum CartanError {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("invalid connection: {0}")]
    Invalid(String),
    #[error("curvature is not horizontal over k⁰")]
    NotHorizontal,
    #[error("normalization obstruction in homogeneity {0}")]
    NormalizationObstruction(i64),
    #[error("curvature is not a cycle")]
    NotCycle,
    #[error("quintic is zero")]
    ZeroQuintic,
}

/// Linear map ω̄: k → g, stored as a `dim g × dim k` matrix, together with
/// the graded algebra k̲ = gr k and the inclusion ι it deforms.
#[derive(Clone, Debug)]
pub struct AlgebraicCartanConnection<G: Field> {
    pub k: LieAlgebra<G>,
    pub base: LieAlgebra<G>,
    pub iota: Matrix<G>,
    pub omega: Matrix<G>,
    pub normal: bool,
}

impl<G: Field> AlgebraicCartanConnection<G> {
    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    pub fn isotropy(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.k.degree(i) >= 0).collect()
    }

    pub fn omega_of(&self, i: usize) -> Vec<G> {
        self.omega.col(i)
    }
}

/// Curvature Ω̄ on pairs of basis vectors of k and the chain κ̄ ∈ Λ²p₊ ⊗ g.
#[derive(Clone, Debug)]
pub struct CurvatureChain<G: Field> {
    /// κ̄(e_a, e_b) for a < b in the basis of g₋.
    pub values: BTreeMap<(usize, usize), Vec<G>>,
    pub chain: Chain<G>,
}

impl<G: Field> CurvatureChain<G> {
    pub fn is_zero(&self) -> bool {
        self.chain.is_zero()
    }

    /// κ̄(u, v) for u, v ∈ g, through g → g/p.
    pub fn eval(&self, u: &[G], v: &[G], neg: usize) -> Vec<G> {
        let mut out = vec![G::zero(); u.len()];
        for ((a, b), val) in &self.values {
            let c = u[*a].mul(&v[*b]).sub(&u[*b].mul(&v[*a]));
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(val) {
                *o = o.add(&c.mul(x));
            }
        }
        debug_assert!(self.values.keys().all(|(a, b)| *a < neg && *b < neg));
        out
    }
}

/// Harmonic curvature split as scalar ⊕ binary quintic `Σ a_j z^{5−j} w^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicClass<G: Field> {
    pub scalar: G,
    pub quintic: Vec<G>,
}

impl<G: Field> HarmonicClass<G> {
    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.quintic.iter().all(|x| x.is_zero())
    }
}

/// Precomputed data on g = sp(6) shared by all connections over `G`.
#[derive(Clone, Debug)]
pub struct CartanContext<G: Field> {
    pub c3: C3Algebra,
    pub g: LieAlgebra<G>,
    pub hom: HomologyComplex<G>,
    pub harmonic: HarmonicDecomposition,
    pub quintic: QuinticBasis,
    /// f^a ∧ f^b in the local basis of Λ²p₊, for a < b in g₋; f^a is the
    /// Killing dual of e_a.
    pair_chains: BTreeMap<(usize, usize), Vec<(u32, Rational)>>,
    neg: usize,
    scalar_weight: Weight,
}

fn bracket_with<G: Field>(g: &LieAlgebra<G>, x: &[G], y: &[G]) -> Vec<G> {
    g.bracket(x, y)
}

impl<G: Field> CartanContext<G> {
    pub fn new(c3: &C3Algebra) -> Result<Self, CartanError> {
        Self::with_harmonic(c3, HarmonicDecomposition::compute(c3))
    }

    pub fn with_harmonic(c3: &C3Algebra, harmonic: HarmonicDecomposition) -> Result<Self, CartanError> {
        let hom = HomologyComplex::<G>::new(c3);
        let plus = hom.plus().to_vec();
        let neg = c3.negative_indices();
        if neg != (0..neg.len()).collect::<Vec<_>>() || plus.len() != neg.len() {
            return Err(CartanError::Invalid("unexpected basis layout of g".into()));
        }
        let n = neg.len();
        let p = Matrix::from_fn(n, n, |l, b| c3.killing.get(plus[l], neg[b]).clone());
        let d = p.inverse()?;
        let mut pair_chains = BTreeMap::new();
        for a in 0..n {
            for b in a + 1..n {
                let mut terms: BTreeMap<u32, Rational> = BTreeMap::new();
                for l in 0..n {
                    for m in 0..n {
                        let c = d.get(a, l).mul(d.get(b, m));
                        if c.is_zero() {
                            continue;
                        }
                        if let Some((mask, negs)) = forms::wedge(1 << l, 1 << m) {
                            let e = terms.entry(mask).or_insert_with(Rational::zero);
                            *e = if negs { e.sub(&c) } else { e.add(&c) };
                        }
                    }
                }
                pair_chains.insert((a, b), terms.into_iter().filter(|(_, c)| !c.is_zero()).collect());
            }
        }
        let quintic = harmonic
            .quintic_basis(c3)
            .ok_or_else(|| CartanError::Invalid("no quintic basis in H₂".into()))?;
        let scalar_weight = harmonic
            .blocks
            .iter()
            .find(|b| b.weight[0] == 0 && b.weight[2] != 0)
            .map(|b| b.weight)
            .ok_or_else(|| CartanError::Invalid("no scalar block in H₂".into()))?;
        Ok(CartanContext {
            c3: c3.clone(),
            g: c3.g.lift(),
            hom,
            harmonic,
            quintic,
            pair_chains,
            neg: n,
            scalar_weight,
        })
    }

    fn degree(&self, c: usize) -> i64 {
        self.c3.g.degree(c) as i64
    }

    /// ω̄₀ = ι for the deformation `k` of the graded subalgebra `sub`.
    pub fn initial_connection<F: Field>(
        &self,
        k: &FilteredLieAlgebra<G>,
        sub: &GradedSubalgebra<F>,
    ) -> Result<AlgebraicCartanConnection<G>, CartanError>
    where
        G: Embed<F>,
    {
        let n = sub.dim();
        if k.dim() != n || k.degrees() != sub.alg.degrees() {
            return Err(CartanError::Invalid("k and k̲ have different underlying spaces".into()));
        }
        let dg = self.c3.dim();
        let embed: Vec<Vec<G>> = sub.embed.iter().map(|v| v.iter().map(|x| G::embed(x)).collect()).collect();
        let iota = Matrix::from_cols(&embed, dg)?;
        // k/k⁰ → g/p must be onto g₋
        let neg: Vec<Vec<G>> = (0..n)
            .filter(|&i| sub.alg.degree(i) < 0)
            .map(|i| embed[i][..self.neg].to_vec())
            .collect();
        if neg.len() != self.neg || Matrix::from_cols(&neg, self.neg)?.inverse().is_err() {
            return Err(CartanError::Invalid("ι does not contain g₋".into()));
        }
        Ok(AlgebraicCartanConnection {
            k: (**k).clone(),
            base: sub.alg.map_field(|x| G::embed(x)),
            omega: iota.clone(),
            iota,
            normal: false,
        })
    }

    /// Ω̄(b_i, b_j) = [ω̄b_i, ω̄b_j] − ω̄[b_i, b_j]_k.
    fn big_omega(&self, k: &LieAlgebra<G>, omega: &Matrix<G>, i: usize, j: usize) -> Vec<G> {
        let mut out = bracket_with(&self.g, &omega.col(i), &omega.col(j));
        for (l, c) in k.bracket_basis(i, j) {
            for (r, o) in out.iter_mut().enumerate() {
                let w = omega.get(r, *l);
                if !w.is_zero() {
                    *o = o.sub(&c.mul(w));
                }
            }
        }
        out
    }

    fn kappa_from(&self, k: &LieAlgebra<G>, omega: &Matrix<G>) -> Result<CurvatureChain<G>, CartanError> {
        let negk: Vec<usize> = (0..k.dim()).filter(|&i| k.degree(i) < 0).collect();
        let n = self.neg;
        let m = Matrix::from_fn(n, n, |a, i| omega.get(a, negk[i]).clone());
        let minv = m.inverse()?;
        let mut om: BTreeMap<(usize, usize), Vec<G>> = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                om.insert((i, j), self.big_omega(k, omega, negk[i], negk[j]));
            }
        }
        let dg = self.g.dim();
        let mut values = BTreeMap::new();
        let mut chain = Chain::zero(2);
        for a in 0..n {
            for b in a + 1..n {
                let mut v = vec![G::zero(); dg];
                for ((i, j), val) in &om {
                    // antisymmetrized coefficient of Ω̄(n_i, n_j)
                    let c = minv.get(*i, a).mul(minv.get(*j, b)).sub(&minv.get(*j, a).mul(minv.get(*i, b)));
                    if c.is_zero() {
                        continue;
                    }
                    for (o, x) in v.iter_mut().zip(val) {
                        if !x.is_zero() {
                            *o = o.add(&c.mul(x));
                        }
                    }
                }
                if v.iter().all(|x| x.is_zero()) {
                    continue;
                }
                for (mask, c) in &self.pair_chains[&(a, b)] {
                    let c = G::from_rational(c);
                    for (kk, x) in v.iter().enumerate() {
                        if !x.is_zero() {
                            chain.add_term((*mask, kk), c.mul(x));
                        }
                    }
                }
                values.insert((a, b), v);
            }
        }
        Ok(CurvatureChain { values, chain })
    }

    /// κ̄ of a connection; errors unless Ω̄ is horizontal over k⁰.
    pub fn curvature(&self, conn: &AlgebraicCartanConnection<G>) -> Result<CurvatureChain<G>, CartanError> {
        for i in conn.isotropy() {
            for j in 0..conn.dim() {
                if i != j && self.big_omega(&conn.k, &conn.omega, i, j).iter().any(|x| !x.is_zero()) {
                    return Err(CartanError::NotHorizontal);
                }
            }
        }
        self.kappa_from(&conn.k, &conn.omega)
    }

    /// Equations for normality and k⁰-equivariance at homogeneity `ell`.
    fn residual(&self, k: &LieAlgebra<G>, omega: &Matrix<G>, ell: i64) -> Result<Vec<G>, CartanError> {
        let n = k.dim();
        let mut out = Vec::new();
        for i in (0..n).filter(|&i| k.degree(i) >= 0) {
            for j in 0..n {
                if j == i || (k.degree(j) >= 0 && j < i) {
                    continue;
                }
                let shift = k.degree(i) as i64 + k.degree(j) as i64 + ell;
                let v = self.big_omega(k, omega, i, j);
                for (c, x) in v.into_iter().enumerate() {
                    if self.degree(c) == shift {
                        out.push(x);
                    }
                }
            }
        }
        let kappa = self.kappa_from(k, omega)?;
        let d = self.hom.boundary(&kappa.chain);
        for (w, keys) in self.hom.blocks(1) {
            if w[1] != ell {
                continue;
            }
            for key in keys {
                out.push(d.terms.get(&key).cloned().unwrap_or_else(G::zero));
            }
        }
        Ok(out)
    }

    /// ω̄ = ω̄₀ + ψ with ψ of positive homogeneity making κ̄ a cycle. With
    /// `reverse`, free unknowns are eliminated in the opposite order, which
    /// gives a different normal connection.
    pub fn normalize(
        &self,
        conn: &AlgebraicCartanConnection<G>,
        reverse: bool,
    ) -> Result<AlgebraicCartanConnection<G>, CartanError> {
        let mut out = conn.clone();
        let base = &conn.base;
        let n = conn.dim();
        let dg = self.g.dim();
        for ell in 1..=9i64 {
            let mut units: Vec<(usize, usize)> = Vec::new();
            for j in 0..n {
                for c in 0..dg {
                    if self.degree(c) - conn.k.degree(j) as i64 == ell {
                        units.push((c, j));
                    }
                }
            }
            if reverse {
                units.reverse();
            }
            let known = self.residual(&out.k, &out.omega, ell)?;
            if known.iter().all(|x| x.is_zero()) {
                continue;
            }
            if units.is_empty() {
                return Err(CartanError::NormalizationObstruction(ell));
            }
            let zero = self.residual(base, &conn.iota, ell)?;
            let mut cols = Vec::new();
            for &(c, j) in &units {
                let mut om = conn.iota.clone();
                let cur = om.get(c, j).add(&G::one());
                om.set(c, j, cur);
                let lin = self.residual(base, &om, ell)?;
                cols.push(lin.iter().zip(&zero).map(|(a, b)| a.sub(b)).collect::<Vec<_>>());
            }
            let l = Matrix::from_cols(&cols, known.len())?;
            let rhs: Vec<G> = known.iter().map(|x| x.neg()).collect();
            let rational: Option<Vec<Vec<Rational>>> = cols
                .iter()
                .map(|c| c.iter().map(|x| x.as_rational()).collect::<Option<Vec<_>>>())
                .collect();
            let x = match rational {
                Some(rc) => LinearSolver::new(&Matrix::from_cols(&rc, known.len())?).solve(&rhs, |q| G::from_rational(q)),
                None => LinearSolver::new(&l).solve(&rhs, |q: &G| q.clone()),
            }
            .ok_or(CartanError::NormalizationObstruction(ell))?;
            for (&(c, j), v) in units.iter().zip(x) {
                if !v.is_zero() {
                    let cur = out.omega.get(c, j).add(&v);
                    out.omega.set(c, j, cur);
                }
            }
        }
        for ell in 1..=9 {
            if self.residual(&out.k, &out.omega, ell)?.iter().any(|x| !x.is_zero()) {
                return Err(CartanError::NormalizationObstruction(ell));
            }
        }
        out.normal = true;
        Ok(out)
    }

    /// Whether ∂κ̄ = 0.
    pub fn is_normal(&self, kappa: &CurvatureChain<G>) -> bool {
        self.hom.boundary(&kappa.chain).is_zero()
    }

    /// ad(ω̄X)·κ̄ = 0 for X ∈ k⁰.
    pub fn bianchi_holds(&self, conn: &AlgebraicCartanConnection<G>, kappa: &CurvatureChain<G>) -> bool {
        conn.isotropy()
            .into_iter()
            .all(|i| self.hom.act(&conn.omega_of(i), &kappa.chain).is_zero())
    }

    /// Class of κ̄ in H₂(p₊, g), split into scalar and quintic parts.
    pub fn harmonic_curvature(&self, kappa: &CurvatureChain<G>) -> Result<HarmonicClass<G>, CartanError> {
        if !self.is_normal(kappa) {
            return Err(CartanError::NotCycle);
        }
        let proj = self.harmonic.project(&kappa.chain).ok_or(CartanError::NotCycle)?;
        let scalar = proj
            .iter()
            .find(|(w, _)| *w == self.scalar_weight)
            .map(|(_, v)| v[0].clone())
            .unwrap_or_else(G::zero);
        let quintic = self.quintic.quintic_of(&self.harmonic, &proj);
        Ok(HarmonicClass { scalar, quintic })
    }

    /// Annihilator in g₀ of the quintic `a`.
    pub fn quintic_stabilizer(&self, a: &[Rational]) -> Vec<Vec<Rational>> {
        crate::cohomology::quintic_stabilizer(&self.c3, &self.harmonic, &self.quintic, a)
    }

    /// Connection, curvature and harmonic class in one pass.
    pub fn normal_data<F: Field>(
        &self,
        k: &FilteredLieAlgebra<G>,
        sub: &GradedSubalgebra<F>,
    ) -> Result<(AlgebraicCartanConnection<G>, CurvatureChain<G>, HarmonicClass<G>), CartanError>
    where
        G: Embed<F>,
    {
        let conn = self.normalize(&self.initial_connection(k, sub)?, false)?;
        let kappa = self.curvature(&conn)?;
        let h = self.harmonic_curvature(&kappa)?;
        Ok((conn, kappa, h))
    }
}

#[cfg(test)]
mod tests;
