use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::{classify_quintic, CartanContext};
use crate::cohomology::CochainComplex;
use crate::exactmath::{kernel_basis, parse_ratfunc, var_index, Field, Matrix, RatFunc, Rational};
use crate::liealg::{induced_algebra, C3Algebra, GradedSubalgebra, Weight, IDX_E, IDX_EP, IDX_H, IDX_X, IDX_Y};

use super::PipelineError;

const CATALOG: &str = include_str!("../../data/classes.json");

const NAMES: [(&str, usize); 5] = [("E'", IDX_EP), ("H", IDX_H), ("X", IDX_X), ("Y", IDX_Y), ("E", IDX_E)];

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpectedComponent {
    pub locus: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generic_d: Option<usize>,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat_locus: Option<Vec<String>>,
}

/// Reference values a run is checked against; absent fields are unchecked.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti2: Option<Vec<(i64, usize)>>,
    /// b³_j for j ≥ 2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti3_above_1: Option<Vec<(i64, usize)>>,
    #[serde(default)]
    pub components: Vec<ExpectedComponent>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialExpectation {
    pub point: String,
    pub label: String,
    pub expected: Expected,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// A class of graded subalgebras k̲ = g₋ ⊕ k̲₀, with k̲₀ given by words in
/// H, X, Y, E, E′ whose coefficients may involve the parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassDescriptor {
    pub label: String,
    pub k0: Vec<String>,
    #[serde(default)]
    pub params: Vec<String>,
    /// Expected quintic type of the annihilated vector.
    pub quintic: String,
    #[serde(default)]
    pub expected: Expected,
    #[serde(default)]
    pub special: Vec<SpecialExpectation>,
    /// Copied into the report.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// A point of ℚℙ¹ in the affine chart of the parameter, or ∞.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjPoint {
    Finite(Rational),
    Infinity,
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(q) => write!(f, "{q}"),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for ProjPoint {
    type Err = PipelineError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "∞" => Ok(ProjPoint::Infinity),
            x => Ok(ProjPoint::Finite(x.parse()?)),
        }
    }
}

/// Splits at top-level `+`/`-`, keeping the sign with each term.
fn terms(word: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    for ch in word.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let boundary = depth == 0 && (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with(['*', '/', '^']);
        if boundary {
            out.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if depth == 0 && cur.is_empty() && (ch == '+' || ch == '-') {
            neg ^= ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push((neg, cur));
    }
    out
}

/// Coordinates in g of a word such as `H-5E+lambda*E'`.
pub fn parse_word(word: &str, dim: usize) -> Result<Vec<RatFunc>, PipelineError> {
    let mut v = vec![RatFunc::zero(); dim];
    let ts = terms(word);
    if ts.is_empty() {
        return Err(PipelineError::Catalog(format!("empty generator {word:?}")));
    }
    for (neg, t) in ts {
        let (name, idx) = NAMES
            .iter()
            .find(|(n, _)| t.ends_with(n))
            .ok_or_else(|| PipelineError::Catalog(format!("no basis element in term {t:?}")))?;
        let coef = t[..t.len() - name.len()].trim_end_matches('*');
        let c = if coef.is_empty() { RatFunc::one() } else { parse_ratfunc(coef)? };
        let c = if neg { c.neg() } else { c };
        v[*idx] = v[*idx].add(&c);
    }
    Ok(v)
}

/// Inverse of [`parse_word`] on g₀.
pub fn render_word(v: &[RatFunc]) -> String {
    let mut out = String::new();
    for (name, idx) in [("H", IDX_H), ("X", IDX_X), ("Y", IDX_Y), ("E", IDX_E), ("E'", IDX_EP)] {
        let c = &v[idx];
        if c.is_zero() {
            continue;
        }
        let body = match c.as_rational() {
            Some(q) if q.abs().is_one() => String::new(),
            Some(q) => q.abs().to_string(),
            None => format!("({c})*"),
        };
        let neg = c.as_rational().is_some_and(|q| q.is_negative());
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        out.push_str(&body);
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl ClassDescriptor {
    pub fn is_parametric(&self) -> bool {
        !self.params.is_empty()
    }

    /// k̲₀ generators as vectors in g over ℚ(params).
    pub fn generators(&self, c3: &C3Algebra) -> Result<Vec<Vec<RatFunc>>, PipelineError> {
        let vs = self.k0.iter().map(|w| parse_word(w, c3.dim())).collect::<Result<Vec<_>, _>>()?;
        let allowed: Vec<usize> = self.params.iter().map(|p| var_index(p)).collect::<Result<_, _>>()?;
        for v in &vs {
            for x in v {
                if let Some(bad) = x.variables().into_iter().find(|i| !allowed.contains(i)) {
                    return Err(PipelineError::Catalog(format!(
                        "{}: undeclared parameter {}",
                        self.label,
                        crate::exactmath::var_name(bad)
                    )));
                }
            }
        }
        Ok(vs)
    }

    /// The same class with its parameter set to `p`.
    pub fn specialize(&self, c3: &C3Algebra, p: &ProjPoint) -> Result<ClassDescriptor, PipelineError> {
        let [param] = self.params.as_slice() else {
            return Err(PipelineError::Catalog(format!("{} is not a one-parameter family", self.label)));
        };
        let v = var_index(param)?;
        let mut words = Vec::new();
        for g in self.generators(c3)? {
            let spec: Vec<RatFunc> = match p {
                ProjPoint::Finite(q) => g
                    .iter()
                    .map(|x| x.specialize_partial(&[(v, q.clone())]))
                    .collect::<Result<_, _>>()?,
                ProjPoint::Infinity => leading_in(&g, v)?,
            };
            words.push(render_word(&spec));
        }
        let special = self.special.iter().find(|s| s.point.parse::<ProjPoint>().ok().as_ref() == Some(p));
        let label = match special {
            Some(s) => s.label.clone(),
            None => format!("{}({param}={p})", self.label),
        };
        Ok(ClassDescriptor {
            label,
            k0: words,
            params: Vec::new(),
            quintic: self.quintic.clone(),
            expected: special.map(|s| s.expected.clone()).unwrap_or_default(),
            special: Vec::new(),
            notes: special.map(|s| s.notes.clone()).unwrap_or_default(),
        })
    }

    /// k̲ over the field `F`; parametric classes need `F = ℚ(params)`.
    pub fn subalgebra<F: FromRatFunc>(&self, c3: &C3Algebra) -> Result<GradedSubalgebra<F>, PipelineError> {
        let gens = self
            .generators(c3)?
            .iter()
            .map(|g| g.iter().map(F::from_ratfunc).collect::<Result<Vec<F>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GradedSubalgebra::new(c3, &gens, &self.k0)?)
    }

    /// Load-time checks: dim k̲₀ ≥ 2, k̲ is a subalgebra, and k̲₀ annihilates
    /// a quintic whose type matches the catalog.
    pub fn verify(&self, c3: &C3Algebra, ctx: &CartanContext<Rational>) -> Result<(), PipelineError> {
        if self.k0.len() < 2 {
            return Err(PipelineError::Catalog(format!("{}: dim k̲₀ < 2", self.label)));
        }
        let sub: GradedSubalgebra<RatFunc> = self.subalgebra(c3)?;
        if sub.dim() != 8 + self.k0.len() {
            return Err(PipelineError::Catalog(format!("{}: dependent generators", self.label)));
        }
        let ker = annihilated_quintics(ctx, &self.generators(c3)?)?;
        let [a] = ker.as_slice() else {
            return Err(PipelineError::Catalog(format!(
                "{}: annihilated quintics span dimension {}",
                self.label,
                ker.len()
            )));
        };
        let pattern = classify_quintic(a)?;
        if pattern.label() != Some(self.quintic.as_str()) {
            return Err(PipelineError::Catalog(format!(
                "{}: annihilated quintic has type {pattern}, expected {}",
                self.label, self.quintic
            )));
        }
        Ok(())
    }
}

/// Top coefficient in the parameter `v` of a polynomial vector.
fn leading_in(g: &[RatFunc], v: usize) -> Result<Vec<RatFunc>, PipelineError> {
    let deg = g
        .iter()
        .map(|x| {
            if !x.is_polynomial() {
                return Err(PipelineError::Catalog("rational generator at infinity".into()));
            }
            Ok(x.num().degree_in(v))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    Ok(g.iter().map(|x| RatFunc::from_poly(x.num().coeff_in(v, deg))).collect())
}

/// Conversion from the catalog's coefficient field.
pub trait FromRatFunc: Field {
    fn from_ratfunc(x: &RatFunc) -> Result<Self, PipelineError>;
}

impl FromRatFunc for Rational {
    fn from_ratfunc(x: &RatFunc) -> Result<Self, PipelineError> {
        x.as_rational()
            .ok_or_else(|| PipelineError::Catalog(format!("coefficient {x} is not a constant")))
    }
}

impl FromRatFunc for RatFunc {
    fn from_ratfunc(x: &RatFunc) -> Result<Self, PipelineError> {
        Ok(x.clone())
    }
}

/// Matrices of g₀ on the quintic block of H₂, by index of g.
pub fn quintic_action(ctx: &CartanContext<Rational>) -> Vec<(usize, Matrix<Rational>)> {
    let g0 = ctx.c3.indices_of_degree(0);
    g0.into_iter()
        .map(|i| {
            let z = ctx.c3.g.basis_vector(i);
            let cols: Vec<Vec<Rational>> = (0..6)
                .map(|j| {
                    let e: Vec<Rational> = (0..6).map(|k| Rational::integer((j == k) as i64)).collect();
                    let moved = ctx.harmonic.complex.act(&z, &ctx.quintic.chain_of(&e));
                    let proj = ctx.harmonic.project(&moved).expect("g₀ preserves cycles");
                    ctx.quintic.quintic_of(&ctx.harmonic, &proj)
                })
                .collect();
            (i, Matrix::from_cols(&cols, 6).expect("shape"))
        })
        .collect()
}

/// Quintics annihilated by every generator.
pub fn annihilated_quintics(ctx: &CartanContext<Rational>, gens: &[Vec<RatFunc>]) -> Result<Vec<Vec<RatFunc>>, PipelineError> {
    let acts = quintic_action(ctx);
    let mut rows = Vec::new();
    for g in gens {
        if g.iter().enumerate().any(|(i, x)| !x.is_zero() && ctx.c3.g.degree(i) != 0) {
            return Err(PipelineError::Catalog("generator outside g₀".into()));
        }
        let mut m = Matrix::<RatFunc>::zeros(6, 6);
        for (i, a) in &acts {
            if !g[*i].is_zero() {
                m = m.add(&a.lift().scale(&g[*i]));
            }
        }
        rows.extend(m.to_rows());
    }
    let m = Matrix::from_rows(rows, 6)?;
    Ok(kernel_basis(&m))
}

/// The catalog, re-verified.
pub fn enumerate_classes(c3: &C3Algebra) -> Result<Vec<ClassDescriptor>, PipelineError> {
    let classes: Vec<ClassDescriptor> = serde_json::from_str(CATALOG)?;
    let ctx = CartanContext::<Rational>::new(c3)?;
    for c in &classes {
        c.verify(c3, &ctx)?;
    }
    Ok(classes)
}

fn pair(a: &[Rational], w: &Weight) -> Rational {
    let mut s = Rational::integer(0);
    for (c, x) in a.iter().zip(w) {
        s = s.add(&c.mul(&Rational::integer(*x)));
    }
    s
}

/// Zero loci of the nonzero weights of C^{•,≥1}(n, n) ⊕ C^{•,≥1}(n) on the
/// pencil of tori, where n = g₋ plus the non-toral generators and the toral
/// generator is affine in the parameter.
pub fn special_points(desc: &ClassDescriptor, c3: &C3Algebra) -> Result<Vec<ProjPoint>, PipelineError> {
    let [param] = desc.params.as_slice() else {
        return Err(PipelineError::Catalog(format!("{} is not a one-parameter family", desc.label)));
    };
    let v = var_index(param)?;
    let cartan = [IDX_H, IDX_E, IDX_EP];
    let mut pencil: Option<[Vec<Rational>; 2]> = None;
    let g: crate::liealg::LieAlgebra<Rational> = (*c3.g).clone();
    let mut basis: Vec<Vec<Rational>> = c3.negative_indices().iter().map(|&i| g.basis_vector(i)).collect();
    for gen in desc.generators(c3)? {
        let toral = gen.iter().enumerate().all(|(i, x)| x.is_zero() || cartan.contains(&i));
        let depends = gen.iter().any(|x| x.variables().contains(&v));
        if toral && depends {
            let coeff = |d: u8| -> Result<Vec<Rational>, PipelineError> {
                cartan
                    .iter()
                    .map(|&i| {
                        let x = &gen[i];
                        if !x.is_polynomial() || x.num().degree_in(v) > 1 {
                            return Err(PipelineError::Catalog("toral generator must be affine in the parameter".into()));
                        }
                        x.num()
                            .coeff_in(v, d)
                            .constant_value()
                            .ok_or_else(|| PipelineError::Catalog("toral coefficient not constant".into()))
                    })
                    .collect()
            };
            pencil = Some([coeff(0)?, coeff(1)?]);
        } else if !toral && !depends {
            basis.push(gen.iter().map(|x| x.as_rational().expect("parameter-free")).collect());
        } else {
            return Err(PipelineError::Catalog(format!("{}: unsupported generator shape", desc.label)));
        }
    }
    let [a0, a1] = pencil.ok_or_else(|| PipelineError::Catalog("no toral pencil".into()))?;
    let labels: Vec<String> = (0..basis.len()).map(|i| format!("n{i}")).collect();
    let degrees: Vec<i32> = basis
        .iter()
        .map(|b| b.iter().position(|x| !x.is_zero()).map_or(0, |i| g.degree(i)))
        .collect();
    let n = induced_algebra(&g, &basis, labels, degrees)?;
    let sub = GradedSubalgebra::new(c3, &basis[c3.negative_indices().len()..], &vec![String::new(); basis.len() - 8])?;
    let weights = sub.weights.clone();
    let adj = CochainComplex::adjoint(&n, Some(weights.clone()));
    let triv = CochainComplex::trivial(&n, Some(weights));
    let mut pts = Vec::new();
    for cx in [&adj, &triv] {
        for p in 0..=n.dim() {
            for w in cx.weights(p) {
                if w[1] < 1 {
                    continue;
                }
                let (p0, p1) = (pair(&a0, &w), pair(&a1, &w));
                let pt = if p1.is_zero() {
                    if p0.is_zero() {
                        continue;
                    }
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(p0.neg().div(&p1)?)
                };
                if !pts.contains(&pt) {
                    pts.push(pt);
                }
            }
        }
    }
    pts.sort();
    Ok(pts)
}

/// A catalog class by label: a class itself, one of its named special
/// points, or `LABEL(param=value)` for any value of the parameter.
pub fn resolve_class(classes: &[ClassDescriptor], c3: &C3Algebra, label: &str) -> Result<ClassDescriptor, PipelineError> {
    for c in classes {
        if c.label == label {
            return Ok(c.clone());
        }
        for sp in &c.special {
            if sp.label == label {
                return c.specialize(c3, &sp.point.parse()?);
            }
        }
        let Some(rest) = label.strip_prefix(c.label.as_str()).and_then(|r| r.strip_prefix('(')).and_then(|r| r.strip_suffix(')')) else {
            continue;
        };
        if let [param] = c.params.as_slice() {
            if let Some(v) = rest.strip_prefix(param.as_str()).and_then(|r| r.strip_prefix('=')) {
                return c.specialize(c3, &v.parse()?);
            }
        }
    }
    Err(PipelineError::Catalog(format!("unknown class {label}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_c3;

    #[test]
    fn words_round_trip() {
        let c3 = build_c3();
        for w in ["H-5E+lambda*E'", "X", "-H+1/2E", "H-3E"] {
            let v = parse_word(w, c3.dim()).unwrap();
            assert_eq!(parse_word(&render_word(&v), c3.dim()).unwrap(), v, "{w}");
        }
        let v = parse_word("H-5E+lambda*E'", c3.dim()).unwrap();
        assert_eq!(v[IDX_E], RatFunc::from_i64(-5));
        assert_eq!(v[IDX_EP], RatFunc::var("lambda").unwrap());
        assert!(parse_word("H+Z", c3.dim()).is_err());
    }

    #[test]
    fn catalog_has_five_verified_classes() {
        let c3 = build_c3();
        let cs = enumerate_classes(&c3).unwrap();
        assert_eq!(cs.len(), 5);
        assert_eq!(cs.iter().filter(|c| c.is_parametric()).count(), 1);
    }

    #[test]
    fn catalog_classes_lie_in_the_n3_stabilizer() {
        let c3 = build_c3();
        let n3 = crate::liealg::Subspace::span(
            c3.dim(),
            &["X", "H-5E", "E'"]
                .iter()
                .map(|w| parse_word(w, c3.dim()).unwrap())
                .collect::<Vec<_>>(),
        );
        let ctx = CartanContext::<Rational>::new(&c3).unwrap();
        let stab_n3 = annihilated_quintics(&ctx, &n3.basis()).unwrap();
        assert_eq!(stab_n3.len(), 1);
        for c in enumerate_classes(&c3).unwrap().iter().filter(|c| c.quintic == "N") {
            let gens = c.generators(&c3).unwrap();
            assert_eq!(annihilated_quintics(&ctx, &gens).unwrap(), stab_n3, "{}", c.label);
        }
    }

    #[test]
    fn pencil_endpoints() {
        let c3 = build_c3();
        let n2a = enumerate_classes(&c3).unwrap().into_iter().find(|c| c.is_parametric()).unwrap();
        let inf = n2a.specialize(&c3, &ProjPoint::Infinity).unwrap();
        assert_eq!(inf.label, "N2a^inf");
        assert_eq!(inf.k0, vec!["X".to_string(), "E'".to_string()]);
        let zero = n2a.specialize(&c3, &ProjPoint::Finite(Rational::integer(0))).unwrap();
        assert_eq!(zero.k0, vec!["X".to_string(), "H-5E".to_string()]);
        let pts = special_points(&n2a, &c3).unwrap();
        assert!(pts.contains(&ProjPoint::Infinity));
        assert!(pts.len() < 100);
    }
}
