use std::collections::{BTreeMap, HashMap};

use crate::cohomology::{Cochain, Weight};
use crate::exactmath::{var_index, var_name, Embed, Field, MultiPoly, RatFunc, Rational, UPoly};

use super::{Dgla, KuranishiError};

#[derive(Clone, Debug)]
pub struct Coordinate<F: Field> {
    pub name: String,
    pub weight: Weight,
    pub cocycle: Cochain<F>,
}

/// Irreducible piece of the obstruction locus, given as a substitution for
/// some coordinates in terms of the remaining free ones.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub substitution: Vec<(String, MultiPoly)>,
    pub free: Vec<String>,
}

impl Component {
    pub fn describe(&self) -> String {
        if self.substitution.is_empty() {
            return "all of H¹".into();
        }
        self.substitution
            .iter()
            .map(|(v, p)| format!("{v}={p}"))
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn subs_map(&self) -> Result<HashMap<usize, MultiPoly>, KuranishiError> {
        let mut m = HashMap::new();
        for (v, p) in &self.substitution {
            m.insert(var_index(v)?, p.clone());
        }
        Ok(m)
    }
}

#[derive(Clone, Debug)]
pub struct KuranishiFamily<F: Field> {
    pub coords: Vec<Coordinate<F>>,
    /// ξ = Φ⁻¹(Σ tᵢ hᵢ), a degree-1 element with polynomial coefficients.
    pub xi: Cochain<RatFunc>,
    /// Distinct nonzero H²⊕C² coordinates of [ξ, ξ], made monic.
    pub obstructions: Vec<MultiPoly>,
    pub components: Vec<Component>,
    /// Set when the obstruction ideal did not split into visible linear pieces.
    pub needs_manual_components: bool,
}

impl<F: Field> KuranishiFamily<F> {
    /// ξ restricted to a component.
    pub fn xi_on(&self, c: &Component) -> Result<Cochain<RatFunc>, KuranishiError> {
        let subs = c.subs_map()?;
        let mut out = Cochain::zero(self.xi.p);
        for (k, x) in &self.xi.terms {
            out.add_term(*k, x.substitute(&subs)?);
        }
        Ok(out)
    }

    pub fn names(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.name.clone()).collect()
    }
}

impl<F: Field> Dgla<F>
where
    RatFunc: Embed<F>,
{
    /// The family over the harmonic basis of H¹(𝔏), coordinates named
    /// `names` (default `t1, t2, …`).
    pub fn kuranishi_family(&self, names: Option<&[String]>) -> Result<KuranishiFamily<F>, KuranishiError> {
        let basis = self.harmonic_basis(1);
        self.kuranishi_family_with_basis(basis, names)
    }

    /// As [`Self::kuranishi_family`] over a chosen basis of harmonic cocycles.
    pub fn kuranishi_family_with_basis(
        &self,
        basis: Vec<(Weight, Cochain<F>)>,
        names: Option<&[String]>,
    ) -> Result<KuranishiFamily<F>, KuranishiError> {
        let h0 = self.h_dims()[0];
        if h0 != 0 {
            return Err(KuranishiError::NonzeroH0(h0));
        }
        let names: Vec<String> = match names {
            Some(n) if n.len() == basis.len() => n.to_vec(),
            Some(n) => {
                return Err(KuranishiError::Invalid(format!(
                    "{} coordinate names for {} classes",
                    n.len(),
                    basis.len()
                )))
            }
            None if basis.len() == 1 => vec!["t".into()],
            None => (1..=basis.len()).map(|i| format!("t{i}")).collect(),
        };
        let mut h = Cochain::zero(2);
        let mut coords = Vec::new();
        for ((w, c), name) in basis.into_iter().zip(names) {
            let t = RatFunc::var(&name)?;
            h = h.add(&c.map(|x| RatFunc::embed(x)).scale(&t));
            coords.push(Coordinate { name, weight: w, cocycle: c });
        }
        let xi = self.phi_inverse(&h)?;
        let [_, oh, oc] = self.decompose(&self.bracket(&xi, &xi))?;
        let mut obstructions: Vec<MultiPoly> = Vec::new();
        for part in [oh, oc] {
            let coords_of = self.block_coordinates(&part)?;
            for x in coords_of {
                if x.is_zero() {
                    continue;
                }
                if !x.is_polynomial() {
                    return Err(KuranishiError::Invalid("non-polynomial obstruction".into()));
                }
                let p = x.num().monic();
                if !obstructions.contains(&p) {
                    obstructions.push(p);
                }
            }
        }
        let names: Vec<String> = coords.iter().map(|c| c.name.clone()).collect();
        let (components, manual) = decompose_locus(&obstructions, &names)?;
        Ok(KuranishiFamily { coords, xi, obstructions, components, needs_manual_components: manual })
    }

    /// Block coordinates of a cochain in the B|H|C basis (concatenated).
    fn block_coordinates<G: Embed<F>>(&self, x: &Cochain<G>) -> Result<Vec<G>, KuranishiError> {
        Ok(self.parts(x)?.into_values().flatten().collect())
    }
}

impl Dgla<Rational> {
    /// For a pair of classes υ₁, υ₂, a new basis of their span made of the two
    /// rational directions h with [h, h] = 0, when the self-bracket is a
    /// binary quadratic form with values on one line and two distinct rational
    /// null directions. `None` if the bracket vanishes on the whole span or no
    /// such pair exists.
    pub fn isotropic_pair(&self, u1: &Cochain<Rational>, u2: &Cochain<Rational>) -> Option<[Cochain<Rational>; 2]> {
        let forms = [self.bracket(u1, u1), self.bracket(u1, u2), self.bracket(u2, u2)];
        let lead = forms.iter().find(|f| !f.is_zero())?;
        let (key, c0) = lead.terms.iter().next().map(|(k, c)| (*k, c.clone()))?;
        let mut coef = Vec::new();
        for f in &forms {
            let c = f.terms.get(&key).cloned().unwrap_or_else(Rational::zero).div(&c0).ok()?;
            if *f != lead.scale(&c) {
                return None;
            }
            coef.push(c);
        }
        // p a² + 2 r a b + s b² = 0
        let (p, r, s) = (&coef[0], &coef[1], &coef[2]);
        let dirs: Vec<(Rational, Rational)> = if p.is_zero() {
            if r.is_zero() {
                return None;
            }
            vec![(Rational::one(), Rational::zero()), (s.neg(), r.add(r))]
        } else {
            let disc = r.mul(r).sub(&p.mul(s));
            let root = rational_sqrt(&disc)?;
            if root.is_zero() {
                return None;
            }
            vec![
                (r.neg().add(&root).div(p).ok()?, Rational::one()),
                (r.neg().sub(&root).div(p).ok()?, Rational::one()),
            ]
        };
        let make = |(a, b): &(Rational, Rational)| u1.scale(a).add(&u2.scale(b));
        Some([make(&dirs[0]), make(&dirs[1])])
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Rational::from_big(n, d).ok()
    } else {
        None
    }
}

pub(super) type Subs = BTreeMap<usize, MultiPoly>;

const MAX_BRANCHES: usize = 256;

/// Irreducible-looking pieces of V(f₁,…,f_r), found by eliminating variables
/// that occur linearly with constant coefficient and by splitting off
/// monomial factors. Pieces contained in others are dropped. The flag is set
/// when some branch could not be reduced this way.
pub fn decompose_locus(fs: &[MultiPoly], names: &[String]) -> Result<(Vec<Component>, bool), KuranishiError> {
    let order: Vec<usize> = names.iter().map(|n| var_index(n)).collect::<Result<_, _>>()?;
    let (kept, manual) = locus_pieces(fs, &order);
    let comps = kept
        .into_iter()
        .map(|subs| Component {
            substitution: order
                .iter()
                .filter_map(|v| subs.get(v).map(|p| (var_name(*v), p.clone())))
                .collect(),
            free: order.iter().filter(|v| !subs.contains_key(v)).map(|v| var_name(*v)).collect(),
        })
        .collect();
    Ok((comps, manual))
}

/// Pieces of V(fs) found by elimination, largest first. Branches that do
/// not reduce are skipped; errors only if nothing was found.
pub(super) fn solve_locus(fs: &[MultiPoly], order: &[usize]) -> Result<Vec<Subs>, KuranishiError> {
    let (kept, manual) = locus_pieces(fs, order);
    if manual && kept.is_empty() {
        return Err(KuranishiError::Invalid("polynomial system not reducible by elimination".into()));
    }
    Ok(kept)
}

fn locus_pieces(fs: &[MultiPoly], order: &[usize]) -> (Vec<Subs>, bool) {
    let mut found = Vec::new();
    let mut manual = false;
    let mut budget = MAX_BRANCHES;
    solve(fs.to_vec(), Subs::new(), order, &mut found, &mut manual, &mut budget);
    let mut kept: Vec<Subs> = Vec::new();
    for (i, a) in found.iter().enumerate() {
        let redundant = found.iter().enumerate().any(|(j, b)| {
            j != i && contained(a, b) && (!contained(b, a) || j < i)
        });
        if !redundant {
            kept.push(a.clone());
        }
    }
    kept.sort_by_key(|c| c.len());
    (kept, manual)
}

/// Whether the locus of `a` lies inside that of `b`.
fn contained(a: &Subs, b: &Subs) -> bool {
    let ha: HashMap<usize, MultiPoly> = a.iter().map(|(k, v)| (*k, v.clone())).collect();
    b.iter().all(|(v, p)| MultiPoly::var(*v).substitute(&ha) == p.substitute(&ha))
}

fn extend(subs: &Subs, v: usize, p: MultiPoly) -> Subs {
    let one: HashMap<usize, MultiPoly> = [(v, p.clone())].into_iter().collect();
    let mut out: Subs = subs.iter().map(|(k, q)| (*k, q.substitute(&one))).collect();
    out.insert(v, p);
    out
}

fn solve(gens: Vec<MultiPoly>, subs: Subs, order: &[usize], out: &mut Vec<Subs>, manual: &mut bool, budget: &mut usize) {
    if *budget == 0 {
        *manual = true;
        return;
    }
    *budget -= 1;
    let hs: HashMap<usize, MultiPoly> = subs.iter().map(|(k, v)| (*k, v.clone())).collect();
    let mut g: Vec<MultiPoly> = Vec::new();
    for f in &gens {
        let r = f.substitute(&hs);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return;
        }
        let r = r.monic();
        if !g.contains(&r) {
            g.push(r);
        }
    }
    if g.is_empty() {
        out.push(subs);
        return;
    }
    g.sort_by_key(|f| (f.total_degree(), f.len()));
    // a variable occurring linearly with constant coefficient
    for f in &g {
        for &v in order {
            if f.degree_in(v) == 1 {
                if let Some(c) = f.coeff_in(v, 1).constant_value() {
                    let rest = f.sub(&MultiPoly::var(v).scale(&c));
                    let p = rest.scale(&c.inv().expect("nonzero").neg());
                    solve(g.clone(), extend(&subs, v, p), order, out, manual, budget);
                    return;
                }
            }
        }
    }
    // split off a variable factor
    for (i, f) in g.iter().enumerate() {
        let m = f.monomial_content();
        if let Some(&v) = order.iter().find(|&&v| m.0[v] > 0) {
            solve(g.clone(), extend(&subs, v, MultiPoly::zero()), order, out, manual, budget);
            let mut h = g.clone();
            h[i] = f.div_monomial(&crate::exactmath::Monomial::var(v, 1));
            solve(h, subs, order, out, manual, budget);
            return;
        }
    }
    // a univariate generator: branch over its rational roots
    if let Some((f, v)) = g.iter().find_map(|f| match f.variables().as_slice() {
        [v] => Some((f, *v)),
        _ => None,
    }) {
        let coeffs: Vec<Rational> = (0..=f.degree_in(v))
            .map(|d| f.coeff_in(v, d).constant_value().unwrap_or_else(Rational::zero))
            .collect();
        let (roots, complete) = rational_roots(&coeffs);
        if !complete {
            *manual = true;
        }
        for r in roots {
            solve(g.clone(), extend(&subs, v, MultiPoly::constant(r)), order, out, manual, budget);
        }
        return;
    }
    *manual = true;
}

/// Rational roots of `Σ c_i x^i` by the rational root test; the flag is
/// false when some irreducible factor of degree > 1 remains or the
/// coefficients are too large to enumerate divisors.
fn rational_roots(c: &[Rational]) -> (Vec<Rational>, bool) {
    use num_bigint::BigInt;
    use num_traits::{Signed, ToPrimitive, Zero};
    let p = UPoly::new(c.to_vec());
    let Ok(parts) = p.square_free() else {
        return (Vec::new(), false);
    };
    let mut rad = UPoly::new(vec![Rational::one()]);
    for q in &parts {
        rad = rad.mul(q);
    }
    let mut roots = Vec::new();
    let mut rest = rad.clone();
    if rest.coeffs().first().is_some_and(|x| x.is_zero()) {
        roots.push(Rational::zero());
        rest = UPoly::new(rest.coeffs()[1..].to_vec());
    }
    let lcm = rest.coeffs().iter().fold(BigInt::from(1), |acc, x| {
        let d = x.denom().clone();
        num_integer::Integer::lcm(&acc, &d)
    });
    let ints: Vec<BigInt> = rest
        .coeffs()
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let divisors = |n: &BigInt| -> Option<Vec<i64>> {
        let n = n.abs().to_i64()?;
        if n == 0 || n > 1_000_000 {
            return None;
        }
        Some((1..=n).filter(|d| n % d == 0).collect())
    };
    let (Some(ps), Some(qs)) = (
        ints.first().and_then(divisors),
        ints.last().and_then(divisors),
    ) else {
        return (roots, rest.degree() == Some(0));
    };
    for a in &ps {
        for b in &qs {
            for sign in [1, -1] {
                let r = Rational::new(sign * a, *b).expect("nonzero");
                if roots.contains(&r) {
                    continue;
                }
                let val = rest.coeffs().iter().rev().fold(Rational::zero(), |acc, x| acc.mul(&r).add(x));
                if val.is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    let complete = roots.len() == rad.degree().unwrap_or(0) && !ints.iter().all(|x| x.is_zero());
    (roots, complete)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_system_point() {
        let v: Vec<usize> = (1..=3).map(|i| var_index(&format!("u{i}")).unwrap()).collect();
        let u = |i: usize| MultiPoly::var(v[i]);
        let c = |n: i64| Rational::integer(n);
        let e1 = u(1).mul(&u(1)).scale(&c(-4)).sub(&u(1).scale(&c(4)));
        let e2 = u(0).mul(&u(1)).scale(&c(-4)).add(&u(0).mul(&u(2)).scale(&c(4))).add(&u(1).mul(&u(1)).scale(&c(2))).sub(&u(2).mul(&u(2)).scale(&c(2)));
        let (pieces, manual) = locus_pieces(&[e1, e2], &v);
        eprintln!("{pieces:?} {manual}");
        assert!(!pieces.is_empty());
    }

    #[test]
    fn rational_roots_found() {
        let c = |n: i64| Rational::integer(n);
        // 2(x + 1/2)(x + 1)(x² + 1)
        let (r, complete) = rational_roots(&[c(1), c(3), c(3), c(3), c(2)]);
        assert_eq!(r.len(), 2);
        assert!(!complete);
        let (r, complete) = rational_roots(&[c(-2), c(-6), c(-4)]);
        assert_eq!(r.len(), 2);
        assert!(complete);
    }
}
