use std::collections::HashMap;

use crate::cohomology::Cochain;
use crate::exactmath::{var_index, Field, MultiPoly, RatFunc, Rational};

use super::family::{solve_locus, Component, Coordinate, KuranishiFamily};
use super::{Dgla, KuranishiError};

/// Scratch names for the unknowns of small polynomial systems.
fn unknowns(n: usize) -> Result<Vec<usize>, KuranishiError> {
    (1..=n).map(|i| Ok(var_index(&format!("u{i}"))?)).collect()
}

impl Dgla<Rational> {
    /// A cocycle `c + dβ` with `[c + dβ, c + dβ] = 0`, β in the weight
    /// blocks of 𝔏⁰ where `c` lives; `None` if no rational β is found.
    pub fn isotropic_representative(&self, c: &Cochain<Rational>) -> Result<Option<Cochain<Rational>>, KuranishiError> {
        if self.bracket(c, c).is_zero() {
            return Ok(Some(c.clone()));
        }
        let ws: Vec<_> = c.terms.keys().map(|(m, k)| self.complex.weight_of(*m, *k)).collect();
        let keys: Vec<(u32, usize)> = self
            .keys(1)
            .into_iter()
            .filter(|(m, k)| ws.contains(&self.complex.weight_of(*m, *k)))
            .collect();
        let dbs: Vec<Cochain<Rational>> = keys
            .iter()
            .map(|(m, k)| self.d(&Cochain::basis(1, *m, *k)))
            .filter(|x| !x.is_zero())
            .collect();
        let vars = unknowns(dbs.len())?;
        let mut x: Cochain<RatFunc> = c.map(|q| RatFunc::from_rational(q));
        for (db, v) in dbs.iter().zip(&vars) {
            x = x.add(&db.map(|q| RatFunc::from_rational(q)).scale(&RatFunc::from_poly(MultiPoly::var(*v))));
        }
        let eqs: Vec<MultiPoly> = self.bracket(&x, &x).terms.values().map(|r| r.num().clone()).collect();
        let Some(subs) = solve_locus(&eqs, &vars)?.into_iter().next() else {
            return Ok(None);
        };
        let zero: HashMap<usize, MultiPoly> = vars.iter().map(|v| (*v, MultiPoly::zero())).collect();
        let mut point: HashMap<usize, MultiPoly> = HashMap::new();
        for v in &vars {
            let val = subs.get(v).cloned().unwrap_or_else(MultiPoly::zero).substitute(&zero);
            point.insert(*v, val);
        }
        let mut out = Cochain::zero(2);
        for (k, r) in &x.terms {
            let val = r.substitute(&point)?;
            out.add_term(*k, val.as_rational().ok_or_else(|| KuranishiError::Invalid("non-constant point".into()))?);
        }
        debug_assert!(self.bracket(&out, &out).is_zero());
        Ok(Some(out))
    }

    /// `φ(t, s) = t υ′ + s υ″ + ts υ‴` with `dυ‴ + [υ′, υ″] = 0`, for cocycles
    /// with vanishing self-brackets; `None` unless φ is Maurer–Cartan.
    pub fn bilinear_family(
        &self,
        u1: (&Coordinate<Rational>, &str),
        u2: (&Coordinate<Rational>, &str),
    ) -> Result<Option<(KuranishiFamily<Rational>, Cochain<Rational>)>, KuranishiError> {
        let (a, b) = (&u1.0.cocycle, &u2.0.cocycle);
        let mixed = self.bracket(a, b);
        let [_, h, c] = self.decompose(&mixed)?;
        if !h.is_zero() || !c.is_zero() {
            return Ok(None);
        }
        let corr = self.delta(&mixed)?.scale(&Rational::integer(-1));
        let t = RatFunc::var(u1.1)?;
        let s = RatFunc::var(u2.1)?;
        let lift = |x: &Cochain<Rational>| x.map(|q| RatFunc::from_rational(q));
        let xi = lift(a).scale(&t).add(&lift(b).scale(&s)).add(&lift(&corr).scale(&t.mul(&s)));
        if !self.mc_residual(&xi).is_zero() {
            return Ok(None);
        }
        let coords = vec![
            Coordinate { name: u1.1.to_string(), ..u1.0.clone() },
            Coordinate { name: u2.1.to_string(), ..u2.0.clone() },
        ];
        let free = vec![u1.1.to_string(), u2.1.to_string()];
        let fam = KuranishiFamily {
            coords,
            xi,
            obstructions: Vec::new(),
            components: vec![Component { substitution: Vec::new(), free }],
            needs_manual_components: false,
        };
        Ok(Some((fam, corr)))
    }
}
