use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use super::{Field, MathError, Rational};

/// Hard cap on distinct parameter names in one process.
pub const MAX_VARS: usize = 24;

// Interned up front so their relative order (and hence normal forms) never
// depends on which code path touched a name first.
const PRESET: [&str; 11] = [
    "t", "s", "t1", "t2", "t3", "lambda", "alpha", "epsilon", "sigma", "z", "w",
];

fn registry() -> &'static RwLock<Vec<String>> {
    static REG: OnceLock<RwLock<Vec<String>>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(PRESET.iter().map(|s| s.to_string()).collect()))
}

/// Index of a parameter name, interning it on first use.
pub fn var_index(name: &str) -> Result<usize, MathError> {
    {
        let reg = registry().read().expect("variable registry poisoned");
        if let Some(i) = reg.iter().position(|n| n == name) {
            return Ok(i);
        }
    }
    let mut reg = registry().write().expect("variable registry poisoned");
    if let Some(i) = reg.iter().position(|n| n == name) {
        return Ok(i);
    }
    if reg.len() >= MAX_VARS {
        return Err(MathError::TooManyVariables(MAX_VARS));
    }
    reg.push(name.to_string());
    Ok(reg.len() - 1)
}

pub fn var_name(i: usize) -> String {
    registry().read().expect("variable registry poisoned")[i].clone()
}

/// Exponent vector indexed by interned variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u8; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_VARS])
    }

    pub fn var(v: usize, e: u8) -> Self {
        let mut m = Monomial::one();
        m.0[v] = e;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut r = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            r[i] = self.0[i]
                .checked_add(o.0[i])
                .expect("monomial exponent overflow");
        }
        Monomial(r)
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.0[i] <= o.0[i])
    }

    /// `o / self`; caller guarantees divisibility.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        let mut r = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            r[i] = o.0[i] - self.0[i];
        }
        Monomial(r)
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut r = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            r[i] = self.0[i].min(o.0[i]);
        }
        Monomial(r)
    }

    fn mask(&self) -> u32 {
        let mut m = 0u32;
        for i in 0..MAX_VARS {
            if self.0[i] > 0 {
                m |= 1 << i;
            }
        }
        m
    }
}

impl Ord for Monomial {
    // graded lexicographic, variable 0 heaviest
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", MonomialDisplay(self))
    }
}

struct MonomialDisplay<'a>(&'a Monomial);

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0 .0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", var_name(i))?;
            } else {
                write!(f, "{}^{}", var_name(i), e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial over ℚ; terms sorted by descending grlex order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: Vec<(Monomial, Rational)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(q: Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: vec![(Monomial::one(), q)],
        }
    }

    pub fn var(v: usize) -> Self {
        MultiPoly {
            terms: vec![(Monomial::var(v, 1), Rational::one())],
        }
    }

    pub fn var_named(name: &str) -> Result<Self, MathError> {
        Ok(Self::var(var_index(name)?))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { terms: vec![(m, c)] }
    }

    pub fn from_terms(mut raw: Vec<(Monomial, Rational)>) -> Self {
        raw.sort_by(|a, b| b.0.cmp(&a.0));
        let mut terms: Vec<(Monomial, Rational)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match terms.last_mut() {
                Some(last) if last.0 == m => last.1 = last.1.add(&c),
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        MultiPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.terms
            .first()
            .map(|t| t.1.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn var_mask(&self) -> u32 {
        self.terms.iter().fold(0, |m, (mono, _)| m | mono.mask())
    }

    pub fn variables(&self) -> Vec<usize> {
        let m = self.var_mask();
        (0..MAX_VARS).filter(|i| m & (1 << i) != 0).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match self.terms[i].0.cmp(&o.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.add(&o.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        MultiPoly { terms: out }
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.mul(q))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c.mul(q)))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let c = c1.mul(c2);
                acc.entry(m)
                    .and_modify(|e| *e = e.add(&c))
                    .or_insert(c);
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => Self::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn degree_in(&self, v: usize) -> u8 {
        self.terms.iter().map(|(m, _)| m.0[v]).max().unwrap_or(0)
    }

    /// Coefficient of `v^d`, as a polynomial free of `v`.
    pub fn coeff_in(&self, v: usize, d: u8) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[v] == d)
            .map(|(m, c)| {
                let mut m = *m;
                m.0[v] = 0;
                (m, c.clone())
            })
            .collect::<Vec<_>>();
        // removing a variable with a fixed exponent preserves relative order
        MultiPoly { terms }
    }

    pub fn coeffs_in(&self, v: usize) -> Vec<Self> {
        let d = self.degree_in(v);
        (0..=d).map(|k| self.coeff_in(v, k)).collect()
    }

    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let first = match it.next() {
            None => return Monomial::one(),
            Some((m, _)) => *m,
        };
        it.fold(first, |g, (m, _)| g.gcd(m))
    }

    pub fn div_monomial(&self, m: &Monomial) -> Self {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (m.quotient_of(mm), c.clone()))
                .collect(),
        }
    }

    /// Exact division; fails when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Result<Self, MathError> {
        if d.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        if let Some(c) = d.constant_value() {
            return Ok(self.scale(&c.inv()?));
        }
        let (dm, dc) = (&d.terms[0].0, &d.terms[0].1);
        let dc_inv = dc.inv()?;
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some((rm, rc)) = r.terms.first() {
            if !dm.divides(rm) {
                return Err(MathError::NotExact);
            }
            let m = dm.quotient_of(rm);
            let c = rc.mul(&dc_inv);
            r = r.sub(&d.mul_term(&m, &c));
            q.push((m, c));
        }
        Ok(MultiPoly { terms: q })
    }

    pub fn derivative(&self, v: usize) -> Self {
        let raw = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[v] > 0)
            .map(|(m, c)| {
                let e = m.0[v];
                let mut m = *m;
                m.0[v] -= 1;
                (m, c.mul(&Rational::integer(e as i64)))
            })
            .collect();
        MultiPoly::from_terms(raw)
    }

    /// Substitutes rational values for some variables.
    pub fn eval_partial(&self, assign: &[(usize, Rational)]) -> Self {
        let mut raw = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut m = *m;
            let mut c = c.clone();
            for (v, q) in assign {
                let e = m.0[*v];
                if e > 0 {
                    c = c.mul(&q.pow(e as u32));
                    m.0[*v] = 0;
                }
            }
            raw.push((m, c));
        }
        MultiPoly::from_terms(raw)
    }

    /// Substitutes polynomials for variables.
    pub fn substitute(&self, subs: &HashMap<usize, MultiPoly>) -> Self {
        if subs.is_empty() {
            return self.clone();
        }
        let mut powers: HashMap<(usize, u8), MultiPoly> = HashMap::new();
        let mut acc = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut rest = *m;
            let mut factor = MultiPoly::one();
            for (&v, p) in subs {
                let e = m.0[v];
                if e == 0 {
                    continue;
                }
                rest.0[v] = 0;
                let pw = powers.entry((v, e)).or_insert_with(|| p.pow(e as u32));
                factor = factor.mul(pw);
            }
            acc = acc.add(&factor.mul_term(&rest, c));
        }
        acc
    }

    pub fn gcd(&self, o: &Self) -> Result<Self, MathError> {
        if self.is_zero() && o.is_zero() {
            return Err(MathError::GcdOfZeros);
        }
        Ok(gcd_inner(self, o).monic())
    }
}

fn gcd_inner(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if a == b {
        return a.monic();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.gcd(&mb);
    let a1 = a.div_monomial(&ma);
    let b1 = b.div_monomial(&mb);
    let g = gcd_free(&a1, &b1);
    g.mul_term(&m, &Rational::one()).monic()
}

// gcd of polynomials with trivial monomial content
fn gcd_free(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    let (va, vb) = (a.var_mask(), b.var_mask());
    let only_a = va & !vb;
    if only_a != 0 {
        let v = only_a.trailing_zeros() as usize;
        return gcd_inner(&content_in(a, v), b);
    }
    let only_b = vb & !va;
    if only_b != 0 {
        let v = only_b.trailing_zeros() as usize;
        return gcd_inner(a, &content_in(b, v));
    }
    if a.len() <= b.len() {
        if let Ok(q) = b.div_exact(a) {
            if !q.is_zero() {
                return a.monic();
            }
        }
    } else if let Ok(q) = a.div_exact(b) {
        if !q.is_zero() {
            return b.monic();
        }
    }
    let v = va.trailing_zeros() as usize;
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd_inner(&ca, &cb);
    c.mul(&prs_gcd(pa, pb, v))
}

fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd_inner(&g, &c);
        if g.is_constant() {
            return MultiPoly::one();
        }
    }
    g.monic()
}

fn primitive_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

fn prem(p: &MultiPoly, q: &MultiPoly, v: usize) -> MultiPoly {
    let dq = q.degree_in(v);
    let lcq = q.coeff_in(v, dq);
    let mut r = p.clone();
    while !r.is_zero() && r.degree_in(v) >= dq {
        let dr = r.degree_in(v);
        let lcr = r.coeff_in(v, dr);
        let shift = Monomial::var(v, dr - dq);
        r = r
            .mul(&lcq)
            .sub(&lcr.mul(q).mul_term(&shift, &Rational::one()));
    }
    r
}

// primitive remainder sequence in R[v], R = ℚ[other variables]
fn prs_gcd(p: MultiPoly, q: MultiPoly, v: usize) -> MultiPoly {
    let (mut p, mut q) = if p.degree_in(v) >= q.degree_in(v) {
        (p, q)
    } else {
        (q, p)
    };
    loop {
        if q.is_zero() {
            return primitive_in(&p, v);
        }
        if q.degree_in(v) == 0 {
            return MultiPoly::one();
        }
        let r = prem(&p, &q, v);
        p = q;
        q = if r.is_zero() { r } else { primitive_in(&r, v) };
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", MonomialDisplay(m))?;
            } else {
                write!(f, "{a}*{}", MonomialDisplay(m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        let r = crate::exactmath::parse_ratfunc(s).unwrap();
        assert!(r.den().is_constant());
        r.num().clone()
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        assert_eq!(p("t^2 - 1").gcd(&p("t - 1")).unwrap(), p("t - 1"));
    }

    #[test]
    fn gcd_with_derivative_of_fifth_power() {
        let z = var_index("z").unwrap();
        let q = p("z^5");
        assert_eq!(q.gcd(&q.derivative(z)).unwrap(), p("z^4"));
    }

    #[test]
    fn gcd_with_one_and_of_zeros() {
        assert_eq!(p("t^3 + s").gcd(&MultiPoly::one()).unwrap(), MultiPoly::one());
        assert_eq!(
            MultiPoly::zero().gcd(&MultiPoly::zero()),
            Err(MathError::GcdOfZeros)
        );
    }

    #[test]
    fn multivariate_gcd_recovers_common_factor() {
        let g = p("t*s - 2*s^2 + 3");
        let a = g.mul(&p("t^2 + s + 1"));
        let b = g.mul(&p("t - s^3"));
        assert_eq!(a.gcd(&b).unwrap(), g.monic());
        let c = p("t*s").mul(&g);
        assert_eq!(c.gcd(&p("t^2*s^3")).unwrap(), p("t*s"));
    }

    #[test]
    fn exact_division_and_failure() {
        let a = p("t^3 - s^3");
        assert_eq!(a.div_exact(&p("t - s")).unwrap(), p("t^2 + t*s + s^2"));
        assert_eq!(a.div_exact(&p("t + s")), Err(MathError::NotExact));
    }

    #[test]
    fn grlex_leading_term() {
        let a = p("s + t^2 + t*s + 5");
        assert_eq!(a.terms()[0].0, Monomial::var(var_index("t").unwrap(), 2));
        assert_eq!(a.to_string(), "t^2 + t*s + s + 5");
    }
}
