use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{var_index, Field, MathError, MultiPoly, Rational};

/// Element of ℚ(params): coprime numerator and denominator, denominator monic
/// under the grlex order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, MathError> {
        if den.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn var(name: &str) -> Result<Self, MathError> {
        Ok(Self::from_poly(MultiPoly::var(var_index(name)?)))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn variables(&self) -> Vec<usize> {
        let m = self.num.var_mask() | self.den.var_mask();
        (0..super::MAX_VARS).filter(|i| m & (1 << i) != 0).collect()
    }

    fn reduce(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            let inv = c.inv().expect("nonzero denominator");
            return RatFunc {
                num: num.scale(&inv),
                den: MultiPoly::one(),
            };
        }
        let g = num.gcd(&den).expect("nonzero operands");
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        Self::fix_lc(num, den)
    }

    fn fix_lc(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            return RatFunc { num, den };
        }
        let inv = lc.inv().expect("nonzero leading coefficient");
        if den.is_constant() {
            return RatFunc {
                num: num.scale(&inv),
                den: MultiPoly::one(),
            };
        }
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    /// Substitutes rational values for some parameters.
    pub fn specialize_partial(&self, assign: &[(usize, Rational)]) -> Result<Self, MathError> {
        let den = self.den.eval_partial(assign);
        if den.is_zero() {
            return Err(MathError::Pole(self.den.to_string()));
        }
        Ok(Self::reduce(self.num.eval_partial(assign), den))
    }

    /// Full evaluation; every parameter present must be assigned.
    pub fn specialize(&self, assign: &[(usize, Rational)]) -> Result<Rational, MathError> {
        let r = self.specialize_partial(assign)?;
        r.as_rational().ok_or_else(|| {
            MathError::Dimension(format!("unassigned parameters remain in {r}"))
        })
    }

    /// Substitutes polynomials for parameters.
    pub fn substitute(&self, subs: &HashMap<usize, MultiPoly>) -> Result<Self, MathError> {
        let den = self.den.substitute(subs);
        if den.is_zero() {
            return Err(MathError::Pole(self.den.to_string()));
        }
        Ok(Self::reduce(self.num.substitute(subs), den))
    }

    pub fn derivative(&self, v: usize) -> Self {
        // (n/d)' = (n'd - nd')/d²
        let n = self.num.derivative(v).mul(&self.den).sub(&self.num.mul(&self.den.derivative(v)));
        Self::reduce(n, self.den.mul(&self.den))
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }
    fn one() -> Self {
        RatFunc {
            num: MultiPoly::one(),
            den: MultiPoly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let d1c = self.den.is_constant();
        let d2c = o.den.is_constant();
        if d1c && d2c {
            return RatFunc {
                num: self.num.add(&o.num),
                den: MultiPoly::one(),
            };
        }
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        // p + n/d = (p·d + n)/d stays coprime
        if d2c {
            return Self::fix_lc(self.num.add(&o.num.mul(&self.den)), self.den.clone());
        }
        if d1c {
            return Self::fix_lc(self.num.mul(&o.den).add(&o.num), o.den.clone());
        }
        let g = self.den.gcd(&o.den).expect("nonzero");
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = o.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d2).add(&o.num.mul(&d1));
        Self::reduce(num, d1.mul(&o.den))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_constant() && o.den.is_constant() {
            return RatFunc {
                num: self.num.mul(&o.num),
                den: MultiPoly::one(),
            };
        }
        let cancel = |n: &MultiPoly, d: &MultiPoly| -> (MultiPoly, MultiPoly) {
            if d.is_constant() || n.is_constant() {
                return (n.clone(), d.clone());
            }
            let g = n.gcd(d).expect("nonzero");
            if g.is_constant() {
                (n.clone(), d.clone())
            } else {
                (n.div_exact(&g).expect("divides"), d.div_exact(&g).expect("divides"))
            }
        };
        let (n1, d2) = cancel(&self.num, &o.den);
        let (n2, d1) = cancel(&o.num, &self.den);
        Self::fix_lc(n1.mul(&n2), d1.mul(&d2))
    }
    fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Result<Self, MathError> {
        if self.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        Ok(Self::fix_lc(self.den.clone(), self.num.clone()))
    }
    fn from_rational(q: &Rational) -> Self {
        Self::from_poly(MultiPoly::constant(q.clone()))
    }
    fn as_rational(&self) -> Option<Rational> {
        if self.den.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }
    fn cost(&self) -> usize {
        self.num.len() + self.den.len()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for RatFunc {
    type Err = MathError;
    fn from_str(s: &str) -> Result<Self, MathError> {
        super::parse_ratfunc(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        assert_eq!(r("t/(t+1)").mul(&r("(t+1)/t")), RatFunc::one());
    }

    #[test]
    fn factor_cancellation() {
        assert_eq!(r("(t^2-1)/(t-1)"), r("t+1"));
    }

    #[test]
    fn specialization_and_pole() {
        let t = var_index("t").unwrap();
        let x = r("(t+1)/t");
        assert_eq!(x.specialize(&[(t, Rational::integer(2))]).unwrap(), Rational::new(3, 2).unwrap());
        assert!(matches!(r("1/t").specialize(&[(t, Rational::zero())]), Err(MathError::Pole(_))));
    }

    #[test]
    fn canonical_form_independent_of_path() {
        let a = r("1/(t-s)").sub(&r("1/(t+s)"));
        let b = r("2*s/(t^2 - s^2)");
        assert_eq!(a, b);
        let c = r("(2*t + 2)/(4*t^2 - 4)");
        assert_eq!(c.to_string(), "(1/2)/(t - 1)");
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "t^2*s - 3/2", "(t + 1)/(t^2*s - 2)", "(-s)/(t + s)"] {
            let x = r(s);
            assert_eq!(r(&x.to_string()), x);
        }
    }
}
