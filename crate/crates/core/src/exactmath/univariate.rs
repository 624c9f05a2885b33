//! Dense univariate polynomials over a field.

use super::{Field, MathError};

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<F: Field>(Vec<F>);

impl<F: Field> UPoly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&F::from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.0.last() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                UPoly(self.0.iter().map(|c| c.mul(&inv)).collect())
            }
        }
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), MathError> {
        let dd = d.degree().ok_or(MathError::DivisionByZero)?;
        let lead = d.0[dd].inv()?;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return Ok((UPoly(Vec::new()), self.clone()));
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].mul(&lead);
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                r[i + j] = r[i + j].sub(&c.mul(dj));
            }
            q[i] = c;
        }
        Ok((UPoly::new(q), UPoly::new(r)))
    }

    /// Monic gcd; errors when both are zero.
    pub fn gcd(&self, o: &Self) -> Result<Self, MathError> {
        let (mut a, mut b) = (self.clone(), o.clone());
        if a.is_zero() && b.is_zero() {
            return Err(MathError::GcdOfZeros);
        }
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    fn div_exact(&self, d: &Self) -> Result<Self, MathError> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(MathError::NotExact)
        }
    }

    /// Yun's square-free decomposition: `[P₁, P₂, …]` with `self = c·Π Pᵢ^i`
    /// and the `Pᵢ` square-free, pairwise coprime and monic.
    pub fn square_free(&self) -> Result<Vec<Self>, MathError> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        let df = f.derivative();
        let a0 = f.gcd(&df)?;
        let mut b = f.div_exact(&a0)?;
        let mut c = df.div_exact(&a0)?;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        loop {
            let a = b.gcd(&d)?;
            out.push(a.clone());
            b = b.div_exact(&a)?;
            if b.degree() == Some(0) {
                break;
            }
            c = d.div_exact(&a)?;
            d = c.sub(&b.derivative());
        }
        while out.last().is_some_and(|p| p.degree() == Some(0)) {
            out.pop();
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        UPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(F::zero);
                    let b = o.0.get(i).cloned().unwrap_or_else(F::zero);
                    a.sub(&b)
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly(Vec::new());
        }
        let mut c = vec![F::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        UPoly::new(c)
    }
}
