use std::fmt;

use crate::exactmath::{Field, UPoly};

use super::CartanError;

/// Root multiplicities of a binary quintic over the algebraic closure,
/// in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuinticPattern(pub Vec<usize>);

impl QuinticPattern {
    /// N, IV or F for the patterns [5], [4,1], [3,2].
    pub fn label(&self) -> Option<&'static str> {
        match self.0.as_slice() {
            [5] => Some("N"),
            [4, 1] => Some("IV"),
            [3, 2] => Some("F"),
            _ => None,
        }
    }
}

impl fmt::Display for QuinticPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(l) => write!(f, "{l}"),
            None => write!(f, "{:?}", self.0),
        }
    }
}

/// Pattern of `Σ a_j z^{5−j} w^j` from a square-free decomposition of its
/// dehomogenization, with the root w = 0 counted separately.
pub fn classify_quintic<F: Field>(a: &[F]) -> Result<QuinticPattern, CartanError> {
    let deg = a.len().checked_sub(1).ok_or(CartanError::ZeroQuintic)?;
    let at_infinity = a.iter().take_while(|x| x.is_zero()).count();
    if at_infinity == a.len() {
        return Err(CartanError::ZeroQuintic);
    }
    // f(z, 1) with ascending coefficients: z^d has coefficient a_{deg−d}
    let p = UPoly::new((0..=deg).map(|d| a[deg - d].clone()).collect());
    let mut mult = Vec::new();
    if at_infinity > 0 {
        mult.push(at_infinity);
    }
    for (i, q) in p.square_free()?.iter().enumerate() {
        for _ in 0..q.degree().unwrap_or(0) {
            mult.push(i + 1);
        }
    }
    mult.sort_unstable_by(|x, y| y.cmp(x));
    Ok(QuinticPattern(mult))
}
