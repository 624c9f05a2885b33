use crate::cohomology::Cochain;
use crate::exactmath::{Embed, Field, Matrix, Rational};

use super::{Dgla, KuranishiError};

/// Matrix of a 1-cochain `y` on the algebra basis: column `a` is `y(e_a)`.
pub fn to_matrix<G: Field>(y: &Cochain<G>, n: usize) -> Matrix<G> {
    let mut m = Matrix::zeros(n, n);
    for ((mask, k), c) in &y.terms {
        m.set(*k, mask.trailing_zeros() as usize, c.clone());
    }
    m
}

pub fn from_matrix<G: Field>(m: &Matrix<G>) -> Cochain<G> {
    let mut y = Cochain::zero(1);
    for a in 0..m.cols() {
        for k in 0..m.rows() {
            y.add_term((1 << a, k), m.get(k, a).clone());
        }
    }
    y
}

fn inv_int<G: Field>(n: i64) -> G {
    G::from_rational(&Rational::new(1, n).expect("nonzero"))
}

/// `exp(m)` for nilpotent `m`; the series is summed until its terms vanish.
pub fn exp_nilpotent<G: Field>(m: &Matrix<G>) -> Matrix<G> {
    let n = m.rows();
    let mut out = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=n as i64 {
        term = term.mul(m).expect("square").scale(&inv_int(k));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    out
}

/// `log(u)` for unipotent `u`.
pub fn log_unipotent<G: Field>(u: &Matrix<G>) -> Matrix<G> {
    let n = u.rows();
    let x = u.sub(&Matrix::identity(n));
    let mut out = Matrix::zeros(n, n);
    let mut pow = Matrix::identity(n);
    for k in 1..=n as i64 {
        pow = pow.mul(&x).expect("square");
        if pow.is_zero() {
            break;
        }
        let c: G = inv_int(k);
        out = out.add(&pow.scale(&if k % 2 == 1 { c } else { c.neg() }));
    }
    out
}

/// `log(exp(a) exp(b))`, the group law on 𝔏⁰ under the exponential.
pub fn bch<G: Field>(a: &Cochain<G>, b: &Cochain<G>, n: usize) -> Cochain<G> {
    let u = exp_nilpotent(&to_matrix(a, n)).mul(&exp_nilpotent(&to_matrix(b, n))).expect("square");
    from_matrix(&log_unipotent(&u))
}

/// `(u·ψ)(X, Y) = u ψ(u⁻¹X, u⁻¹Y)` for a 2-cochain ψ.
fn transport<G: Field>(u: &Matrix<G>, uinv: &Matrix<G>, psi: &Cochain<G>, n: usize) -> Cochain<G> {
    let cols: Vec<Vec<G>> = (0..n).map(|a| uinv.col(a)).collect();
    let mut out = Cochain::zero(2);
    for a in 0..n {
        for b in a + 1..n {
            let v = psi.evaluate(&[cols[a].clone(), cols[b].clone()], n);
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            for (k, c) in u.mul_vec(&v).into_iter().enumerate() {
                out.add_term(((1 << a) | (1 << b), k), c);
            }
        }
    }
    out
}

impl<F: Field> Dgla<F> {
    /// `e^y ∗ x = u·(μ + x) − μ` with `u = exp(y)`; `[uX, uY]_{u∗x} = u[X, Y]_x`.
    pub fn gauge_act<G: Embed<F>>(&self, y: &Cochain<G>, x: &Cochain<G>) -> Cochain<G> {
        let n = self.k.dim();
        let ym = to_matrix(y, n);
        let u = exp_nilpotent(&ym);
        let uinv = exp_nilpotent(&ym.scale(&G::one().neg()));
        let mu: Cochain<G> = self.mu().map(|c| G::embed(c));
        transport(&u, &uinv, &mu.add(x), n).sub(&mu)
    }

    /// Gauge element η with δ(e^η ∗ x) = 0, built weight by weight, and the
    /// coordinates of π(x) = Φ(e^η ∗ x) in the harmonic basis of H¹.
    pub fn gauge_normalize<G: Embed<F>>(&self, x: &Cochain<G>) -> Result<(Cochain<G>, Vec<G>), KuranishiError> {
        let h0 = self.h_dims()[0];
        if h0 != 0 {
            return Err(KuranishiError::NonzeroH0(h0));
        }
        let mut eta = Cochain::zero(1);
        let mut ws: Vec<i64> = self.weights(1).iter().map(|w| w[1]).collect();
        ws.sort();
        ws.dedup();
        for i in ws {
            let z = self.gauge_act(&eta, x);
            let dz = self.delta(&z)?;
            let mut corr = Cochain::zero(1);
            for ((mask, k), c) in &dz.terms {
                if self.complex.weight_of(*mask, *k)[1] == i {
                    corr.add_term((*mask, *k), c.clone());
                }
            }
            if !corr.is_zero() {
                eta = bch(&corr, &eta, self.k.dim());
            }
        }
        let z = self.gauge_act(&eta, x);
        if !self.delta(&z)?.is_zero() {
            return Err(KuranishiError::Invalid("gauge normalization did not converge".into()));
        }
        let m = self.harmonic_coords(&self.phi(&z)?)?;
        Ok((eta, m))
    }
}
