//! Graded bracket on algebra-valued cochains.
//!
//! A p-cochain φ = α⊗v acts on forms as the derivation `i_φ γ = α ∧ ι_v γ`,
//! and `[i_φ, i_ψ]` (graded commutator) is again of this type. The bracket
//! used on the deformation complex is that commutator twisted by
//! `(−1)^{|φ||ψ|}` with `|φ| = p − 1`, which makes `d` a derivation of it
//! and turns the Maurer–Cartan equation into the Jacobi identity.

use crate::exactmath::Field;

use super::cochain::{insert_sign, Cochain};
use super::forms::wedge;

/// `Σ (α∧ι_v β)⊗w` for φ = Σ α⊗v, ψ = Σ β⊗w, i.e. `ψ(φ(…), …)` antisymmetrized.
pub fn compose<F: Field>(phi: &Cochain<F>, psi: &Cochain<F>) -> Cochain<F> {
    let mut out = Cochain::zero(phi.p + psi.p - 1);
    if phi.p + psi.p == 0 {
        return out;
    }
    for ((sa, v), ca) in &phi.terms {
        for ((sb, w), cb) in &psi.terms {
            let Some((rb, n1)) = insert_sign(*v, *sb) else {
                continue;
            };
            let Some((m, n2)) = wedge(*sa, rb) else {
                continue;
            };
            let x = ca.mul(cb);
            out.add_term((m, *w), if n1 != n2 { x.neg() } else { x });
        }
    }
    out
}

/// Graded commutator `[i_φ, i_ψ]` of the insertion derivations.
pub fn commutator<F: Field>(phi: &Cochain<F>, psi: &Cochain<F>) -> Cochain<F> {
    let a = compose(phi, psi);
    let b = compose(psi, phi);
    let ep = (phi.p as i64 - 1) * (psi.p as i64 - 1);
    if ep.rem_euclid(2) == 0 {
        a.sub(&b)
    } else {
        a.add(&b)
    }
}

/// The deformation-complex bracket.
pub fn bracket<F: Field>(phi: &Cochain<F>, psi: &Cochain<F>) -> Cochain<F> {
    let c = commutator(phi, psi);
    let e = (phi.p as i64 - 1) * (psi.p as i64 - 1);
    if e.rem_euclid(2) == 0 {
        c
    } else {
        c.scale(&F::one().neg())
    }
}
