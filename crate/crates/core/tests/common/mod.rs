#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use c3_core::cohomology::Cochain;
use c3_core::exactmath::{var_index, Rational};
use c3_core::kuranishi::{Dgla, KuranishiFamily};
use c3_core::liealg::C3Algebra;
use c3_core::pipeline::{enumerate_classes, resolve_class, ClassDescriptor};

pub fn class(c3: &C3Algebra, label: &str) -> ClassDescriptor {
    let catalog = enumerate_classes(c3).expect("catalog");
    resolve_class(&catalog, c3, label).expect("class")
}

/// Torus-invariant deformation complex of a discrete class.
pub fn dgla(c3: &C3Algebra, label: &str) -> Dgla<Rational> {
    Dgla::new(class(c3, label).subalgebra(c3).expect("subalgebra"), true).expect("dgla")
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-6..=6), rng.gen_range(1..=3)).expect("nonzero")
}

pub fn random_cochain(l: &Dgla<Rational>, q: usize, rng: &mut ChaCha8Rng, density: f64) -> Cochain<Rational> {
    let mut c = Cochain::zero(q);
    for key in l.keys(q) {
        if rng.gen_bool(density) {
            c.add_term(key, Rational::integer(rng.gen_range(-3..=3)));
        }
    }
    c
}

/// ξ at a random rational point of the first component of `fam`.
pub fn family_point<F: c3_core::exactmath::Field>(fam: &KuranishiFamily<F>, rng: &mut ChaCha8Rng) -> Cochain<Rational> {
    let comp = &fam.components[0];
    let xi = fam.xi_on(comp).expect("component");
    let vals: Vec<(usize, Rational)> = comp
        .free
        .iter()
        .map(|n| (var_index(n).expect("registered"), small_rational(rng)))
        .collect();
    xi.map(|c| c.specialize(&vals).expect("polynomial family"))
}
