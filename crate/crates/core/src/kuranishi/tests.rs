use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::exactmath::{MultiPoly, RatFunc};
use crate::liealg::{build_c3, C3Algebra, IDX_E, IDX_EP, IDX_H, IDX_X};

fn q(n: i64) -> Rational {
    Rational::integer(n)
}

fn class_k(c3: &C3Algebra, name: &str) -> GradedSubalgebra<Rational> {
    let comb = |cs: &[(usize, i64)]| {
        let mut v = vec![q(0); 21];
        for (i, c) in cs {
            v[*i] = q(*c);
        }
        v
    };
    let gens: Vec<Vec<(usize, i64)>> = match name {
        "N3" => vec![vec![(IDX_X, 1)], vec![(IDX_H, 1), (IDX_E, -5)], vec![(IDX_EP, 1)]],
        "N2b" => vec![vec![(IDX_H, 1), (IDX_E, -5)], vec![(IDX_EP, 1)]],
        "IV2" => vec![vec![(IDX_H, 1), (IDX_E, -3)], vec![(IDX_EP, 1)]],
        "F2" => vec![vec![(IDX_H, 1), (IDX_E, -1)], vec![(IDX_EP, 1)]],
        "N2ainf" => vec![vec![(IDX_X, 1)], vec![(IDX_EP, 1)]],
        _ => unreachable!(),
    };
    let k0: Vec<Vec<Rational>> = gens.iter().map(|g| comb(g)).collect();
    let labels: Vec<String> = (0..k0.len()).map(|i| format!("k{i}")).collect();
    GradedSubalgebra::new(c3, &k0, &labels).unwrap()
}

fn dgla(name: &str) -> Dgla<Rational> {
    let c3 = build_c3();
    Dgla::new(class_k(&c3, name), true).unwrap()
}

fn random_element(l: &Dgla<Rational>, q: usize, rng: &mut ChaCha8Rng, density: f64) -> Cochain<Rational> {
    let mut c = Cochain::zero(q);
    for key in l.keys(q) {
        if rng.gen_bool(density) {
            c.add_term(key, Rational::integer(rng.gen_range(-3..=3)));
        }
    }
    c
}

#[test]
fn n3_family_is_a_line() {
    let l = dgla("N3");
    assert_eq!(l.h_dims()[0], 0);
    assert_eq!(l.h_dims()[1], 1);
    let fam = l.kuranishi_family(None).unwrap();
    assert!(fam.obstructions.is_empty());
    assert_eq!(fam.components.len(), 1);
    // ξ(t) = t·υ
    let t = RatFunc::var("t").unwrap();
    let ups = fam.coords[0].cocycle.map(|x| RatFunc::embed(x)).scale(&t);
    assert_eq!(fam.xi, ups);
    assert!(l.mc_residual(&fam.xi).is_zero());
}

#[test]
fn weights_bounded_by_six_in_degree_one() {
    for name in ["N3", "IV2", "N2ainf"] {
        let l = dgla(name);
        assert!(l.weights(2).iter().all(|w| w[1] <= 6));
    }
}

#[test]
fn splitting_identities() {
    let l = dgla("F2");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for q in 1..=3 {
        for _ in 0..5 {
            let x = random_element(&l, q, &mut rng, 0.3);
            let [b, _, c] = l.decompose(&x).unwrap();
            assert!(l.delta(&l.delta(&x).unwrap()).unwrap().is_zero());
            if q < 3 {
                assert_eq!(l.d(&l.delta(&x).unwrap()), b);
                assert_eq!(l.delta(&l.d(&x)).unwrap(), c);
            }
        }
    }
}

#[test]
fn phi_inverse_inverts_phi() {
    let l = dgla("N2ainf");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let x = random_element(&l, 2, &mut rng, 0.2);
        let y = l.phi(&x).unwrap();
        assert_eq!(l.phi_inverse(&y).unwrap(), x);
        assert_eq!(l.phi(&l.phi_inverse(&x).unwrap()).unwrap(), x);
    }
}

#[test]
fn jacobi_iff_maurer_cartan() {
    let l = dgla("N2ainf");
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let fam = l.kuranishi_family(None).unwrap();
    for i in 0..10 {
        let x = if i % 2 == 0 {
            random_element(&l, 2, &mut rng, 0.1)
        } else {
            // a point of the family on the hyperplane component
            let vals: Vec<(usize, Rational)> = fam
                .names()
                .iter()
                .map(|n| (crate::exactmath::var_index(n).unwrap(), if n == "t3" { q(0) } else { q(rng.gen_range(-2..=2)) }))
                .collect();
            fam.xi.map(|c| c.specialize(&vals).unwrap())
        };
        let jac = deformed_bracket(&l.k.alg, &x).check_jacobi();
        assert_eq!(jac, l.mc_residual(&x).is_zero());
        if i % 2 == 1 {
            assert!(jac);
        }
    }
}

#[test]
fn f2_corrector() {
    let l = dgla("F2");
    let hb = l.harmonic_basis(1);
    let [a, b] = l.isotropic_pair(&hb[0].1, &hb[1].1).unwrap();
    assert!(l.bracket(&a, &a).is_zero() && l.bracket(&b, &b).is_zero());
    assert!(l.isotropic_pair(&hb[0].1, &hb[1].1).is_some());
    let basis = vec![(hb[0].0, a), (hb[1].0, b)];
    let fam = l.kuranishi_family_with_basis(basis, Some(&["t".into(), "s".into()])).unwrap();
    assert!(fam.obstructions.is_empty());
    assert!(l.mc_residual(&fam.xi).is_zero());
    let u1 = fam.coords[0].cocycle.map(|x| RatFunc::embed(x));
    let u2 = fam.coords[1].cocycle.map(|x| RatFunc::embed(x));
    let (t, s) = (RatFunc::var("t").unwrap(), RatFunc::var("s").unwrap());
    let rest = fam.xi.sub(&u1.scale(&t)).sub(&u2.scale(&s));
    // rest = st·υ‴ with dυ‴ + [υ′,υ″] = 0
    let st = t.mul(&s);
    let u3 = rest.map(|c| c.div(&st).unwrap());
    assert!(u3.terms.values().all(|c| c.as_rational().is_some()));
    assert!(l.d(&u3).add(&l.bracket(&u1, &u2)).is_zero());
}

#[test]
fn n2ainf_obstruction_locus() {
    let l = dgla("N2ainf");
    let names: Vec<String> = ["t1", "t2", "t3", "s"].iter().map(|s| s.to_string()).collect();
    let fam = l.kuranishi_family(Some(&names)).unwrap();
    let ws: Vec<[i64; 3]> = fam.coords.iter().map(|c| c.weight).collect();
    assert_eq!(ws, vec![[5, 1, 0], [1, 1, 0], [-1, 1, 0], [2, 2, 0]]);
    assert!(!fam.needs_manual_components);
    let descr: Vec<String> = fam.components.iter().map(|c| c.describe()).collect();
    assert_eq!(descr, vec!["t3=0".to_string(), "t1=0, t2=0, s=0".to_string()]);
    for c in &fam.components {
        assert!(l.mc_residual(&fam.xi_on(c).unwrap()).is_zero());
    }
    let _ = MultiPoly::zero();
}

#[test]
fn gauge_action_properties() {
    let l = dgla("IV2");
    let n = l.k.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fam = l.kuranishi_family(Some(&["t".into(), "s".into()])).unwrap();
    for _ in 0..4 {
        let m = vec![q(rng.gen_range(-3..=3)), q(rng.gen_range(-3..=3))];
        let vals = vec![(crate::exactmath::var_index("t").unwrap(), m[0].clone()), (crate::exactmath::var_index("s").unwrap(), m[1].clone())];
        let x = fam.xi.map(|c| c.specialize(&vals).unwrap());
        let (eta, mm) = l.gauge_normalize(&x).unwrap();
        assert!(eta.is_zero());
        assert_eq!(mm, m);
        let y1 = random_element(&l, 1, &mut rng, 0.3);
        let y2 = random_element(&l, 1, &mut rng, 0.3);
        let gx = l.gauge_act(&y1, &x);
        assert!(l.mc_residual(&gx).is_zero());
        assert_eq!(l.gauge_normalize(&gx).unwrap().1, m);
        let lhs = l.gauge_act(&y2, &gx);
        let rhs = l.gauge_act(&bch(&y2, &y1, n), &x);
        assert_eq!(lhs, rhs);
        // u: k_x → k_{u∗x} is a bracket isomorphism
        let u = exp_nilpotent(&to_matrix(&y1, n));
        let a = deformed_bracket(&l.k.alg, &x);
        let b = deformed_bracket(&l.k.alg, &gx);
        for i in 0..n {
            for j in 0..n {
                let ui = u.col(i);
                let uj = u.col(j);
                let lhs = b.bracket(&ui, &uj);
                let rhs = u.mul_vec(&a.bracket(&a.basis_vector(i), &a.basis_vector(j)));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn infinitesimal_gauge_action() {
    // e^{εy} ∗ x = x + ε([y,x] − dy) + O(ε²), read off by linearity in ε
    let l = dgla("N3");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x = random_element(&l, 2, &mut rng, 0.2);
    let y = random_element(&l, 1, &mut rng, 0.2);
    let eps = RatFunc::var("epsilon").unwrap();
    let xe = x.map(|c| RatFunc::embed(c));
    let ye = y.map(|c| RatFunc::embed(c)).scale(&eps);
    let g = l.gauge_act(&ye, &xe);
    let lin = g.map(|c| c.derivative(crate::exactmath::var_index("epsilon").unwrap()))
        .map(|c| c.specialize_partial(&[(crate::exactmath::var_index("epsilon").unwrap(), q(0))]).unwrap());
    let expect = l.bracket(&y, &x).sub(&l.d(&y)).map(|c| RatFunc::embed(c));
    assert_eq!(lin, expect);
}

#[test]
fn deformed_algebra_keeps_associated_graded() {
    let l = dgla("N3");
    let fam = l.kuranishi_family(None).unwrap();
    let x = fam.xi.map(|c| c.specialize(&[(crate::exactmath::var_index("t").unwrap(), q(3))]).unwrap());
    let k = l.deformed_algebra(&x).unwrap();
    assert!(k.check_jacobi());
    assert_eq!(k.gr().triples(), l.k.alg.triples());
}
