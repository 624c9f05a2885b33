use super::*;
use crate::exactmath::RatFunc;
use crate::kuranishi::Dgla;
use crate::liealg::{build_c3, Subspace, IDX_E, IDX_EP, IDX_H, IDX_X};

fn q(n: i64) -> Rational {
    Rational::integer(n)
}

fn comb(cs: &[(usize, i64)]) -> Vec<Rational> {
    let mut v = vec![q(0); 21];
    for (i, c) in cs {
        v[*i] = q(*c);
    }
    v
}

fn class_k(c3: &C3Algebra, name: &str) -> GradedSubalgebra<Rational> {
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

struct Run {
    label: Option<&'static str>,
    scalar_zero: bool,
    d: usize,
    bianchi: bool,
}

fn run_generic(name: &str, component: usize) -> Run {
    let c3 = build_c3();
    let ctx = CartanContext::<RatFunc>::new(&c3).unwrap();
    let sub = class_k(&c3, name);
    let l = Dgla::new(sub.clone(), true).unwrap();
    let fam = l.kuranishi_family(None).unwrap();
    let xi = fam.xi_on(&fam.components[component]).unwrap();
    let k = l.deformed_algebra(&xi).unwrap();
    let (conn, kappa, h) = ctx.normal_data(&k, &sub).unwrap();
    let label = if h.quintic.iter().all(|x| x.is_zero()) {
        None
    } else {
        classify_quintic(&h.quintic).unwrap().label()
    };
    Run {
        label,
        scalar_zero: h.scalar.is_zero(),
        d: ctx.symmetry_dimension(&conn, &kappa),
        bianchi: ctx.bianchi_holds(&conn, &kappa),
    }
}

#[test]
fn flat_model_has_full_symmetry() {
    let c3 = build_c3();
    let ctx = CartanContext::<Rational>::new(&c3).unwrap();
    let sub = class_k(&c3, "N3");
    let k = crate::liealg::FilteredLieAlgebra::new(sub.alg.clone()).unwrap();
    let (conn, kappa, h) = ctx.normal_data(&k, &sub).unwrap();
    assert!(kappa.is_zero());
    assert!(h.is_zero());
    assert_eq!(ctx.symmetry_dimension(&conn, &kappa), 21);
}

#[test]
fn n3_generic_member() {
    let r = run_generic("N3", 0);
    assert_eq!(r.label, Some("N"));
    assert!(r.scalar_zero);
    assert!(r.bianchi);
    assert_eq!(r.d, 11);
}

#[test]
fn iv2_generic_member() {
    let r = run_generic("IV2", 0);
    assert_eq!(r.label, Some("IV"));
    assert!(r.scalar_zero);
    assert_eq!(r.d, 10);
}

#[test]
fn normalization_order_does_not_change_the_class_type() {
    let c3 = build_c3();
    let ctx = CartanContext::<RatFunc>::new(&c3).unwrap();
    let sub = class_k(&c3, "F2");
    let l = Dgla::new(sub.clone(), true).unwrap();
    let fam = l.kuranishi_family(None).unwrap();
    let k = l.deformed_algebra(&fam.xi_on(&fam.components[0]).unwrap()).unwrap();
    let init = ctx.initial_connection(&k, &sub).unwrap();
    let mut labels = Vec::new();
    for reverse in [false, true] {
        let conn = ctx.normalize(&init, reverse).unwrap();
        let kappa = ctx.curvature(&conn).unwrap();
        assert!(ctx.is_normal(&kappa));
        let h = ctx.harmonic_curvature(&kappa).unwrap();
        assert!(h.scalar.is_zero());
        labels.push(classify_quintic(&h.quintic).unwrap());
    }
    assert_eq!(labels[0], labels[1]);
    assert_eq!(labels[0].label(), Some("F"));
}

#[test]
fn quintic_patterns() {
    let cases: [(&[i64], &[usize]); 6] = [
        (&[1, 0, 0, 0, 0, 0], &[5]),
        (&[0, 0, 0, 0, 0, 1], &[5]),
        (&[0, 1, 0, 0, 0, 0], &[4, 1]),
        (&[0, 0, 1, 0, 0, 0], &[3, 2]),
        (&[1, 0, 0, 0, -1, 0], &[1, 1, 1, 1, 1]),
        (&[1, -5, 10, -10, 5, -1], &[5]),
    ];
    for (a, want) in cases {
        let a: Vec<Rational> = a.iter().map(|x| q(*x)).collect();
        assert_eq!(classify_quintic(&a).unwrap().0, want.to_vec(), "{a:?}");
    }
    assert!(classify_quintic(&vec![q(0); 6]).is_err());
}

#[test]
fn stabilizers_match_the_class_algebras() {
    let c3 = build_c3();
    let ctx = CartanContext::<Rational>::new(&c3).unwrap();
    let e = |i: usize| (0..6).map(|j| q((i == j) as i64)).collect::<Vec<_>>();
    let expect = [
        vec![comb(&[(IDX_X, 1)]), comb(&[(IDX_H, 1), (IDX_E, -5)]), comb(&[(IDX_EP, 1)])],
        vec![comb(&[(IDX_H, 1), (IDX_E, -3)]), comb(&[(IDX_EP, 1)])],
        vec![comb(&[(IDX_H, 1), (IDX_E, -1)]), comb(&[(IDX_EP, 1)])],
    ];
    for (i, want) in expect.iter().enumerate() {
        let got = Subspace::span(21, &ctx.quintic_stabilizer(&e(i)));
        assert!(got.same_as(&Subspace::span(21, want)), "quintic e{i}");
    }
}
