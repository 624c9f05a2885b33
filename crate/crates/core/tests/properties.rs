mod common;

use std::sync::OnceLock;

use proptest::prelude::*;

use c3_core::cartan::CartanContext;
use c3_core::cohomology::Cochain;
use c3_core::exactmath::{var_index, Field, RatFunc, Rational};
use c3_core::kuranishi::{deformed_bracket, Dgla, KuranishiFamily};
use c3_core::liealg::{build_c3, C3Algebra};
use c3_core::pipeline::catalog::{parse_word, render_word};
use c3_core::pipeline::{
    emit_report, run_class, run_family, special_points, specialization_check, Document, Format, Prepared, ProjPoint,
};

struct Fixture {
    c3: C3Algebra,
    inf: Dgla<Rational>,
    inf_fam: KuranishiFamily<Rational>,
    iv: Dgla<Rational>,
    iv_fam: KuranishiFamily<Rational>,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let c3 = build_c3();
        let inf = common::dgla(&c3, "N2a^inf");
        let inf_fam = inf.kuranishi_family(None).unwrap();
        let iv = common::dgla(&c3, "IV2");
        let iv_fam = iv.kuranishi_family(None).unwrap();
        Fixture { c3, inf, inf_fam, iv, iv_fam }
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

/// Sparse cochain of degree `q`: (position in the key list, coefficient).
fn cochain(l: &Dgla<Rational>, q: usize, terms: &[(usize, i64)]) -> Cochain<Rational> {
    let keys = l.keys(q);
    let mut c = Cochain::zero(q);
    for (i, x) in terms {
        c.add_term(keys[i % keys.len()], Rational::integer(*x));
    }
    c
}

fn terms(max: usize) -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..10_000, -3i64..=3), 0..max)
}

fn point(fam: &KuranishiFamily<Rational>, comp: usize, vals: &[Rational]) -> Cochain<Rational> {
    let c = &fam.components[comp];
    let assign: Vec<(usize, Rational)> =
        c.free.iter().zip(vals.iter().cycle()).map(|(n, q)| (var_index(n).unwrap(), q.clone())).collect();
    fam.xi_on(c).unwrap().map(|x| x.specialize(&assign).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn jacobi_iff_maurer_cartan(ts in terms(6), vals in prop::collection::vec(rational(), 3), on_family in any::<bool>()) {
        let f = fixture();
        let x = if on_family { point(&f.inf_fam, 0, &vals) } else { cochain(&f.inf, 2, &ts) };
        let jac = deformed_bracket(&f.inf.k.alg, &x).check_jacobi();
        prop_assert_eq!(jac, f.inf.mc_residual(&x).is_zero());
        if on_family {
            prop_assert!(jac);
        }
    }

    #[test]
    fn rational_json_round_trip(q in rational()) {
        let s = serde_json::to_string(&q).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&s).unwrap(), q);
    }

    #[test]
    fn words_round_trip(cs in prop::collection::vec(-6i64..=6, 5)) {
        let c3 = &fixture().c3;
        let mut v = vec![RatFunc::zero(); 21];
        for (c, i) in cs.iter().zip([8, 9, 10, 11, 12]) {
            v[i] = RatFunc::from_i64(*c);
        }
        prop_assert_eq!(parse_word(&render_word(&v), c3.dim()).unwrap(), v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn gauge_preserves_mc_and_kuranishi_coordinates(vals in prop::collection::vec(rational(), 2), ts in terms(8)) {
        let f = fixture();
        let x = point(&f.iv_fam, 0, &vals);
        let y = cochain(&f.iv, 1, &ts);
        let gx = f.iv.gauge_act(&y, &x);
        prop_assert!(f.iv.mc_residual(&gx).is_zero());
        let (_, m) = f.iv.gauge_normalize(&x).unwrap();
        let (_, mg) = f.iv.gauge_normalize(&gx).unwrap();
        prop_assert_eq!(&m, &vals);
        prop_assert_eq!(m, mg);
    }

    #[test]
    fn phi_inverse_inverts_phi(ts in terms(10)) {
        let f = fixture();
        let x = cochain(&f.inf, 2, &ts);
        prop_assert_eq!(f.inf.phi_inverse(&f.inf.phi(&x).unwrap()).unwrap(), x.clone());
        prop_assert_eq!(f.inf.phi(&f.inf.phi_inverse(&x).unwrap()).unwrap(), x);
    }
}

fn generic_n2a() -> &'static (Prepared<RatFunc>, Vec<ProjPoint>, usize, Option<String>) {
    static P: OnceLock<(Prepared<RatFunc>, Vec<ProjPoint>, usize, Option<String>)> = OnceLock::new();
    P.get_or_init(|| {
        let f = fixture();
        let desc = common::class(&f.c3, "N2a");
        let ctx = CartanContext::<RatFunc>::new(&f.c3).unwrap();
        let rep = run_class(&desc, &f.c3, &ctx).unwrap();
        let p = run_family::<RatFunc>(&desc, &f.c3, &ctx).unwrap();
        let bad = special_points(&desc, &f.c3).unwrap();
        (p, bad, rep.components[0].generic_d, rep.components[0].quintic_type.clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, ..ProptestConfig::default() })]

    #[test]
    fn n2a_specializations_are_semicontinuous(lambda in rational(), t in rational()) {
        let f = fixture();
        let (p, bad, d, ty) = generic_n2a();
        prop_assume!(!bad.contains(&ProjPoint::Finite(lambda.clone())));
        let desc = common::class(&f.c3, "N2a");
        let ctx = CartanContext::<Rational>::new(&f.c3).unwrap();
        let pt = vec![("lambda".to_string(), lambda), ("t".to_string(), t)];
        if let Some(s) = specialization_check(&desc, &f.c3, &ctx, p, &p.family.components[0], &pt).unwrap() {
            prop_assert!(s.d >= *d);
            if s.quintic_type.is_some() {
                prop_assert_eq!(&s.quintic_type, ty);
            }
        }
    }
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let f = fixture();
    let ctx = CartanContext::<RatFunc>::new(&f.c3).unwrap();
    let run = || {
        let classes = ["N3", "F2"].iter().map(|l| run_class(&common::class(&f.c3, l), &f.c3, &ctx).unwrap()).collect();
        emit_report(&Document { classes, models: Vec::new(), mismatches: Vec::new() }, Format::Json).unwrap()
    };
    let a = run();
    assert_eq!(a, run());
    let doc = Document::from_json(&a).unwrap();
    assert_eq!(emit_report(&doc, Format::Json).unwrap(), a);
    let text = emit_report(&doc, Format::Text).unwrap();
    assert!(text.contains("generic d: N3 11, F2 10"));
}
