mod common;

use proptest::prelude::*;
use stbc_core::channel_sim::{build_codebook, run_sweep, wilson_interval, ChannelConfig, WILSON_Z};
use stbc_core::code_metrics::{enumerate, reduce_fraction_gaussian, Constellation, EnumConfig};
use stbc_core::number_theory::{disc_biquadratic_over_qi, quad_field_info, rel_disc_over_qi, GaussInt};
use stbc_core::presets::{all_presets, preset};
use stbc_core::representations::{det2, lambda2};
use stbc_core::{AlgebraSpec, CodeSpec, FieldElem, Rational, TowerSpec};

fn nonassociative() -> Vec<AlgebraSpec> {
    all_presets()
        .into_iter()
        .map(|c| c.algebra)
        .filter(AlgebraSpec::is_nonassociative)
        .collect()
}

fn square_free(m: i64) -> bool {
    m != 0 && (2..=m.unsigned_abs().isqrt() as i64).all(|p| m % (p * p) != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn det2_is_cofactor_det(seed in any::<u64>(), k in 0usize..16) {
        let algs: Vec<_> = all_presets().into_iter().map(|c| c.algebra).collect();
        let a = &algs[k % algs.len()];
        let mut r = common::rng(seed);
        let (x0, x1) = (common::elem(a.tower(), &mut r), common::elem(a.tower(), &mut r));
        prop_assert_eq!(det2(a, &x0, &x1), lambda2(a, &x0, &x1).det().unwrap());
        // the algebra norm is the determinant of left multiplication
        let x = a.elem(x0.clone(), x1.clone()).unwrap();
        prop_assert_eq!(a.norm(&x), det2(a, &x0, &x1));
    }

    #[test]
    fn nucleus_contains_k(seed in any::<u64>(), k in 0usize..16) {
        let algs = nonassociative();
        let a = &algs[k % algs.len()];
        let mut r = common::rng(seed);
        let c = a.from_k(common::elem(a.tower(), &mut r));
        let y = common::alg_elem(a, &mut r);
        let z = common::alg_elem(a, &mut r);
        prop_assert!(a.associator(&c, &y, &z).is_zero());
        prop_assert!(a.associator(&y, &c, &z).is_zero());
        prop_assert!(a.associator(&y, &z, &c).is_zero());
    }

    #[test]
    fn no_zero_divisors(seed in any::<u64>(), k in 0usize..16) {
        let algs = nonassociative();
        let a = &algs[k % algs.len()];
        let mut r = common::rng(seed);
        let x = common::nonzero_alg_elem(a, &mut r);
        let y = common::nonzero_alg_elem(a, &mut r);
        prop_assert!(!a.mul(&x, &y).is_zero());
    }

    #[test]
    fn conjugation_is_an_involution_with_norm(seed in any::<u64>(), k in 0usize..16) {
        let algs: Vec<_> = all_presets().into_iter().map(|c| c.algebra).collect();
        let a = &algs[k % algs.len()];
        let mut r = common::rng(seed);
        let x = common::alg_elem(a, &mut r);
        prop_assert_eq!(a.conj(&a.conj(&x)), x.clone());
        // x·x̄ = N(x)
        let n = a.mul(&x, &a.conj(&x));
        prop_assert_eq!(n, a.from_k(a.norm(&x)));
    }

    #[test]
    fn rel_disc_never_two(m in -200i64..=200) {
        if let Ok(d) = rel_disc_over_qi(m) {
            prop_assert_ne!(d, 2);
        }
    }

    #[test]
    fn gaussian_fractions_reduce(re_n in -40i64..40, im_n in -40i64..40, den in 1i64..30) {
        let t = TowerSpec::gaussian();
        let b = t.gaussian_elem(Rational::new(re_n, den), Rational::new(im_n, den)).unwrap();
        let (bn, bd) = reduce_fraction_gaussian(&b).unwrap();
        prop_assert_eq!(&bn * &bd.inv().unwrap(), b);
        prop_assert!(bn.is_algebraic_integer() && bd.is_algebraic_integer());
        let g = |x: &FieldElem| {
            let c = x.coords();
            GaussInt::new(c[0].numer(), c[1].numer())
        };
        let gcd = g(&bn).gcd(&g(&bd));
        prop_assert!(bn.is_zero() || gcd == GaussInt::new(1, 0));
    }

    #[test]
    fn wilson_brackets_the_estimate(n in 1u64..5000, frac in 0.0f64..=1.0) {
        let e = ((n as f64) * frac).floor() as u64;
        let (lo, hi) = wilson_interval(e, n, WILSON_Z);
        let p = e as f64 / n as f64;
        prop_assert!(0.0 <= lo && lo <= p + 1e-12 && p <= hi + 1e-12 && hi <= 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn simulator_is_deterministic(seed in any::<u64>()) {
        let code = preset("golden").unwrap();
        let cb = build_codebook(&code, &Constellation::qam(4)).unwrap();
        let cfg = ChannelConfig::new(2, 2, vec![5.0, 15.0], 64, seed);
        let a = run_sweep(&cfg, &cb).unwrap();
        let b = run_sweep(&cfg, &cb).unwrap();
        prop_assert_eq!(a, b.clone());
        for recs in &b.records {
            for r in recs {
                prop_assert!(r.sent < cb.len() && r.decoded < cb.len());
            }
        }
    }
}

#[test]
fn tower_discriminant_identity() {
    let d_qi = quad_field_info(-1).unwrap().d_k.unsigned_abs();
    for m in -50i64..=50 {
        if !square_free(m) || m.abs() == 1 {
            continue;
        }
        let rel = rel_disc_over_qi(m).unwrap();
        assert_eq!(rel * rel * d_qi * d_qi, disc_biquadratic_over_qi(m).unwrap(), "m = {m}");
    }
}

#[test]
fn integral_bases_are_integral() {
    for m in -60i64..=60 {
        if !square_free(m) || m == 1 {
            continue;
        }
        let info = quad_field_info(m).unwrap();
        for w in &info.integral_basis.basis {
            assert!(w.is_algebraic_integer(), "m = {m}: {w}");
            if let Ok(n) = w.norm_rel() {
                assert!(n.as_rational().unwrap().is_integer(), "m = {m}");
                assert!(w.trace_rel().unwrap().as_rational().unwrap().is_integer());
            }
        }
        let expect = if m.rem_euclid(4) == 1 { m } else { 4 * m };
        assert_eq!(info.d_k, expect);
    }
}

#[test]
fn min_det_decreases_with_the_constellation() {
    for name in ["alamouti-na", "golden", "golden-na-2", "zeta3", "mb-8.5", "four-9.3"] {
        let code: CodeSpec = preset(name).unwrap();
        let small = enumerate(&code, &Constellation::boxed(1), &EnumConfig::default()).unwrap();
        let big = enumerate(&code, &Constellation::boxed(2), &EnumConfig::default()).unwrap();
        assert!(big.min_f64 <= small.min_f64 + 1e-12, "{name}");
    }
}

#[test]
fn noiseless_identifiability() {
    for name in ["golden", "golden-na-1", "mb-8.4", "four-9.2"] {
        let code = preset(name).unwrap();
        let cons = if code.tower().m().is_some() {
            Constellation::qam(4)
        } else {
            Constellation::qam(2)
        };
        let cb = build_codebook(&code, &cons).unwrap();
        assert!((cb.mean_energy() - cb.rows as f64).abs() < 1e-9);
        let cfg = ChannelConfig::new(cb.rows, cb.rows, vec![f64::INFINITY], 400, 9);
        let r = run_sweep(&cfg, &cb).unwrap();
        assert_eq!(r.points[0].errors, 0, "{name}");
    }
}

#[test]
fn larger_min_det_wins_at_equal_rate() {
    // directional: golden (δ = 1/5) against golden-na-1 (δ ≈ 0.0074) with 4-QAM
    let cons = Constellation::qam(4);
    let cfg = ChannelConfig::new(2, 2, vec![12.0], 20_000, 2024);
    let rate = |name: &str| {
        let cb = build_codebook(&preset(name).unwrap(), &cons).unwrap();
        run_sweep(&cfg, &cb).unwrap().points[0].cer
    };
    let (g, na) = (rate("golden"), rate("golden-na-1"));
    assert!(g <= na, "golden {g} vs golden-na-1 {na}");
}

#[test]
fn spec_files_reject_floats_and_unknown_fields() {
    let ok = r#"{"name":"t","tower":{"a":-1},"b":[0,1],"shape":"2x2"}"#;
    assert!(CodeSpec::from_json(ok).is_ok());
    let float = r#"{"name":"t","tower":{"a":-1},"b":[0,0.5],"shape":"2x2"}"#;
    assert!(CodeSpec::from_json(float).is_err());
    let extra = r#"{"name":"t","tower":{"a":-1},"b":[0,1],"shape":"2x2","colour":1}"#;
    assert!(CodeSpec::from_json(extra).is_err());
    let in_base = r#"{"name":"t","tower":{"m":-1,"a":5},"b":[0,1,0,0],"shape":"4x4"}"#;
    assert!(CodeSpec::from_json(in_base).is_ok());
}
