use noncentral_t::nct::{integrand_g, integrand_g_upper, integrand_trace, window, Z_FLOOR};
use noncentral_t::specfun::{chi2_quantile_approx_inglot, norm_cdf, norm_inv};
use noncentral_t::table::{FIGURE_CDF, GOLD};
use noncentral_t::*;
use proptest::prelude::*;

fn params(x: f64, nu: f64, d: f64) -> NctParams {
    NctParams::new(x, nu, d).unwrap()
}

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn nu_strategy() -> impl Strategy<Value = f64> {
    (-2.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tails_are_complementary(x in -80.0f64..80.0, nu in nu_strategy(), d in -40.0f64..40.0) {
        let t = cdf(&params(x, nu, d), &cfg()).unwrap();
        prop_assert!((t.lower.value() + t.upper.value() - 1.0).abs() <= 4.0 * f64::EPSILON);
        let r = cdf(&params(-x, nu, -d), &cfg()).unwrap();
        let (side, v) = t.smaller();
        prop_assert!(((r.tail(side.flip()) - v) / v.max(f64::MIN_POSITIVE)).abs() <= 1e-15);
    }

    #[test]
    fn monotone_in_x(x in -30.0f64..30.0, step in 1e-3f64..5.0, nu in nu_strategy(), d in -20.0f64..20.0) {
        let a = cdf(&params(x, nu, d), &cfg()).unwrap();
        let b = cdf(&params(x + step, nu, d), &cfg()).unwrap();
        prop_assert!(b.lower.value() >= a.lower.value() * (1.0 - 1e-13));
        prop_assert!(b.upper.value() <= a.upper.value() * (1.0 + 1e-13));
    }

    #[test]
    fn decreasing_in_delta(x in -30.0f64..30.0, nu in nu_strategy(), d in -20.0f64..20.0, step in 1e-3f64..5.0) {
        let a = cdf(&params(x, nu, d), &cfg()).unwrap();
        let b = cdf(&params(x, nu, d + step), &cfg()).unwrap();
        prop_assert!(b.lower.value() <= a.lower.value() * (1.0 + 1e-13));
    }

    #[test]
    fn window_invariants(x in 1e-3f64..100.0, nu in nu_strategy(), d in -35.0f64..35.0) {
        let p = params(x, nu, d);
        let w = window(&p, &cfg()).unwrap();
        prop_assert!(w.a <= w.b);
        prop_assert!(w.a >= -d - 1e-12);
        prop_assert!(w.b <= Z_FLOOR.abs().max(w.a) + 1e-12);
        let g = |z: f64| match w.tail {
            TailSide::Lower => integrand_g(z, &p).unwrap(),
            TailSide::Upper => integrand_g_upper(z, &p).unwrap(),
        };
        let limit = w.eps_a() * (1.0 + 1e-6);
        if !w.a_clamped && !w.degenerate && w.a > w.lo {
            prop_assert!(g(w.a) <= limit, "g(a) = {:e} > {:e}", g(w.a), limit);
        }
        if !w.b_clamped && !w.degenerate && w.b < w.hi {
            prop_assert!(g(w.b) <= limit, "g(b) = {:e} > {:e}", g(w.b), limit);
        }
    }

    #[test]
    fn quantile_inverts_cdf(p in 1e-12f64..(1.0 - 1e-12), nu in (-0.5f64..2.5).prop_map(|e| 10f64.powf(e)), d in -10.0f64..10.0) {
        let nu = PositiveReal::new(nu).unwrap();
        let x = quantile(Probability::new(p).unwrap(), nu, d, &cfg()).unwrap();
        let t = cdf(&NctParams::from_parts(x, nu, d).unwrap(), &cfg()).unwrap();
        let (side, v) = if p <= 0.5 { (TailSide::Lower, p) } else { (TailSide::Upper, 1.0 - p) };
        prop_assert!(((t.tail(side) - v) / v).abs() < 1e-9, "{} vs {}", t.tail(side), v);
    }
}

#[test]
fn exact_at_zero() {
    let t = cdf(&params(0.0, 7.0, 1.5), &cfg()).unwrap();
    assert_eq!(t.native_tail, NativeTail::Exact);
    assert_eq!(t.lower.value(), norm_cdf(-1.5).unwrap().value());
    assert_eq!(t.upper.value(), norm_cdf(1.5).unwrap().value());
}

#[test]
fn tail_selection() {
    let lower = cdf(&params(1.0, 10.0, 5.0), &cfg()).unwrap();
    assert_eq!(lower.native_tail, NativeTail::Lower);
    assert!(!lower.reflected);
    let upper = cdf(&params(8.0, 10.0, 5.0), &cfg()).unwrap();
    assert_eq!(upper.native_tail, NativeTail::Upper);
    let refl = cdf(&params(-35.0, 1.0, 35.0), &cfg()).unwrap();
    assert!(refl.reflected);
    assert_eq!(refl.native_tail, NativeTail::Lower);
}

#[test]
fn gold_rows_at_default_settings() {
    for r in GOLD.iter() {
        let v = cdf(&params(r.x, r.nu, r.delta), &cfg()).unwrap().lower.value();
        assert!(((v - r.cdf) / r.cdf).abs() < 1e-12, "row {}: {v:e}", r.id);
    }
}

#[test]
fn figure_trace_integrates_to_cdf_minus_head() {
    let (x, nu, d, gold) = FIGURE_CDF;
    let tr = integrand_trace(&params(x, nu, d), &cfg()).unwrap();
    assert_eq!(tr.window.tail, TailSide::Lower);
    assert!(tr.nodes.windows(2).all(|w| w[0].0 <= w[1].0));
    assert!(tr.nodes.iter().all(|&(z, _)| z >= tr.window.a && z <= tr.window.b));
    assert!(tr.nodes.iter().all(|&(_, g)| g >= 0.0 && g.is_finite()));
    let integral = tr.result.lower.value() - tr.window.analytic_head.value();
    assert!(((tr.result.lower.value() - gold) / gold).abs() < 1e-12);
    // the head is negligible here, so the integral carries the whole value
    assert!(((integral - gold) / gold).abs() < 1e-12);
}

#[test]
fn integrand_trace_rejects_zero() {
    assert!(integrand_trace(&params(0.0, 2.0, 1.0), &cfg()).is_err());
}

#[test]
fn default_tolerances_are_consistent() {
    let c = cfg();
    c.validate().unwrap();
    let z = norm_inv(Probability::new(c.r_eps0).unwrap()).unwrap();
    assert!((z - c.z_floor).abs() < 1e-3);
    let mut bad = c;
    bad.z_floor = -30.0;
    assert!(bad.validate().is_err());
    assert!(c.with_n_subs(0).validate().is_err());
    assert!(c.with_eps_r(0.0).validate().is_err());
    assert!(cdf(&params(1.0, 1.0, 0.0), &c.with_n_subs(0)).is_err());
}

#[test]
fn density_examples() {
    let pi = std::f64::consts::PI;
    let f = pdf(&params(0.0, 1.0, 0.0), &cfg()).unwrap();
    assert!((f - 1.0 / pi).abs() < 1e-15);
    // Gamma(3) / (sqrt(5 pi) Gamma(5/2)) e^{-9/2}
    let closed = 2.0 / ((5.0 * pi).sqrt() * 0.75 * pi.sqrt()) * (-4.5f64).exp();
    let f = pdf(&params(0.0, 5.0, 3.0), &cfg()).unwrap();
    assert!(((f - closed) / closed).abs() < 1e-14);
    let h = 1e-5;
    let fd = (cdf(&params(2.0 + h, 10.0, 1.0), &cfg()).unwrap().lower.value()
        - cdf(&params(2.0 - h, 10.0, 1.0), &cfg()).unwrap().lower.value())
        / (2.0 * h);
    let f = pdf(&params(2.0, 10.0, 1.0), &cfg()).unwrap();
    assert!(((f - fd) / fd).abs() < 1e-8);
}

#[test]
fn solvers_recover_parameters() {
    let nu = PositiveReal::new(10.0).unwrap();
    let p = cdf(&params(1.5, 10.0, 2.0), &cfg()).unwrap().lower;
    let d = solve_delta(1.5, nu, p, &cfg()).unwrap();
    assert!((d - 2.0).abs() < 1e-9, "{d}");
    let p = cdf(&params(-2.0, 4.0, 1.0), &cfg()).unwrap().lower;
    let n = solve_nu(-2.0, 1.0, p, &cfg()).unwrap();
    assert!((n.value() - 4.0).abs() < 1e-8 * 4.0, "{}", n.value());
}

#[test]
fn error_handling() {
    assert!(matches!(NctParams::new(1.0, 0.0, 0.0), Err(NctError::Domain { .. })));
    assert!(NctParams::new(1.0, -1.0, 0.0).is_err());
    assert!(NctParams::new(f64::NAN, 1.0, 0.0).is_err());
    assert!(NctParams::new(1.0, 1.0, f64::INFINITY).is_err());
    assert!(Probability::new(1.5).is_err());
    assert!(PositiveReal::new(f64::NAN).is_err());
    let nu = PositiveReal::new(5.0).unwrap();
    assert!(quantile(Probability::new(0.0).unwrap(), nu, 0.0, &cfg()).is_err());
    // Pr(T <= 0) = Phi(-delta) for every nu
    assert!(matches!(
        solve_nu(0.0, 1.0, Probability::new(0.9).unwrap(), &cfg()),
        Err(NctError::Range { .. })
    ));
    assert!(chi2_quantile_approx_inglot(0.0, nu).is_err());
}
