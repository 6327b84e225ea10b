use super::*;
use crate::chi::exact_chi_survival;
use proptest::prelude::*;

fn h1() -> ConstantValue<f64> {
    ConstantValue::registry_pickands(1.0).unwrap()
}

fn reassembles(e: &AsymptoticEval<f64>) {
    let product = e.prefactor * e.level.powf(e.exponent) * e.marginal * e.gaussian_factor;
    assert!(
        (e.value - product).abs() <= 1e-12 * e.value.abs().max(1e-300),
        "value {} vs product {product}",
        e.value
    );
}

#[test]
fn upsilon_closed_forms() {
    for u in [0.5_f64, 1.0, 2.0, 3.0, 10.0] {
        assert!((upsilon(2, u).unwrap() - (-u * u / 2.0).exp()).abs() < 1e-15);
        let n1 = (2.0 / std::f64::consts::PI).sqrt() / u * (-u * u / 2.0).exp();
        assert!((upsilon(1, u).unwrap() - n1).abs() < 1e-15 * n1.max(1.0));
    }
    assert!(upsilon(0, 1.0_f64).is_err());
    assert!(upsilon(2, 0.0_f64).is_err());
}

#[test]
fn upsilon_ratio_identity_n4() {
    // exact_chi_survival(4,u) / upsilon(4,u) = 1 + 2/u^2, exactly
    for u in [1.0_f64, 2.0, 3.5, 7.0, 10.0] {
        let ratio = exact_chi_survival(4, u).unwrap() / upsilon(4, u).unwrap();
        let want = 1.0 + 2.0 / (u * u);
        assert!((ratio - want).abs() < 1e-10 * want, "u={u}: {ratio} vs {want}");
    }
}

#[test]
fn upsilon_log_space_reaches_u40() {
    let lg = upsilon_log(3, 40.0_f64).unwrap();
    assert!(lg.is_finite());
    assert!((lg - (upsilon_marginal_log(3, 40.0) - 800.0)).abs() < 1e-12);
}

#[test]
fn pickands_tail_assembly_and_scalings() {
    let h2 = ConstantValue::registry_pickands(2.0_f64).unwrap();
    let u = 3.0;
    let e = gaussian_pickands_tail(1.0, 2.0, 1.0, u, &h2).unwrap();
    reassembles(&e);
    // alpha = 2: H_2 / sqrt(2 pi) u^0 e^{-u^2/2}
    let want = (1.0 / std::f64::consts::PI.sqrt())
        / (2.0 * std::f64::consts::PI).sqrt()
        * (-u * u / 2.0_f64).exp();
    assert!((e.value - want).abs() < 1e-15, "{} vs {want}", e.value);
    assert_eq!(e.exponent, 0.0);
    assert_eq!(e.constant_source, Some(ConstantSource::Registry));

    // doubling T doubles the value exactly
    let e2 = gaussian_pickands_tail(2.0, 2.0, 1.0, u, &h2).unwrap();
    assert!((e2.value - 2.0 * e.value).abs() < 1e-15 * e2.value.abs().max(1e-300));

    // d0 = 2^alpha scales the value by exactly 2
    let a = 1.3_f64;
    let base = gaussian_pickands_tail(1.0, a, 1.0, u, &ConstantValue::user(0.9)).unwrap();
    let scaled =
        gaussian_pickands_tail(1.0, a, 2.0_f64.powf(a), u, &ConstantValue::user(0.9)).unwrap();
    assert!((scaled.value - 2.0 * base.value).abs() < 1e-13 * scaled.value);
}

#[test]
fn local_tails_and_dominance() {
    let u = 4.0_f64;
    // S -> 0: constants -> 1 and both forms reduce to phi(u)/u
    let one = ConstantValue::user(1.0);
    let e = gaussian_local_tail(1e-9, 1.0, u, &one).unwrap();
    let want = (-u * u / 2.0).exp() / ((2.0 * std::f64::consts::PI).sqrt() * u);
    assert!((e.value - want).abs() < 1e-18);
    reassembles(&e);
    // Eq 1.3 <= Eq 1.2 for the same window when P <= H
    let h = ConstantValue::user(2.5_f64);
    let p = ConstantValue::user(1.7_f64);
    let e12 = gaussian_local_tail(2.0, 1.0, u, &h).unwrap();
    let e13 = gaussian_piterbarg_local(2.0, 1.0, 1.0, u, &p).unwrap();
    assert!(e13.value <= e12.value);
    reassembles(&e13);
}

#[test]
fn prop21_direct_substitution() {
    // n=2, alpha=1, d0=1, T=1, H_1=1: u^2 e^{-u^2/2}
    for u in [2.0_f64, 3.0, 3.5] {
        let e = prop21_tail(1.0, 1.0, 1.0, 2, u, &h1()).unwrap();
        let want = u * u * (-u * u / 2.0).exp();
        assert!((e.value - want).abs() < 1e-14 * want, "{} vs {want}", e.value);
        reassembles(&e);
    }
    // frozen: u = 3.5 -> 0.0267968
    let e = prop21_tail(1.0, 1.0, 1.0, 2, 3.5, &h1()).unwrap();
    assert!((e.value - 0.026_796_8).abs() < 1e-6, "{}", e.value);
}

#[test]
fn prop21_vs_pickands_ratio_identity() {
    // prop21 / eq11 = sqrt(2 pi) u^{n-1} 2^{(2-n)/2} / Gamma(n/2), exactly
    let u = 2.7_f64;
    let alpha = 1.4_f64;
    let h = ConstantValue::user(0.8);
    for n in [1usize, 2, 3, 5] {
        let chi = prop21_tail(1.0, alpha, 1.0, n, u, &h).unwrap();
        let gauss = gaussian_pickands_tail(1.0, alpha, 1.0, u, &h).unwrap();
        let got = chi.value / gauss.value;
        let want = (2.0 * std::f64::consts::PI).sqrt()
            * u.powi(n as i32 - 1)
            * 2.0_f64.powf((2.0 - n as f64) / 2.0)
            / gamma_fn(n as f64 / 2.0);
        assert!((got - want).abs() < 1e-11 * want, "n={n}: {got} vs {want}");
    }
}

fn gamma_fn(x: f64) -> f64 {
    crate::special::ln_gamma(x).exp()
}

#[test]
fn prop22_reductions() {
    let u = 3.0_f64;
    // S -> 0 (window constant 1): Upsilon_n(f(u)) itself
    let e = prop22_local_tail(1e-12, 1.0, 1.0, 3, u, &ConstantValue::user(1.0)).unwrap();
    assert!((e.value - upsilon(3, u).unwrap()).abs() < 1e-16);
    // required window folds d0
    assert!((prop22_required_window(1.0_f64, 2.0, 3.0) - 6.0).abs() < 1e-15);
    assert!((prop22_required_window(2.0_f64, 4.0, 3.0) - 6.0).abs() < 1e-15);
    // f(u) = u matches the window version of prop 2.1 without T u^{2/alpha}
    let h = ConstantValue::user(1.9);
    let via22 = prop22_local_tail(2.0, 1.0, 1.0, 2, u, &h).unwrap();
    let want = 1.9 * upsilon(2, u).unwrap();
    assert!((via22.value - want).abs() < 1e-15 * want);
}

#[test]
fn thm21_case_table() {
    let u = 4.0_f64;
    // alpha > 2 beta: value = Upsilon_n(u), prefactor 1, exponent 0
    let e = thm21_tail(1.0, 0.25, 3.0, 2, u, 1.0, None).unwrap();
    assert_eq!(e.prefactor, 1.0);
    assert_eq!(e.exponent, 0.0);
    assert_eq!(e.regime, Regime::StationaryTrend(CaseSplit::Above));
    assert!((e.value - upsilon(2, u).unwrap()).abs() < 1e-15);

    // alpha = 1, beta = 1, c = 2, H_1 = 1: (1/2) u e^{-u^2/2}
    let e = thm21_tail(1.0, 1.0, 2.0, 2, u, 1.0, Some(&h1())).unwrap();
    let want = 0.5 * u * (-u * u / 2.0).exp();
    assert!((e.value - want).abs() < 1e-14 * want);
    assert_eq!(e.regime, Regime::StationaryTrend(CaseSplit::Below));
    assert!((e.exponent - 1.0).abs() < 1e-15);
    reassembles(&e);

    // alpha = 2 beta: prefactor is the provided Piterbarg constant
    let p = ConstantValue::user(1.37);
    let e = thm21_tail(1.0, 0.5, 1.5, 2, u, 1.0, Some(&p)).unwrap();
    assert_eq!(e.regime, Regime::StationaryTrend(CaseSplit::Equal));
    assert!((e.prefactor - 1.37).abs() < 1e-15);
    assert_eq!(e.exponent, 0.0);
    assert_eq!(e.constant_source, Some(ConstantSource::UserValue));
}

#[test]
fn thm21_growth_condition() {
    // alpha < 2 beta requires c > 1/beta
    assert!(matches!(
        thm21_tail(1.0, 1.0, 0.9, 2, 4.0, 1.0, Some(&h1())),
        Err(Error::RegimeNotGuaranteed(_))
    ));
    // alpha >= 2 beta requires c > 2/alpha
    assert!(matches!(
        thm21_tail(1.0, 0.25, 1.9, 2, 4.0, 1.0, None),
        Err(Error::RegimeNotGuaranteed(_))
    ));
    // missing constant
    assert!(matches!(
        thm21_tail(1.0, 1.0, 2.0, 2, 4.0, 1.0, None),
        Err(Error::MissingConstant(_))
    ));
}

#[test]
fn thm21_interior_variant_doubles_gamma_and_shifts() {
    let u = 3.0_f64;
    let base = thm21_tail(1.0, 1.0, 2.0, 2, u + 0.5, 1.0, Some(&h1())).unwrap();
    let interior = thm21_interior_tail(1.0, 1.0, 2.0, 2, u, 0.5, 1.0, Some(&h1())).unwrap();
    assert!((interior.value - 2.0 * base.value).abs() < 1e-13 * interior.value);
}

#[test]
fn thm22_case_table() {
    let u = 4.0_f64;
    // nu > mu: exactly Upsilon_n
    let e = thm22_tail(1.5, 1.0, 0.5, 0.5, 2, u, None).unwrap();
    assert!((e.value - upsilon(2, u).unwrap()).abs() < 1e-15);
    assert_eq!(e.regime, Regime::Nonstationary(CaseSplit::Above));

    // scaled fBm, nu = 0.5 < mu = 1: D^{1/nu} Gamma(2) A^{-1} H_nu u^2 Upsilon
    let (a, d, nu) = (0.25_f64, 0.5_f64, 0.5_f64);
    let h = ConstantValue::user(0.77);
    let e = thm22_tail(nu, 1.0, a, d, 2, u, Some(&h)).unwrap();
    let m = d.powf(1.0 / nu) * 1.0 / a * 0.77;
    let want = m * u.powi(2) * upsilon(2, u).unwrap();
    assert!((e.value - want).abs() < 1e-13 * want, "{} vs {want}", e.value);
    assert!((e.exponent - 2.0).abs() < 1e-15);
    reassembles(&e);

    // nu = mu with A = D: prefactor P^1
    let p = ConstantValue::user(1.21);
    let e = thm22_tail(1.0, 1.0, 0.5, 0.5, 2, u, Some(&p)).unwrap();
    assert!((e.prefactor - 1.21).abs() < 1e-15);
    assert_eq!(e.exponent, 0.0);
    assert!((thm22_required_drift(0.5_f64, 0.5) - 1.0).abs() < 1e-15);
}

#[test]
fn thm23_shift_identities() {
    let (nu, mu, a, d) = (0.5_f64, 1.0_f64, 0.25_f64, 0.5_f64);
    let h = ConstantValue::user(0.77);
    let u = 4.0_f64;
    // gT = 0: identical to thm22
    let e0 = thm23_tail(nu, mu, a, d, 2, u, 0.0, 1.0, Some(&h)).unwrap();
    let e22 = thm22_tail(nu, mu, a, d, 2, u, Some(&h)).unwrap();
    assert_eq!(e0.value, e22.value);

    // exact identity thm23(u, gT) = thm22(u + gT)
    let g = 0.5_f64;
    let e23 = thm23_tail(nu, mu, a, d, 2, u, g, 1.0, Some(&h)).unwrap();
    let shifted = thm22_tail(nu, mu, a, d, 2, u + g, Some(&h)).unwrap();
    assert_eq!(e23.value, shifted.value);
    assert_eq!(e23.regime, Regime::NonstationaryTrend(CaseSplit::Below));

    // gT = 1, n = 2, nu > mu: e^{-(u+1)^2/2}
    let e = thm23_tail(1.5, 1.0, 0.5, 0.5, 2, u, 1.0, 1.0, None).unwrap();
    let want = (-(u + 1.0) * (u + 1.0) / 2.0_f64).exp();
    assert!((e.value - want).abs() < 1e-15 * want);

    // ratio thm23/thm22 at the same u: e^{-gT u - gT^2/2} (u*/u)^{exponent}
    let ratio = e23.value / e22.value;
    let want_ratio = (-g * u - g * g / 2.0_f64).exp() * ((u + g) / u).powf(e23.exponent);
    assert!((ratio - want_ratio).abs() < 1e-12 * want_ratio);

    // mu > beta_tilde refused
    assert!(matches!(
        thm23_tail(0.5, 1.0, a, d, 2, u, g, 0.9, Some(&h)),
        Err(Error::RegimeNotGuaranteed(_))
    ));
}

#[test]
fn generalized_chi_weights_and_tail() {
    let u = 4.0_f64;
    // all weights 1 (k = n): plain thm21
    let w = GeneralizedChiWeights::new(vec![1.0, 1.0]).unwrap();
    assert_eq!(w.multiplicity(), 2);
    let gen = generalized_chi_tail(&w, 1.0, 1.0, 2.0, u, 1.0, Some(&h1())).unwrap();
    let plain = thm21_tail(1.0, 1.0, 2.0, 2, u, 1.0, Some(&h1())).unwrap();
    assert_eq!(gen.value, plain.value);

    // n=2, k=1, b2=0: prefactor 1, Upsilon_1 replaces Upsilon_2
    let w = GeneralizedChiWeights::new(vec![1.0, 0.0]).unwrap();
    assert_eq!(w.multiplicity(), 1);
    let gen = generalized_chi_tail(&w, 1.0, 1.0, 2.0, u, 1.0, Some(&h1())).unwrap();
    let n1 = thm21_tail(1.0, 1.0, 2.0, 1, u, 1.0, Some(&h1())).unwrap();
    assert_eq!(gen.value, n1.value);

    // n=3, k=1, b2 = b3 = 1/sqrt(2): product prefactor (1 - 1/2)^{-1} = 2
    let s = 1.0 / 2.0_f64.sqrt();
    let w = GeneralizedChiWeights::new(vec![1.0, s, s]).unwrap();
    let gen = generalized_chi_tail(&w, 1.0, 1.0, 2.0, u, 1.0, Some(&h1())).unwrap();
    let base = thm21_tail(1.0, 1.0, 2.0, 1, u, 1.0, Some(&h1())).unwrap();
    assert!((gen.value - 2.0 * base.value).abs() < 1e-13 * gen.value);

    // unit weight past k diverges: rejected at construction
    assert!(GeneralizedChiWeights::new(vec![1.0, 0.5, 1.0]).is_err());
    assert!(GeneralizedChiWeights::new(vec![0.9]).is_err());
    assert!(GeneralizedChiWeights::new(vec![1.0, 0.3, 0.5]).is_err());
}

#[test]
fn thm31_assembly_and_window_invariance() {
    let u = 4.0_f64;
    let p = ConstantValue::user(1.3);
    let h = ConstantValue::user(2.8);
    let e = thm31_field_tail(
        1.0,
        0.5,
        2.0,
        1.0,
        &[(1.0, 1.0)],
        2.0,
        2.0,
        u,
        &p,
        &[h],
    )
    .unwrap();
    let want = 1.3 * 2.8 * (-u * u / 2.0_f64).exp()
        / ((2.0 * std::f64::consts::PI).sqrt() * u);
    assert!((e.value - want).abs() < 1e-14 * want);
    reassembles(&e);

    // zero space axes with constants ~ 1 collapses toward phi(u)/u
    let e0 = thm31_field_tail(1.0, 0.5, 100.0, 1.0, &[], 0.01, 0.0, u, &ConstantValue::user(1.0), &[])
        .unwrap();
    let phi_over_u =
        (-u * u / 2.0_f64).exp() / ((2.0 * std::f64::consts::PI).sqrt() * u);
    assert!((e0.value - phi_over_u).abs() < 1e-15);

    // rescaling d0 -> lambda^alpha d0 with S1 -> S1/lambda leaves the
    // drift-window argument invariant
    let lam = 1.7_f64;
    let w1 = thm31_required_windows(1.0, 0.5, 2.0, 1.0, &[(1.0, 1.0)], 2.0, 2.0);
    let w2 = thm31_required_windows(1.0, 0.5, 2.0, lam.powf(1.0), &[(1.0, 1.0)], 2.0 / lam, 2.0);
    assert!((w1.drift_window - w2.drift_window).abs() < 1e-12);

    // mismatched constants error
    assert!(matches!(
        thm31_field_tail(1.0, 0.5, 2.0, 1.0, &[(1.0, 1.0)], 2.0, 2.0, u, &p, &[]),
        Err(Error::MissingConstant(_))
    ));
}

#[test]
fn thm32_assembly() {
    let u = 4.0_f64;
    let p = ConstantValue::user(1.3);
    let h2 = ConstantValue::registry_pickands(2.0_f64).unwrap();
    let e = thm32_field_tail(
        0.5,
        1.0,
        0.5,
        2.0,
        1.0,
        &[(2.0, 3.0)],
        2.0,
        u,
        &p,
        &[h2],
    )
    .unwrap();
    // V P H_2 d^{1/2} / sqrt(2pi) u^{2/2 - 1} e^{-u^2/2}
    let want = 0.5 * 1.3 * (1.0 / std::f64::consts::PI.sqrt()) * 3.0_f64.sqrt()
        / (2.0 * std::f64::consts::PI).sqrt()
        * (-u * u / 2.0_f64).exp();
    assert!((e.value - want).abs() < 1e-14 * want, "{} vs {want}", e.value);
    assert!((e.exponent - 0.0).abs() < 1e-15);
    reassembles(&e);

    // doubling the volume doubles the value
    let e2 = thm32_field_tail(1.0, 1.0, 0.5, 2.0, 1.0, &[(2.0, 3.0)], 2.0, u, &p, &[h2]).unwrap();
    assert!((e2.value - 2.0 * e.value).abs() < 1e-14 * e2.value);

    // n = 1 (no space axes): exponent -1 and empty product
    let e1 = thm32_field_tail(1.0, 1.0, 0.5, 2.0, 1.0, &[], 2.0, u, &p, &[]).unwrap();
    assert_eq!(e1.exponent, -1.0);
}

#[test]
fn evaluators_decrease_in_u_above_threshold() {
    let h = ConstantValue::user(0.9);
    let mut prev = f64::INFINITY;
    for i in 0..60 {
        let u = 1.5 + 0.25 * i as f64;
        let v = thm21_tail(1.0, 1.0, 2.0, 3, u, 1.0, Some(&h)).unwrap().log_value;
        assert!(v < prev, "u={u}");
        prev = v;
    }
    let mut prev = f64::INFINITY;
    for i in 0..60 {
        let u = 2.0 + 0.25 * i as f64;
        let v = thm22_tail(0.5, 1.0, 0.25, 0.5, 4, u, Some(&h)).unwrap().log_value;
        assert!(v < prev, "u={u}");
        prev = v;
    }
}

proptest! {
    #[test]
    fn reassembly_is_exact_everywhere(
        alpha in 0.2_f64..2.0,
        beta_scale in 0.3_f64..3.0,
        n in 1_usize..6,
        u in 1.0_f64..20.0,
        h in 0.2_f64..3.0,
    ) {
        let beta = alpha / 2.0 * beta_scale;
        let c = (1.0 / beta).max(2.0 / alpha) + 1.0;
        let cv = ConstantValue::user(h);
        let e = thm21_tail(alpha, beta, c, n, u, 1.0, Some(&cv)).unwrap();
        let product = e.prefactor * e.level.powf(e.exponent) * e.marginal * e.gaussian_factor;
        prop_assert!((e.value - product).abs() <= 1e-12 * e.value.abs().max(1e-290));
        prop_assert!((e.exponent - (2.0/alpha - 1.0/beta).max(0.0)).abs() < 1e-14);
    }
}
