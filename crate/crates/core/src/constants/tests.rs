use super::*;
use crate::quad::adaptive_simpson;
use crate::samplers::sample_fbm;

fn spec(family: ConstantFamily<f64>, window: f64, step: f64, nsim: usize, seed: u64) -> ConstantSpec<f64> {
    ConstantSpec { family, window, step, nsim, seeds: SeedSpec::new(seed) }
}

#[test]
fn degenerate_window_is_exactly_one() {
    let est = estimate_windowed(&spec(
        ConstantFamily::Pickands { alpha: 1.0 },
        0.0,
        0.0,
        100,
        1,
    ))
    .unwrap();
    assert_eq!(est.value, 1.0);
    assert_eq!(est.stderr, 0.0);
}

/// Quadrature oracle for the alpha = 2 window: B_2(t) = t Z reduces the
/// discrete sup to a maximum over grid points of a quadratic in Z, so
/// `E exp(sup)` is a one-dimensional Gaussian integral.
fn h2_grid_oracle(window: f64, m: usize, d: f64) -> f64 {
    let ts: Vec<f64> = (0..=m).map(|j| window * j as f64 / m as f64).collect();
    let f = |z: f64| {
        let mut best = 0.0_f64;
        for &t in &ts {
            let v = std::f64::consts::SQRT_2 * t * z - t * t - d * t;
            if v > best {
                best = v;
            }
        }
        best.exp() * (-z * z / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt()
    };
    let hi = std::f64::consts::SQRT_2 * window + d + 10.0;
    let (v, _) = adaptive_simpson(&f, -10.0, hi, 1e-11).unwrap();
    v
}

#[test]
fn pickands_alpha2_matches_grid_quadrature_oracle() {
    // frozen from the oracle: S=2, m=256 -> 2.1283734289
    let oracle = h2_grid_oracle(2.0, 256, 0.0);
    assert!((oracle - 2.128_373_428_9).abs() < 1e-8, "{oracle}");
    let est = estimate_windowed(&spec(
        ConstantFamily::Pickands { alpha: 2.0 },
        2.0,
        2.0 / 256.0,
        400_000,
        7,
    ))
    .unwrap();
    let tol = (5.0 * est.stderr).max(0.02 * oracle);
    assert!(
        (est.value - oracle).abs() < tol,
        "mc {} vs oracle {oracle} (se {})",
        est.value,
        est.stderr
    );
}

#[test]
fn piterbarg_alpha2_matches_grid_quadrature_oracle() {
    let oracle = h2_grid_oracle(2.0, 256, 2.0);
    assert!((oracle - 1.024_666_563_5).abs() < 1e-8, "{oracle}");
    let est = estimate_windowed(&spec(
        ConstantFamily::Piterbarg { alpha: 2.0, beta: 1.0, d: 2.0 },
        2.0,
        2.0 / 256.0,
        200_000,
        8,
    ))
    .unwrap();
    let tol = (5.0 * est.stderr).max(0.01 * oracle);
    assert!((est.value - oracle).abs() < tol, "mc {} vs {oracle}", est.value);
}

#[test]
fn windowed_estimates_stay_above_one() {
    for (fam, seed) in [
        (ConstantFamily::Pickands { alpha: 0.5 }, 10u64),
        (ConstantFamily::Piterbarg { alpha: 1.0, beta: 0.5, d: 1.0 }, 11),
        (ConstantFamily::PiterbargTwoSided { alpha: 1.0, beta: 0.5, d: 1.0 }, 12),
    ] {
        let est = estimate_windowed(&spec(fam, 1.0, 1.0 / 128.0, 20_000, seed)).unwrap();
        assert!(
            est.value >= 1.0 - 3.0 * est.stderr,
            "{}: {} (se {})",
            fam.id(),
            est.value,
            est.stderr
        );
    }
}

#[test]
fn piterbarg_below_pickands_on_common_random_numbers() {
    // identical master seed and grid: the drifted sup is pointwise smaller
    let p = estimate_windowed(&spec(ConstantFamily::Pickands { alpha: 1.0 }, 2.0, 2.0 / 256.0, 30_000, 5))
        .unwrap();
    let q = estimate_windowed(&spec(
        ConstantFamily::Piterbarg { alpha: 1.0, beta: 0.5, d: 1.0 },
        2.0,
        2.0 / 256.0,
        30_000,
        5,
    ))
    .unwrap();
    assert!(q.value <= p.value, "{} vs {}", q.value, p.value);
}

#[test]
fn anti_monotone_in_drift_on_common_random_numbers() {
    let mk = |d: f64| {
        estimate_windowed(&spec(
            ConstantFamily::Piterbarg { alpha: 1.0, beta: 0.5, d },
            2.0,
            2.0 / 256.0,
            30_000,
            6,
        ))
        .unwrap()
        .value
    };
    let v1 = mk(0.5);
    let v2 = mk(1.0);
    let v3 = mk(4.0);
    assert!(v1 >= v2 && v2 >= v3, "{v1} {v2} {v3}");
}

#[test]
fn windowed_sups_nested_in_window_per_replication() {
    // sample once on the largest window; prefix sups are exactly nested
    let alpha = 1.0;
    let m = 512;
    let step = 4.0 / m as f64;
    let paths = sample_fbm(alpha, step, m, 256, &SeedSpec::new(14)).unwrap();
    for row in paths.rows() {
        let sup_at = |k: usize| {
            let mut best = 0.0_f64;
            for (j, w) in row[..k].iter().enumerate() {
                let t = step * (j + 1) as f64;
                let v = std::f64::consts::SQRT_2 * w - t.powf(alpha);
                if v > best {
                    best = v;
                }
            }
            best
        };
        let s_half = sup_at(m / 2);
        let s_full = sup_at(m);
        assert!(s_full >= s_half);
    }
}

#[test]
fn delta_refinement_increases_discrete_sup_on_nested_grids() {
    // restriction of the same sampled path to every second grid point
    let paths = sample_fbm(0.8, 1.0 / 128.0, 128, 256, &SeedSpec::new(15)).unwrap();
    for row in paths.rows() {
        let arg = |j: usize| {
            let t = (j + 1) as f64 / 128.0;
            std::f64::consts::SQRT_2 * row[j] - t.powf(0.8)
        };
        let fine = (0..128).map(arg).fold(0.0_f64, f64::max);
        let coarse = (0..128).skip(1).step_by(2).map(arg).fold(0.0_f64, f64::max);
        assert!(fine >= coarse);
    }
}

#[test]
fn two_sided_alpha2_matches_reflected_one_sided_value() {
    // For alpha = 2 the continuum two-sided window [-S,S] equals the
    // one-sided window [0,2S]: both are 1 + 2S/sqrt(pi).
    let est = estimate_windowed(&spec(
        ConstantFamily::PiterbargTwoSided { alpha: 2.0, beta: 1.0, d: 1e-9 },
        1.0,
        1.0 / 128.0,
        200_000,
        16,
    ))
    .unwrap();
    let want = 1.0 + 2.0 / std::f64::consts::PI.sqrt();
    assert!(
        (est.value - want).abs() < (6.0 * est.stderr).max(0.02 * want),
        "{} vs {want}",
        est.value
    );
}

#[test]
fn pickands_limit_alpha2_smoke() {
    let est = pickands_limit(
        2.0,
        &[1.0, 1.5, 2.0],
        &[64, 256],
        60_000,
        &SeedSpec::new(17),
    )
    .unwrap();
    let want = 1.0 / std::f64::consts::PI.sqrt();
    assert!(est.stable, "{:?}", est.notes);
    assert!((est.value - want).abs() < 0.08 * want, "{} vs {want}", est.value);
    assert_eq!(est.diagnostics.len(), 6);
}

#[test]
fn pickands_limit_flags_infeasible_ladder() {
    let est = pickands_limit(
        1.0,
        &[10.0, 15.0, 20.0],
        &[32, 64],
        500,
        &SeedSpec::new(18),
    )
    .unwrap();
    assert!(!est.stable);
}

#[test]
fn piterbarg_limit_large_drift_is_one() {
    let est = piterbarg_limit(
        1.0,
        0.5,
        100.0,
        &[1.0, 2.0, 3.0],
        &[64, 256],
        10_000,
        &SeedSpec::new(19),
    )
    .unwrap();
    assert!((est.value - 1.0).abs() < 1e-3, "{}", est.value);
    assert!(est.stable);
}

#[test]
fn ladder_input_validation() {
    let s = SeedSpec::new(1);
    assert!(pickands_limit(1.0, &[1.0, 2.0], &[64, 128], 1000, &s).is_err());
    assert!(pickands_limit(1.0, &[1.0, 2.0, 3.0], &[64], 1000, &s).is_err());
    assert!(pickands_limit(1.0, &[2.0, 1.0, 3.0], &[64, 128], 1000, &s).is_err());
    assert!(pickands_limit(1.0, &[1.0, 2.0, 3.0], &[128, 64], 1000, &s).is_err());
}

#[test]
fn closed_form_p21_values_and_limits() {
    let f = closed_form_p21(1.0_f64).unwrap();
    assert!((f.derived - 1.199_641_228_374_245_7).abs() < 1e-12, "{}", f.derived);
    assert!((f.paper - 1.026_754_227_579_365_6).abs() < 1e-12, "{}", f.paper);
    // d -> infinity: derived -> 1 (the paper variant diverges instead)
    let big = closed_form_p21(50.0_f64).unwrap();
    assert!((big.derived - 1.0).abs() < 1e-6, "{}", big.derived);
    assert!(big.paper > 1e100);
    assert!(closed_form_p21(0.0_f64).is_err());
}

#[test]
fn closed_form_p21_matches_quadrature_oracle() {
    // E exp(((sqrt2 Z - d)_+)^2 / 4) by direct integration
    for d in [0.5_f64, 1.0, 2.0] {
        let f = |z: f64| {
            let a = (std::f64::consts::SQRT_2 * z - d).max(0.0);
            (a * a / 4.0).exp() * (-z * z / 2.0).exp()
                / (2.0 * std::f64::consts::PI).sqrt()
        };
        let (oracle, _) = adaptive_simpson(&f, -12.0, 40.0, 1e-11).unwrap();
        let got = closed_form_p21(d).unwrap().derived;
        assert!((got - oracle).abs() < 1e-8, "d={d}: {got} vs {oracle}");
    }
}

#[test]
fn family_validation() {
    assert!(estimate_windowed(&spec(ConstantFamily::Pickands { alpha: 2.5 }, 1.0, 0.1, 100, 1))
        .is_err());
    assert!(estimate_windowed(&spec(
        ConstantFamily::Piterbarg { alpha: 1.0, beta: 0.0, d: 1.0 },
        1.0,
        0.1,
        100,
        1
    ))
    .is_err());
    assert!(estimate_windowed(&spec(ConstantFamily::Pickands { alpha: 1.0 }, 1.0, 2.0, 100, 1))
        .is_err());
}
