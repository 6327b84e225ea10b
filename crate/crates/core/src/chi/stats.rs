use crate::special::normal_quantile;
use crate::{Error, Real, Result};

/// Wilson score interval for a binomial proportion at the given two-sided
/// confidence level. Well-behaved where tail probabilities are small, which
/// is exactly where the Wald interval is not.
pub fn wilson_interval<T: Real>(k: u64, n: usize, confidence: T) -> Result<(T, T)> {
    if n == 0 || (k as u128) > n as u128 {
        return Err(Error::InvalidParameter(format!(
            "wilson_interval needs 0 <= k <= n, n >= 1; got k={k}, n={n}"
        )));
    }
    let alpha = T::one() - confidence;
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::InvalidParameter("confidence must be in (0,1)".into()));
    }
    let z = normal_quantile(T::one() - alpha * T::half())?;
    let nf = T::of_usize(n);
    let phat = T::of_usize(k as usize) / nf;
    let z2 = z * z;
    let denom = T::one() + z2 / nf;
    let center = (phat + z2 / (T::two() * nf)) / denom;
    let half = z / denom * (phat * (T::one() - phat) / nf + z2 / (T::of(4.0) * nf * nf)).sqrt();
    Ok(((center - half).max(T::zero()), (center + half).min(T::one())))
}

/// One-sided Clopper-Pearson upper bound for zero observed successes:
/// the largest p with `(1-p)^n >= alpha`, i.e. `1 - alpha^(1/n)`.
pub fn clopper_pearson_upper<T: Real>(n: usize, confidence: T) -> T {
    let alpha = T::one() - confidence;
    T::one() - alpha.powf(T::of_usize(n).recip())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_phat_and_stays_in_unit_interval() {
        for (k, n) in [(0u64, 100usize), (1, 100), (50, 100), (100, 100), (3, 1_000_000)] {
            let (lo, hi) = wilson_interval(k, n, 0.99_f64).unwrap();
            let phat = k as f64 / n as f64;
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
            assert!(lo <= phat && phat <= hi, "k={k} n={n}: [{lo},{hi}] vs {phat}");
        }
    }

    #[test]
    fn wilson_matches_hand_computation() {
        // k=3, n=1000, 95%: z = 1.95996
        let (lo, hi) = wilson_interval(3, 1000, 0.95_f64).unwrap();
        assert!((lo - 0.001_023_9).abs() < 1e-5, "{lo}");
        assert!((hi - 0.008_765_9).abs() < 1e-5, "{hi}");
    }

    #[test]
    fn clopper_pearson_zero_successes() {
        // (1-p)^n = alpha at the bound
        let ub = clopper_pearson_upper(1000, 0.99_f64);
        assert!(((1.0 - ub).powi(1000) - 0.01).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(wilson_interval(5, 0, 0.99_f64).is_err());
        assert!(wilson_interval(5, 4, 0.99_f64).is_err());
        assert!(wilson_interval(1, 10, 1.0_f64).is_err());
    }
}
