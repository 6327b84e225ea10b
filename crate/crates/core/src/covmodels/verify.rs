use super::{ExpansionParams, NonstationaryModel};
use crate::{Error, Real, Result};

/// Residuals of the claimed local expansion at one shrinking scale `h`:
/// `sigma_residual = |sigma(T-h) - (1 - a h^mu)| / h^mu` and
/// `corr_residual = |(1 - Corr(T-h, T)) - d h^nu| / h^nu`.
#[derive(Debug, Clone, Copy)]
pub struct ExpansionResidual<T> {
    pub scale: T,
    pub sigma_residual: T,
    pub corr_residual: T,
}

/// Outcome of a shrinking-difference expansion check.
#[derive(Debug, Clone)]
pub struct ExpansionReport<T> {
    pub rows: Vec<ExpansionResidual<T>>,
    pub pass: bool,
    /// First scale at which a residual failed to decrease.
    pub failing_scale: Option<T>,
}

/// Validate claimed `(a, mu, d, nu)` against the model by evaluating the
/// expansion residuals on a strictly decreasing sequence of scales.
///
/// PASS means both residual sequences decrease at every step; a correct
/// expansion has residuals `O(h^delta)` for some `delta > 0`, while a wrong
/// coefficient leaves an O(1) residual.
pub fn verify_expansion<T: Real>(
    model: &NonstationaryModel<T>,
    claimed: &ExpansionParams<T>,
    scales: &[T],
) -> Result<ExpansionReport<T>> {
    if scales.len() < 2 {
        return Err(Error::InvalidParameter(
            "verify_expansion needs at least two scales".into(),
        ));
    }
    let horizon = model.horizon();
    if scales.windows(2).any(|w| !(w[1] < w[0])) || scales.iter().any(|h| !(*h > T::zero())) {
        return Err(Error::InvalidParameter(
            "scales must be strictly decreasing and positive".into(),
        ));
    }
    if scales.iter().any(|h| !(*h < horizon)) {
        return Err(Error::InvalidParameter(
            "every scale must be smaller than the horizon".into(),
        ));
    }

    let mut rows = Vec::with_capacity(scales.len());
    for &h in scales {
        let t = horizon - h;
        let sigma = model.std_dev(t)?;
        let corr = model.correlation(t, horizon)?;
        let sigma_residual = (sigma - (T::one() - claimed.a * h.powf(claimed.mu))).abs()
            / h.powf(claimed.mu);
        let corr_residual =
            ((T::one() - corr) - claimed.d * h.powf(claimed.nu)).abs() / h.powf(claimed.nu);
        rows.push(ExpansionResidual { scale: h, sigma_residual, corr_residual });
    }

    let mut pass = true;
    let mut failing_scale = None;
    for w in rows.windows(2) {
        let decreasing =
            w[1].sigma_residual < w[0].sigma_residual && w[1].corr_residual < w[0].corr_residual;
        if !decreasing {
            pass = false;
            failing_scale = Some(w[1].scale);
            break;
        }
    }
    Ok(ExpansionReport { rows, pass, failing_scale })
}
