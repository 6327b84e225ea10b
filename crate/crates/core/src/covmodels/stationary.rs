use crate::{Error, Real, Result};

/// Stationary model families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StationaryKind<T> {
    /// `r(t) = exp(-d0 |t|^alpha)`, positive definite for `alpha` in (0, 2].
    ExpPower { alpha: T, d0: T },
    /// Fractional Gaussian noise `X(t) = B_a(t+1) - B_a(t)`;
    /// `r(t) = ((t+1)^a - 2 t^a + |t-1|^a) / 2`, `alpha` in (0, 2).
    Fgn { alpha: T },
    /// Lamperti transform of fBm, `X(t) = e^{-alpha t / 2} B_a(e^t)`;
    /// local coefficient `d0 = 1/2`, `alpha` in (0, 2).
    LampertiFbm { alpha: T },
}

/// A unit-variance stationary Gaussian model with local behavior
/// `r(t) = 1 - d0 |t|^alpha (1 + o(1))` and `r(t) < 1` for `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryModel<T> {
    kind: StationaryKind<T>,
}

impl<T: Real> StationaryModel<T> {
    pub fn exp_power(alpha: T, d0: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::two()) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ExpPower requires alpha in (0,2], got {alpha}"
            )));
        }
        if !(d0 > T::zero()) || !d0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ExpPower requires d0 > 0, got {d0}"
            )));
        }
        Ok(Self { kind: StationaryKind::ExpPower { alpha, d0 } })
    }

    pub fn fgn(alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::two()) {
            return Err(Error::InvalidParameter(format!(
                "FGN requires alpha in (0,2), got {alpha}"
            )));
        }
        Ok(Self { kind: StationaryKind::Fgn { alpha } })
    }

    pub fn lamperti_fbm(alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::two()) {
            return Err(Error::InvalidParameter(format!(
                "Lamperti fBm requires alpha in (0,2), got {alpha}"
            )));
        }
        Ok(Self { kind: StationaryKind::LampertiFbm { alpha } })
    }

    pub fn kind(&self) -> &StationaryKind<T> {
        &self.kind
    }

    /// Local Hölder index of the correlation at 0.
    pub fn alpha(&self) -> T {
        match self.kind {
            StationaryKind::ExpPower { alpha, .. }
            | StationaryKind::Fgn { alpha }
            | StationaryKind::LampertiFbm { alpha } => alpha,
        }
    }

    /// Local coefficient `d0` in `r(t) = 1 - d0 |t|^alpha (1+o(1))`.
    pub fn d0(&self) -> T {
        match self.kind {
            StationaryKind::ExpPower { d0, .. } => d0,
            StationaryKind::Fgn { .. } => T::one(),
            StationaryKind::LampertiFbm { .. } => T::half(),
        }
    }

    /// Correlation at lag `t >= 0`; `r(0) = 1` exactly.
    pub fn correlation(&self, t: T) -> Result<T> {
        if !t.is_finite() || t < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "correlation lag must be finite and >= 0, got {t}"
            )));
        }
        if t == T::zero() {
            return Ok(T::one());
        }
        Ok(match self.kind {
            StationaryKind::ExpPower { alpha, d0 } => (-d0 * t.powf(alpha)).exp(),
            StationaryKind::Fgn { alpha } => {
                ((t + T::one()).powf(alpha) - T::two() * t.powf(alpha)
                    + (t - T::one()).abs().powf(alpha))
                    * T::half()
            }
            StationaryKind::LampertiFbm { alpha } => {
                let e = (alpha * t * T::half()).exp();
                let grow = (t.exp() - T::one()).powf(alpha);
                (e.recip() + e - grow / e) * T::half()
            }
        })
    }

    /// Human-readable identifier used in batch provenance and reports.
    pub fn id(&self) -> String {
        match self.kind {
            StationaryKind::ExpPower { alpha, d0 } => format!("exp-power(alpha={alpha},d0={d0})"),
            StationaryKind::Fgn { alpha } => format!("fgn(alpha={alpha})"),
            StationaryKind::LampertiFbm { alpha } => format!("lamperti-fbm(alpha={alpha})"),
        }
    }
}
