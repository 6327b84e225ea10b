use crate::{Error, Real, Result};

/// Deterministic trend `g(.)` subtracted from the chi-process before taking
/// the supremum. Non-negative and bounded on the working interval.
#[derive(Debug, Clone, PartialEq)]
pub enum TrendSpec<T> {
    /// No trend, `g = 0`.
    Zero,
    /// Power trend with unique minimum 0 at the origin: `g(t) = c t^beta`.
    G1 { c: T, beta: T },
    /// Boundary form at the right endpoint of `[0, horizon]`:
    /// `g(t) = g_t - c_tilde (horizon - t)^beta_tilde`.
    G2 { g_t: T, c_tilde: T, beta_tilde: T, horizon: T },
    /// Values tabulated on an explicit time grid; evaluation requires the
    /// query time to be a grid point.
    Tabulated { times: Vec<T>, values: Vec<T> },
}

impl<T: Real> TrendSpec<T> {
    pub fn g1(c: T, beta: T) -> Result<Self> {
        if !(c > T::zero()) || !(beta > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "G1 trend requires c > 0 and beta > 0, got c={c}, beta={beta}"
            )));
        }
        Ok(TrendSpec::G1 { c, beta })
    }

    pub fn g2(g_t: T, c_tilde: T, beta_tilde: T, horizon: T) -> Result<Self> {
        if !(g_t >= T::zero()) || !(beta_tilde > T::zero()) || !(horizon > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "G2 trend requires g_t >= 0, beta_tilde > 0, horizon > 0; \
                 got g_t={g_t}, beta_tilde={beta_tilde}, horizon={horizon}"
            )));
        }
        if c_tilde > T::zero() && g_t - c_tilde * horizon.powf(beta_tilde) < T::zero() {
            return Err(Error::InvalidParameter(
                "G2 trend is negative at t = 0; shrink c_tilde or raise g_t".into(),
            ));
        }
        Ok(TrendSpec::G2 { g_t, c_tilde, beta_tilde, horizon })
    }

    pub fn tabulated(times: Vec<T>, values: Vec<T>) -> Result<Self> {
        if times.len() != values.len() || times.is_empty() {
            return Err(Error::InvalidParameter(
                "tabulated trend needs equally many times and values".into(),
            ));
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter(
                "tabulated trend times must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !(*v >= T::zero()) || !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "tabulated trend values must be finite and non-negative".into(),
            ));
        }
        Ok(TrendSpec::Tabulated { times, values })
    }

    /// Negative `c_tilde` in G2 is permitted but outside the worked examples.
    pub fn is_experimental(&self) -> bool {
        matches!(self, TrendSpec::G2 { c_tilde, .. } if *c_tilde < T::zero())
    }

    /// Evaluate `g(t)`.
    pub fn eval(&self, t: T) -> Result<T> {
        if !t.is_finite() || t < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "trend time must be finite and >= 0, got {t}"
            )));
        }
        match self {
            TrendSpec::Zero => Ok(T::zero()),
            TrendSpec::G1 { c, beta } => Ok(*c * t.powf(*beta)),
            TrendSpec::G2 { g_t, c_tilde, beta_tilde, horizon } => {
                if t > *horizon {
                    return Err(Error::InvalidParameter(format!(
                        "G2 trend evaluated past its horizon {horizon}: t={t}"
                    )));
                }
                Ok(*g_t - *c_tilde * (*horizon - t).powf(*beta_tilde))
            }
            TrendSpec::Tabulated { times, values } => {
                let span = *times.last().unwrap() - times[0];
                let tol = T::of(1e-9) * span.max(T::one());
                match times.iter().position(|x| (*x - t).abs() <= tol) {
                    Some(i) => Ok(values[i]),
                    None => Err(Error::InvalidParameter(format!(
                        "tabulated trend has no grid point at t={t}"
                    ))),
                }
            }
        }
    }

    /// Value at the right endpoint, `g(T)`; the shift entering `u* = u + g(T)`.
    pub fn value_at_horizon(&self, horizon: T) -> Result<T> {
        match self {
            TrendSpec::G2 { g_t, .. } => Ok(*g_t),
            _ => self.eval(horizon),
        }
    }

    pub fn id(&self) -> String {
        match self {
            TrendSpec::Zero => "g=0".into(),
            TrendSpec::G1 { c, beta } => format!("g1(c={c},beta={beta})"),
            TrendSpec::G2 { g_t, c_tilde, beta_tilde, .. } => {
                format!("g2(gT={g_t},ctilde={c_tilde},betatilde={beta_tilde})")
            }
            TrendSpec::Tabulated { times, .. } => format!("tabulated({} pts)", times.len()),
        }
    }
}
