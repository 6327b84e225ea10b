use crate::quad::adaptive_simpson;
use crate::{Error, Real, Result};

/// Non-stationary model families on a horizon `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NonstationaryKind<T> {
    /// Fractional Brownian motion with variance `t^alpha`, `alpha` in (0, 2).
    Fbm { alpha: T },
    /// Bi-fractional Brownian motion, `Cov = 2^{-k}((t^{2h}+s^{2h})^k - |t-s|^{2kh})`.
    BiFbm { k: T, h: T },
    /// Sub-fractional Brownian motion,
    /// `Cov = s^{2h} + t^{2h} - ((s+t)^{2h} + |t-s|^{2h}) / 2`.
    SubFbm { h: T },
    /// Mean-integrated fBm, `X(t) = sqrt(2h+2) t^{-1} int_0^t B_{2h}(s) ds`.
    MeanIntFbm { h: T },
}

/// Local expansion parameters at the variance-maximizing endpoint, after
/// normalizing the peak standard deviation to 1:
/// `sigma(t) = 1 - a (T-t)^mu + o(.)`, `1 - Corr(s,t) = d |t-s|^nu + o(.)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionParams<T> {
    pub a: T,
    pub mu: T,
    pub d: T,
    pub nu: T,
}

/// Increment bound `E(X(t)-X(s))^2 <= g |t-s|^gamma` on `[from, T]`,
/// for the normalized process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderBound<T> {
    pub g: T,
    pub gamma: T,
    /// Left endpoint of the working subinterval the bound is fitted on.
    pub from: T,
}

/// A non-stationary Gaussian model, internally rescaled so that the standard
/// deviation attains its maximum 1 at the unique point `t = T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonstationaryModel<T> {
    kind: NonstationaryKind<T>,
    horizon: T,
    /// Peak standard deviation of the raw kernel, `sigma_raw(T)`.
    sigma_peak: T,
}

impl<T: Real> NonstationaryModel<T> {
    pub fn fbm(alpha: T, horizon: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::two()) {
            return Err(Error::InvalidParameter(format!(
                "fBm requires alpha in (0,2), got {alpha}"
            )));
        }
        Self::build(NonstationaryKind::Fbm { alpha }, horizon)
    }

    pub fn bifbm(k: T, h: T, horizon: T) -> Result<Self> {
        if !(k > T::zero() && k <= T::one()) || !(h > T::zero() && h < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "bi-fBm requires k in (0,1] and h in (0,1), got k={k}, h={h}"
            )));
        }
        if T::two() * k * h > T::two() {
            return Err(Error::InvalidParameter(format!(
                "bi-fBm local exponent nu = 2kh = {} exceeds 2",
                T::two() * k * h
            )));
        }
        Self::build(NonstationaryKind::BiFbm { k, h }, horizon)
    }

    pub fn subfbm(h: T, horizon: T) -> Result<Self> {
        if !(h > T::zero() && h < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "sub-fBm requires h in (0,1), got {h}"
            )));
        }
        Self::build(NonstationaryKind::SubFbm { h }, horizon)
    }

    pub fn meanint_fbm(h: T, horizon: T) -> Result<Self> {
        if !(h > T::zero() && h < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "mean-integrated fBm requires h in (0,1), got {h}"
            )));
        }
        Self::build(NonstationaryKind::MeanIntFbm { h }, horizon)
    }

    fn build(kind: NonstationaryKind<T>, horizon: T) -> Result<Self> {
        if !(horizon > T::zero()) || !horizon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive and finite, got {horizon}"
            )));
        }
        let raw = raw_cov(&kind, horizon, horizon);
        let sigma_peak = raw.sqrt();
        Ok(Self { kind, horizon, sigma_peak })
    }

    pub fn kind(&self) -> &NonstationaryKind<T> {
        &self.kind
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    /// Peak standard deviation of the raw (unnormalized) kernel.
    pub fn sigma_peak(&self) -> T {
        self.sigma_peak
    }

    /// Raw covariance of the printed kernel, before normalization.
    pub fn raw_covariance(&self, s: T, t: T) -> Result<T> {
        self.check_times(s, t)?;
        Ok(raw_cov(&self.kind, s, t))
    }

    /// Covariance of the normalized process (`sigma(T) = 1`).
    pub fn covariance(&self, s: T, t: T) -> Result<T> {
        Ok(self.raw_covariance(s, t)? / (self.sigma_peak * self.sigma_peak))
    }

    /// Standard deviation of the normalized process.
    pub fn std_dev(&self, t: T) -> Result<T> {
        Ok(self.covariance(t, t)?.sqrt())
    }

    /// Correlation; invariant under the normalization.
    pub fn correlation(&self, s: T, t: T) -> Result<T> {
        let c = self.raw_covariance(s, t)?;
        let vs = raw_cov(&self.kind, s, s).sqrt();
        let vt = raw_cov(&self.kind, t, t).sqrt();
        if vs == T::zero() || vt == T::zero() {
            return Err(Error::InvalidParameter(
                "correlation undefined at a degenerate time".into(),
            ));
        }
        Ok(c / (vs * vt))
    }

    /// Local expansion `(a, mu, d, nu)` of the normalized model at `t = T`.
    pub fn expansion_params(&self) -> ExpansionParams<T> {
        let t = self.horizon;
        let one = T::one();
        let two = T::two();
        match self.kind {
            NonstationaryKind::Fbm { alpha } => ExpansionParams {
                a: alpha / (two * t),
                mu: one,
                d: (two * t.powf(alpha)).recip(),
                nu: alpha,
            },
            NonstationaryKind::BiFbm { k, h } => ExpansionParams {
                a: k * h / t,
                mu: one,
                d: two.powf(-k) * t.powf(-two * k * h),
                nu: two * k * h,
            },
            NonstationaryKind::SubFbm { h } => ExpansionParams {
                a: h / t,
                mu: one,
                d: (two * (two - two.powf(two * h - one)) * t.powf(two * h)).recip(),
                nu: two * h,
            },
            NonstationaryKind::MeanIntFbm { h } => ExpansionParams {
                a: h / t,
                mu: one,
                d: (one - h * h) / (two * t * t),
                nu: two,
            },
        }
    }

    /// Stored increment bound of the normalized process, fitted on a coarse
    /// grid of the working subinterval with 50% headroom.
    pub fn holder_bound(&self) -> HolderBound<T> {
        let from = match self.kind {
            // Increments of the mean-integrated process degenerate at 0.
            NonstationaryKind::MeanIntFbm { .. } => self.horizon / T::of(8.0),
            _ => T::zero(),
        };
        let gamma = match self.kind {
            NonstationaryKind::Fbm { alpha } => alpha,
            NonstationaryKind::BiFbm { k, h } => T::two() * k * h,
            NonstationaryKind::SubFbm { h } => T::two() * h,
            NonstationaryKind::MeanIntFbm { .. } => T::one(),
        };
        let m = 48;
        let mut worst = T::zero();
        for i in 0..m {
            for j in (i + 1)..=m {
                let s = from + (self.horizon - from) * T::of_usize(i) / T::of_usize(m);
                let t = from + (self.horizon - from) * T::of_usize(j) / T::of_usize(m);
                let v = self.increment_var(s, t);
                let ratio = v / (t - s).powf(gamma);
                if ratio > worst {
                    worst = ratio;
                }
            }
        }
        HolderBound { g: worst * T::of(1.5), gamma, from }
    }

    /// `E (X(t) - X(s))^2` for the normalized process.
    pub fn increment_var(&self, s: T, t: T) -> T {
        let peak2 = self.sigma_peak * self.sigma_peak;
        let css = raw_cov(&self.kind, s, s);
        let ctt = raw_cov(&self.kind, t, t);
        let cst = raw_cov(&self.kind, s, t);
        ((css + ctt - T::two() * cst) / peak2).max(T::zero())
    }

    /// Check the stored increment bound on every pair of a uniform grid of
    /// `[max(from, t_lo), T]`. Returns the worst observed ratio `v / |t-s|^gamma`
    /// relative to `g`.
    pub fn check_holder(&self, t_lo: T, points: usize) -> Result<T> {
        let hb = self.holder_bound();
        let lo = t_lo.max(hb.from);
        if points < 2 || !(lo < self.horizon) {
            return Err(Error::InvalidParameter(
                "check_holder needs >= 2 points and t_lo < horizon".into(),
            ));
        }
        let mut worst = T::zero();
        for i in 0..points {
            for j in (i + 1)..points {
                let s = lo + (self.horizon - lo) * T::of_usize(i) / T::of_usize(points - 1);
                let t = lo + (self.horizon - lo) * T::of_usize(j) / T::of_usize(points - 1);
                let ratio = self.increment_var(s, t) / ((t - s).powf(hb.gamma) * hb.g);
                if ratio > worst {
                    worst = ratio;
                }
            }
        }
        Ok(worst)
    }

    pub fn id(&self) -> String {
        let t = self.horizon;
        match self.kind {
            NonstationaryKind::Fbm { alpha } => format!("fbm(alpha={alpha},T={t})"),
            NonstationaryKind::BiFbm { k, h } => format!("bifbm(k={k},h={h},T={t})"),
            NonstationaryKind::SubFbm { h } => format!("subfbm(h={h},T={t})"),
            NonstationaryKind::MeanIntFbm { h } => format!("meanint-fbm(h={h},T={t})"),
        }
    }

    fn check_times(&self, s: T, t: T) -> Result<()> {
        let ok = |x: T| x.is_finite() && x >= T::zero() && x <= self.horizon;
        if !ok(s) || !ok(t) {
            return Err(Error::InvalidParameter(format!(
                "times must lie in [0, {}], got ({s}, {t})",
                self.horizon
            )));
        }
        Ok(())
    }
}

fn raw_cov<T: Real>(kind: &NonstationaryKind<T>, s: T, t: T) -> T {
    let half = T::half();
    let two = T::two();
    match *kind {
        NonstationaryKind::Fbm { alpha } => {
            half * (s.powf(alpha) + t.powf(alpha) - (t - s).abs().powf(alpha))
        }
        NonstationaryKind::BiFbm { k, h } => {
            two.powf(-k)
                * ((t.powf(two * h) + s.powf(two * h)).powf(k)
                    - (t - s).abs().powf(two * k * h))
        }
        NonstationaryKind::SubFbm { h } => {
            s.powf(two * h) + t.powf(two * h)
                - half * ((s + t).powf(two * h) + (t - s).abs().powf(two * h))
        }
        NonstationaryKind::MeanIntFbm { h } => meanint_cov_closed(h, s, t),
    }
}

/// Closed form of the mean-integrated fBm covariance, obtained by Fubini on
/// the defining double integral:
/// `Cov = (h+1)/(st) [ (s t^p + t s^p)/p - (t^q + s^q - |t-s|^q)/(p q) ]`
/// with `p = 2h+1`, `q = 2h+2`.
fn meanint_cov_closed<T: Real>(h: T, s: T, t: T) -> T {
    if s == T::zero() || t == T::zero() {
        return T::zero();
    }
    let one = T::one();
    let p = T::two() * h + one;
    let q = p + one;
    (h + one) / (s * t)
        * (((s * t.powf(p) + t * s.powf(p)) / p)
            - (t.powf(q) + s.powf(q) - (t - s).abs().powf(q)) / (p * q))
}

/// Mean-integrated fBm covariance evaluated directly from its double-integral
/// definition by nested adaptive quadrature.
///
/// `Cov(s,t) = (2h+2)/(st) int_0^s int_0^t Cov(B_{2h}(a), B_{2h}(b)) db da`.
/// Serves as the definitional cross-check of the closed form used by
/// [`NonstationaryModel::covariance`]. Returns the value and the achieved
/// absolute tolerance.
pub fn meanint_cov_quadrature<T: Real>(h: T, s: T, t: T, abs_tol: T) -> Result<(T, T)> {
    if !(h > T::zero() && h < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "mean-integrated fBm requires h in (0,1), got {h}"
        )));
    }
    if s < T::zero() || t < T::zero() {
        return Err(Error::InvalidParameter("times must be >= 0".into()));
    }
    if s == T::zero() || t == T::zero() {
        return Ok((T::zero(), T::zero()));
    }
    let two_h = T::two() * h;
    let half = T::half();
    let fbm = move |a: T, b: T| {
        half * (a.powf(two_h) + b.powf(two_h) - (a - b).abs().powf(two_h))
    };
    let inner_tol = abs_tol / (T::of(4.0) * s.max(t));
    // The inner integrand has a kink at b = a; split there.
    let outer = |a: T| -> T {
        let f = |b: T| fbm(a, b);
        let split = a.min(t);
        let (v1, _) = adaptive_simpson(&f, T::zero(), split, inner_tol)
            .unwrap_or((T::nan(), T::zero()));
        let (v2, _) =
            adaptive_simpson(&f, split, t, inner_tol).unwrap_or((T::nan(), T::zero()));
        v1 + v2
    };
    let (vouter, err) = adaptive_simpson(&outer, T::zero(), s, abs_tol * half)?;
    if !vouter.is_finite() {
        return Err(Error::QuadratureNonConvergence {
            achieved: f64::NAN,
            requested: abs_tol.as_f64(),
        });
    }
    let scale = (two_h + T::two()) / (s * t);
    Ok((scale * vouter, scale * (err + abs_tol * half)))
}
