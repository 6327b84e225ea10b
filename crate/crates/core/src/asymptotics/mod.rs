//! Closed-form tail asymptotics, decomposed as
//! `value = prefactor * level^exponent * marginal * gaussian_factor`
//! and assembled in log space so levels around `u = 40` stay evaluable.
//!
//! Every evaluator guards its hypotheses and reports the regime (theorem
//! case) it selected; case selection is an exact comparison of the inputs,
//! and the constants across regimes intentionally differ.

use crate::constants::{pickands_anchor, ConstantEstimate};
use crate::special::ln_gamma;
use crate::{Error, Real, Result};

/// Provenance of a Pickands/Piterbarg constant fed into an evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantSource {
    Registry,
    Estimated,
    UserValue,
}

/// A constant value plus where it came from.
#[derive(Debug, Clone, Copy)]
pub struct ConstantValue<T> {
    pub value: T,
    pub source: ConstantSource,
}

impl<T: Real> ConstantValue<T> {
    /// Registry anchor for `H_alpha`; errors for alphas without one.
    pub fn registry_pickands(alpha: T) -> Result<Self> {
        pickands_anchor(alpha)
            .map(|value| Self { value, source: ConstantSource::Registry })
            .ok_or_else(|| {
                Error::MissingConstant(format!(
                    "no registry anchor for H_alpha at alpha={alpha}; estimate it"
                ))
            })
    }

    pub fn from_estimate(est: &ConstantEstimate<T>) -> Self {
        Self { value: est.value, source: ConstantSource::Estimated }
    }

    pub fn user(value: T) -> Self {
        Self { value, source: ConstantSource::UserValue }
    }

    fn positive(&self, what: &str) -> Result<T> {
        if !(self.value > T::zero()) || !self.value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{what} must be positive and finite, got {}",
                self.value
            )));
        }
        Ok(self.value)
    }
}

/// Which side of a theorem's case split was selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseSplit {
    /// First exponent strictly below the threshold (e.g. `alpha < 2 beta`).
    Below,
    Equal,
    Above,
}

/// Which formula (and case) produced an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    GaussianPickands,
    GaussianLocal,
    GaussianPiterbargLocal,
    StationaryChi,
    StationaryChiLocal,
    StationaryTrend(CaseSplit),
    Nonstationary(CaseSplit),
    NonstationaryTrend(CaseSplit),
    GeneralizedChi(CaseSplit),
    FieldDrift,
    FieldVolume,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::GaussianPickands => "gaussian-pickands".into(),
            Regime::GaussianLocal => "gaussian-local".into(),
            Regime::GaussianPiterbargLocal => "gaussian-piterbarg-local".into(),
            Regime::StationaryChi => "stationary-chi".into(),
            Regime::StationaryChiLocal => "stationary-chi-local".into(),
            Regime::StationaryTrend(c) => format!("stationary-trend:alpha{}2beta", cmp_str(c)),
            Regime::Nonstationary(c) => format!("nonstationary:nu{}mu", cmp_str(c)),
            Regime::NonstationaryTrend(c) => {
                format!("nonstationary-trend:nu{}mu", cmp_str(c))
            }
            Regime::GeneralizedChi(c) => format!("generalized-chi:alpha{}2beta", cmp_str(c)),
            Regime::FieldDrift => "field-drift".into(),
            Regime::FieldVolume => "field-volume".into(),
        };
        f.write_str(&s)
    }
}

fn cmp_str(c: &CaseSplit) -> &'static str {
    match c {
        CaseSplit::Below => "<",
        CaseSplit::Equal => "=",
        CaseSplit::Above => ">",
    }
}

/// A closed-form asymptotic value with its exact decomposition.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticEval<T> {
    /// `exp(log_value)`; may underflow to 0 for very large levels, in which
    /// case `log_value` remains authoritative.
    pub value: T,
    pub log_value: T,
    /// The theorem's constant (`M`, `H`-term, or product of windowed
    /// constants).
    pub prefactor: T,
    /// The level the formula is evaluated at (`u`, `u*`, or `f(u)`).
    pub level: T,
    /// Power of `level` in the main term, clamp included.
    pub exponent: T,
    /// Marginal factor: the non-Gaussian part of `Upsilon_n`, or
    /// `1/sqrt(2 pi)` (times `1/level` folded into `exponent` bookkeeping)
    /// for Gaussian-process forms.
    pub marginal: T,
    /// `exp(-level^2 / 2)`.
    pub gaussian_factor: T,
    pub regime: Regime,
    pub constant_source: Option<ConstantSource>,
}

fn assemble<T: Real>(
    prefactor_log: T,
    exponent: T,
    level: T,
    marginal_log: T,
    regime: Regime,
    constant_source: Option<ConstantSource>,
) -> AsymptoticEval<T> {
    let gaussian_log = -level * level * T::half();
    let log_value = prefactor_log + exponent * level.ln() + marginal_log + gaussian_log;
    AsymptoticEval {
        value: log_value.exp(),
        log_value,
        prefactor: prefactor_log.exp(),
        level,
        exponent,
        marginal: marginal_log.exp(),
        gaussian_factor: gaussian_log.exp(),
        regime,
        constant_source,
    }
}

fn check_level<T: Real>(u: T) -> Result<()> {
    if !(u > T::zero()) || !u.is_finite() {
        return Err(Error::InvalidParameter(format!("level must be > 0, got {u}")));
    }
    Ok(())
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::zero() && alpha <= T::two()) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be in (0,2], got {alpha}"
        )));
    }
    Ok(())
}

fn check_positive<T: Real>(x: T, what: &str) -> Result<()> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{what} must be positive and finite, got {x}"
        )));
    }
    Ok(())
}

/// Log of the non-Gaussian part of `Upsilon_n(u)`:
/// `ln(2^{(2-n)/2} / Gamma(n/2)) + (n-2) ln u`.
fn upsilon_marginal_log<T: Real>(n: usize, u: T) -> T {
    let nf = T::of_usize(n);
    (T::two() - nf) * T::half() * T::two().ln() - ln_gamma(nf * T::half())
        + (nf - T::two()) * u.ln()
}

/// `Upsilon_n(u) = 2^{(2-n)/2} / Gamma(n/2) u^{n-2} exp(-u^2/2)`, the
/// asymptotic expansion of `P(chi_n(0) > u)`.
pub fn upsilon<T: Real>(n: usize, u: T) -> Result<T> {
    Ok(upsilon_log(n, u)?.exp())
}

/// Log-space version of [`upsilon`] for very large levels.
pub fn upsilon_log<T: Real>(n: usize, u: T) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidParameter("upsilon needs n >= 1".into()));
    }
    check_level(u)?;
    Ok(upsilon_marginal_log(n, u) - u * u * T::half())
}

/// Stationary Gaussian supremum tail over `[0, T]`:
/// `H_alpha T d0^{1/alpha} (2 pi)^{-1/2} u^{2/alpha - 1} exp(-u^2/2)`.
///
/// The `d0^{1/alpha}` factor is the exact time change folding the local
/// covariance coefficient into the unit-coefficient statement.
pub fn gaussian_pickands_tail<T: Real>(
    t_horizon: T,
    alpha: T,
    d0: T,
    u: T,
    h_alpha: &ConstantValue<T>,
) -> Result<AsymptoticEval<T>> {
    check_alpha(alpha)?;
    check_level(u)?;
    check_positive(t_horizon, "horizon")?;
    check_positive(d0, "d0")?;
    let h = h_alpha.positive("H_alpha")?;
    let prefactor_log = h.ln() + t_horizon.ln() + d0.ln() / alpha;
    let exponent = T::two() / alpha - T::one();
    let marginal_log = -(T::two() * T::PI()).ln() * T::half();
    Ok(assemble(
        prefactor_log,
        exponent,
        u,
        marginal_log,
        Regime::GaussianPickands,
        Some(h_alpha.source),
    ))
}

/// Local window form: `H_alpha[0,S] (1/(sqrt(2 pi) u)) exp(-u^2/2)`.
pub fn gaussian_local_tail<T: Real>(
    s_window: T,
    alpha: T,
    u: T,
    h_window: &ConstantValue<T>,
) -> Result<AsymptoticEval<T>> {
    check_alpha(alpha)?;
    check_level(u)?;
    check_positive(s_window, "window")?;
    let h = h_window.positive("H_alpha[0,S]")?;
    Ok(assemble(
        h.ln(),
        -T::one(),
        u,
        -(T::two() * T::PI()).ln() * T::half(),
        Regime::GaussianLocal,
        Some(h_window.source),
    ))
}

/// Drift-corrected local window form:
/// `P^d_{alpha,alpha}[0,S] (1/(sqrt(2 pi) u)) exp(-u^2/2)`.
pub fn gaussian_piterbarg_local<T: Real>(
    s_window: T,
    alpha: T,
    d: T,
    u: T,
    p_window: &ConstantValue<T>,
) -> Result<AsymptoticEval<T>> {
    check_alpha(alpha)?;
    check_level(u)?;
    check_positive(s_window, "window")?;
    check_positive(d, "d")?;
    let p = p_window.positive("P^d[0,S]")?;
    Ok(assemble(
        p.ln(),
        -T::one(),
        u,
        -(T::two() * T::PI()).ln() * T::half(),
        Regime::GaussianPiterbargLocal,
        Some(p_window.source),
    ))
}

/// Stationary chi supremum tail over `[0, T]`:
/// `T d0^{1/alpha} H_alpha u^{2/alpha} Upsilon_n(u)`.
pub fn prop21_tail<T: Real>(
    t_horizon: T,
    alpha: T,
    d0: T,
    n: usize,
    u: T,
    h_alpha: &ConstantValue<T>,
) -> Result<AsymptoticEval<T>> {
    check_alpha(alpha)?;
    check_level(u)?;
    check_positive(t_horizon, "horizon")?;
    check_positive(d0, "d0")?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let h = h_alpha.positive("H_alpha")?;
    Ok(assemble(
        h.ln() + t_horizon.ln() + d0.ln() / alpha,
        T::two() / alpha,
        u,
        upsilon_marginal_log(n, u),
        Regime::StationaryChi,
        Some(h_alpha.source),
    ))
}

/// Window the caller must estimate the constant on for [`prop22_local_tail`]:
/// `d0^{1/alpha} S`.
pub fn prop22_required_window<T: Real>(alpha: T, d0: T, s_window: T) -> T {
    d0.powf(alpha.recip()) * s_window
}

/// Local chi tail on a Pickands window at a drifting threshold `f(u)`:
/// `H_alpha[0, d0^{1/alpha} S] Upsilon_n(f(u))`.
///
/// The threshold function (with `f(u)/u -> 1`) is the caller's; the value
/// `f_of_u` is evaluated as given.
pub fn prop22_local_tail<T: Real>(
    s_window: T,
    alpha: T,
    d0: T,
    n: usize,
    f_of_u: T,
    h_window: &ConstantValue<T>,
) -> Result<AsymptoticEval<T>> {
    check_alpha(alpha)?;
    check_level(f_of_u)?;
    check_positive(s_window, "window")?;
    check_positive(d0, "d0")?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let h = h_window.positive("H_alpha[0,S]")?;
    Ok(assemble(
        h.ln(),
        T::zero(),
        f_of_u,
        upsilon_marginal_log(n, f_of_u),
        Regime::StationaryChiLocal,
        Some(h_window.source),
    ))
}

/// Stationary chi with a power trend `c t^beta`:
/// `M^c_{alpha,beta} u^{(2/alpha - 1/beta)_+} Upsilon_n(u)` with the case
/// table over `alpha` vs `2 beta`. Requires the growth condition
/// `c > 1/beta` (alpha < 2 beta) or `c > 2/alpha` (alpha >= 2 beta).
///
/// For models with a local coefficient `d0 != 1`, feed the rescaled trend
/// coefficient `c * d0^{-beta/alpha}` (exact time change).
pub fn thm21_tail<T: Real>(
    alpha: T,
    beta: T,
    c: T,
    n: usize,
    u: T,
    t_horizon: T,
    constant: Option<&ConstantValue<T>>,
) -> Result<AsymptoticEval<T>> {
    let (m_log, exponent, case, source) = thm21_constant(alpha, beta, c, constant)?;
    check_level(u)?;
    check_positive(t_horizon, "horizon")?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    Ok(assemble(
        m_log,
        exponent,
        u,
        upsilon_marginal_log(n, u),
        Regime::StationaryTrend(case),
        source,
    ))
}

/// Shared case-table logic of Thm 2.1 (also reused by the generalized chi
/// variant): returns `(ln M, exponent, case, source)`.
fn thm21_constant<T: Real>(
    alpha: T,
    beta: T,
    c: T,
    constant: Option<&ConstantValue<T>>,
) -> Result<(T, T, CaseSplit, Option<ConstantSource>)> {
    check_alpha(alpha)?;
    check_positive(beta, "beta")?;
    check_positive(c, "c")?;
    let two_beta = T::two() * beta;
    let required = if alpha < two_beta { beta.recip() } else { T::two() / alpha };
    if !(c > required) {
        return Err(Error::RegimeNotGuaranteed(format!(
            "asymptotic regime not guaranteed: need c > {required}, got c = {c}"
        )));
    }
    let exponent = (T::two() / alpha - beta.recip()).max(T::zero());
    if alpha < two_beta {
        let h = constant
            .ok_or_else(|| Error::MissingConstant("H_alpha needed for alpha < 2 beta".into()))?;
        let hv = h.positive("H_alpha")?;
        let m_log = -c.ln() / beta + ln_gamma(beta.recip() + T::one()) + hv.ln();
        Ok((m_log, exponent, CaseSplit::Below, Some(h.source)))
    } else if alpha == two_beta {
        let p = constant.ok_or_else(|| {
            Error::MissingConstant("P^c_{alpha,alpha/2} needed for alpha = 2 beta".into())
        })?;
        let pv = p.positive("P^c_{alpha,alpha/2}")?;
        Ok((pv.ln(), exponent, CaseSplit::Equal, Some(p.source)))
    } else {
        Ok((T::zero(), exponent, CaseSplit::Above, None))
    }
}

/// Interior-minimum variant of the trend case (the two-sided window):
/// `Gamma` is doubled in the `alpha < 2 beta` case, the constant becomes the
/// two-sided Piterbarg constant in the `alpha = 2 beta` case, and the level
/// is shifted by the trend minimum `g(t0)`.
///
/// The source material pins no worked example for this variant, so it is
/// exposed behind this separate entry point.
pub fn thm21_interior_tail<T: Real>(
    alpha: T,
    beta: T,
    c: T,
    n: usize,
    u: T,
    g_min: T,
    t_horizon: T,
    constant: Option<&ConstantValue<T>>,
) -> Result<AsymptoticEval<T>> {
    if !(g_min >= T::zero()) {
        return Err(Error::InvalidParameter("g(t0) must be >= 0".into()));
    }
    let level = u + g_min;
    let (m_log, exponent, case, source) = thm21_constant(alpha, beta, c, constant)?;
    check_level(level)?;
    check_positive(t_horizon, "horizon")?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let m_log = if case == CaseSplit::Below { m_log + T::two().ln() } else { m_log };
    Ok(assemble(
        m_log,
        exponent,
        level,
        upsilon_marginal_log(n, level),
        Regime::StationaryTrend(case),
        source,
    ))
}

/// Non-stationary chi tail (variance peaking at the right endpoint):
/// `M_{nu,mu} u^{(2/nu - 2/mu)_+} Upsilon_n(u)` with the case table over
/// `nu` vs `mu`; `(a, mu, d, nu)` are the local expansion parameters of the
/// normalized model.
pub fn thm22_tail<T: Real>(
    nu: T,
    mu: T,
    a_coef: T,
    d_coef: T,
    n: usize,
    u: T,
    constant: Option<&ConstantValue<T>>,
) -> Result<AsymptoticEval<T>> {
    let (m_log, exponent, case, source) = thm22_constant(nu, mu, a_coef, d_coef, constant)?;
    check_level(u)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    Ok(assemble(
        m_log,
        exponent,
        u,
        upsilon_marginal_log(n, u),
        Regime::Nonstationary(case),
        source,
    ))
}

fn thm22_constant<T: Real>(
    nu: T,
    mu: T,
    a_coef: T,
    d_coef: T,
    constant: Option<&ConstantValue<T>>,
) -> Result<(T, T, CaseSplit, Option<ConstantSource>)> {
    if !(nu > T::zero() && nu <= T::two()) {
        return Err(Error::InvalidParameter(format!("nu must be in (0,2], got {nu}")));
    }
    check_positive(mu, "mu")?;
    check_positive(a_coef, "A")?;
    check_positive(d_coef, "D")?;
    let exponent = (T::two() / nu - T::two() / mu).max(T::zero());
    if nu < mu {
        let h = constant
            .ok_or_else(|| Error::MissingConstant("H_nu needed for nu < mu".into()))?;
        let hv = h.positive("H_nu")?;
        let m_log = d_coef.ln() / nu + ln_gamma(mu.recip() + T::one()) - a_coef.ln() / mu
            + hv.ln();
        Ok((m_log, exponent, CaseSplit::Below, Some(h.source)))
    } else if nu == mu {
        let p = constant.ok_or_else(|| {
            Error::MissingConstant("P^{A/D}_{nu,nu} needed for nu = mu".into())
        })?;
        let pv = p.positive("P^{A/D}_{nu,nu}")?;
        Ok((pv.ln(), exponent, CaseSplit::Equal, Some(p.source)))
    } else {
        Ok((T::zero(), exponent, CaseSplit::Above, None))
    }
}

/// The drift ratio whose Piterbarg constant Thm 2.2 consumes when `nu = mu`.
pub fn thm22_required_drift<T: Real>(a_coef: T, d_coef: T) -> T {
    a_coef / d_coef
}

/// Non-stationary chi with a boundary trend satisfying `mu <= beta_tilde`:
/// Thm 2.2 evaluated at the shifted level `u* = u + g(T)`.
#[allow(clippy::too_many_arguments)]
pub fn thm23_tail<T: Real>(
    nu: T,
    mu: T,
    a_coef: T,
    d_coef: T,
    n: usize,
    u: T,
    g_horizon: T,
    beta_tilde: T,
    constant: Option<&ConstantValue<T>>,
) -> Result<AsymptoticEval<T>> {
    if !(g_horizon >= T::zero()) || !g_horizon.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "g(T) must be >= 0, got {g_horizon}"
        )));
    }
    check_positive(beta_tilde, "beta_tilde")?;
    if !(mu <= beta_tilde) {
        return Err(Error::RegimeNotGuaranteed(format!(
            "outside theorem hypothesis: mu = {mu} > beta_tilde = {beta_tilde}"
        )));
    }
    let mut eval = thm22_tail(nu, mu, a_coef, d_coef, n, u + g_horizon, constant)?;
    eval.regime = match eval.regime {
        Regime::Nonstationary(c) => Regime::NonstationaryTrend(c),
        r => r,
    };
    Ok(eval)
}

/// Weights of a generalized chi-process
/// `sqrt(sum b_i^2 X_i^2)` with `1 = b_1 = ... = b_k > b_{k+1} >= ... >= 0`.
#[derive(Debug, Clone)]
pub struct GeneralizedChiWeights<T> {
    b: Vec<T>,
    k: usize,
}

impl<T: Real> GeneralizedChiWeights<T> {
    pub fn new(b: Vec<T>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::InvalidParameter("weights must be non-empty".into()));
        }
        if b[0] != T::one() {
            return Err(Error::InvalidParameter("b_1 must equal 1".into()));
        }
        let mut k = 0;
        for w in &b {
            if *w == T::one() {
                k += 1;
            } else {
                break;
            }
        }
        for (i, w) in b.iter().enumerate().skip(k) {
            if !(*w < T::one()) || !(*w >= T::zero()) {
                return Err(Error::InvalidParameter(format!(
                    "b_{} = {w} must lie in [0, 1) below the maximal weights \
                     (unit weights past index k make the prefactor diverge)",
                    i + 1
                )));
            }
        }
        if b.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter("weights must be non-increasing".into()));
        }
        Ok(Self { b, k })
    }

    pub fn multiplicity(&self) -> usize {
        self.k
    }

    pub fn weights(&self) -> &[T] {
        &self.b
    }

    /// `prod_{i>k} (1 - b_i^2)^{-1/2}` in log space.
    fn prefactor_log(&self) -> T {
        let mut acc = T::zero();
        for w in &self.b[self.k..] {
            acc -= (T::one() - *w * *w).ln() * T::half();
        }
        acc
    }
}

/// Generalized stationary chi with trend: the Thm 2.1 value with `n`
/// replaced by the maximal-weight multiplicity `k` and multiplied by
/// `prod_{i>k} (1 - b_i^2)^{-1/2}`.
#[allow(clippy::too_many_arguments)]
pub fn generalized_chi_tail<T: Real>(
    weights: &GeneralizedChiWeights<T>,
    alpha: T,
    beta: T,
    c: T,
    u: T,
    t_horizon: T,
    constant: Option<&ConstantValue<T>>,
) -> Result<AsymptoticEval<T>> {
    let (m_log, exponent, case, source) = thm21_constant(alpha, beta, c, constant)?;
    check_level(u)?;
    check_positive(t_horizon, "horizon")?;
    Ok(assemble(
        m_log + weights.prefactor_log(),
        exponent,
        u,
        upsilon_marginal_log(weights.multiplicity(), u),
        Regime::GeneralizedChi(case),
        source,
    ))
}

/// Windows the caller must estimate constants on for the field theorems.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldWindows<T> {
    /// Rescaled drift coefficient `c d0^{-beta/alpha0}`.
    pub drift_coefficient: T,
    /// Drift-axis window `d0^{1/alpha0} S1`.
    pub drift_window: T,
    /// Per space axis windows `d_i^{1/alpha_i} S2`.
    pub space_windows: Vec<T>,
}

pub fn thm31_required_windows<T: Real>(
    alpha0: T,
    beta: T,
    c: T,
    d0: T,
    space: &[(T, T)],
    s1: T,
    s2: T,
) -> FieldWindows<T> {
    FieldWindows {
        drift_coefficient: c * d0.powf(-beta / alpha0),
        drift_window: d0.powf(alpha0.recip()) * s1,
        space_windows: space
            .iter()
            .map(|(alpha_i, d_i)| d_i.powf(alpha_i.recip()) * s2)
            .collect(),
    }
}

/// Field tail over the drift window and `u^{-2/alpha_i}`-scaled space axes:
/// `P^{c d0^{-beta/alpha0}}_{alpha0,beta}[0, d0^{1/alpha0} S1]
///  prod_i H_{alpha_i}[0, d_i^{1/alpha_i} S2]
///  (1/(sqrt(2 pi) f(u))) exp(-f(u)^2/2)`.
#[allow(clippy::too_many_arguments)]
pub fn thm31_field_tail<T: Real>(
    alpha0: T,
    beta: T,
    c: T,
    d0: T,
    space: &[(T, T)],
    s1: T,
    s2: T,
    f_of_u: T,
    drift_constant: &ConstantValue<T>,
    space_constants: &[ConstantValue<T>],
) -> Result<AsymptoticEval<T>> {
    check_alpha(alpha0)?;
    check_positive(beta, "beta")?;
    check_positive(c, "c")?;
    check_positive(d0, "d0")?;
    check_positive(s1, "S1")?;
    if !space.is_empty() {
        check_positive(s2, "S2")?;
    }
    check_level(f_of_u)?;
    if space_constants.len() != space.len() {
        return Err(Error::MissingConstant(format!(
            "need one windowed H per space axis: {} axes, {} constants",
            space.len(),
            space_constants.len()
        )));
    }
    let mut prefactor_log = drift_constant.positive("drift-window constant")?.ln();
    for ((alpha_i, _), h) in space.iter().zip(space_constants) {
        check_alpha(*alpha_i)?;
        prefactor_log += h.positive("space-window constant")?.ln();
    }
    Ok(assemble(
        prefactor_log,
        -T::one(),
        f_of_u,
        -(T::two() * T::PI()).ln() * T::half(),
        Regime::FieldDrift,
        Some(drift_constant.source),
    ))
}

/// Field tail over a thin set of positive volume:
/// `V_{n-1}(A) P^{...}[0, d0^{1/alpha0} S1] prod_i (H_{alpha_i} d_i^{1/alpha_i})
///  (1/sqrt(2 pi)) u^{sum_i 2/alpha_i - 1} exp(-u^2/2)`.
#[allow(clippy::too_many_arguments)]
pub fn thm32_field_tail<T: Real>(
    volume: T,
    alpha0: T,
    beta: T,
    c: T,
    d0: T,
    space: &[(T, T)],
    s1: T,
    u: T,
    drift_constant: &ConstantValue<T>,
    space_limit_constants: &[ConstantValue<T>],
) -> Result<AsymptoticEval<T>> {
    check_alpha(alpha0)?;
    check_positive(beta, "beta")?;
    check_positive(c, "c")?;
    check_positive(d0, "d0")?;
    check_positive(s1, "S1")?;
    check_positive(volume, "volume")?;
    check_level(u)?;
    if space_limit_constants.len() != space.len() {
        return Err(Error::MissingConstant(format!(
            "need one limiting H per space axis: {} axes, {} constants",
            space.len(),
            space_limit_constants.len()
        )));
    }
    let mut prefactor_log =
        volume.ln() + drift_constant.positive("drift-window constant")?.ln();
    let mut exponent = -T::one();
    for ((alpha_i, d_i), h) in space.iter().zip(space_limit_constants) {
        check_alpha(*alpha_i)?;
        check_positive(*d_i, "d_i")?;
        prefactor_log += h.positive("H_{alpha_i}")?.ln() + d_i.ln() / *alpha_i;
        exponent += T::two() / *alpha_i;
    }
    Ok(assemble(
        prefactor_log,
        exponent,
        u,
        -(T::two() * T::PI()).ln() * T::half(),
        Regime::FieldVolume,
        Some(drift_constant.source),
    ))
}

#[cfg(test)]
mod tests;
