//! Chi-processes: construction from independent Gaussian copies, supremum
//! statistics against a trend, Monte Carlo tail estimates, the exact
//! marginal survival function, and the sphere representation check.

mod stats;

pub use stats::{clopper_pearson_upper, wilson_interval};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::FftNum;

use crate::covmodels::{NonstationaryKind, NonstationaryModel, StationaryModel, TrendSpec};
use crate::samplers::{
    cholesky_with_jitter, CirculantEmbedding, FbmSampler, PathBatch, SampleGrid, SeedSpec,
};
use crate::special::gamma_q;
use crate::{Error, Real, Result};

/// The generic Gaussian process driving a chi experiment.
#[derive(Debug, Clone)]
pub enum ProcessModel<T> {
    Stationary(StationaryModel<T>),
    Nonstationary(NonstationaryModel<T>),
}

impl<T: Real> ProcessModel<T> {
    /// Local correlation exponent at the critical point: `alpha` for
    /// stationary models, `nu` for non-stationary ones.
    pub fn local_exponent(&self) -> T {
        match self {
            ProcessModel::Stationary(m) => m.alpha(),
            ProcessModel::Nonstationary(m) => m.expansion_params().nu,
        }
    }

    pub fn id(&self) -> String {
        match self {
            ProcessModel::Stationary(m) => m.id(),
            ProcessModel::Nonstationary(m) => m.id(),
        }
    }
}

/// How the supremum grid is chosen.
#[derive(Debug, Clone)]
pub enum GridRule<T> {
    /// Step `u^{-2/alpha} / points_per_cluster`, resolving the cluster scale
    /// that drives the asymptotics.
    PointsPerCluster(usize),
    /// Caller-supplied grid; a warning is attached if it is coarser than the
    /// cluster scale.
    Explicit(SampleGrid<T>),
}

/// One tail-probability experiment: `P(sup (chi_n(t) - g(t)) > u)` on a grid
/// over `[t_lo, t_hi]`.
#[derive(Debug, Clone)]
pub struct ChiExperiment<T> {
    model: ProcessModel<T>,
    dof: usize,
    trend: TrendSpec<T>,
    interval: (T, T),
    level: T,
    grid_rule: GridRule<T>,
    nsim: usize,
    seeds: SeedSpec,
    confidence: T,
}

impl<T: Real> ChiExperiment<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        model: ProcessModel<T>,
        dof: usize,
        trend: TrendSpec<T>,
        interval: (T, T),
        level: T,
        grid_rule: GridRule<T>,
        nsim: usize,
        seeds: SeedSpec,
        confidence: T,
    ) -> Result<Self> {
        if dof == 0 {
            return Err(Error::InvalidParameter("chi needs n >= 1".into()));
        }
        if !(level >= T::zero()) || !level.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "level must be finite and >= 0, got {level}"
            )));
        }
        if nsim < 100 {
            return Err(Error::InvalidParameter(format!(
                "nsim must be >= 100, got {nsim}"
            )));
        }
        if !(interval.0 >= T::zero() && interval.1 >= interval.0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= t_lo <= t_hi, got [{}, {}]",
                interval.0, interval.1
            )));
        }
        if !(confidence > T::zero() && confidence < T::one()) {
            return Err(Error::InvalidParameter("confidence must be in (0,1)".into()));
        }
        if let ProcessModel::Nonstationary(m) = &model {
            if interval.1 != m.horizon() {
                return Err(Error::InvalidParameter(
                    "non-stationary experiments must end at the model horizon".into(),
                ));
            }
        }
        Ok(Self { model, dof, trend, interval, level, grid_rule, nsim, seeds, confidence })
    }

    pub fn model(&self) -> &ProcessModel<T> {
        &self.model
    }

    pub fn dof(&self) -> usize {
        self.dof
    }

    pub fn level(&self) -> T {
        self.level
    }

    pub fn nsim(&self) -> usize {
        self.nsim
    }

    /// Materialize the supremum grid, with a resolution warning when an
    /// explicit grid is coarser than the `u^{-2/alpha}` cluster scale.
    pub fn resolve_grid(&self) -> Result<(SampleGrid<T>, Option<String>)> {
        let (lo, hi) = self.interval;
        let exponent = self.model.local_exponent();
        let cluster = if self.level > T::one() {
            self.level.powf(-T::two() / exponent)
        } else {
            (hi - lo).max(T::one())
        };
        match &self.grid_rule {
            GridRule::PointsPerCluster(ppc) => {
                if *ppc == 0 {
                    return Err(Error::InvalidParameter(
                        "points_per_cluster must be >= 1".into(),
                    ));
                }
                if hi == lo {
                    return Ok((SampleGrid::single(lo), None));
                }
                let step = cluster / T::of_usize(*ppc);
                Ok((SampleGrid::covering(lo, hi, step)?, None))
            }
            GridRule::Explicit(g) => {
                let mut warning = None;
                if g.len() > 1 && g.step() > cluster {
                    warning = Some(format!(
                        "grid step {} is coarser than the cluster scale {}",
                        g.step(),
                        cluster
                    ));
                }
                Ok((*g, warning))
            }
        }
    }
}

/// Tail estimate with exceedance counts and a Wilson interval.
#[derive(Debug, Clone)]
pub struct TailEstimate<T> {
    pub phat: T,
    pub exceedances: u64,
    pub nsim: usize,
    pub ci: (T, T),
    pub level: T,
    pub confidence: T,
    pub grid_points: usize,
    pub grid_step: T,
    pub master_seed: u64,
    pub warning: Option<String>,
}

/// Pointwise Euclidean norm across `n` path batches on a common grid.
pub fn chi_from_paths<T: Real>(batches: &[PathBatch<T>]) -> Result<PathBatch<T>> {
    let first = batches
        .first()
        .ok_or_else(|| Error::InvalidParameter("need at least one copy".into()))?;
    for b in batches {
        if b.grid() != first.grid() || b.batch() != first.batch() {
            return Err(Error::ShapeMismatch(
                "all copies must share grid and batch size".into(),
            ));
        }
    }
    let mut values = vec![T::zero(); first.batch() * first.grid().len()];
    for b in batches {
        for (acc, v) in values.iter_mut().zip(b.values()) {
            *acc += *v * *v;
        }
    }
    for v in values.iter_mut() {
        *v = v.sqrt();
    }
    PathBatch::from_parts(
        values,
        first.batch(),
        *first.grid(),
        format!("chi_{}({})", batches.len(), first.model_id()),
        first.master_seed(),
        first.rep_range(),
    )
}

/// Per-replication `max_j (chi(t_j) - g(t_j))`.
pub fn sup_statistic<T: Real>(chi: &PathBatch<T>, trend: &TrendSpec<T>) -> Result<Vec<T>> {
    let grid = chi.grid();
    let g: Vec<T> = (0..grid.len())
        .map(|j| trend.eval(grid.point(j)))
        .collect::<Result<_>>()?;
    Ok(chi
        .rows()
        .map(|row| {
            let mut best = T::neg_infinity();
            for (v, gj) in row.iter().zip(&g) {
                let s = *v - *gj;
                if s > best {
                    best = s;
                }
            }
            best
        })
        .collect())
}

/// Exact `P(chi_n(0) > u)` for unit-variance marginals: the regularized
/// upper incomplete gamma `Q(n/2, u^2/2)`.
pub fn exact_chi_survival<T: Real>(n: usize, u: T) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidParameter("chi survival needs n >= 1".into()));
    }
    if !(u >= T::zero()) {
        return Err(Error::InvalidParameter(format!("u must be >= 0, got {u}")));
    }
    if u == T::zero() {
        return Ok(T::one());
    }
    gamma_q(T::of_usize(n) * T::half(), u * u * T::half())
}

/// Monte Carlo estimate of `P(sup_grid (chi_n - g) > u)`.
///
/// The discrete supremum under-estimates the continuous one; refine the grid
/// rule to bound the bias, which is one-sided by construction.
pub fn estimate_tail<T: Real + FftNum>(exp: &ChiExperiment<T>) -> Result<TailEstimate<T>> {
    let (grid, warning) = exp.resolve_grid()?;
    let m = grid.len();
    let trend_on_grid: Vec<T> = (0..m)
        .map(|j| exp.trend.eval(grid.point(j)))
        .collect::<Result<_>>()?;
    let u = exp.level;
    let n_copies = exp.dof;
    let nsim = exp.nsim;
    let seeds = exp.seeds;

    let exceedances: u64 = match &exp.model {
        ProcessModel::Stationary(model) => {
            if m == 1 {
                count_single_point_stationary(n_copies, nsim, u - trend_on_grid[0], &seeds)
            } else {
                let step = grid.step();
                let emb = CirculantEmbedding::from_lag_fn(m, |k| {
                    model.correlation(step * T::of_usize(k))
                })?;
                let pairs = nsim.div_ceil(2);
                (0..pairs)
                    .into_par_iter()
                    .map_init(
                        || StationaryScratch::new(&emb, m),
                        |scr, pair| {
                            let rows = if 2 * pair + 1 < nsim { 2 } else { 1 };
                            scr.acc.iter_mut().for_each(|a| *a = T::zero());
                            for copy in 0..n_copies {
                                let mut rng = seeds.rng(copy as u64, pair as u64);
                                emb.sample_pair(&mut rng, &mut scr.pair, &mut scr.path);
                                for (a, v) in scr.acc.iter_mut().zip(&scr.path) {
                                    *a += *v * *v;
                                }
                            }
                            let mut local = 0u64;
                            for r in 0..rows {
                                if exceeds(&scr.acc[r * m..(r + 1) * m], &trend_on_grid, u) {
                                    local += 1;
                                }
                            }
                            local
                        },
                    )
                    .sum()
            }
        }
        ProcessModel::Nonstationary(model) => {
            if let Some(plan) = FbmCumsumPlan::try_build(model, &grid)? {
                let pairs = nsim.div_ceil(2);
                let sampler = FbmSampler::new(plan.alpha, plan.step, plan.n_incr)?;
                (0..pairs)
                    .into_par_iter()
                    .map_init(
                        || FbmScratchPair::new(&sampler, plan.n_incr),
                        |scr, pair| {
                            let rows = if 2 * pair + 1 < nsim { 2 } else { 1 };
                            scr.acc.iter_mut().for_each(|a| *a = T::zero());
                            for copy in 0..n_copies {
                                let mut rng = seeds.rng(copy as u64, pair as u64);
                                sampler.sample_pair(&mut rng, &mut scr.scratch, &mut scr.path);
                                for (a, v) in scr.acc.iter_mut().zip(&scr.path) {
                                    *a += *v * *v;
                                }
                            }
                            let mut local = 0u64;
                            let k = plan.n_incr;
                            for r in 0..rows {
                                let acc = &scr.acc[r * k..(r + 1) * k];
                                if plan.exceeds(acc, &trend_on_grid, u) {
                                    local += 1;
                                }
                            }
                            local
                        },
                    )
                    .sum()
            } else {
                let pts = grid.points();
                let mut cov = vec![T::zero(); m * m];
                for i in 0..m {
                    for j in 0..=i {
                        let c = model.covariance(pts[i], pts[j])?;
                        cov[i * m + j] = c;
                        cov[j * m + i] = c;
                    }
                }
                let factor = cholesky_with_jitter(&cov, m)?;
                (0..nsim)
                    .into_par_iter()
                    .map_init(
                        || (vec![T::zero(); m], vec![T::zero(); m], vec![T::zero(); m]),
                        |(z, x, acc), rep| {
                            acc.iter_mut().for_each(|a| *a = T::zero());
                            for copy in 0..n_copies {
                                let mut rng = seeds.rng(copy as u64, rep as u64);
                                factor.draw(&mut rng, z, x);
                                for (a, v) in acc.iter_mut().zip(x.iter()) {
                                    *a += *v * *v;
                                }
                            }
                            u64::from(exceeds(acc, &trend_on_grid, u))
                        },
                    )
                    .sum()
            }
        }
    };

    let phat = T::of_usize(exceedances as usize) / T::of_usize(nsim);
    let ci = if exceedances == 0 {
        (T::zero(), clopper_pearson_upper(nsim, exp.confidence))
    } else {
        wilson_interval(exceedances, nsim, exp.confidence)?
    };
    Ok(TailEstimate {
        phat,
        exceedances,
        nsim,
        ci,
        level: u,
        confidence: exp.confidence,
        grid_points: m,
        grid_step: grid.step(),
        master_seed: seeds.master(),
        warning,
    })
}

/// `sup_j sqrt(acc_j) - g_j > u`, without materializing the square roots.
fn exceeds<T: Real>(acc_sq: &[T], trend: &[T], u: T) -> bool {
    for (a, g) in acc_sq.iter().zip(trend) {
        let thr = u + *g;
        if thr < T::zero() || *a > thr * thr {
            return true;
        }
    }
    false
}

fn count_single_point_stationary<T: Real>(
    n_copies: usize,
    nsim: usize,
    threshold: T,
    seeds: &SeedSpec,
) -> u64 {
    let pairs = nsim.div_ceil(2);
    (0..pairs)
        .into_par_iter()
        .map(|pair| {
            let rows = if 2 * pair + 1 < nsim { 2 } else { 1 };
            let mut acc = [T::zero(); 2];
            for copy in 0..n_copies {
                let mut rng = seeds.rng(copy as u64, pair as u64);
                for a in acc.iter_mut().take(rows) {
                    let z: f64 = rng.sample(StandardNormal);
                    let z = T::of(z);
                    *a += z * z;
                }
            }
            let mut local = 0u64;
            for a in acc.iter().take(rows) {
                if threshold < T::zero() || *a > threshold * threshold {
                    local += 1;
                }
            }
            local
        })
        .sum()
}

struct StationaryScratch<T: Real> {
    pair: crate::samplers::PairScratch<T>,
    path: Vec<T>,
    acc: Vec<T>,
}

impl<T: Real + FftNum> StationaryScratch<T> {
    fn new(emb: &CirculantEmbedding<T>, m: usize) -> Self {
        Self {
            pair: emb.make_scratch(),
            path: vec![T::zero(); 2 * m],
            acc: vec![T::zero(); 2 * m],
        }
    }
}

struct FbmScratchPair<T: Real> {
    scratch: crate::samplers::FbmScratch<T>,
    path: Vec<T>,
    acc: Vec<T>,
}

impl<T: Real + FftNum> FbmScratchPair<T> {
    fn new(sampler: &FbmSampler<T>, n_incr: usize) -> Self {
        Self {
            scratch: sampler.make_scratch(),
            path: vec![T::zero(); 2 * n_incr],
            acc: vec![T::zero(); 2 * n_incr],
        }
    }
}

/// Exact fBm sampling through stationary increments, usable when the grid is
/// a suffix of a uniform division of `[0, horizon]`.
struct FbmCumsumPlan<T> {
    alpha: T,
    step: T,
    n_incr: usize,
    /// Increment index of the first grid point (0 means the grid starts at
    /// t = 0, whose path value is identically zero).
    first_index: usize,
    sigma_peak: T,
}

impl<T: Real> FbmCumsumPlan<T> {
    fn try_build(model: &NonstationaryModel<T>, grid: &SampleGrid<T>) -> Result<Option<Self>> {
        let NonstationaryKind::Fbm { alpha } = *model.kind() else {
            return Ok(None);
        };
        if grid.len() < 2 {
            return Ok(None);
        }
        let step = grid.step();
        let total = (model.horizon() / step).round();
        let first = (grid.start() / step).round();
        let tol = T::of(1e-9);
        let aligned = (total * step - model.horizon()).abs() <= tol * model.horizon()
            && (first * step - grid.start()).abs() <= tol * model.horizon()
            && (total - first).as_f64() as usize + 1 == grid.len();
        if !aligned {
            return Ok(None);
        }
        Ok(Some(Self {
            alpha,
            step,
            n_incr: total.as_f64() as usize,
            first_index: first.as_f64() as usize,
            sigma_peak: model.sigma_peak(),
        }))
    }

    /// `acc` holds squared-path sums at increments `1..=n_incr`; the grid
    /// points are increments `first_index..=n_incr`, normalized by the peak
    /// standard deviation. A grid point at t=0 contributes chi = 0.
    fn exceeds(&self, acc: &[T], trend: &[T], u: T) -> bool {
        let peak_sq = self.sigma_peak * self.sigma_peak;
        let mut j = 0usize;
        if self.first_index == 0 {
            let thr = u + trend[0];
            if thr < T::zero() {
                return true;
            }
            j = 1;
        }
        for (i, g) in (self.first_index.max(1)..=self.n_incr).zip(&trend[j..]) {
            let thr = u + *g;
            if thr < T::zero() || acc[i - 1] > thr * thr * peak_sq {
                return true;
            }
        }
        false
    }
}

/// Verification of the sphere representation
/// `sup_t chi_n(t) = sup_{(t,s)} sum_i s_i X_i(t)`: at a fixed time, the
/// maximum of the directional field over unit directions must stay below the
/// Euclidean norm and attain it at `s = X / |X|`.
#[derive(Debug, Clone)]
pub struct SphereReport<T> {
    pub pass: bool,
    /// Largest `<s, X> - |X|` over supplied directions (should be <= 0).
    pub worst_gap: T,
    /// Largest `| <X/|X|, X> - |X| |` (should be ~ 0).
    pub worst_equality_gap: T,
    pub worst_replication: usize,
}

pub fn sphere_check<T: Real>(
    points: &[Vec<T>],
    directions: &[Vec<T>],
    tol: T,
) -> Result<SphereReport<T>> {
    let n = points
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidParameter("need at least one replication".into()))?;
    for s in directions {
        if s.len() != n {
            return Err(Error::ShapeMismatch("direction dimension mismatch".into()));
        }
        let norm: T = s.iter().map(|v| *v * *v).sum::<T>().sqrt();
        if (norm - T::one()).abs() > T::of(1e-9) {
            return Err(Error::InvalidParameter(
                "directions must lie on the unit sphere".into(),
            ));
        }
    }
    let mut worst_gap = T::neg_infinity();
    let mut worst_eq = T::zero();
    let mut worst_rep = 0usize;
    for (rep, x) in points.iter().enumerate() {
        if x.len() != n {
            return Err(Error::ShapeMismatch("replication dimension mismatch".into()));
        }
        let norm: T = x.iter().map(|v| *v * *v).sum::<T>().sqrt();
        for s in directions {
            let dot: T = s.iter().zip(x).map(|(a, b)| *a * *b).sum();
            let gap = dot - norm;
            if gap > worst_gap {
                worst_gap = gap;
                worst_rep = rep;
            }
        }
        if norm > T::zero() {
            // equality at the path's own direction
            let dot: T = x.iter().map(|v| *v * *v).sum::<T>() / norm;
            let eq = (dot - norm).abs();
            if eq > worst_eq {
                worst_eq = eq;
                worst_rep = rep;
            }
        }
    }
    Ok(SphereReport {
        pass: worst_gap <= tol && worst_eq <= tol,
        worst_gap,
        worst_equality_gap: worst_eq,
        worst_replication: worst_rep,
    })
}
