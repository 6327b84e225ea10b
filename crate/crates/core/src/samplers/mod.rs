//! Exact Gaussian samplers with reproducible counter-based substreams.
//!
//! Three sampling routes:
//! - circulant embedding for stationary models (FFT, exact marginals),
//! - dense Cholesky with a documented jitter ladder for general covariance
//!   matrices,
//! - tensor-product Cholesky for the separable random fields.
//!
//! Fractional Brownian motion is sampled exactly through its stationary
//! increments (circulant fGn plus cumulative sum).
//!
//! Every sampler is a pure function of `(inputs, SeedSpec)`: replication
//! substreams are derived by counters, never from shared RNG state, so
//! results cannot depend on worker count or scheduling.

mod cholesky;
mod circulant;
mod fbm;
mod field;
mod seeds;

pub use cholesky::{cholesky_with_jitter, sample_gaussian_cholesky, CholeskyFactor, CHOLESKY_DIM_CAP};
pub use circulant::{sample_stationary, CirculantEmbedding, PairScratch, CIRCULANT_EIG_REL_TOL};
pub use fbm::{fgn_correlation, sample_fbm, FbmSampler, FbmScratch};
pub use field::{sample_separable_field, FieldBatch, SeparableFieldSpec};
pub use seeds::SeedSpec;

use crate::{Error, Real, Result};

/// Uniform time grid with `m >= 1` points; `m = 1` is the single point
/// `{start}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleGrid<T> {
    start: T,
    end: T,
    m: usize,
}

impl<T: Real> SampleGrid<T> {
    pub fn new(start: T, end: T, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("grid needs m >= 1".into()));
        }
        if !start.is_finite() || !end.is_finite() || end < start {
            return Err(Error::InvalidParameter(format!(
                "grid requires finite end >= start, got [{start}, {end}]"
            )));
        }
        if m == 1 && end != start {
            return Err(Error::InvalidParameter(
                "a single-point grid must have end == start".into(),
            ));
        }
        Ok(Self { start, end, m })
    }

    /// Single point `{t}`.
    pub fn single(t: T) -> Self {
        Self { start: t, end: t, m: 1 }
    }

    /// Cover `[start, end]` with steps no larger than `max_step`.
    pub fn covering(start: T, end: T, max_step: T) -> Result<Self> {
        if !(max_step > T::zero()) {
            return Err(Error::InvalidParameter("max_step must be > 0".into()));
        }
        if end == start {
            return Ok(Self::single(start));
        }
        let m = ((end - start) / max_step).ceil().as_f64() as usize + 1;
        Self::new(start, end, m.max(2))
    }

    pub fn start(&self) -> T {
        self.start
    }

    pub fn end(&self) -> T {
        self.end
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> T {
        if self.m == 1 {
            T::zero()
        } else {
            (self.end - self.start) / T::of_usize(self.m - 1)
        }
    }

    pub fn point(&self, i: usize) -> T {
        debug_assert!(i < self.m);
        if self.m == 1 {
            self.start
        } else {
            self.start + (self.end - self.start) * T::of_usize(i) / T::of_usize(self.m - 1)
        }
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.m).map(|i| self.point(i)).collect()
    }
}

/// A batch of discretized sample paths on a common grid, one row per
/// independent replication, with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct PathBatch<T> {
    values: Vec<T>,
    batch: usize,
    grid: SampleGrid<T>,
    model_id: String,
    master_seed: u64,
    rep_range: (u64, u64),
}

impl<T: Real> PathBatch<T> {
    pub(crate) fn from_parts(
        values: Vec<T>,
        batch: usize,
        grid: SampleGrid<T>,
        model_id: String,
        master_seed: u64,
        rep_range: (u64, u64),
    ) -> Result<Self> {
        if values.len() != batch * grid.len() || batch == 0 {
            return Err(Error::ShapeMismatch(format!(
                "batch {} x grid {} != values {}",
                batch,
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("path values must be finite".into()));
        }
        Ok(Self { values, batch, grid, model_id, master_seed, rep_range })
    }

    pub fn batch(&self) -> usize {
        self.batch
    }

    pub fn grid(&self) -> &SampleGrid<T> {
        &self.grid
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn rep_range(&self) -> (u64, u64) {
        self.rep_range
    }

    pub fn row(&self, i: usize) -> &[T] {
        let m = self.grid.len();
        &self.values[i * m..(i + 1) * m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.values.chunks(self.grid.len())
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Ensemble mean and variance at one grid index.
    pub fn moments_at(&self, j: usize) -> (T, T) {
        let n = T::of_usize(self.batch);
        let mut sum = T::zero();
        let mut sumsq = T::zero();
        for r in 0..self.batch {
            let v = self.row(r)[j];
            sum += v;
            sumsq += v * v;
        }
        let mean = sum / n;
        (mean, sumsq / n - mean * mean)
    }

    /// Ensemble covariance between two grid indices.
    pub fn covariance_at(&self, j: usize, l: usize) -> T {
        let n = T::of_usize(self.batch);
        let mut sj = T::zero();
        let mut sl = T::zero();
        let mut sjl = T::zero();
        for r in 0..self.batch {
            let a = self.row(r)[j];
            let b = self.row(r)[l];
            sj += a;
            sl += b;
            sjl += a * b;
        }
        sjl / n - (sj / n) * (sl / n)
    }
}
