use rand::Rng;
use rayon::prelude::*;
use rustfft::FftNum;

use super::circulant::{CirculantEmbedding, PairScratch};
use super::{PathBatch, SampleGrid, SeedSpec};
use crate::{Error, Real, Result};

/// Autocorrelation of unit-variance fractional Gaussian noise at integer
/// lag `k`, for fBm variance exponent `alpha` (Hurst `alpha/2`):
/// `rho(k) = ((k+1)^alpha - 2 k^alpha + |k-1|^alpha) / 2`.
pub fn fgn_correlation<T: Real>(alpha: T, k: usize) -> T {
    if k == 0 {
        return T::one();
    }
    let k = T::of_usize(k);
    ((k + T::one()).powf(alpha) - T::two() * k.powf(alpha)
        + (k - T::one()).abs().powf(alpha))
        * T::half()
}

/// Exact fBm sampler on the uniform grid `step, 2 step, ..., n_incr * step`
/// (the path starts at 0, which is not stored).
///
/// Draws stationary increments by circulant embedding and accumulates them,
/// which is exact and O(n log n) per pair of paths.
pub struct FbmSampler<T: Real> {
    emb: CirculantEmbedding<T>,
    n_incr: usize,
    increment_scale: T,
    alpha: T,
    step: T,
}

impl<T: Real + FftNum> FbmSampler<T> {
    /// `alpha` in (0, 2] is the variance exponent (`Var B(t) = t^alpha`).
    pub fn new(alpha: T, step: T, n_incr: usize) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::two()) {
            return Err(Error::InvalidParameter(format!(
                "fBm sampler requires alpha in (0,2], got {alpha}"
            )));
        }
        if !(step > T::zero()) || n_incr == 0 {
            return Err(Error::InvalidParameter(
                "fBm sampler requires step > 0 and n_incr >= 1".into(),
            ));
        }
        let emb = if n_incr == 1 {
            // Embedding needs two points; a single increment is one normal,
            // handled by a 2-point embedding whose second value is unused.
            CirculantEmbedding::from_lag_fn(2, |k| Ok(fgn_correlation(alpha, k)))?
        } else {
            CirculantEmbedding::from_lag_fn(n_incr, |k| Ok(fgn_correlation(alpha, k)))?
        };
        Ok(Self {
            emb,
            n_incr,
            increment_scale: step.powf(alpha * T::half()),
            alpha,
            step,
        })
    }

    pub fn n_incr(&self) -> usize {
        self.n_incr
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn make_scratch(&self) -> FbmScratch<T> {
        FbmScratch {
            pair: self.emb.make_scratch(),
            fgn: vec![T::zero(); 2 * self.emb.grid_points()],
        }
    }

    /// Fill `out` (length `n_incr` or `2 n_incr`) with one or two exact fBm
    /// paths evaluated at `step .. n_incr * step`.
    pub fn sample_pair(
        &self,
        rng: &mut impl Rng,
        scratch: &mut FbmScratch<T>,
        out: &mut [T],
    ) {
        debug_assert!(out.len() == self.n_incr || out.len() == 2 * self.n_incr);
        let ncols = self.emb.grid_points();
        self.emb.sample_pair(rng, &mut scratch.pair, &mut scratch.fgn);
        let rows = out.len() / self.n_incr;
        for r in 0..rows {
            let src = &scratch.fgn[r * ncols..r * ncols + self.n_incr];
            let dst = &mut out[r * self.n_incr..(r + 1) * self.n_incr];
            let mut acc = T::zero();
            for (d, s) in dst.iter_mut().zip(src) {
                acc += *s * self.increment_scale;
                *d = acc;
            }
        }
    }
}

pub struct FbmScratch<T> {
    pair: PairScratch<T>,
    fgn: Vec<T>,
}

/// Batch of exact fBm paths on `step .. n_incr * step`.
pub fn sample_fbm<T: Real + FftNum>(
    alpha: T,
    step: T,
    n_incr: usize,
    batch: usize,
    seeds: &SeedSpec,
) -> Result<PathBatch<T>> {
    if batch == 0 {
        return Err(Error::InvalidParameter("batch must be >= 1".into()));
    }
    let sampler = FbmSampler::new(alpha, step, n_incr)?;
    let grid = SampleGrid::new(step, step * T::of_usize(n_incr), n_incr)?;
    let mut values = vec![T::zero(); batch * n_incr];
    values
        .par_chunks_mut(2 * n_incr)
        .enumerate()
        .for_each_init(
            || sampler.make_scratch(),
            |scratch, (pair, chunk)| {
                let mut rng = seeds.rng(0, pair as u64);
                sampler.sample_pair(&mut rng, scratch, chunk);
            },
        );
    PathBatch::from_parts(
        values,
        batch,
        grid,
        format!("fbm(alpha={alpha})"),
        seeds.master(),
        (0, batch as u64),
    )
}
