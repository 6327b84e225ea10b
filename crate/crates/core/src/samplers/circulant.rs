use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftNum, FftPlanner};

use super::{PathBatch, SampleGrid, SeedSpec};
use crate::covmodels::StationaryModel;
use crate::{Error, Real, Result};

/// Relative tolerance for negative circulant eigenvalues: anything below
/// `-tol * max_eig` is a hard error, small negatives are clipped to zero.
pub const CIRCULANT_EIG_REL_TOL: f64 = 1e-9;

/// Circulant embedding of a stationary correlation on a uniform grid of
/// `m >= 2` points. Each FFT yields two independent exact draws.
pub struct CirculantEmbedding<T: Real> {
    m: usize,
    fft_len: usize,
    /// sqrt(eigenvalue / fft_len), premultiplied for sampling.
    scaled_sqrt_eigs: Vec<T>,
    fft: Arc<dyn Fft<T>>,
    /// Fraction of spectral mass removed by clipping small negatives.
    clipped_mass: f64,
}

impl<T: Real + FftNum> CirculantEmbedding<T> {
    /// Build from the correlation at integer lag multiples of the grid step.
    pub fn from_lag_fn(m: usize, lag_corr: impl Fn(usize) -> Result<T>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(
                "circulant embedding needs m >= 2 grid points".into(),
            ));
        }
        let fft_len = (2 * (m - 1)).next_power_of_two();
        let half = fft_len / 2;
        let mut row: Vec<Complex<T>> = Vec::with_capacity(fft_len);
        for j in 0..fft_len {
            let lag = j.min(fft_len - j);
            row.push(Complex::new(lag_corr(lag)?, T::zero()));
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(fft_len);
        fft.process(&mut row);
        debug_assert_eq!(half * 2, fft_len);

        let mut max_eig = T::zero();
        let mut min_eig = T::infinity();
        for c in &row {
            max_eig = max_eig.max(c.re);
            min_eig = min_eig.min(c.re);
        }
        let tol = T::of(CIRCULANT_EIG_REL_TOL) * max_eig;
        if min_eig < -tol {
            return Err(Error::EmbeddingNotPsd {
                min_eigenvalue: min_eig.as_f64(),
                tol: tol.as_f64(),
            });
        }
        let mut clipped = T::zero();
        let mut total = T::zero();
        let scale = T::of_usize(fft_len);
        let scaled_sqrt_eigs = row
            .iter()
            .map(|c| {
                let lam = c.re;
                total += lam.abs();
                if lam < T::zero() {
                    clipped += -lam;
                    T::zero()
                } else {
                    (lam / scale).sqrt()
                }
            })
            .collect();
        Ok(Self {
            m,
            fft_len,
            scaled_sqrt_eigs,
            fft,
            clipped_mass: (clipped / total.max(T::min_positive_value())).as_f64(),
        })
    }

    pub fn grid_points(&self) -> usize {
        self.m
    }

    pub fn fft_len(&self) -> usize {
        self.fft_len
    }

    /// Spectral mass clipped to zero; a bound on the covariance bias.
    pub fn clipped_mass(&self) -> f64 {
        self.clipped_mass
    }

    pub fn make_scratch(&self) -> PairScratch<T> {
        PairScratch {
            buf: vec![Complex::new(T::zero(), T::zero()); self.fft_len],
            scratch: vec![
                Complex::new(T::zero(), T::zero());
                self.fft.get_inplace_scratch_len()
            ],
        }
    }

    /// Draw two independent paths of length `grid_points()` into `out`;
    /// `out.len()` may be `m` (second draw discarded) or `2m`.
    pub fn sample_pair(
        &self,
        rng: &mut impl Rng,
        scratch: &mut PairScratch<T>,
        out: &mut [T],
    ) {
        debug_assert!(out.len() == self.m || out.len() == 2 * self.m);
        for (c, s) in scratch.buf.iter_mut().zip(&self.scaled_sqrt_eigs) {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            *c = Complex::new(*s * T::of(a), *s * T::of(b));
        }
        self.fft
            .process_with_scratch(&mut scratch.buf, &mut scratch.scratch);
        let (first, rest) = out.split_at_mut(self.m.min(out.len()));
        for (o, c) in first.iter_mut().zip(&scratch.buf) {
            *o = c.re;
        }
        if !rest.is_empty() {
            for (o, c) in rest.iter_mut().zip(&scratch.buf) {
                *o = c.im;
            }
        }
    }
}

/// Reusable FFT buffers for one worker.
pub struct PairScratch<T> {
    buf: Vec<Complex<T>>,
    scratch: Vec<Complex<T>>,
}

/// Exact draws of a stationary model on a uniform grid.
///
/// Marginals are standard normal and the lag-`k` correlation is
/// `model.correlation(k * step)` exactly (up to the documented eigenvalue
/// clip). A single-point grid yields i.i.d. standard normals.
pub fn sample_stationary<T: Real + FftNum>(
    model: &StationaryModel<T>,
    grid: &SampleGrid<T>,
    batch: usize,
    seeds: &SeedSpec,
) -> Result<PathBatch<T>> {
    if batch == 0 {
        return Err(Error::InvalidParameter("batch must be >= 1".into()));
    }
    let m = grid.len();
    let mut values = vec![T::zero(); batch * m];
    if m == 1 {
        values
            .par_chunks_mut(2)
            .enumerate()
            .for_each(|(pair, chunk)| {
                let mut rng = seeds.rng(0, pair as u64);
                for v in chunk.iter_mut() {
                    let z: f64 = rng.sample(StandardNormal);
                    *v = T::of(z);
                }
            });
    } else {
        let step = grid.step();
        let emb = CirculantEmbedding::from_lag_fn(m, |k| {
            model.correlation(step * T::of_usize(k))
        })?;
        values
            .par_chunks_mut(2 * m)
            .enumerate()
            .for_each_init(
                || emb.make_scratch(),
                |scratch, (pair, chunk)| {
                    let mut rng = seeds.rng(0, pair as u64);
                    emb.sample_pair(&mut rng, scratch, chunk);
                },
            );
    }
    PathBatch::from_parts(values, batch, *grid, model.id(), seeds.master(), (0, batch as u64))
}
