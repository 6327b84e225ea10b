use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{PathBatch, SampleGrid, SeedSpec};
use crate::{Error, Real, Result};

/// Dimension guardrail for dense factorizations; larger stationary requests
/// should go through the circulant sampler.
pub const CHOLESKY_DIM_CAP: usize = 4096;

/// Jitter ladder, as multiples of `trace / dim`.
const JITTER_LADDER: [f64; 4] = [0.0, 1e-12, 1e-10, 1e-8];

/// Packed lower-triangular Cholesky factor of `cov + jitter * I`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor<T> {
    dim: usize,
    l: Vec<T>,
    jitter: T,
}

impl<T: Real> CholeskyFactor<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Jitter that was actually applied (0 when the matrix factored cleanly).
    pub fn jitter(&self) -> T {
        self.jitter
    }

    /// `out = L z` for a standard normal vector `z`.
    pub fn transform(&self, z: &[T], out: &mut [T]) {
        debug_assert_eq!(z.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        for i in 0..self.dim {
            let row = &self.l[i * (i + 1) / 2..i * (i + 1) / 2 + i + 1];
            let mut acc = T::zero();
            for (lij, zj) in row.iter().zip(&z[..=i]) {
                acc += *lij * *zj;
            }
            out[i] = acc;
        }
    }

    /// Draw one exact sample into `out`, using `z` as scratch.
    pub fn draw(&self, rng: &mut impl Rng, z: &mut [T], out: &mut [T]) {
        for zi in z.iter_mut() {
            let v: f64 = rng.sample(StandardNormal);
            *zi = T::of(v);
        }
        self.transform(z, out);
    }
}

/// Factor a symmetric covariance with the smallest jitter in
/// `{0, 1e-12, 1e-10, 1e-8} * trace/dim` that makes Cholesky succeed.
pub fn cholesky_with_jitter<T: Real>(cov: &[T], dim: usize) -> Result<CholeskyFactor<T>> {
    if dim == 0 || cov.len() != dim * dim {
        return Err(Error::ShapeMismatch(format!(
            "covariance must be dim x dim, got len {} for dim {dim}",
            cov.len()
        )));
    }
    if dim > CHOLESKY_DIM_CAP {
        return Err(Error::DimensionCap { dim, cap: CHOLESKY_DIM_CAP });
    }
    let scale = {
        let mut max_abs = T::zero();
        for v in cov {
            if !v.is_finite() {
                return Err(Error::InvalidParameter("covariance must be finite".into()));
            }
            max_abs = max_abs.max(v.abs());
        }
        max_abs.max(T::min_positive_value())
    };
    let sym_tol = T::of(1e-12) * scale;
    for i in 0..dim {
        for j in (i + 1)..dim {
            if (cov[i * dim + j] - cov[j * dim + i]).abs() > sym_tol {
                return Err(Error::InvalidParameter(format!(
                    "covariance is not symmetric at ({i},{j})"
                )));
            }
        }
    }
    let mut trace = T::zero();
    for i in 0..dim {
        trace += cov[i * dim + i];
    }
    let base = trace.max(T::zero()) / T::of_usize(dim);

    let mut last_minor = 0usize;
    for mult in JITTER_LADDER {
        let jitter = T::of(mult) * base;
        match try_factor(cov, dim, jitter) {
            Ok(l) => return Ok(CholeskyFactor { dim, l, jitter }),
            Err(minor) => last_minor = minor,
        }
    }
    Err(Error::FactorizationFailed {
        leading_minor: last_minor,
        max_jitter: (T::of(JITTER_LADDER[3]) * base).as_f64(),
    })
}

/// Packed Cholesky; on failure returns the index of the offending leading
/// minor.
fn try_factor<T: Real>(cov: &[T], dim: usize, jitter: T) -> std::result::Result<Vec<T>, usize> {
    let mut l = vec![T::zero(); dim * (dim + 1) / 2];
    for i in 0..dim {
        for j in 0..=i {
            let mut acc = cov[i * dim + j];
            if i == j {
                acc += jitter;
            }
            let ri = i * (i + 1) / 2;
            let rj = j * (j + 1) / 2;
            for k in 0..j {
                acc -= l[ri + k] * l[rj + k];
            }
            if i == j {
                if !(acc > T::zero()) {
                    return Err(i);
                }
                l[ri + j] = acc.sqrt();
            } else {
                l[ri + j] = acc / l[rj + j];
            }
        }
    }
    Ok(l)
}

/// Exact draws of `N(0, cov + jitter I)` on the given grid; one row per
/// replication.
pub fn sample_gaussian_cholesky<T: Real>(
    cov: &[T],
    grid: &SampleGrid<T>,
    batch: usize,
    seeds: &SeedSpec,
) -> Result<PathBatch<T>> {
    if batch == 0 {
        return Err(Error::InvalidParameter("batch must be >= 1".into()));
    }
    let dim = grid.len();
    let factor = cholesky_with_jitter(cov, dim)?;
    let mut values = vec![T::zero(); batch * dim];
    values
        .par_chunks_mut(dim)
        .enumerate()
        .for_each_init(
            || vec![T::zero(); dim],
            |z, (rep, out)| {
                let mut rng = seeds.rng(0, rep as u64);
                factor.draw(&mut rng, z, out);
            },
        );
    PathBatch::from_parts(
        values,
        batch,
        *grid,
        format!("cholesky(dim={dim},jitter={:e})", factor.jitter().as_f64()),
        seeds.master(),
        (0, batch as u64),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index_grid(m: usize) -> SampleGrid<f64> {
        if m == 1 {
            SampleGrid::single(0.0)
        } else {
            SampleGrid::new(0.0, (m - 1) as f64, m).unwrap()
        }
    }

    #[test]
    fn identity_gives_independent_normals() {
        let dim = 3;
        let mut cov = vec![0.0; 9];
        for i in 0..dim {
            cov[i * dim + i] = 1.0;
        }
        let batch = 50_000;
        let paths =
            sample_gaussian_cholesky(&cov, &index_grid(3), batch, &SeedSpec::new(4)).unwrap();
        for j in 0..3 {
            let (_, var) = paths.moments_at(j);
            assert!((var - 1.0).abs() < 3.0 * (2.0_f64 / batch as f64).sqrt());
        }
        assert!(paths.covariance_at(0, 2).abs() < 4.0 / (batch as f64).sqrt());
    }

    #[test]
    fn brownian_covariance_oracle() {
        // Bi-fBm with K=1, H=1/2 is Brownian motion: Cov = min(s,t).
        let m = 64;
        let grid = SampleGrid::new(1.0 / m as f64, 1.0, m).unwrap();
        let pts = grid.points();
        let mut cov = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                cov[i * m + j] = pts[i].min(pts[j]);
            }
        }
        let batch = 100_000;
        let paths = sample_gaussian_cholesky(&cov, &grid, batch, &SeedSpec::new(21)).unwrap();
        for (i, j) in [(5usize, 40usize), (20, 20), (0, 63)] {
            let got = paths.covariance_at(i, j);
            let want = pts[i].min(pts[j]);
            let se = 1.2 / (batch as f64).sqrt(); // rough bound, values <= 1
            assert!((got - want).abs() < 4.0 * se, "({i},{j}): {got} vs {want}");
        }
    }

    #[test]
    fn indefinite_matrix_errors_at_max_jitter() {
        // eigenvalues {3, -1}
        let cov = vec![1.0, 2.0, 2.0, 1.0];
        let err = cholesky_with_jitter(&cov, 2).unwrap_err();
        match err {
            Error::FactorizationFailed { leading_minor, .. } => assert_eq!(leading_minor, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn singular_psd_succeeds_with_reported_jitter() {
        // rank-1 matrix t t^T needs a positive jitter step
        let t = [1.0, 2.0, 3.0];
        let mut cov = vec![0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                cov[i * 3 + j] = t[i] * t[j];
            }
        }
        let f = cholesky_with_jitter(&cov, 3).unwrap();
        assert!(f.jitter() > 0.0);
    }

    #[test]
    fn rejects_asymmetric_and_capped() {
        let cov = vec![1.0, 0.5, 0.1, 1.0];
        assert!(matches!(
            cholesky_with_jitter(&cov, 2),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            cholesky_with_jitter(&vec![0.0; (CHOLESKY_DIM_CAP + 1) * (CHOLESKY_DIM_CAP + 1)], CHOLESKY_DIM_CAP + 1),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let mut cov = vec![0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                cov[i * 4 + j] = 0.9_f64.powi((i as i32 - j as i32).abs());
            }
        }
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                sample_gaussian_cholesky(&cov, &index_grid(4), 101, &SeedSpec::new(8)).unwrap()
            })
        };
        assert_eq!(run(1).values(), run(4).values());
    }
}
