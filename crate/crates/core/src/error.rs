use thiserror::Error;

/// Errors produced by model construction, sampling, and evaluation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Shapes of path batches or grids do not line up.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Circulant embedding produced an eigenvalue below the clip tolerance.
    #[error(
        "circulant embedding is not positive semidefinite: \
         min eigenvalue {min_eigenvalue:e} (tolerance {tol:e})"
    )]
    EmbeddingNotPsd { min_eigenvalue: f64, tol: f64 },

    /// Cholesky factorization failed even at the maximum jitter.
    #[error(
        "covariance factorization failed at leading minor {leading_minor} \
         (max jitter {max_jitter:e})"
    )]
    FactorizationFailed { leading_minor: usize, max_jitter: f64 },

    /// Requested matrix dimension exceeds the configured cap.
    #[error("matrix dimension {dim} exceeds the sampler cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// Theorem hypotheses are violated, so the asymptotic regime is not
    /// guaranteed.
    #[error("asymptotic regime not guaranteed: {0}")]
    RegimeNotGuaranteed(String),

    /// A Pickands/Piterbarg constant is needed but neither an anchor nor an
    /// estimate was supplied.
    #[error("missing constant: {0}")]
    MissingConstant(String),
}
