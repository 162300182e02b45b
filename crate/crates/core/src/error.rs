//! Error conditions surfaced by the computation modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Eigenvalues closer than the degeneracy threshold; eigenvectors ill-defined.
    #[error("degenerate spectrum: gap {gap:.3e} rad/us below threshold")]
    DegenerateSpectrum { gap: f64 },

    /// Closed-form eigenstates requested at the degeneracy Δ = Ω = 0.
    #[error("degenerate point: Delta = Omega = 0")]
    DegeneratePoint,

    /// A finite-difference stencil touched a degenerate point.
    #[error("degenerate point inside finite-difference stencil")]
    DegenerateNeighborhood,

    /// A Wilson-loop evaluation crossed a degeneracy.
    #[error("degenerate point on integration loop")]
    DegenerateOnLoop,

    /// |Δ₂| = |Δ₁|: the degeneracy sits on the parameter manifold and the
    /// Chern number is ill-defined.
    #[error("boundary degeneracy at |Delta2/Delta1| = 1 (ratio {ratio})")]
    BoundaryDegeneracy { ratio: f64 },

    /// Metric coordinate-singular (poles of the (θ, φ) chart).
    #[error("singular metric near theta = {theta}")]
    SingularMetric { theta: f64 },

    /// Field evaluation at the monopole position.
    #[error("field evaluated at the origin")]
    OriginSingularity,

    /// Patch potential evaluated on or too close to its excluded axis.
    #[error("vector potential evaluated on its string axis (theta = {theta})")]
    StringSingularity { theta: f64 },

    /// Integrator norm drift above tolerance; the step size is too large.
    #[error("norm drift {drift:.3e} exceeds 1e-7; reduce dt")]
    NormDrift { drift: f64 },

    /// Out-of-contract argument (bad grid, range, or flag value).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that signal caller mistakes rather than failed computations.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidInput(_))
    }
}
