use thiserror::Error;

/// Errors raised by the geometry, potential, solver and index routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("invalid masses: {0}")]
    InvalidMasses(String),

    #[error("unsupported spatial dimension {0} (only 2 and 3 are supported)")]
    UnsupportedDimension(usize),

    #[error("collision between bodies {i} and {j} (distance {distance:e})")]
    Collision { i: usize, j: usize, distance: f64 },

    #[error("configuration has zero mass-norm")]
    ZeroNorm,

    #[error("potential is not positive at this configuration (U = {value:e})")]
    NonPositivePotential { value: f64 },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),

    #[error("generator is not in block-diagonal rotation form: {0}")]
    NotBlockForm(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("not a quotient fixed point: alignment residual {residual:e} exceeds {tol:e}")]
    NotQuotientFixedPoint { residual: f64, tol: f64 },

    #[error("degenerate critical point: kernel dimension {kernel_dim}, expected {expected}")]
    Degenerate { kernel_dim: usize, expected: usize },

    #[error("ambiguous spectrum: gap ratio {gap_ratio:e} below {required:e}")]
    AmbiguousSpectrum { gap_ratio: f64, required: f64 },

    #[error("non-maximal isotropy: orbit rank {rank}, expected {expected}")]
    NonMaximalIsotropy { rank: usize, expected: usize },

    #[error("critical point on the cylinder with U = {value:e} <= 0 is not a relative equilibrium")]
    NotAnEquilibrium { value: f64 },

    #[error("projection onto the rotation plane is too small ({ratio:e} of the inertia)")]
    SingularRotationPlane { ratio: f64 },

    #[error("configuration is not planar; it does not rotate rigidly")]
    NotPlanar,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("maximum reached the boundary of the strip at (t, z) = ({t}, {z})")]
    BoundaryMaximum { t: f64, z: f64 },

    #[error("integration blew up at t = {time}")]
    IntegrationBlowUp { time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
