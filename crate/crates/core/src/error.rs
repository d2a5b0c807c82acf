use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} does not fit in the platform index range")]
    Overflow { what: &'static str },

    #[error("parity label width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: u32, found: u32 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: expected D = {expected}, found D = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("composition has {found} particles, expected {expected}")]
    ParticleMismatch { expected: u32, found: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("bloch vector has w_0 = 0, outside the chart z_0 != 0")]
    Chart,

    #[error("cat normalization {norm_sq:e} is degenerate; use the limit formulas")]
    DegenerateNorm { norm_sq: f64 },

    #[error("bipartition M = {kept} out of range for N = {particles}")]
    PartitionOutOfRange { particles: u32, kept: u32 },

    #[error("axis {axis} out of range 1..={max}")]
    AxisOutOfRange { axis: usize, max: usize },

    #[error("{particles} particles cannot carry parity with {odd} odd levels")]
    TooFewParticles { particles: u32, odd: u32 },

    #[error("closed form not available for D = {dim}")]
    UnsupportedDimension { dim: usize },

    #[error("directional limit is indeterminate (denominator {denominator:e})")]
    IndeterminateLimit { denominator: f64 },

    #[error("basis size {size} exceeds cap {cap}")]
    BasisTooLarge { size: usize, cap: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("Schmidt eigenvalues sum to {sum}, not 1; the norm evaluation lost precision")]
    TraceDefect { sum: f64 },

    #[error("entropy normalization dimension must be at least 2, got {0}")]
    EntropyDimension(usize),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
