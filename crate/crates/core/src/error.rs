use thiserror::Error;

/// Failure modes across the library, split into two classes: precondition
/// violations (caller passed something invalid) and numerical guards
/// (computation refused to proceed because a bound would be exceeded).
/// The CLI maps the two classes to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("cutoff precondition violated: cutoff must be >= {min}, got {got}")]
    CutoffTooSmall { got: usize, min: usize },

    #[error("cutoff mismatch precondition violated: {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("margin precondition violated: margin {margin} must be < cutoff {cutoff}")]
    MarginTooLarge { margin: usize, cutoff: usize },

    #[error("margin precondition violated: margin must be >= {min}, got {got}")]
    MarginTooSmall { got: usize, min: usize },

    #[error("basis precondition violated: basis must be nonempty")]
    EmptyBasis,

    #[error("hermiticity precondition violated: max |H - H^dag| = {deviation:.3e} exceeds {limit:.3e}")]
    NotHermitian { deviation: f64, limit: f64 },

    #[error("kappa precondition violated: {0} is not 1/4 or a positive half-integer")]
    InvalidKappa(f64),

    #[error("mode count precondition violated: m must be >= 1")]
    ZeroModes,

    #[error("dimension precondition violated: {0}")]
    DimensionMismatch(String),

    #[error("state is not normalized: norm {0} differs from 1 beyond 1e-12")]
    NotNormalized(f64),

    #[error("gamma precondition violated: gamma must be >= 1, got {0}")]
    InvalidGamma(f64),

    #[error("speed precondition violated: |v| = {speed} must be < c = {c}")]
    SuperluminalSpeed { speed: f64, c: f64 },

    #[error("positivity precondition violated: {name} must be > 0, got {got}")]
    NonPositive { name: &'static str, got: f64 },

    #[error("series exponent precondition violated: mu must be >= 1, got {0}")]
    InvalidSeriesExponent(f64),

    #[error("block index precondition violated: n must be >= 1 (n = 0 is the decoupled ground level)")]
    GroundBlock,

    #[error("time grid precondition violated: times must be strictly increasing")]
    NonMonotoneTimes,

    #[error("memory guard: state dimension {dim} exceeds guard {guard}")]
    MemoryGuard { dim: usize, guard: usize },

    #[error("tail-mass guard: truncated mass {mass:.3e} exceeds {limit:.3e}; increase the cutoff")]
    TailMass { mass: f64, limit: f64 },

    #[error("overflow guard: |z| = {0} exceeds the Bessel series bound 700")]
    BesselOverflow(f64),

    #[error("consistency guard: {0}")]
    Inconsistency(String),
}

impl Error {
    /// True for caller-facing precondition violations (CLI exit 2); false for
    /// internal numerical guards (CLI exit 1).
    pub fn is_precondition(&self) -> bool {
        !matches!(
            self,
            Error::MemoryGuard { .. }
                | Error::TailMass { .. }
                | Error::BesselOverflow(_)
                | Error::Inconsistency(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
