//! Numerical tolerances used across the library, stated once and referenced
//! by operations and tests. The hierarchy tracks how much floating-point
//! error each kind of quantity can accumulate.

/// Identities that hold by construction (entries copied or conjugated, no
/// products): a handful of ulps at double precision.
pub const TOL_CONSTRUCTOR: f64 = 1e-12;

/// Identities established by a single matrix product or commutator: entries
/// are O(N) sums of O(N)-sized terms, so roundoff grows past 1e-12 but stays
/// far below 1e-10 for cutoffs of a few hundred.
pub const TOL_PRODUCT: f64 = 1e-10;

/// Quantities obtained through eigendecomposition-based evolution or long
/// summation: backward-stable but iterative, so a further two digits slack.
pub const TOL_EVOLVED: f64 = 1e-8;

/// Hermiticity check applied before eigendecomposition-based evolution.
pub const HERMITICITY_LIMIT: f64 = 1e-10;

/// Unitarity contract on evolution output, ||U^dag U - I||_max.
pub const UNITARITY_LIMIT: f64 = 1e-9;

/// Normalization contract on constructed states.
pub const NORM_LIMIT: f64 = 1e-12;

/// Truncated-tail probability mass allowed when projecting an analytic state
/// onto a finite Fock basis; keeps truncation error below TOL_EVOLVED in all
/// downstream closed-form comparisons.
pub const TAIL_MASS_LIMIT: f64 = 1e-10;

/// Probability mass allowed off the fixed-total shell of a multi-mode state
/// built by repeated creator application (structurally zero; guards slots
/// that were never written).
pub const OFF_SHELL_LIMIT: f64 = 1e-12;

/// Norm deficit beyond which a multi-mode state is rejected as inconsistent
/// rather than silently renormalized.
pub const NORM_DEFICIT_LIMIT: f64 = 1e-9;

/// Relative term size at which the modified-Bessel power series stops:
/// below one ulp of the partial sum, so the truncation is invisible at
/// double precision.
pub const BESSEL_SERIES_REL: f64 = 1e-17;

/// |z| bound for the Bessel series: e^700 is the last comfortable decade
/// below f64 overflow (e^709.78).
pub const BESSEL_ARG_LIMIT: f64 = 700.0;

/// Amplitude-count guard for multi-mode tensor states ((n+1)^m entries).
pub const STATE_DIM_GUARD: usize = 10_000_000;
