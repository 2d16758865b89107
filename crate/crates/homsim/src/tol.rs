//! Numerical tolerances used across the crate.

/// Tolerance for algebraic identities evaluated in one or two floating-point
/// operations (unitarity defects, probability normalization, phase wrapping).
pub const TOL_ALGEBRAIC: f64 = 1e-12;

/// Tolerance for cross-checks between independent computation routes
/// (closed-form probabilities vs. the permanent oracle), which accumulate
/// more rounding.
pub const TOL_ORACLE: f64 = 1e-10;

/// Agreement required between the closed-form Gaussian overlap and numerical
/// quadrature of the spectral integral.
pub const TOL_OVERLAP: f64 = 1e-6;
