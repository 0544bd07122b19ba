//! Numerical tolerances shared by every module. Tests and runtime checks
//! read from here; nothing else hard-codes a threshold.

/// Single algebraic operations: hermiticity, idempotence, normalization.
pub const ALGEBRAIC: f64 = 1e-12;

/// Sums over many terms: completeness, marginal sums.
pub const ACCUMULATED: f64 = 1e-10;

/// Squared norm below which a vector cannot be normalized.
pub const NORMALIZE_FLOOR: f64 = 1e-30;

/// Born weight below which a projection outcome is treated as impossible.
pub const NULL_OUTCOME: f64 = 1e-15;

/// Norm drift allowed over 1000 unitary steps.
pub const UNITARY_NORM_DRIFT: f64 = 1e-10;

/// Relative drift of `<H>` allowed over a unitary-only segment.
pub const ENERGY_DRIFT: f64 = 1e-8;

/// Shift magnitudes above this trigger a calibration warning.
pub const SHIFT_MAGNITUDE_CEILING: f64 = 1e-3;

/// Width of the statistical acceptance bands, in standard deviations.
pub const SIGMA_BAND: f64 = 3.0;
