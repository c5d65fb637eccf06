//! Fixed internal tolerances. Only the report tolerance is user adjustable.

/// Rank and pivot decisions (projectors, frame pivots, xi classification).
pub const RANK: f64 = 1e-8;
/// Gram-Schmidt rejects columns whose residual norm falls below this.
pub const GRAM_SCHMIDT: f64 = 1e-10;
/// Identity residuals computed purely from AD data.
pub const IDENTITY: f64 = 1e-9;
/// Identity residuals that involve a finite-difference oracle.
pub const FD_IDENTITY: f64 = 1e-5;
/// Smallest admissible denominator for sectional curvature.
pub const PLANE: f64 = 1e-14;
/// Relative slack applied to the inequality verdict: `lhs <= rhs + REPORT * max(1, |rhs|)`.
pub const REPORT: f64 = 1e-8;
/// Both gaps below this, relative to `max(1, |rhs|)`, count as equality.
pub const EQUALITY_GAP: f64 = 1e-7;
/// Equality flags compare tensor entries against this.
pub const EQUALITY_FLAG: f64 = 1e-9;
/// Relative agreement required of the closed-form multiplier constraint.
pub const TRIPATHI_CONSTRAINT: f64 = 1e-12;
