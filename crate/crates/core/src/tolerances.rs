//! Numeric tolerances pinned in one place.
//!
//! Every threshold that a solver, certificate, or test asserts against lives
//! here, so changing a tolerance is an auditable one-line diff.

/// Absolute error allowed on a single factor geodesic length.
pub const LENGTH_ABS_TOL: f64 = 1e-9;

/// Residual allowed when solving the angular boundary condition of a factor
/// geodesic (difference between requested and realized angle gap).
pub const DTHETA_TOL: f64 = 1e-8;

/// Allowed violation of the Clairaut first integral along a sampled factor
/// geodesic.
pub const CLAIRAUT_TOL: f64 = 1e-7;

/// Allowed (negative) slack in the comparison-triangle inequality before a
/// configuration counts as a curvature violation.
pub const TRIANGLE_TOL: f64 = 1e-6;

/// Angle certificate slack: directions at a circumcenter must make angle at
/// least `pi/2 - ANGLE_CERT_TOL` with the circumset witnesses.
pub const ANGLE_CERT_TOL: f64 = 1e-3;

/// Two circumcenter runs from independent seeds must land within this
/// fraction of the circumradius of each other.
pub const RESTART_TOL: f64 = 1e-6;

/// Minimum relative radius improvement per polish step; below this the
/// circumcenter iteration is declared stationary.
pub const RADIUS_IMPROVEMENT: f64 = 1e-10;

/// Hard cap on circumcenter iterations across all phases.
pub const ITER_CAP: usize = 100_000;

/// Points within this fraction of the circumradius of the farthest distance
/// belong to the circumset.
pub const CIRCUMSET_BAND: f64 = 1e-6;

/// Reconstruction error allowed for a Caratheodory decomposition, relative
/// to the diameter scale of the input.
pub const CARATHEODORY_TOL: f64 = 1e-10;

/// Slack allowed at each link of the finite-rank inequality chain.
pub const CHAIN_TOL: f64 = 1e-8;

/// First-variation residual allowed at a distance minimizer.
pub const FV_TOL: f64 = 1e-4;

/// Smallest parameter offset used by the comparison-angle limit; below this
/// the difference quotients lose all significant digits.
pub const ANGLE_FLOOR_T: f64 = 1e-7;

/// Radii below this count as exactly at the cone vertex.
pub const VERTEX_MARGIN: f64 = 1e-12;
