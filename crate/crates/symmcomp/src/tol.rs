//! Centralized numerical tolerances.
//!
//! Every comparison threshold used by the library and the verification
//! harness is defined here, with its origin. Ad-hoc magic numbers in
//! checks are avoided on purpose.

/// Near machine precision; exact identities after a handful of operations.
pub const EXACT: f64 = 1e-12;

/// Target relative accuracy of the weighted quadratures (triangle and edge).
///
/// The graded singular rules are tuned so per-element relative error stays
/// below this; analytic cross-checks in the test suite verify it.
pub const QUAD_REL: f64 = 1e-8;

/// Relative tolerance of the 1-D adaptive quadratures used for radial
/// profiles and curve integrals.
pub const QUAD_1D_REL: f64 = 1e-10;

/// Relative geometric tolerance: origin-on-boundary rejection is
/// `TAU_GEOM_REL * mesh diameter`.
pub const TAU_GEOM_REL: f64 = 1e-12;

/// Weak-form residual tolerance of the linear (p = 2) solve, relative to
/// the load norm.
pub const SOLVE_P2: f64 = 1e-9;

/// Weak-form residual tolerance of the regularized Newton flow for p > 2.
pub const SOLVE_PGT2: f64 = 1e-7;

/// Initial and final regularization of `(|∇u|² + ε²)^{(p-2)/2}`.
pub const EPS0: f64 = 1e-2;
pub const EPS_MIN: f64 = 1e-6;

/// Newton iteration cap per continuation level.
pub const MAX_NEWTON: usize = 200;

/// Bisection tolerance (relative) of the radial eigenvalue shooting.
pub const EIGEN_SHOOT_REL: f64 = 1e-10;

/// Stationarity residual required of the 1-D radial quotient minimization
/// for p ≠ 2.
pub const EIGEN_RADIAL_STATIONARITY: f64 = 1e-8;

/// Pointwise comparison tolerance is `C_TOL_POINTWISE * h * scale`.
///
/// Calibrated on equality configurations (centered disk with matched
/// constant Robin coefficient), where the measured pointwise gap between
/// the FEM rearrangement and the radial solution stays below `0.5 h`
/// relative to `max v`; factor 2 of headroom.
pub const C_TOL_POINTWISE: f64 = 1.0;

/// Integral (norm) comparison tolerance is `C_TOL_INTEGRAL * h² * scale`
/// for p = 2 and `C_TOL_INTEGRAL * h^{3/2} * scale` for p > 2.
///
/// Calibrated on the same equality configurations; measured relative norm
/// gaps are below `2 h²` at p = 2.
pub const C_TOL_INTEGRAL: f64 = 8.0;

/// Margin regression slack between two refinement levels, relative to the
/// comparison scale (worst measured drift on the verification
/// configurations is -4e-3 of the scale, from the favorable discretization
/// bias shrinking under refinement).
pub const TOL_MESH: f64 = 5e-3;

/// Relative tolerance of the isoperimetric margin on centered disks.
pub const TOL_ISO_REL: f64 = 1e-3;

/// Equimeasurability mismatch allowed on the exact-curve path
/// (analytically constructed distribution curves).
pub const EQUIMEASURE_ANALYTIC: f64 = 1e-8;

/// Equimeasurability mismatch allowed on the P1 mesh pipeline, dominated
/// by the level-grid interpolation of μ.
pub const EQUIMEASURE_P1: f64 = 1e-4;

/// Faber-Krahn margin slack on the equality configuration.
pub const TOL_FK_EQUALITY: f64 = 1e-3;

/// Relative equality tolerance of the boundary flux identity for the
/// radial solution.
pub const FLUX_EQUALITY_REL: f64 = 1e-6;

/// Gronwall extremal families must achieve equality to this.
pub const GRONWALL_EQ: f64 = 1e-10;
