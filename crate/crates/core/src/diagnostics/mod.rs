//! The distance comparison, the decay of ā, the curvature bound and the
//! convergence metrics, evaluated along normalized trajectories.

mod bounds;
mod convergence;
mod series;

pub use bounds::{
    abar_decay_report, check_abar_decay, check_curvature_bound, check_distance_comparison, curvature_bound,
    curvature_bound_report, distance_comparison_report, tol_geom, BoundPoint, BoundReport, TrajectoryProfiles,
    TOL_CURVATURE, TOL_LOG,
};
pub use convergence::{
    convergence_metrics, convexity_time, derivative_decay, frame_metrics, l2_bound, ConvergenceMetrics,
    ConvergencePoint, DerivativeDecay, IDENTITY_TOL, MIN_DECAY_RATE, ROUND_L2_FLOOR, TOL_L2,
};
pub use series::fill_series;
