//! Time integration of the curve shortening flow, plain and
//! length-normalized, and the clock maps between the two.

mod clock;
mod config;
pub mod persist;
mod run;
mod stepper;
pub mod tridiag;

pub use clock::{normalize_trajectory, recover_unnormalized, shrinking_circle_trajectory, ClockMap};
pub use config::{DtPolicy, FlowConfig, RunKind, Scheme, EXPLICIT_SAFETY};
pub use persist::{RunDirectory, SeriesRow};
pub use run::{run, Termination, Trajectory, MIN_DT};
pub use stepper::{explicit_dt_limit, step_normalized, step_unnormalized, Snapshot};
