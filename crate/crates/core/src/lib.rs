//! Numerical laboratory for the length-normalized curve shortening flow of
//! closed embedded plane curves.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: polygonal curves, their discrete frames, chords and arcs,
//!   embeddedness, resampling and scaling.
//! - [`dynamics`]: time stepping of the plain and the length-normalized
//!   flow, run orchestration and the clock maps between the two.
//! - [`comparison`]: the chord comparison function `f`, its companions, the
//!   implicit chord ratio `a`, the functional `Z` and the identity checks.
//! - [`diagnostics`]: the distance comparison, ratio decay, curvature and
//!   convergence bounds evaluated along trajectories.
//! - [`harness`]: curve generators, run specifications and the commands
//!   behind the `csflab` binary.

// `!(x > 0.0)` is the idiom used throughout to reject NaN together with
// non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comparison;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod harness;

pub use error::{Error, Result};
pub use geometry::{CurveFrame, DiscreteCurve, Vec2};

/// Version string recorded in run directories.
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Length of a canonically scaled curve.
pub const TWO_PI: f64 = std::f64::consts::TAU;
