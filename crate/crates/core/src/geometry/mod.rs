//! Closed polygons and the discrete geometry the flow and the comparison
//! machinery are built on.

mod chord;
mod curve;
mod embed;
mod frame;
pub mod io;
mod resample;
mod vec2;

pub use chord::{chord_arc, shorter_arc, ChordArc};
pub use curve::{canonical_scale, DiscreteCurve, DEGENERATE_EDGE_RATIO, MIN_VERTICES};
pub use embed::{first_intersection, is_embedded};
pub use frame::{build_frame, CurveFrame};
pub(crate) use resample::resample_unchecked;
pub use resample::resample_uniform;
pub use vec2::Vec2;
