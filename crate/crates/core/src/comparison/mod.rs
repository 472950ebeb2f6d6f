//! The comparison function `f`, its companions `g` and `h`, the implicit
//! chord ratio `a`, the functional `Z`, and numerical checks of the
//! identities and inequalities they satisfy.

mod func;
pub mod identities;
mod profile;
mod ratio;
pub mod taylor;

pub use func::{
    f_eval, f_raw, g, g_prime, h, h_prime, h_second, l_minus_ltilde, l_operator, ltilde, ComparisonFn,
    FValue,
};
pub use identities::{
    check_f_shape, check_g_positive, check_h_convexity, check_l_dominates, check_ltilde, check_ltilde_fd,
    check_subadditive, Grid, IdentityReport,
};
pub use profile::{
    min_z, profile, profile_table, z_eval, ChordArcRecord, ComparisonOffset, MinZ, PairIndex,
    ProfileSummary, DIAGONAL_ROUNDOFF,
    diagonal_roundoff,
};
pub use ratio::{a_diagonal, a_solve, ChordRatio, RatioKind, LOG_RATIO_CAP, RATIO_RTOL};
pub use taylor::{check_taylor_lemma1, AnalyticCurve, Ellipse, TaylorReport};
