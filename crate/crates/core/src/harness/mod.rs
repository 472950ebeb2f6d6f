//! Curve generators, run specifications, the subcommands and the CLI.

pub mod cli;
pub mod commands;
pub mod generate;
pub mod spec;

pub use commands::{
    cmd_bench, cmd_profile, cmd_run, cmd_sweep, cmd_verify_identities, profile_curve, sweep_specs, BenchRow,
    CheckOutcome, IdentityOptions, IdentitySuite, ProfileOutcome, RunOutcome,
};
pub use generate::{generate, GeneratorSpec};
pub use spec::{default_out_root, Check, ConfigEcho, CurveSource, RunSpec, OUT_DIR_ENV};
