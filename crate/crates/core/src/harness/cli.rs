//! Argument parsing and output for the `csflab` binary.
//!
//! Failures are reported on standard error as one line of JSON
//! `{"kind", "message", "context"}`. Exit codes: 0 success, 1 error,
//! 3 flow finished but a hard check failed (or the identity suite failed).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use super::commands::{
    cmd_bench, cmd_profile, cmd_run, cmd_sweep, cmd_verify_identities, sweep_specs, IdentityOptions, RunOutcome,
};
use super::generate::GeneratorSpec;
use super::spec::{default_out_root, Check, ConfigEcho, CurveSource, RunSpec};
use crate::dynamics::{DtPolicy, FlowConfig, RunKind, Scheme};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "csflab", version, about = "Numerical lab for the normalized curve shortening flow")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Run the flow on a generated or loaded curve and evaluate the checks.
    Run(RunArgs),
    /// Check the identities and inequalities of the comparison function.
    VerifyIdentities(IdentityArgs),
    /// Print ā, t̄ and the extremal pair of a curve file.
    Profile(ProfileArgs),
    /// Time normalized steps of both schemes.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SchemeArg {
    Explicit,
    SemiImplicit,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// circle, ellipse, dumbbell or fourier.
    #[arg(long, conflicts_with_all = ["input", "from_config"])]
    pub generator: Option<String>,
    /// Curve file (JSON or headerless x,y CSV).
    #[arg(long, conflicts_with = "from_config")]
    pub input: Option<PathBuf>,
    /// Re-run the spec echoed in a run directory's config.json.
    #[arg(long)]
    pub from_config: Option<PathBuf>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub neck: Option<f64>,
    #[arg(long)]
    pub modes: Option<u32>,
    /// Seed of the random Fourier generator.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 512)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = SchemeArg::SemiImplicit)]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Use dt = min(dt, c / k_max²) with this safety factor.
    #[arg(long)]
    pub adaptive: Option<f64>,
    /// Integrate the plain flow; end time and stamps are then τ.
    #[arg(long)]
    pub unnormalized: bool,
    #[arg(long, default_value_t = 6.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 20)]
    pub resample_every: usize,
    #[arg(long, default_value_t = 10)]
    pub snapshot_every: usize,
    #[arg(long, default_value_t = 10)]
    pub embed_check_every: usize,
    /// Comma-separated checks, `all` or `none`.
    #[arg(long, default_value = "all")]
    pub check: String,
    /// Run directory; defaults to `$CSFLAB_OUT_DIR/<label>` (or `runs/<label>`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fourier seeds to run in parallel, e.g. `1,2,5` or `1..5`.
    #[arg(long)]
    pub sweep: Option<String>,
    /// Print the run summary as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct IdentityArgs {
    #[arg(long, default_value_t = 400)]
    pub grid_x: usize,
    #[arg(long, default_value_t = 101)]
    pub grid_t: usize,
    /// Adds ε·x to f, for testing that the suite notices.
    #[arg(long, hide = true, default_value_t = 0.0)]
    pub perturb: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    pub input: PathBuf,
    /// Where to write the (i, j, ℓ, d, a) table.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 512)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
}

fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::ConfigError(format!("cannot parse seed list `{text}`"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

impl RunArgs {
    /// The spec these arguments describe.
    pub fn to_spec(&self) -> Result<RunSpec> {
        if let Some(path) = &self.from_config {
            let mut spec = ConfigEcho::read(path)?.spec;
            if let Some(out) = &self.out {
                spec.out_dir = out.clone();
            }
            return Ok(spec);
        }
        let seed = self.seed.unwrap_or(1);
        let source = match (&self.generator, &self.input) {
            (Some(name), None) => {
                let mut params = BTreeMap::new();
                let mut put = |k: &str, v: Option<f64>| {
                    if let Some(v) = v {
                        params.insert(k.to_string(), v);
                    }
                };
                put("r", self.r);
                put("a", self.a);
                put("b", self.b);
                put("neck", self.neck);
                put("modes", self.modes.map(f64::from));
                put("n", Some(self.n as f64));
                if name == "fourier" {
                    put("seed", Some(seed as f64));
                }
                CurveSource::Generator(GeneratorSpec::from_params(name, &params)?)
            }
            (None, Some(path)) => {
                if self.r.or(self.a).or(self.b).or(self.neck).is_some() || self.modes.is_some() {
                    return Err(Error::ConfigError("generator parameters given with --input".into()));
                }
                CurveSource::Input(path.clone())
            }
            _ => return Err(Error::ConfigError("exactly one of --generator, --input or --from-config".into())),
        };
        let config = FlowConfig {
            kind: if self.unnormalized { RunKind::Unnormalized } else { RunKind::Normalized },
            n: self.n,
            scheme: match self.scheme {
                SchemeArg::Explicit => Scheme::Explicit,
                SchemeArg::SemiImplicit => Scheme::SemiImplicit,
            },
            dt: match self.adaptive {
                Some(c) => DtPolicy::Adaptive { c, cap: self.dt },
                None => DtPolicy::Fixed { dt: self.dt },
            },
            t_end: self.t_end,
            resample_every: self.resample_every,
            snapshot_every: self.snapshot_every,
            embed_check_every: self.embed_check_every,
        };
        let out_dir = self.out.clone().unwrap_or_else(|| default_out_root().join(source.label()));
        let spec = RunSpec { source, config, checks: Check::parse_list(&self.check)?, out_dir, seed };
        spec.validate()?;
        Ok(spec)
    }
}

/// One line of JSON describing a failure.
pub fn error_json(e: &Error, context: serde_json::Value) -> String {
    json!({ "kind": e.kind(), "message": e.to_string(), "context": context }).to_string()
}

fn report_error(e: &Error, context: serde_json::Value) -> i32 {
    eprintln!("{}", error_json(e, context));
    EXIT_ERROR
}

fn print_outcome(o: &RunOutcome, as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string(o).unwrap_or_default());
        return;
    }
    println!("run directory: {}", o.dir.display());
    println!("termination: {:?} after {} steps, {} snapshots", o.termination, o.steps, o.snapshots);
    if let Some(t) = o.convex_from {
        println!("convex from t = {t}");
    }
    for c in &o.checks {
        let status = match (c.pass, c.hard) {
            (true, true) => "pass",
            (false, true) => "FAIL",
            (_, false) => "info",
        };
        println!("  {:<20} {:<5} {}", c.check.as_str(), status, c.summary);
    }
}

fn finish_run(result: Result<RunOutcome>, context: serde_json::Value, as_json: bool) -> i32 {
    match result {
        Err(e) => report_error(&e, context),
        Ok(o) => {
            print_outcome(&o, as_json);
            if let Some(e) = o.termination.to_error() {
                report_error(&e, json!({ "dir": o.dir, "termination": o.termination }))
            } else if o.passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
    }
}

fn exec_run(args: &RunArgs) -> i32 {
    let spec = match args.to_spec() {
        Ok(s) => s,
        Err(e) => return report_error(&e, json!({ "command": "run" })),
    };
    let Some(seeds) = &args.sweep else {
        let ctx = json!({ "command": "run", "dir": spec.out_dir });
        return finish_run(cmd_run(&spec), ctx, args.json);
    };
    let specs = match parse_seeds(seeds).and_then(|s| sweep_specs(&spec, &s)) {
        Ok(s) => s,
        Err(e) => return report_error(&e, json!({ "command": "run", "sweep": seeds })),
    };
    let results = cmd_sweep(&specs);
    specs
        .iter()
        .zip(results)
        .map(|(s, r)| finish_run(r, json!({ "command": "run", "seed": s.seed, "dir": s.out_dir }), args.json))
        .max()
        .unwrap_or(EXIT_OK)
}

fn exec_identities(args: &IdentityArgs) -> i32 {
    let opts = IdentityOptions { grid_x: args.grid_x, grid_t: args.grid_t, perturb: args.perturb };
    match cmd_verify_identities(&opts) {
        Err(e) => report_error(&e, json!({ "command": "verify-identities" })),
        Ok(suite) => {
            if args.json {
                println!("{}", serde_json::to_string(&suite).unwrap_or_default());
            } else {
                print!("{}", suite.table());
                if let Some(r) = suite.find("Ltilde f = 0") {
                    println!("max |Ltilde f| = {:e}", r.max_residual);
                }
            }
            if suite.pass() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
    }
}

fn exec_profile(args: &ProfileArgs) -> i32 {
    match cmd_profile(&args.input, args.table.as_deref()) {
        Err(e) => report_error(&e, json!({ "command": "profile", "input": args.input })),
        Ok(p) => {
            if args.json {
                println!("{}", serde_json::to_string(&p).unwrap_or_default());
            } else {
                println!("n = {}", p.n);
                if p.round {
                    println!("a_bar = 0 (round: bound reduces to d >= 2 sin(l/2))");
                } else {
                    println!("a_bar = {:e}", p.a_bar);
                    println!("t_bar = {:e}", p.t_bar.unwrap_or(f64::NAN));
                }
                match p.argmax {
                    Some((i, j)) if i == j => println!("argmax = diagonal at vertex {i}"),
                    Some((i, j)) => println!("argmax = pair ({i}, {j})"),
                    None => println!("argmax = none"),
                }
                println!("diagonal max = {:e}", p.diagonal_max);
                println!("off-diagonal max = {:e}", p.off_diagonal_max);
            }
            EXIT_OK
        }
    }
}

fn exec_bench(args: &BenchArgs) -> i32 {
    match cmd_bench(args.n, args.steps) {
        Err(e) => report_error(&e, json!({ "command": "bench" })),
        Ok(rows) => {
            println!("{:<14} {:>6} {:>12} {:>7} {:>10} {:>12}", "scheme", "n", "dt", "steps", "seconds", "steps/s");
            for r in rows {
                println!(
                    "{:<14} {:>6} {:>12.4e} {:>7} {:>10.4} {:>12.1}",
                    format!("{:?}", r.scheme),
                    r.n,
                    r.dt,
                    r.steps,
                    r.seconds,
                    r.steps_per_second
                );
            }
            EXIT_OK
        }
    }
}

/// Parses `args` (including the program name) and executes; returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return EXIT_OK;
        }
        Err(e) => {
            let msg = e.render().to_string();
            let _ = std::io::stderr().write_all(msg.as_bytes());
            return report_error(&Error::ConfigError(msg.lines().next().unwrap_or("").to_string()), json!({ "command": "parse" }));
        }
    };
    match &cli.command {
        Command::Run(a) => exec_run(a),
        Command::VerifyIdentities(a) => exec_identities(a),
        Command::Profile(a) => exec_profile(a),
        Command::Bench(a) => exec_bench(a),
    }
}
