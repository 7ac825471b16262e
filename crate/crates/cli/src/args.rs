//! Command-line surface. Every flag can also be set through a `PCMAP_*`
//! environment variable; an explicit flag wins.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pcmap::chaos::{DEFAULT_BURN, DEFAULT_GAP, DEFAULT_KEEP, DEFAULT_LYAPUNOV_N, DEFAULT_X0};
use pcmap::orbits::DEFAULT_ENTRY_CAP;
use pcmap::periodic::MIN_CYCLE_GRID;

#[derive(Debug, Clone, Parser, Serialize)]
#[command(
    name = "pcmap",
    version,
    about = "Piecewise-continuous interval map dynamics"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Global {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum, env = "PCMAP_FORMAT")]
    pub format: Option<Format>,

    /// Write output here instead of stdout.
    #[arg(long, global = true, env = "PCMAP_OUT")]
    pub out: Option<PathBuf>,

    /// Worker threads for sweeps; 0 picks the machine default.
    #[arg(long, global = true, default_value_t = 0, env = "PCMAP_THREADS")]
    pub threads: usize,

    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 20_240_601, env = "PCMAP_SEED")]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Forward orbit x0, f(x0), ..., f^n(x0).
    Orbit(OrbitArgs),
    /// First time an orbit enters the invariant interval.
    EntryTime(EntryTimeArgs),
    /// Backward orbit of f_{0,b} through the right-branch preimage.
    Preimages(PreimageArgs),
    /// Orbit of the two-species operator on the simplex.
    Simplex(SimplexArgs),
    /// The invariant interval and, when a ≤ b ≤ 4a/(4-a²), its four-set partition.
    InvariantSet(InvariantSetArgs),
    /// Fixed points of f.
    FixedPoints(ParamArgs),
    /// The closed-form 2-cycle, if it exists.
    TwoCycle(ParamArgs),
    /// All cycles up to a given period.
    Cycles(CycleArgs),
    /// Cycles of odd period only.
    OddPeriods(OddArgs),
    /// Lyapunov exponent at one point or along a parameter rule.
    Lyapunov(LyapunovArgs),
    /// Post-transient orbit values along a parameter rule.
    Bifurcation(BifurcationArgs),
    /// Number of bands in the post-transient orbit along a parameter rule.
    Bands(BandArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Orbit(_) => "orbit",
            Command::EntryTime(_) => "entry-time",
            Command::Preimages(_) => "preimages",
            Command::Simplex(_) => "simplex",
            Command::InvariantSet(_) => "invariant-set",
            Command::FixedPoints(_) => "fixed-points",
            Command::TwoCycle(_) => "two-cycle",
            Command::Cycles(_) => "cycles",
            Command::OddPeriods(_) => "odd-periods",
            Command::Lyapunov(_) => "lyapunov",
            Command::Bifurcation(_) => "bifurcation",
            Command::Bands(_) => "bands",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ParamArgs {
    #[arg(long, env = "PCMAP_A")]
    pub a: f64,
    #[arg(long, env = "PCMAP_B")]
    pub b: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, env = "PCMAP_X0")]
    pub x0: f64,
    #[arg(long, default_value_t = 100, env = "PCMAP_N")]
    pub n: usize,
    /// Stop at the first point inside the invariant interval.
    #[arg(long, env = "PCMAP_STOP_ON_ENTRY")]
    pub stop_on_entry: bool,
    /// Stop once f(x) = x exactly.
    #[arg(long, env = "PCMAP_STOP_ON_FIXED_POINT")]
    pub stop_on_fixed_point: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EntryTimeArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, env = "PCMAP_X0")]
    pub x0: f64,
    #[arg(long, default_value_t = DEFAULT_ENTRY_CAP, env = "PCMAP_CAP")]
    pub cap: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PreimageArgs {
    #[arg(long, env = "PCMAP_B")]
    pub b: f64,
    #[arg(long, env = "PCMAP_X0")]
    pub x0: f64,
    #[arg(long, default_value_t = 20, env = "PCMAP_N")]
    pub n: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimplexArgs {
    /// Coefficient of the plain operator, in [-1, 1]; ignored with --b.
    #[arg(long, allow_hyphen_values = true, env = "PCMAP_A")]
    pub a: f64,
    /// Use the piecewise operator with this right-hand coefficient.
    #[arg(long, env = "PCMAP_B")]
    pub b: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_X0, env = "PCMAP_X0")]
    pub x0: f64,
    #[arg(long, default_value_t = 100, env = "PCMAP_N")]
    pub n: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InvariantSetArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Sample points per set for the transition check.
    #[arg(long, default_value_t = 10_000, env = "PCMAP_SAMPLES")]
    pub samples: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CycleArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 7, env = "PCMAP_MAX_PERIOD")]
    pub max_period: usize,
    #[arg(long, default_value_t = MIN_CYCLE_GRID, env = "PCMAP_GRID")]
    pub grid: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OddArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 7, env = "PCMAP_MAX_ODD")]
    pub max_odd: usize,
    #[arg(long, default_value_t = 100_000, env = "PCMAP_GRID")]
    pub grid: usize,
}

/// A single parameter point or a rule-driven sweep over `a`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[arg(
        long,
        conflicts_with = "rule",
        required_unless_present = "rule",
        env = "PCMAP_A"
    )]
    pub a: Option<f64>,
    #[arg(long, requires = "a", env = "PCMAP_B")]
    pub b: Option<f64>,
    /// How b follows a, e.g. `b=a`, `b=a/2`, `b=4a/(4-a^2)`, `b=0.3`, `b=0.7a`.
    #[arg(long, env = "PCMAP_RULE")]
    pub rule: Option<String>,
    #[arg(long, default_value_t = 0.01, env = "PCMAP_A_MIN")]
    pub a_min: f64,
    #[arg(long, default_value_t = 1.0, env = "PCMAP_A_MAX")]
    pub a_max: f64,
    #[arg(long, default_value_t = 100, env = "PCMAP_STEPS")]
    pub steps: usize,
    #[arg(long, default_value_t = DEFAULT_X0, env = "PCMAP_X0")]
    pub x0: f64,
    #[arg(long, default_value_t = DEFAULT_BURN, env = "PCMAP_BURN")]
    pub burn: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LyapunovArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long, default_value_t = DEFAULT_LYAPUNOV_N, env = "PCMAP_N")]
    pub n: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BifurcationArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long, default_value_t = DEFAULT_KEEP, env = "PCMAP_KEEP")]
    pub keep: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BandArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long, default_value_t = DEFAULT_KEEP, env = "PCMAP_KEEP")]
    pub keep: usize,
    #[arg(long, default_value_t = DEFAULT_GAP, env = "PCMAP_GAP")]
    pub gap: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// all, map, invariant-set, periodic, odd-periods, lyapunov, conjugacy or oracle-vs-theorem.
    #[arg(long, default_value = "all", env = "PCMAP_SUITE")]
    pub suite: String,
}
