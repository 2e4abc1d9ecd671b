use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Interpolation constraints, extension gaps, counterexample search and
/// performance-estimation SDPs.
#[derive(Debug, Parser)]
#[command(name = "interp", version, args_override_self = true)]
pub struct Cli {
    /// Flat `key = value` file mirroring the command-line flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Feasibility and positivity tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Dump every SDP instance built by `pep` as plain text.
    #[arg(long = "dump-sdp", global = true)]
    pub dump_sdp: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    /// In-house interior-point SDP solver (PSD only).
    Ipm,
    /// Clarabel (SOC and PSD).
    Clarabel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variants {
    Tight,
    Classical,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Table1,
    Table3,
    Table4,
    All,
}

/// Family selection: a kind (optionally with inline `key=value` pairs) plus
/// parameter flags.
#[derive(Clone, Debug, Default, Args)]
pub struct FamilyArgs {
    /// e.g. `wc`, `wc-tight`, `smooth-convex`, or `"wc mu=1 B=1"`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long = "B")]
    pub b: Option<f64>,
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(long = "M")]
    pub m: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub exponent: Option<f64>,
    #[arg(long = "f-star")]
    pub f_star: Option<f64>,
    /// Any other parameter as `name=value` (repeatable).
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub extra: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a dataset against a family (exit 1 when violated).
    Check {
        dataset: PathBuf,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Extension gap at a probe point (exit 1 when not extensible).
    Extend {
        dataset: PathBuf,
        #[command(flatten)]
        family: FamilyArgs,
        /// Probe point, comma separated; defaults to the file's `probe_x`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Option<Vec<f64>>,
        /// Also run the brute-force grid oracle (one-dimensional data).
        #[arg(long)]
        grid: bool,
    },
    /// Randomized search for a non-extensible dataset (exit 1 when none).
    Hunt {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 5000)]
        budget: usize,
        /// Independent restarts run in parallel, seeded `seed, seed+1, ...`.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
    },
    /// Re-verify the tabulated counterexamples (exit 1 if any row fails).
    VerifyTables {
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
    },
    /// Weakly convex subgradient PEP bounds with the analytic baselines.
    Pep {
        /// Iteration counts: `3`, `1..5` (inclusive) or `1,2,4`.
        #[arg(long = "N", default_value = "1..5")]
        n: String,
        #[arg(long, default_value_t = 2.0)]
        rho: f64,
        #[arg(long = "R2", default_value_t = 0.125)]
        r2: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long = "B", default_value_t = 1.0)]
        b: f64,
        /// `classical`, `prior` or a positive number.
        #[arg(long, default_value = "classical")]
        h: String,
        #[arg(long, value_enum, default_value_t = Variants::Both)]
        variant: Variants,
        #[arg(long, value_enum, default_value_t = Backend::Ipm)]
        backend: Backend,
        /// Run the gradient-descent calibration instead.
        #[arg(long)]
        gd: bool,
    },
    /// Admissible f of a second point as a function of its gradient.
    Region {
        /// Anchor triple `x,f,g`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        anchor: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long = "family-a")]
        family_a: String,
        #[arg(long = "family-b")]
        family_b: String,
        /// Parameters shared by both families.
        #[command(flatten)]
        params: FamilyArgs,
        #[arg(long = "g-min", default_value_t = -1.0, allow_hyphen_values = true)]
        g_min: f64,
        #[arg(long = "g-max", default_value_t = 1.0, allow_hyphen_values = true)]
        g_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
}

impl Command {
    pub const NAMES: [&'static str; 6] =
        ["check", "extend", "hunt", "verify-tables", "pep", "region"];
}
