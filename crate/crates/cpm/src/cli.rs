//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::table::Format;

#[derive(Debug, Parser)]
#[command(
    name = "cpm",
    version,
    about = "Compound Poisson moments: exact values, asymptotics, tilted laws and graph simulations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of M_k(x) for k = 0..=K.
    Moments(MomentsArgs),
    /// Saddle point, rate and prefactor at one chi.
    Rate(RateArgs),
    /// Exact log-moments against the refined prediction along x = chi k.
    Compare(CompareArgs),
    /// Probability mass function of the tilted auxiliary law.
    Aux(AuxArgs),
    /// Monte Carlo deviation probabilities of the maximal weighted degree.
    Graphsim(GraphsimArgs),
    /// Bell polynomial B_k(x); the Bell number when x = 1.
    Bell(BellArgs),
    /// Closed-form and combinatorial identity checks.
    Identities(IdentitiesArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    /// unit | gaussian:V2 | gamma:m,theta | bernoulli | exponential | logfact | custom:path.json
    #[arg(long)]
    pub weights: String,
    /// Largest order.
    #[arg(long)]
    pub k: usize,
    /// Intensity; decimals and fractions are read exactly.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Require exact rational arithmetic.
    #[arg(long, conflicts_with_all = ["log", "finite_n"])]
    pub exact: bool,
    /// Log-space recurrence (large orders).
    #[arg(long, conflicts_with = "finite_n")]
    pub log: bool,
    /// Pre-limit moments for a population of this size.
    #[arg(long = "finite-n")]
    pub finite_n: Option<u64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(long)]
    pub weights: String,
    #[arg(long, allow_hyphen_values = true)]
    pub chi: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub weights: String,
    #[arg(long, allow_hyphen_values = true)]
    pub chi: f64,
    #[arg(long = "k-max")]
    pub k_max: usize,
    /// Spacing of the order ladder.
    #[arg(long = "k-step", default_value_t = 1)]
    pub k_step: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct AuxArgs {
    #[arg(long)]
    pub weights: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub u: f64,
    #[arg(long = "mass-tol", default_value_t = cpm_core::auxdist::DEFAULT_MASS_TOLERANCE)]
    pub mass_tol: f64,
    /// Also report the local limit ratio at this chi (needs --k).
    #[arg(long = "llt-chi", requires = "k")]
    pub llt_chi: Option<f64>,
    #[arg(long, requires = "llt_chi")]
    pub k: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct GraphsimArgs {
    #[arg(long)]
    pub n: usize,
    /// rho = kappa ln n.
    #[arg(
        long,
        conflicts_with = "rho",
        required_unless_present = "rho",
        allow_hyphen_values = true
    )]
    pub kappa: Option<f64>,
    /// Edge intensity; the edge probability is rho / n.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub weights: String,
    /// Deviation levels, comma separated.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub s: Vec<f64>,
    /// Read --s as multiples of the analytic threshold.
    #[arg(long)]
    pub relative: bool,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Falls back to CPM_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct BellArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub x: String,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[command(flatten)]
    pub output: Output,
}
