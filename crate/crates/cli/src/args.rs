use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Behavioural and evolutionary complexity of Boolean gates.
///
/// Exit codes: 0 success, 1 a requested check failed, 2 bad arguments,
/// 3 unknown gate or invalid value, 4 invalid experiment config,
/// 5 file read or write error, 6 comparison across units or protocols
/// refused, 7 corrupt embedded or stored data.
#[derive(Debug, Parser)]
#[command(name = "gatecx", version, about, long_about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cellular automata driven by a gate.
    #[command(subcommand)]
    Ca(CaCommand),
    /// Run an evolution experiment from a TOML config.
    Evolve(EvolveArgs),
    /// Rank gates by effort and compare with reference hierarchies.
    Hierarchy(HierarchyArgs),
    /// Check every published hierarchy against the embedded tables.
    Report(ReportArgs),
}

#[derive(Debug, Subcommand)]
pub enum CaCommand {
    /// Write a space-time diagram as a P1 PBM and summarise the attractor.
    Run(CaRunArgs),
    /// Classify gates, write neighbourhood-state frequencies and rank.
    Measure(MeasureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Periodic,
    FixedFalse,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("init").required(true).args(["seed", "single_seed"])))]
pub struct CaRunArgs {
    /// Gate used as the local rule (AND, OR, XOR, NAND, NOR).
    #[arg(long)]
    pub gate: String,
    /// Number of cells.
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Seed for a random initial row.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Start from one TRUE cell in the middle.
    #[arg(long)]
    pub single_seed: bool,
    /// Probability of TRUE in a random initial row.
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    pub boundary: BoundaryArg,
    /// Step budget for attractor detection.
    #[arg(long, default_value_t = 1 << 20)]
    pub cap: u64,
    /// PBM output path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Comma-separated binary gates.
    #[arg(long, value_delimiter = ',', default_value = "AND,OR,XOR,NAND,NOR")]
    pub gates: Vec<String>,
    /// First ensemble seed; the frequency files use this seed.
    #[arg(long)]
    pub seed: u64,
    /// Ensemble size; seeds run from --seed upwards.
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Rows written to each frequency CSV, after the initial row.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, default_value_t = 1 << 20)]
    pub cap: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory for record.json, runs.jsonl and stats.csv.
    #[arg(long)]
    pub out: PathBuf,
    /// Repeat the experiment for each of these targets instead of the
    /// config's own target.
    #[arg(long, value_delimiter = ',')]
    pub targets: Vec<String>,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FixtureArg {
    Fig1a,
    Fig1b,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ControllerArg {
    Coevolutionary,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KeyArg {
    Min,
    Max,
    Avg,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("inputs").required(true).multiple(true).args(["fixture", "record"])))]
pub struct HierarchyArgs {
    /// Embedded reference table.
    #[arg(long, value_enum)]
    pub fixture: Vec<FixtureArg>,
    /// Experiment record written by `evolve`.
    #[arg(long)]
    pub record: Vec<PathBuf>,
    /// Keep only rows of this controller (fig1b only).
    #[arg(long, value_enum)]
    pub controller: Option<ControllerArg>,
    /// Keep only rows with this mutation rate (fig1b only).
    #[arg(long)]
    pub rate: Option<u64>,
    #[arg(long, value_enum, default_value_t = KeyArg::Min)]
    pub key: KeyArg,
    /// Reference hierarchy to correlate with: finding1-min, finding1-avg,
    /// finding2, finding2-max, finding2-4000, finding3, finding3-prose.
    #[arg(long)]
    pub reference: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    /// Also measure the behavioural hierarchy and score it.
    #[arg(long)]
    pub behaviour: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
