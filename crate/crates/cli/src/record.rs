use gatecx_core::evolution::{ExperimentConfig, GateStats};
use gatecx_core::hierarchy::{FindingsReport, StatKey};
use gatecx_core::Ranking;
use serde::{Deserialize, Serialize};

pub const RECORD_FILE: &str = "record.json";
pub const RUNS_FILE: &str = "runs.jsonl";
pub const STATS_FILE: &str = "stats.csv";

/// Everything `evolve` produced. Run records live in a sidecar file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub tool: String,
    pub version: String,
    /// Config text as read from disk.
    pub config_source: String,
    /// One resolved config per target, in the order the stats rows appear.
    pub configs: Vec<ExperimentConfig>,
    pub stats: Vec<GateStats>,
    pub runs_file: String,
    pub stats_file: String,
    pub rankings: Vec<KeyedRanking>,
    pub findings: FindingsReport,
    pub wall_clock: WallClock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyedRanking {
    pub key: StatKey,
    pub ranking: Ranking,
    pub chain: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallClock {
    pub started_unix_ms: u128,
    pub elapsed_ms: u128,
    pub workers: usize,
}
