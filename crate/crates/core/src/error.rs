use std::path::PathBuf;

use thiserror::Error;

use crate::evolution::EffortUnit;
use crate::gates::Gate;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{gate} takes {expected} input(s), got {got}")]
    ArityMismatch { gate: Gate, expected: usize, got: usize },
    #[error("{0} is unary and has no cellular-automaton reading")]
    UnaryGate(Gate),
    #[error("unknown gate name `{0}`")]
    UnknownGate(String),
    #[error("density {0} is outside [0, 1]")]
    InvalidDensity(f64),
    #[error("lattice needs at least 3 cells, got {0}")]
    LatticeTooSmall(usize),
    #[error("neighbourhood frequencies need a periodic boundary")]
    NotPeriodic,
    #[error("count vector sums to zero")]
    ZeroSumVector,
    #[error("ensemble has no seeds")]
    EmptyEnsemble,
    #[error("invalid genotype: {0}")]
    InvalidGenotype(String),
    #[error("genotype kind does not match substrate kind")]
    KindMismatch,
    #[error("cannot compare efforts in {0} with efforts in {1}")]
    MixedUnits(EffortUnit, EffortUnit),
    #[error("statistics mix protocols `{0}` and `{1}`")]
    MixedProtocols(String, String),
    #[error("no statistics to rank")]
    NoStats,
    #[error("rankings share {0} gate(s); at least 2 are needed")]
    TooFewCommonGates(usize),
    #[error("one of the rankings ties every common gate, so tau-b is undefined")]
    AllTied,
    #[error("invalid ranking: {0}")]
    InvalidRanking(String),
    #[error("fixture {table} checksum mismatch: expected {expected}, got {actual}")]
    FixtureChecksum {
        table: String,
        expected: String,
        actual: String,
    },
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
