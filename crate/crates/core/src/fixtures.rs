//! Published effort tables, embedded with checksums so that hierarchy checks
//! need no external data.
//!
//! Table A: gates evolved on a liquid-crystal medium, effort in evaluations.
//! Table B: gates evolved on a light-sensitive excitable chemical medium,
//! effort in generations with a 2000-generation cutoff.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::evolution::{Effort, EffortUnit, GateStats, SuccessRate};
use crate::gates::Gate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    #[serde(rename = "FIG_1A")]
    Fig1a,
    #[serde(rename = "FIG_1B")]
    Fig1b,
}

impl TableId {
    pub fn unit(self) -> EffortUnit {
        match self {
            TableId::Fig1a => EffortUnit::Evaluations,
            TableId::Fig1b => EffortUnit::Generations,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().replace('_', "").as_str() {
            "fig1a" => Some(TableId::Fig1a),
            "fig1b" => Some(TableId::Fig1b),
            _ => None,
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableId::Fig1a => "FIG_1A",
            TableId::Fig1b => "FIG_1B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Controller {
    Coevolutionary,
    Random,
}

impl Controller {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "coevolutionary" | "coev" => Some(Controller::Coevolutionary),
            "random" => Some(Controller::Random),
            _ => None,
        }
    }
}

impl fmt::Display for Controller {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Controller::Coevolutionary => "Coevolutionary",
            Controller::Random => "Random",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub gate: Gate,
    pub controller: Option<Controller>,
    pub mutation_rate: Option<u64>,
    pub success: Option<SuccessRate>,
    pub min: Effort,
    pub max: Effort,
    pub avg: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub id: TableId,
    pub rows: Vec<FixtureRow>,
}

const CUTOFF: u64 = 2000;
const FIG1A_SHA256: &str = "b2b40281dcd0406bc2ee93484cc6f288e24ddf237243a270cafa07de4342b5bd";
const FIG1B_SHA256: &str = "a2bbb1f2dc69585c4e65c04597e5aa90e3b5ef11c2321c753291ee45c109eed1";

fn cell(text: &str, unit: EffortUnit) -> Effort {
    match text.strip_prefix('>') {
        Some(v) => Effort::censored(v.parse().unwrap(), unit),
        None => Effort::exact(text.parse().unwrap(), unit),
    }
}

impl ReferenceTable {
    /// Liquid-crystal table: gate, min, max, avg, std (evaluations).
    pub fn fig1a() -> Self {
        const ROWS: [(Gate, &str, &str, f64, f64); 6] = [
            (Gate::And, "2", "1788", 910.0, 527.45),
            (Gate::Or, "1", "1779", 769.0, 576.01),
            (Gate::Xor, "44", "1255", 649.0, 605.50),
            (Gate::Not, "3", "1750", 536.0, 749.58),
            (Gate::Nand, "13", "1763", 880.0, 623.18),
            (Gate::Nor, "1", "1788", 907.0, 526.97),
        ];
        let unit = EffortUnit::Evaluations;
        let rows = ROWS
            .iter()
            .map(|&(gate, min, max, avg, std)| FixtureRow {
                gate,
                controller: None,
                mutation_rate: None,
                success: None,
                min: cell(min, unit),
                max: cell(max, unit),
                avg,
                std,
            })
            .collect();
        Self {
            id: TableId::Fig1a,
            rows,
        }
    }

    /// Excitable-medium table: gate, controller, rate, successes out of 10,
    /// min, max, avg, std (generations; `>2000` is censored).
    pub fn fig1b() -> Self {
        use Controller::{Coevolutionary as Coev, Random};
        type Row = (Gate, Controller, u64, u32, &'static str, &'static str, f64, f64);
        const ROWS: [Row; 12] = [
            (Gate::And, Coev, 4000, 10, "8", "144", 61.0, 45.69),
            (Gate::And, Random, 4000, 10, "4", "200", 64.0, 71.73),
            (Gate::And, Coev, 6000, 10, "16", "84", 49.0, 21.89),
            (Gate::And, Random, 6000, 10, "8", "176", 66.0, 58.64),
            (Gate::Nand, Coev, 4000, 7, "288", ">2000", 1065.0, 767.21),
            (Gate::Nand, Random, 4000, 4, "300", ">2000", 1454.0, 744.49),
            (Gate::Nand, Coev, 6000, 9, "24", ">2000", 847.0, 829.22),
            (Gate::Nand, Random, 6000, 6, "84", ">2000", 1247.0, 727.81),
            (Gate::Xor, Coev, 4000, 9, "348", ">2000", 808.0, 510.08),
            (Gate::Xor, Random, 4000, 10, "20", "1080", 455.0, 333.68),
            (Gate::Xor, Coev, 6000, 9, "32", ">2000", 1118.0, 574.97),
            (Gate::Xor, Random, 6000, 6, "212", ">2000", 1336.0, 635.84),
        ];
        let unit = EffortUnit::Generations;
        let rows = ROWS
            .iter()
            .map(|&(gate, controller, rate, successes, min, max, avg, std)| FixtureRow {
                gate,
                controller: Some(controller),
                mutation_rate: Some(rate),
                success: Some(SuccessRate { successes, runs: 10 }),
                min: cell(min, unit),
                max: cell(max, unit),
                avg,
                std,
            })
            .collect();
        Self {
            id: TableId::Fig1b,
            rows,
        }
    }

    pub fn by_id(id: TableId) -> Self {
        match id {
            TableId::Fig1a => Self::fig1a(),
            TableId::Fig1b => Self::fig1b(),
        }
    }

    pub fn cutoff(&self) -> Option<u64> {
        (self.id == TableId::Fig1b).then_some(CUTOFF)
    }

    /// One line per row, `|`-separated, cells as printed.
    pub fn canonical_text(&self) -> String {
        let mut s = format!("{}\n", self.id);
        for r in &self.rows {
            let opt = |o: Option<String>| o.unwrap_or_default();
            s.push_str(&format!(
                "{}|{}|{}|{}|{}|{}|{}|{:.2}\n",
                r.gate,
                opt(r.controller.map(|c| c.to_string())),
                opt(r.mutation_rate.map(|m| m.to_string())),
                opt(r.success.map(|x| x.to_string())),
                r.min,
                r.max,
                r.avg,
                r.std
            ));
        }
        s
    }

    pub fn checksum(&self) -> String {
        Sha256::digest(self.canonical_text().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Fails if the rows differ from the embedded transcription.
    pub fn verify(&self) -> Result<()> {
        let expected = match self.id {
            TableId::Fig1a => FIG1A_SHA256,
            TableId::Fig1b => FIG1B_SHA256,
        };
        let actual = self.checksum();
        let shape_ok = match self.id {
            TableId::Fig1a => self.rows.len() == 6,
            TableId::Fig1b => self.rows.len() == 12,
        };
        if actual != expected || !shape_ok {
            return Err(Error::FixtureChecksum {
                table: self.id.to_string(),
                expected: expected.to_string(),
                actual,
            });
        }
        Ok(())
    }

    /// Rows as [`GateStats`], optionally filtered by controller and rate.
    pub fn stats(&self, controller: Option<Controller>, rate: Option<u64>) -> Vec<GateStats> {
        self.rows
            .iter()
            .filter(|r| controller.is_none() || r.controller == controller)
            .filter(|r| rate.is_none() || r.mutation_rate == rate)
            .map(|r| GateStats {
                gate: r.gate,
                protocol: match r.controller {
                    Some(c) => format!("{} {c}", self.id),
                    None => self.id.to_string(),
                },
                mutation_rate: r.mutation_rate,
                success: r.success,
                min: r.min,
                max: r.max,
                avg: r.avg,
                std: r.std,
                unit: self.id.unit(),
                censored: r.max.censored,
            })
            .collect()
    }
}
