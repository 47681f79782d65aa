//! Simulated evolvable media. Both expose the same contract to the
//! evolution harness: a genotype configures the medium, two input bits go in,
//! one output bit comes out.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod material;
mod medium;

pub use material::{MaterialGenotype, VirtualMaterial, LEVELS, LINES, PINS};
pub use medium::{
    CellState, ControllerGenotype, ExcitableMedium, MediumOutcome, MediumParams, CONTROLLER_CELLS, CONTROLLER_SIDE,
    RULE_BITS,
};

/// A medium the harness can configure, drive and read.
pub trait Substrate: Sync {
    type Genotype: Clone + Send + Sync;

    /// Output bit for inputs `(a, b)` under `genotype`. Must be a pure
    /// function of the substrate, genotype and inputs.
    fn evaluate(&self, genotype: &Self::Genotype, a: bool, b: bool) -> bool;

    fn random_genotype<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Genotype;

    /// Applies `changes` random alterations in place.
    fn mutate<R: Rng + ?Sized>(&self, genotype: &mut Self::Genotype, changes: usize, rng: &mut R);

    /// Hex encoding of a genotype for replay.
    fn encode(&self, genotype: &Self::Genotype) -> String;
}

/// Wraps a substrate and counts every evaluation made through it.
pub struct Evaluator<'s, S: Substrate> {
    substrate: &'s S,
    count: u64,
}

impl<'s, S: Substrate> Evaluator<'s, S> {
    pub fn new(substrate: &'s S) -> Self {
        Self { substrate, count: 0 }
    }

    pub fn evaluate(&mut self, genotype: &S::Genotype, a: bool, b: bool) -> bool {
        self.count += 1;
        self.substrate.evaluate(genotype, a, b)
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn substrate(&self) -> &'s S {
        self.substrate
    }
}

/// Serializable description of a substrate, as found in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SubstrateSpec {
    VirtualMaterial {
        seed: u64,
        settle_steps: usize,
        /// Plant copy and junction nodes in the network.
        planted: bool,
    },
    ExcitableMedium(MediumParams),
}

impl SubstrateSpec {
    pub fn build(&self) -> AnySubstrate {
        match self {
            SubstrateSpec::VirtualMaterial {
                seed,
                settle_steps,
                planted,
            } => {
                let m = if *planted {
                    VirtualMaterial::planted(*seed, *settle_steps)
                } else {
                    VirtualMaterial::new(*seed, *settle_steps)
                };
                AnySubstrate::Material(m)
            }
            SubstrateSpec::ExcitableMedium(p) => AnySubstrate::Medium(ExcitableMedium::new(p.clone())),
        }
    }
}

#[derive(Debug, Clone)]
pub enum AnySubstrate {
    Material(VirtualMaterial),
    Medium(ExcitableMedium),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyGenotype {
    Material(MaterialGenotype),
    Controller(ControllerGenotype),
}

impl AnySubstrate {
    /// Evaluates a genotype of either kind, rejecting a kind mismatch.
    pub fn evaluate(&self, genotype: &AnyGenotype, a: bool, b: bool) -> Result<bool> {
        match (self, genotype) {
            (AnySubstrate::Material(m), AnyGenotype::Material(g)) => Ok(m.evaluate(g, a, b)),
            (AnySubstrate::Medium(m), AnyGenotype::Controller(g)) => Ok(m.evaluate(g, a, b)),
            _ => Err(Error::KindMismatch),
        }
    }
}

pub(crate) fn decode_hex(s: &str, bytes: usize) -> Result<Vec<u8>> {
    let s = s.trim();
    if s.len() != bytes * 2 {
        return Err(Error::InvalidGenotype(format!(
            "expected {} hex digits, got {}",
            bytes * 2,
            s.len()
        )));
    }
    (0..bytes)
        .map(|i| {
            u8::from_str_radix(&s[2 * i..2 * i + 2], 16)
                .map_err(|_| Error::InvalidGenotype(format!("bad hex digit near offset {}", 2 * i)))
        })
        .collect()
}

pub(crate) fn encode_hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
