//! A seeded random network standing in for a configurable physical
//! material with 64 contact pins.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{decode_hex, encode_hex, Substrate};
use crate::error::{Error, Result};

pub const PINS: usize = 64;
pub const LEVELS: u8 = 16;
/// Ground, input A, input B, output and four configuration lines.
pub const LINES: usize = 8;
const NEIGHBOURS: usize = 4;
/// Each neighbour level is read through 4 bins, so a table has 4^4 entries.
const TABLE_LEN: usize = 256;
const HIGH: u8 = LEVELS - 1;
const PLANTED_COPIES: usize = 8;
const PLANTED_JUNCTIONS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    neighbours: [u8; NEIGHBOURS],
    table: [u8; TABLE_LEN],
}

impl Node {
    #[inline]
    fn respond(&self, levels: &[u8; PINS]) -> u8 {
        let mut index = 0usize;
        for &n in &self.neighbours {
            index = index << 2 | (levels[n as usize] >> 2) as usize;
        }
        self.table[index]
    }
}

/// Which pin each external line is wired to, plus the four configuration
/// voltages.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaterialGenotype {
    /// Pins for ground, A, B, output, config 0..4, in that order.
    pub pins: [u8; LINES],
    pub config_levels: [u8; 4],
}

impl MaterialGenotype {
    pub const GROUND: usize = 0;
    pub const INPUT_A: usize = 1;
    pub const INPUT_B: usize = 2;
    pub const OUTPUT: usize = 3;
    /// Number of mutable gene positions: 8 pins and 4 levels.
    pub const GENES: usize = LINES + 4;

    pub fn validate(&self) -> Result<()> {
        for (i, &p) in self.pins.iter().enumerate() {
            if p as usize >= PINS {
                return Err(Error::InvalidGenotype(format!("pin {p} out of range")));
            }
            if self.pins[..i].contains(&p) {
                return Err(Error::InvalidGenotype(format!("pin {p} assigned twice")));
            }
        }
        if let Some(l) = self.config_levels.iter().find(|&&l| l >= LEVELS) {
            return Err(Error::InvalidGenotype(format!("config level {l} out of range")));
        }
        Ok(())
    }

    /// 16 hex digits: six bits per pin, then four bits per level.
    pub fn to_hex(&self) -> String {
        let mut word = 0u64;
        for &p in &self.pins {
            word = word << 6 | p as u64;
        }
        for &l in &self.config_levels {
            word = word << 4 | l as u64;
        }
        encode_hex(&word.to_be_bytes())
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = decode_hex(s, 8)?;
        let mut word = u64::from_be_bytes(bytes.try_into().unwrap());
        let mut config_levels = [0u8; 4];
        for l in config_levels.iter_mut().rev() {
            *l = (word & 0xf) as u8;
            word >>= 4;
        }
        let mut pins = [0u8; LINES];
        for p in pins.iter_mut().rev() {
            *p = (word & 0x3f) as u8;
            word >>= 6;
        }
        let g = Self { pins, config_levels };
        g.validate()?;
        Ok(g)
    }
}

/// 64 nodes, each reading four fixed neighbour pins through a fixed
/// nonlinear transfer table. Entirely determined by its seed.
#[derive(Debug, Clone)]
pub struct VirtualMaterial {
    seed: u64,
    settle_steps: usize,
    nodes: Vec<Node>,
    copy_nodes: Vec<usize>,
    junction_nodes: Vec<usize>,
}

impl VirtualMaterial {
    pub fn new(seed: u64, settle_steps: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nodes = (0..PINS).map(|i| random_node(i, &mut rng)).collect();
        Self {
            seed,
            settle_steps,
            nodes,
            copy_nodes: Vec::new(),
            junction_nodes: Vec::new(),
        }
    }

    /// Like [`VirtualMaterial::new`] but with seed-chosen nodes replaced by
    /// copies of their first neighbour and by max-junctions of their first
    /// two neighbours, so that direct input-to-output paths exist.
    pub fn planted(seed: u64, settle_steps: usize) -> Self {
        let mut m = Self::new(seed, settle_steps);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x706c_616e_7465_6421);
        let mut order: Vec<usize> = (0..PINS).collect();
        order.shuffle(&mut rng);
        let (copies, rest) = order.split_at(PLANTED_COPIES);
        let junctions = &rest[..PLANTED_JUNCTIONS];
        for &i in copies {
            m.nodes[i].table = transfer_table(|bins| bins[0] * 5);
        }
        for &i in junctions {
            m.nodes[i].table = transfer_table(|bins| bins[0].max(bins[1]) * 5);
        }
        m.copy_nodes = copies.to_vec();
        m.junction_nodes = junctions.to_vec();
        m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn settle_steps(&self) -> usize {
        self.settle_steps
    }

    /// Nodes whose level copies their first neighbour (planted materials only).
    pub fn copy_nodes(&self) -> &[usize] {
        &self.copy_nodes
    }

    /// Nodes computing the max of their first two neighbours (planted only).
    pub fn junction_nodes(&self) -> &[usize] {
        &self.junction_nodes
    }

    pub fn neighbours(&self, node: usize) -> [u8; 4] {
        self.nodes[node].neighbours
    }

    /// SHA-256 over wiring and tables, for regeneration checks.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for n in &self.nodes {
            h.update(n.neighbours);
            h.update(n.table);
        }
        encode_hex(&h.finalize())
    }

    /// Drives the genotype's pins and returns the output pin's level after
    /// settling.
    pub fn output_level(&self, g: &MaterialGenotype, a: bool, b: bool) -> u8 {
        let mut driven = [None::<u8>; PINS];
        driven[g.pins[MaterialGenotype::GROUND] as usize] = Some(0);
        driven[g.pins[MaterialGenotype::INPUT_A] as usize] = Some(if a { HIGH } else { 0 });
        driven[g.pins[MaterialGenotype::INPUT_B] as usize] = Some(if b { HIGH } else { 0 });
        for (k, &level) in g.config_levels.iter().enumerate() {
            driven[g.pins[4 + k] as usize] = Some(level);
        }
        let mut levels = [0u8; PINS];
        for (l, d) in levels.iter_mut().zip(&driven) {
            *l = d.unwrap_or(0);
        }
        for _ in 0..self.settle_steps {
            let mut next = [0u8; PINS];
            for (i, slot) in next.iter_mut().enumerate() {
                *slot = driven[i].unwrap_or_else(|| self.nodes[i].respond(&levels));
            }
            levels = next;
        }
        levels[g.pins[MaterialGenotype::OUTPUT] as usize]
    }

    /// Checked evaluation: rejects genotypes with repeated pins.
    pub fn evaluate_checked(&self, g: &MaterialGenotype, a: bool, b: bool) -> Result<bool> {
        g.validate()?;
        Ok(self.evaluate(g, a, b))
    }
}

fn transfer_table(f: impl Fn([u8; 4]) -> u8) -> [u8; TABLE_LEN] {
    let mut table = [0u8; TABLE_LEN];
    for (index, slot) in table.iter_mut().enumerate() {
        let bins = [
            (index >> 6 & 3) as u8,
            (index >> 4 & 3) as u8,
            (index >> 2 & 3) as u8,
            (index & 3) as u8,
        ];
        *slot = f(bins).min(HIGH);
    }
    table
}

/// Clamped weighted sum of the neighbour bins with seeded weights, gain and
/// bias, plus sparse random entries.
fn random_node<R: Rng>(index: usize, rng: &mut R) -> Node {
    let mut neighbours = [0u8; NEIGHBOURS];
    let mut candidates: Vec<u8> = (0..PINS as u8).filter(|&p| p as usize != index).collect();
    candidates.shuffle(rng);
    neighbours.copy_from_slice(&candidates[..NEIGHBOURS]);

    let weights: [i32; 4] = std::array::from_fn(|_| rng.gen_range(-2..=3));
    let gain: i32 = rng.gen_range(1..=5);
    let bias: i32 = rng.gen_range(-6..=6);
    let mut table = transfer_table(|bins| {
        let sum: i32 = bins.iter().zip(&weights).map(|(&b, &w)| b as i32 * w).sum();
        (sum * gain + bias).clamp(0, HIGH as i32) as u8
    });
    for slot in table.iter_mut() {
        if rng.gen_ratio(1, 16) {
            *slot = rng.gen_range(0..LEVELS);
        }
    }
    Node { neighbours, table }
}

impl Substrate for VirtualMaterial {
    type Genotype = MaterialGenotype;

    fn evaluate(&self, genotype: &MaterialGenotype, a: bool, b: bool) -> bool {
        self.output_level(genotype, a, b) >= LEVELS / 2
    }

    fn random_genotype<R: Rng + ?Sized>(&self, rng: &mut R) -> MaterialGenotype {
        let mut all: Vec<u8> = (0..PINS as u8).collect();
        all.shuffle(rng);
        let mut pins = [0u8; LINES];
        pins.copy_from_slice(&all[..LINES]);
        let config_levels = std::array::from_fn(|_| rng.gen_range(0..LEVELS));
        MaterialGenotype { pins, config_levels }
    }

    /// Each change picks one of the twelve genes uniformly. A pin gene moves to
    /// a pin no other line uses; a level gene takes a different level.
    fn mutate<R: Rng + ?Sized>(&self, g: &mut MaterialGenotype, changes: usize, rng: &mut R) {
        for _ in 0..changes {
            let gene = rng.gen_range(0..MaterialGenotype::GENES);
            if gene < LINES {
                let free: Vec<u8> = (0..PINS as u8).filter(|p| !g.pins.contains(p)).collect();
                g.pins[gene] = free[rng.gen_range(0..free.len())];
            } else {
                let k = gene - LINES;
                let old = g.config_levels[k];
                let new = rng.gen_range(0..LEVELS - 1);
                g.config_levels[k] = if new >= old { new + 1 } else { new };
            }
        }
    }

    fn encode(&self, genotype: &MaterialGenotype) -> String {
        genotype.to_hex()
    }
}
