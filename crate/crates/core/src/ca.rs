//! One-dimensional binary automaton where every cell applies a gate to its
//! left and right neighbours.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::Gate;

/// Smallest lattice with distinct left, centre and right cells.
pub const MIN_CELLS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Boundary {
    /// Ring: the left neighbour of cell 0 is cell N-1.
    #[default]
    Periodic,
    /// Out-of-range neighbours read as FALSE.
    FixedFalse,
}

/// A bit-packed row of cells.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    words: Vec<u64>,
    len: usize,
    boundary: Boundary,
}

impl Configuration {
    pub fn zeros(len: usize, boundary: Boundary) -> Result<Self> {
        if len < MIN_CELLS {
            return Err(Error::LatticeTooSmall(len));
        }
        Ok(Self {
            words: vec![0; len.div_ceil(64)],
            len,
            boundary,
        })
    }

    pub fn ones(len: usize, boundary: Boundary) -> Result<Self> {
        let mut c = Self::zeros(len, boundary)?;
        for i in 0..len {
            c.set(i, true);
        }
        Ok(c)
    }

    pub fn from_bits(bits: &[bool], boundary: Boundary) -> Result<Self> {
        let mut c = Self::zeros(bits.len(), boundary)?;
        for (i, &b) in bits.iter().enumerate() {
            c.set(i, b);
        }
        Ok(c)
    }

    /// A single TRUE cell in the middle of an otherwise FALSE lattice.
    pub fn single_seed(len: usize, boundary: Boundary) -> Result<Self> {
        let mut c = Self::zeros(len, boundary)?;
        c.set(len / 2, true);
        Ok(c)
    }

    /// Each cell is independently TRUE with probability `density`, drawn from
    /// ChaCha8 seeded with `seed`.
    pub fn random(len: usize, density: f64, seed: u64, boundary: Boundary) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::InvalidDensity(density));
        }
        let mut c = Self::zeros(len, boundary)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..len {
            c.set(i, rng.gen_bool(density));
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Left neighbour of cell `i`, honouring the boundary.
    #[inline]
    pub fn left(&self, i: usize) -> bool {
        match (i, self.boundary) {
            (0, Boundary::Periodic) => self.get(self.len - 1),
            (0, Boundary::FixedFalse) => false,
            _ => self.get(i - 1),
        }
    }

    #[inline]
    pub fn right(&self, i: usize) -> bool {
        if i + 1 < self.len {
            self.get(i + 1)
        } else {
            match self.boundary {
                Boundary::Periodic => self.get(0),
                Boundary::FixedFalse => false,
            }
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// TRUE everywhere or FALSE everywhere.
    pub fn is_homogeneous(&self) -> bool {
        let ones = self.count_ones();
        ones == 0 || ones == self.len
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Cyclic rotation: cell `i` moves to `i + k`.
    pub fn rotate(&self, k: usize) -> Self {
        let mut out = self.clone();
        for i in 0..self.len {
            out.set((i + k) % self.len, self.get(i));
        }
        out
    }

    /// Cellwise XOR of two equally sized configurations.
    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "configuration lengths differ");
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        out
    }

    /// One synchronous update with `gate`.
    pub fn step(&self, gate: Gate) -> Result<Self> {
        if !gate.is_binary() {
            return Err(Error::UnaryGate(gate));
        }
        Ok(self.step_unchecked(gate))
    }

    pub(crate) fn step_unchecked(&self, gate: Gate) -> Self {
        let mut next = Self {
            words: vec![0; self.words.len()],
            len: self.len,
            boundary: self.boundary,
        };
        for i in 0..self.len {
            if gate.apply2(self.left(i), self.right(i)) {
                next.set(i, true);
            }
        }
        next
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits().map(|b| if b { '1' } else { '0' }).collect();
        write!(f, "Configuration({s}, {:?})", self.boundary)
    }
}

/// The history of a configuration under repeated stepping; row 0 is the
/// initial configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceTimeDiagram {
    gate: Gate,
    rows: Vec<Configuration>,
}

impl SpaceTimeDiagram {
    pub fn gate(&self) -> Gate {
        self.gate
    }

    pub fn rows(&self) -> &[Configuration] {
        &self.rows
    }

    pub fn initial(&self) -> &Configuration {
        &self.rows[0]
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn boundary(&self) -> Boundary {
        self.rows[0].boundary()
    }
}

/// Runs `steps` updates from `initial`, keeping every row.
pub fn run(initial: &Configuration, gate: Gate, steps: usize) -> Result<SpaceTimeDiagram> {
    if !gate.is_binary() {
        return Err(Error::UnaryGate(gate));
    }
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push(initial.clone());
    for t in 0..steps {
        let next = rows[t].step_unchecked(gate);
        rows.push(next);
    }
    Ok(SpaceTimeDiagram { gate, rows })
}
