//! Illumination-controlled excitable medium driven by a 10 x 10 cellular
//! automaton controller.
//!
//! The medium is a Greenberg-Hastings lattice: a resting cell becomes excited
//! when one of its eight neighbours is excited and it is not illuminated;
//! excited cells pass through `refractory` recovery states before resting
//! again. Each controller cell owns a square block of the medium and decides,
//! every iteration, whether that block is illuminated.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{decode_hex, encode_hex, Substrate};
use crate::error::{Error, Result};

pub const CONTROLLER_SIDE: usize = 10;
pub const CONTROLLER_CELLS: usize = CONTROLLER_SIDE * CONTROLLER_SIDE;
/// Own activity plus eight neighbours: 2^9 rule entries per cell.
pub const RULE_BITS: usize = 512;
const RULE_WORDS: usize = RULE_BITS / 64;

/// One 512-bit rule table per controller cell, row-major.
///
/// Rule index bit `k` is the thresholded activity of the `k`-th cell of the
/// 3 x 3 window in row-major order (bit 4 is the cell itself); cells outside
/// the grid read 0. A set rule bit means "illuminate".
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ControllerGenotype {
    tables: Vec<[u64; RULE_WORDS]>,
}

impl std::fmt::Debug for ControllerGenotype {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let lit: usize = self.tables.iter().flatten().map(|w| w.count_ones() as usize).sum();
        write!(
            f,
            "ControllerGenotype({lit}/{} illuminating entries)",
            CONTROLLER_CELLS * RULE_BITS
        )
    }
}

impl ControllerGenotype {
    /// Every rule emits darkness.
    pub fn dark() -> Self {
        Self {
            tables: vec![[0; RULE_WORDS]; CONTROLLER_CELLS],
        }
    }

    /// Every rule emits illumination.
    pub fn lit() -> Self {
        Self {
            tables: vec![[u64::MAX; RULE_WORDS]; CONTROLLER_CELLS],
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self {
            tables: (0..CONTROLLER_CELLS)
                .map(|_| std::array::from_fn(|_| rng.gen()))
                .collect(),
        }
    }

    #[inline]
    pub fn rule(&self, cell: usize, index: usize) -> bool {
        self.tables[cell][index / 64] >> (index % 64) & 1 == 1
    }

    pub fn set_rule(&mut self, cell: usize, index: usize, illuminate: bool) {
        let mask = 1u64 << (index % 64);
        if illuminate {
            self.tables[cell][index / 64] |= mask;
        } else {
            self.tables[cell][index / 64] &= !mask;
        }
    }

    /// Flips the bit at a global position in `0 .. 100 * 512`.
    pub fn flip(&mut self, position: usize) {
        self.tables[position / RULE_BITS][position % RULE_BITS / 64] ^= 1 << (position % 64);
    }

    pub fn to_hex(&self) -> String {
        let bytes: Vec<u8> = self.tables.iter().flatten().flat_map(|w| w.to_be_bytes()).collect();
        encode_hex(&bytes)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = decode_hex(s, CONTROLLER_CELLS * RULE_BITS / 8)?;
        let words: Vec<u64> = bytes
            .chunks_exact(8)
            .map(|c| u64::from_be_bytes(c.try_into().unwrap()))
            .collect();
        let tables = words.chunks_exact(RULE_WORDS).map(|c| c.try_into().unwrap()).collect();
        Ok(Self { tables })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    /// Side of the medium block owned by one controller cell.
    pub block: usize,
    /// Number of refractory states.
    pub refractory: u8,
    /// Output window: excited cells are summed over the last `window` steps.
    pub window: usize,
    /// The output is TRUE when the windowed activity reaches this value.
    pub threshold: u64,
    /// Iterations per input pattern.
    pub iterations: usize,
    /// Also excite a bottom-centre block on every run, so that activity
    /// exists when both inputs are 0.
    #[serde(default)]
    pub pacemaker: bool,
}

impl Default for MediumParams {
    /// 50 x 50 medium, two refractory states, 25 iterations and a 5-step
    /// window. The threshold equals the windowed activity of one unobstructed
    /// wave from a single input domain (275 excited cell-steps).
    fn default() -> Self {
        Self {
            block: 5,
            refractory: 2,
            window: 5,
            threshold: 275,
            iterations: 25,
            pacemaker: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellState {
    Resting,
    Excited,
    /// Recovery stage, 1-based.
    Refractory(u8),
}

/// Output bit plus the windowed activity it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MediumOutcome {
    pub output: bool,
    pub activity: u64,
}

#[derive(Debug, Clone)]
pub struct ExcitableMedium {
    params: MediumParams,
}

// Cell encoding: 0 resting, 1 excited, 1 + k refractory stage k.
const RESTING: u8 = 0;
const EXCITED: u8 = 1;

impl ExcitableMedium {
    pub fn new(params: MediumParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &MediumParams {
        &self.params
    }

    /// Side length of the square medium.
    pub fn side(&self) -> usize {
        CONTROLLER_SIDE * self.params.block
    }

    /// Cells `(row, col)` of input domain A (top-left block) or B (top-right).
    pub fn input_domain(&self, which_b: bool) -> impl Iterator<Item = (usize, usize)> {
        let block = self.params.block;
        let col0 = if which_b { self.side() - block } else { 0 };
        (0..block).flat_map(move |r| (col0..col0 + block).map(move |c| (r, c)))
    }

    /// Cells of the bottom-centre pacemaker block.
    pub fn pacemaker_domain(&self) -> impl Iterator<Item = (usize, usize)> {
        let block = self.params.block;
        let side = self.side();
        let col0 = (side - block) / 2;
        (side - block..side).flat_map(move |r| (col0..col0 + block).map(move |c| (r, c)))
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        let mut bad = Vec::new();
        if p.block == 0 {
            bad.push("block must be at least 1".to_string());
        }
        if p.refractory == 0 || p.refractory > 250 {
            bad.push(format!("refractory must be in 1..=250, got {}", p.refractory));
        }
        if p.window == 0 {
            bad.push("window must be at least 1".to_string());
        }
        if p.iterations == 0 {
            bad.push("iterations must be at least 1".to_string());
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(bad))
        }
    }

    /// Runs the medium for `iterations` steps from the injected inputs.
    pub fn run(&self, genotype: &ControllerGenotype, a: bool, b: bool, iterations: usize) -> MediumOutcome {
        let window_start = iterations.saturating_sub(self.params.window);
        let mut activity = 0u64;
        self.simulate(genotype, a, b, iterations, |t, excited| {
            if t >= window_start {
                activity += excited;
            }
        });
        MediumOutcome {
            output: activity >= self.params.threshold,
            activity,
        }
    }

    /// Cell states, row-major, after `steps` steps.
    pub fn states_after(&self, genotype: &ControllerGenotype, a: bool, b: bool, steps: usize) -> Vec<CellState> {
        self.simulate(genotype, a, b, steps, |_, _| {})
            .into_iter()
            .map(|s| match s {
                RESTING => CellState::Resting,
                EXCITED => CellState::Excited,
                s => CellState::Refractory(s - 1),
            })
            .collect()
    }

    /// Core loop. `observe(t, excited)` is called after step `t` (0-based)
    /// with the number of excited cells; returns the final grid.
    fn simulate(
        &self,
        genotype: &ControllerGenotype,
        a: bool,
        b: bool,
        steps: usize,
        mut observe: impl FnMut(usize, u64),
    ) -> Vec<u8> {
        let side = self.side();
        let block = self.params.block;
        let last_refractory = 1 + self.params.refractory;
        let mut cells = vec![RESTING; side * side];
        for (which_b, on) in [(false, a), (true, b)] {
            if on {
                for (r, c) in self.input_domain(which_b) {
                    cells[r * side + c] = EXCITED;
                }
            }
        }
        if self.params.pacemaker {
            for (r, c) in self.pacemaker_domain() {
                cells[r * side + c] = EXCITED;
            }
        }
        let mut next = cells.clone();
        let mut active = [false; CONTROLLER_CELLS];
        let mut lit = [false; CONTROLLER_CELLS];

        for t in 0..steps {
            // A fully resting medium never changes again.
            if cells.iter().all(|&s| s == RESTING) {
                break;
            }
            active.fill(false);
            for (i, &s) in cells.iter().enumerate() {
                if s == EXCITED {
                    active[(i / side / block) * CONTROLLER_SIDE + (i % side) / block] = true;
                }
            }
            for (cell, l) in lit.iter_mut().enumerate() {
                let index = window_index(&active, cell / CONTROLLER_SIDE, cell % CONTROLLER_SIDE);
                *l = genotype.rule(cell, index);
            }

            let mut excited = 0u64;
            for r in 0..side {
                for c in 0..side {
                    let i = r * side + c;
                    let s = cells[i];
                    next[i] = if s == RESTING {
                        let illuminated = lit[(r / block) * CONTROLLER_SIDE + c / block];
                        if !illuminated && has_excited_neighbour(&cells, side, r, c) {
                            excited += 1;
                            EXCITED
                        } else {
                            RESTING
                        }
                    } else if s == last_refractory {
                        RESTING
                    } else {
                        s + 1
                    };
                }
            }
            std::mem::swap(&mut cells, &mut next);
            observe(t, excited);
        }
        cells
    }
}

fn window_index(active: &[bool; CONTROLLER_CELLS], cr: usize, cc: usize) -> usize {
    let mut index = 0;
    let mut k = 0;
    for dr in -1i32..=1 {
        for dc in -1i32..=1 {
            let (nr, nc) = (cr as i32 + dr, cc as i32 + dc);
            let inside = (0..CONTROLLER_SIDE as i32).contains(&nr) && (0..CONTROLLER_SIDE as i32).contains(&nc);
            if inside && active[nr as usize * CONTROLLER_SIDE + nc as usize] {
                index |= 1 << k;
            }
            k += 1;
        }
    }
    index
}

#[inline]
fn has_excited_neighbour(cells: &[u8], side: usize, r: usize, c: usize) -> bool {
    let r0 = r.saturating_sub(1);
    let r1 = (r + 1).min(side - 1);
    let c0 = c.saturating_sub(1);
    let c1 = (c + 1).min(side - 1);
    for nr in r0..=r1 {
        for nc in c0..=c1 {
            if (nr != r || nc != c) && cells[nr * side + nc] == EXCITED {
                return true;
            }
        }
    }
    false
}

impl Substrate for ExcitableMedium {
    type Genotype = ControllerGenotype;

    fn evaluate(&self, genotype: &ControllerGenotype, a: bool, b: bool) -> bool {
        self.run(genotype, a, b, self.params.iterations).output
    }

    fn random_genotype<R: Rng + ?Sized>(&self, rng: &mut R) -> ControllerGenotype {
        ControllerGenotype::random(rng)
    }

    /// Flips `changes` uniformly chosen rule bits (with replacement).
    fn mutate<R: Rng + ?Sized>(&self, genotype: &mut ControllerGenotype, changes: usize, rng: &mut R) {
        for _ in 0..changes {
            genotype.flip(rng.gen_range(0..CONTROLLER_CELLS * RULE_BITS));
        }
    }

    fn encode(&self, genotype: &ControllerGenotype) -> String {
        genotype.to_hex()
    }
}
