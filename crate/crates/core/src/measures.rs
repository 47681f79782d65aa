//! Behavioural complexity of gate automata: attractors, neighbourhood-state
//! frequencies, block entropy, morphology classes and the resulting ranking.

use std::collections::HashMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::ca::{Boundary, Configuration, SpaceTimeDiagram};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::ranking::Ranking;

/// Transient length and period of an orbit.
///
/// When `censored` is set no configuration repeated within `cap` steps, so
/// only `transient + period > cap` is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttractorResult {
    pub transient: u64,
    pub period: u64,
    pub censored: bool,
    pub cap: u64,
}

impl AttractorResult {
    pub fn transient_plus_period(&self) -> u64 {
        self.transient + self.period
    }
}

/// Exact minimal transient and period, found by remembering every visited
/// configuration. Returns the result together with the first configuration
/// on the cycle (or the last one visited, if censored).
fn trace_orbit(initial: &Configuration, gate: Gate, cap: u64) -> Result<(AttractorResult, Configuration)> {
    if !gate.is_binary() {
        return Err(Error::UnaryGate(gate));
    }
    let cap = cap.max(1);
    let mut seen: HashMap<Configuration, u64> = HashMap::new();
    let mut current = initial.clone();
    for t in 0..=cap {
        if let Some(&first) = seen.get(&current) {
            let result = AttractorResult {
                transient: first,
                period: t - first,
                censored: false,
                cap,
            };
            return Ok((result, current));
        }
        let next = current.step_unchecked(gate);
        seen.insert(std::mem::replace(&mut current, next), t);
    }
    // `current` is the configuration at time cap + 1; report the one at cap.
    let result = AttractorResult {
        transient: cap,
        period: 1,
        censored: true,
        cap,
    };
    let last = seen.into_iter().find(|&(_, t)| t == cap).map(|(c, _)| c).unwrap();
    Ok((result, last))
}

/// Detects the attractor reached from `initial` within `cap` steps.
pub fn detect_attractor(initial: &Configuration, gate: Gate, cap: u64) -> Result<AttractorResult> {
    trace_orbit(initial, gate, cap).map(|(r, _)| r)
}

/// Counts of the eight `(left, centre, right)` neighbourhood states, indexed
/// by `4l + 2c + r`.
pub type StateCounts = [u64; 8];

/// Per-step neighbourhood-state counts of a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyProfile {
    pub cells: usize,
    pub per_step: Vec<StateCounts>,
}

impl FrequencyProfile {
    /// CSV with header `t,f000,...,f111`, one line per step.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,f000,f001,f010,f011,f100,f101,f110,f111")?;
        for (t, counts) in self.per_step.iter().enumerate() {
            write!(out, "{t}")?;
            for c in counts {
                write!(out, ",{c}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn entropies(&self) -> Vec<f64> {
        self.per_step
            .iter()
            .map(|row| block_entropy(row).expect("rows sum to N > 0"))
            .collect()
    }
}

pub fn row_frequencies(row: &Configuration) -> StateCounts {
    let mut counts = [0u64; 8];
    for i in 0..row.len() {
        let k = (row.left(i) as usize) << 2 | (row.get(i) as usize) << 1 | row.right(i) as usize;
        counts[k] += 1;
    }
    counts
}

/// Neighbourhood-state frequencies of every row. Only ring lattices are
/// accepted, so each row sums to the cell count.
pub fn neighbourhood_frequencies(diagram: &SpaceTimeDiagram) -> Result<FrequencyProfile> {
    if diagram.boundary() != Boundary::Periodic {
        return Err(Error::NotPeriodic);
    }
    Ok(FrequencyProfile {
        cells: diagram.width(),
        per_step: diagram.rows().iter().map(row_frequencies).collect(),
    })
}

/// Shannon entropy, in bits, of the normalized count vector.
pub fn block_entropy(counts: &StateCounts) -> Result<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::ZeroSumVector);
    }
    let total = total as f64;
    let h = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>();
    // A single symbol gives -1 * log2(1) = -0.0.
    Ok(h.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MorphologyClass {
    FixedHomogeneous,
    FixedHeterogeneous,
    PeriodicHomogeneous,
    PeriodicWithDomains,
    Complex,
}

impl MorphologyClass {
    pub fn rank(self) -> u8 {
        match self {
            MorphologyClass::FixedHomogeneous | MorphologyClass::FixedHeterogeneous => 0,
            MorphologyClass::PeriodicHomogeneous => 1,
            MorphologyClass::PeriodicWithDomains => 2,
            MorphologyClass::Complex => 3,
        }
    }
}

/// Ensemble and threshold settings for behavioural classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BehaviourParams {
    pub cells: usize,
    pub density: f64,
    pub seeds: Vec<u64>,
    pub cap: u64,
    /// Orbits with `transient + period` above this are COMPLEX.
    pub theta: u64,
    /// Longest period still counted as PERIODIC_WITH_DOMAINS.
    pub p_small: u64,
}

impl Default for BehaviourParams {
    fn default() -> Self {
        Self::for_cells(200)
    }
}

impl BehaviourParams {
    /// Defaults for an `n`-cell ring: 20 seeds, density 0.5, cap 2^20,
    /// theta = 10 n, p_small = 8.
    pub fn for_cells(n: usize) -> Self {
        Self {
            cells: n,
            density: 0.5,
            seeds: (0..20).collect(),
            cap: 1 << 20,
            theta: 10 * n as u64,
            p_small: 8,
        }
    }
}

/// What one seed of the ensemble did.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedOutcome {
    pub seed: u64,
    pub attractor: AttractorResult,
    pub morphology: MorphologyClass,
    /// Mean block entropy over the attractor rows.
    pub attractor_entropy: f64,
    /// Whether some attractor row mixes TRUE and FALSE cells.
    pub heterogeneous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BehaviourProfile {
    pub gate: Gate,
    /// Attractor of the first seed whose class matches the majority.
    pub attractor: AttractorResult,
    pub morphology: MorphologyClass,
    pub morphology_rank: u8,
    pub mean_transient_plus_period: f64,
    pub mean_attractor_entropy: f64,
    pub ensemble_size: usize,
    pub cells: usize,
    pub density: f64,
    pub theta: u64,
    pub p_small: u64,
    #[serde(skip)]
    pub per_seed: Vec<SeedOutcome>,
}

/// Analyses a single initial configuration.
pub fn analyse_seed(initial: &Configuration, gate: Gate, params: &BehaviourParams, seed: u64) -> Result<SeedOutcome> {
    let (attractor, entry) = trace_orbit(initial, gate, params.cap)?;
    let cycle_rows: Vec<Configuration> = if attractor.censored {
        vec![entry]
    } else {
        std::iter::successors(Some(entry), |c| Some(c.step_unchecked(gate)))
            .take(attractor.period as usize)
            .collect()
    };
    let heterogeneous = cycle_rows.iter().any(|r| !r.is_homogeneous());
    let entropy_sum: f64 = cycle_rows
        .iter()
        .map(|r| block_entropy(&row_frequencies(r)).expect("nonempty row"))
        .sum();
    let attractor_entropy = entropy_sum / cycle_rows.len() as f64;

    let morphology = if attractor.censored || attractor.transient_plus_period() > params.theta {
        MorphologyClass::Complex
    } else if attractor.period == 1 {
        if heterogeneous {
            MorphologyClass::FixedHeterogeneous
        } else {
            MorphologyClass::FixedHomogeneous
        }
    } else if !heterogeneous {
        MorphologyClass::PeriodicHomogeneous
    } else if attractor.period <= params.p_small {
        MorphologyClass::PeriodicWithDomains
    } else {
        MorphologyClass::Complex
    };
    Ok(SeedOutcome {
        seed,
        attractor,
        morphology,
        attractor_entropy,
        heterogeneous,
    })
}

/// Classifies `gate` by majority vote over random density-`params.density`
/// rings, one per seed. Vote ties go to the more complex class.
pub fn classify_behaviour(gate: Gate, params: &BehaviourParams) -> Result<BehaviourProfile> {
    if params.seeds.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    if !gate.is_binary() {
        return Err(Error::UnaryGate(gate));
    }
    let per_seed = params
        .seeds
        .iter()
        .map(|&seed| {
            let initial = Configuration::random(params.cells, params.density, seed, Boundary::Periodic)?;
            analyse_seed(&initial, gate, params, seed)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut votes: HashMap<MorphologyClass, usize> = HashMap::new();
    for o in &per_seed {
        *votes.entry(o.morphology).or_default() += 1;
    }
    let morphology = votes
        .into_iter()
        .max_by_key(|&(class, count)| (count, class))
        .map(|(class, _)| class)
        .unwrap();
    let attractor = per_seed.iter().find(|o| o.morphology == morphology).unwrap().attractor;
    let n = per_seed.len() as f64;
    let mean_transient_plus_period = per_seed
        .iter()
        .map(|o| o.attractor.transient_plus_period() as f64)
        .sum::<f64>()
        / n;
    let mean_attractor_entropy = per_seed.iter().map(|o| o.attractor_entropy).sum::<f64>() / n;

    Ok(BehaviourProfile {
        gate,
        attractor,
        morphology,
        morphology_rank: morphology.rank(),
        mean_transient_plus_period,
        mean_attractor_entropy,
        ensemble_size: per_seed.len(),
        cells: params.cells,
        density: params.density,
        theta: params.theta,
        p_small: params.p_small,
        per_seed,
    })
}

/// Tolerance on mean attractor entropy when forming tie-groups.
pub const ENTROPY_TIE_TOLERANCE: f64 = 1e-9;

/// Orders profiles by (morphology rank, mean transient + period, mean
/// attractor entropy).
pub fn ranking_from_profiles(profiles: &[BehaviourProfile]) -> Result<Ranking> {
    let items = profiles
        .iter()
        .map(|p| {
            (
                p.gate,
                (
                    p.morphology_rank,
                    p.mean_transient_plus_period,
                    p.mean_attractor_entropy,
                ),
            )
        })
        .collect();
    Ranking::from_keys(
        items,
        |a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)),
        |a, b| a.0 == b.0 && a.1 == b.1 && (a.2 - b.2).abs() <= ENTROPY_TIE_TOLERANCE,
    )
}

/// Classifies every gate and ranks them.
pub fn behavioural_ranking(gates: &[Gate], params: &BehaviourParams) -> Result<(Ranking, Vec<BehaviourProfile>)> {
    let profiles = gates
        .iter()
        .map(|&g| classify_behaviour(g, params))
        .collect::<Result<Vec<_>>>()?;
    Ok((ranking_from_profiles(&profiles)?, profiles))
}
