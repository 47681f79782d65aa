//! Generational search for gate-implementing genotypes and the per-gate
//! effort statistics it produces.

use std::cmp::Ordering;
use std::fmt;
use std::io::{self, Write};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::substrates::{
    AnyGenotype, AnySubstrate, Evaluator, ExcitableMedium, MediumParams, Substrate, SubstrateSpec, VirtualMaterial,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Protocol {
    /// Elitist GA on the virtual material; effort in evaluations.
    LcStyle,
    /// Elitist GA on the excitable-medium controller; effort in generations.
    BzCoevolutionary,
    /// Fresh random controllers every generation; effort in generations.
    BzRandom,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::LcStyle => "LC_STYLE",
            Protocol::BzCoevolutionary => "BZ_COEVOLUTIONARY",
            Protocol::BzRandom => "BZ_RANDOM",
        }
    }

    pub fn unit(self) -> EffortUnit {
        match self {
            Protocol::LcStyle => EffortUnit::Evaluations,
            Protocol::BzCoevolutionary | Protocol::BzRandom => EffortUnit::Generations,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Protocol::LcStyle, Protocol::BzCoevolutionary, Protocol::BzRandom]
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EffortUnit {
    Evaluations,
    Generations,
}

impl fmt::Display for EffortUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EffortUnit::Evaluations => "EVALUATIONS",
            EffortUnit::Generations => "GENERATIONS",
        })
    }
}

/// Work spent before the first perfect genotype appeared. A censored effort
/// means the run hit its cutoff: the true value is above `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Effort {
    pub value: u64,
    pub unit: EffortUnit,
    pub censored: bool,
}

impl Effort {
    pub fn exact(value: u64, unit: EffortUnit) -> Self {
        Self {
            value,
            unit,
            censored: false,
        }
    }

    pub fn censored(value: u64, unit: EffortUnit) -> Self {
        Self {
            value,
            unit,
            censored: true,
        }
    }

    /// Orders by value, a censored effort sitting just above an exact one of
    /// the same value. Two efforts censored at the same cutoff are equal.
    pub fn compare(&self, other: &Effort) -> Ordering {
        self.value.cmp(&other.value).then(self.censored.cmp(&other.censored))
    }
}

impl fmt::Display for Effort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.censored {
            write!(f, ">{}", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// Everything needed to reproduce an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub target: Gate,
    pub protocol: Protocol,
    pub population: usize,
    pub elite: usize,
    /// Gene changes applied to each material offspring.
    pub mutations_per_individual: usize,
    /// Rule-bit flips applied to each controller offspring.
    pub mutation_rate: usize,
    pub generation_cutoff: u64,
    pub runs: usize,
    pub substrate: SubstrateSpec,
}

impl ExperimentConfig {
    /// Protocol defaults: 40/5/5 with 200 generations on a planted material
    /// for LC_STYLE; population 10, elite 1, 4000 flips, 2000 generations and
    /// 10 runs on the default medium for the BZ protocols.
    pub fn defaults(protocol: Protocol, target: Gate, master_seed: u64) -> Self {
        match protocol {
            Protocol::LcStyle => Self {
                master_seed,
                target,
                protocol,
                population: 40,
                elite: 5,
                mutations_per_individual: 5,
                mutation_rate: 4000,
                generation_cutoff: 200,
                runs: 10,
                substrate: SubstrateSpec::VirtualMaterial {
                    seed: 1,
                    settle_steps: 8,
                    planted: true,
                },
            },
            Protocol::BzCoevolutionary | Protocol::BzRandom => Self {
                master_seed,
                target,
                protocol,
                population: 10,
                elite: 1,
                mutations_per_individual: 5,
                mutation_rate: 4000,
                generation_cutoff: 2000,
                runs: 10,
                substrate: SubstrateSpec::ExcitableMedium(MediumParams {
                    pacemaker: needs_pacemaker(target),
                    ..MediumParams::default()
                }),
            },
        }
    }

    /// Parses a TOML config with `[experiment]` and `[substrate]` tables.
    /// Missing keys take protocol defaults; every invalid or unknown key is
    /// reported at once.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let doc: toml::Table = text.parse()?;
        let mut bad = Vec::new();
        let empty = toml::Table::new();

        for key in doc.keys() {
            if key != "experiment" && key != "substrate" {
                bad.push(format!("unknown section `{key}`"));
            }
        }
        let section = |name: &str, bad: &mut Vec<String>| -> toml::Table {
            match doc.get(name) {
                Some(toml::Value::Table(t)) => t.clone(),
                Some(_) => {
                    bad.push(format!("`{name}` must be a table"));
                    empty.clone()
                }
                None => empty.clone(),
            }
        };
        let exp = section("experiment", &mut bad);
        let sub = section("substrate", &mut bad);

        let mut fields = Fields {
            table: &exp,
            section: "experiment",
            bad: &mut bad,
            used: Vec::new(),
        };
        let protocol = match fields.string("protocol") {
            Some(s) => Protocol::parse(&s).unwrap_or_else(|| {
                fields.bad.push(format!("experiment.protocol: unknown protocol `{s}`"));
                Protocol::LcStyle
            }),
            None => {
                fields.bad.push("experiment.protocol is required".into());
                Protocol::LcStyle
            }
        };
        let target = match fields.string("target") {
            Some(s) => s.parse::<Gate>().unwrap_or_else(|_| {
                fields.bad.push(format!("experiment.target: unknown gate `{s}`"));
                Gate::And
            }),
            None => {
                fields.bad.push("experiment.target is required".into());
                Gate::And
            }
        };
        let master_seed = fields.uint("master_seed");
        if master_seed.is_none() {
            fields.bad.push("experiment.master_seed is required".into());
        }
        let mut cfg = Self::defaults(protocol, target, master_seed.unwrap_or(0));
        if let Some(v) = fields.uint("population") {
            cfg.population = v as usize;
        }
        if let Some(v) = fields.uint("elite") {
            cfg.elite = v as usize;
        }
        if let Some(v) = fields.uint("mutations_per_individual") {
            cfg.mutations_per_individual = v as usize;
        }
        if let Some(v) = fields.uint("mutation_rate") {
            cfg.mutation_rate = v as usize;
        }
        if let Some(v) = fields.uint("generation_cutoff") {
            cfg.generation_cutoff = v;
        }
        if let Some(v) = fields.uint("runs") {
            cfg.runs = v as usize;
        }
        let fitness_iterations = fields.uint("fitness_iterations");
        fields.reject_unknown();

        let mut fields = Fields {
            table: &sub,
            section: "substrate",
            bad: &mut bad,
            used: Vec::new(),
        };
        let kind = fields.string("kind");
        match (&mut cfg.substrate, kind.as_deref()) {
            (
                SubstrateSpec::VirtualMaterial {
                    seed,
                    settle_steps,
                    planted,
                },
                None | Some("VIRTUAL_MATERIAL"),
            ) => {
                if let Some(v) = fields.uint("seed") {
                    *seed = v;
                }
                if let Some(v) = fields.uint("settle_steps") {
                    *settle_steps = v as usize;
                }
                if let Some(v) = fields.boolean("planted") {
                    *planted = v;
                }
                if fitness_iterations.is_some() {
                    fields
                        .bad
                        .push("experiment.fitness_iterations only applies to the excitable medium".into());
                }
            }
            (SubstrateSpec::ExcitableMedium(p), None | Some("EXCITABLE_MEDIUM")) => {
                if let Some(v) = fields.uint("block") {
                    p.block = v as usize;
                }
                if let Some(v) = fields.uint("refractory") {
                    p.refractory = v.min(u8::MAX as u64) as u8;
                }
                if let Some(v) = fields.uint("window") {
                    p.window = v as usize;
                }
                if let Some(v) = fields.uint("threshold") {
                    p.threshold = v;
                }
                if let Some(v) = fields.uint("iterations") {
                    p.iterations = v as usize;
                }
                if let Some(v) = fitness_iterations {
                    p.iterations = v as usize;
                }
                if let Some(v) = fields.boolean("pacemaker") {
                    p.pacemaker = v;
                }
                // Medium has no random structure; accept and ignore a seed.
                fields.uint("seed");
            }
            (_, Some(k)) => fields.bad.push(format!(
                "substrate.kind `{k}` does not match protocol {protocol} (expected {})",
                if protocol == Protocol::LcStyle {
                    "VIRTUAL_MATERIAL"
                } else {
                    "EXCITABLE_MEDIUM"
                }
            )),
        }
        fields.reject_unknown();

        if let Err(Error::Config(v)) = cfg.validate() {
            bad.extend(v);
        }
        if bad.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(bad))
        }
    }

    pub fn to_toml_string(&self) -> String {
        let mut exp = toml::Table::new();
        exp.insert("master_seed".into(), toml::Value::Integer(self.master_seed as i64));
        exp.insert("target".into(), self.target.name().into());
        exp.insert("protocol".into(), self.protocol.name().into());
        exp.insert("population".into(), (self.population as i64).into());
        exp.insert("elite".into(), (self.elite as i64).into());
        exp.insert(
            "mutations_per_individual".into(),
            (self.mutations_per_individual as i64).into(),
        );
        exp.insert("mutation_rate".into(), (self.mutation_rate as i64).into());
        exp.insert("generation_cutoff".into(), (self.generation_cutoff as i64).into());
        exp.insert("runs".into(), (self.runs as i64).into());
        let mut sub = toml::Table::new();
        match &self.substrate {
            SubstrateSpec::VirtualMaterial {
                seed,
                settle_steps,
                planted,
            } => {
                sub.insert("kind".into(), "VIRTUAL_MATERIAL".into());
                sub.insert("seed".into(), toml::Value::Integer(*seed as i64));
                sub.insert("settle_steps".into(), (*settle_steps as i64).into());
                sub.insert("planted".into(), (*planted).into());
            }
            SubstrateSpec::ExcitableMedium(p) => {
                sub.insert("kind".into(), "EXCITABLE_MEDIUM".into());
                sub.insert("block".into(), (p.block as i64).into());
                sub.insert("refractory".into(), (p.refractory as i64).into());
                sub.insert("window".into(), (p.window as i64).into());
                sub.insert("threshold".into(), (p.threshold as i64).into());
                sub.insert("iterations".into(), (p.iterations as i64).into());
                sub.insert("pacemaker".into(), p.pacemaker.into());
            }
        }
        let mut doc = toml::Table::new();
        doc.insert("experiment".into(), exp.into());
        doc.insert("substrate".into(), sub.into());
        toml::to_string(&doc).expect("plain tables serialize")
    }

    /// Lists every violated constraint.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if self.population == 0 {
            bad.push("experiment.population must be at least 1".to_string());
        }
        if self.protocol != Protocol::BzRandom && (self.elite == 0 || self.elite >= self.population) {
            bad.push(format!(
                "experiment.elite must be in 1..population ({}), got {}",
                self.population, self.elite
            ));
        }
        if self.protocol == Protocol::LcStyle && self.mutations_per_individual == 0 {
            bad.push("experiment.mutations_per_individual must be at least 1".into());
        }
        if self.protocol == Protocol::BzCoevolutionary && self.mutation_rate == 0 {
            bad.push("experiment.mutation_rate must be at least 1".into());
        }
        if self.generation_cutoff == 0 {
            bad.push("experiment.generation_cutoff must be at least 1".into());
        }
        if self.runs == 0 {
            bad.push("experiment.runs must be at least 1".into());
        }
        let lc = self.protocol == Protocol::LcStyle;
        match &self.substrate {
            SubstrateSpec::VirtualMaterial { settle_steps, .. } => {
                if !lc {
                    bad.push(format!(
                        "protocol {} needs an EXCITABLE_MEDIUM substrate",
                        self.protocol
                    ));
                }
                if *settle_steps == 0 {
                    bad.push("substrate.settle_steps must be at least 1".into());
                }
            }
            SubstrateSpec::ExcitableMedium(p) => {
                if lc {
                    bad.push("protocol LC_STYLE needs a VIRTUAL_MATERIAL substrate".into());
                }
                if let Err(Error::Config(v)) = ExcitableMedium::new(p.clone()).validate() {
                    bad.extend(v.into_iter().map(|m| format!("substrate.{m}")));
                }
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(bad))
        }
    }

    /// Seed of run `index`, derived from the master seed and the index only.
    pub fn run_seed(&self, index: usize) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(index as u64 + 1);
        rng.next_u64()
    }
}

/// Targets that output TRUE on all-FALSE inputs need a medium that is
/// active without input.
fn needs_pacemaker(target: Gate) -> bool {
    expected(target, false, false)
}

struct Fields<'a> {
    table: &'a toml::Table,
    section: &'static str,
    bad: &'a mut Vec<String>,
    used: Vec<&'static str>,
}

impl Fields<'_> {
    fn get(&mut self, key: &'static str) -> Option<&toml::Value> {
        self.used.push(key);
        self.table.get(key)
    }

    fn uint(&mut self, key: &'static str) -> Option<u64> {
        let section = self.section;
        match self.get(key).cloned() {
            None => None,
            Some(toml::Value::Integer(i)) if i >= 0 => Some(i as u64),
            Some(v) => {
                self.bad
                    .push(format!("{section}.{key} must be a nonnegative integer, got {v}"));
                None
            }
        }
    }

    fn string(&mut self, key: &'static str) -> Option<String> {
        let section = self.section;
        match self.get(key).cloned() {
            None => None,
            Some(toml::Value::String(s)) => Some(s),
            Some(v) => {
                self.bad.push(format!("{section}.{key} must be a string, got {v}"));
                None
            }
        }
    }

    fn boolean(&mut self, key: &'static str) -> Option<bool> {
        let section = self.section;
        match self.get(key).cloned() {
            None => None,
            Some(toml::Value::Boolean(b)) => Some(b),
            Some(v) => {
                self.bad.push(format!("{section}.{key} must be true or false, got {v}"));
                None
            }
        }
    }

    fn reject_unknown(self) {
        for key in self.table.keys() {
            if !self.used.contains(&key.as_str()) {
                self.bad.push(format!("{}.{key}: unknown key", self.section));
            }
        }
    }
}

/// Input rows of the target's truth table: `(a, b)` pairs, `b` unused for NOT.
fn truth_rows(target: Gate) -> &'static [(bool, bool)] {
    if target.is_binary() {
        &[(false, false), (false, true), (true, false), (true, true)]
    } else {
        &[(false, false), (true, false)]
    }
}

fn expected(target: Gate, a: bool, b: bool) -> bool {
    if target.is_binary() {
        target.apply2(a, b)
    } else {
        target.table()[a as usize]
    }
}

/// Fraction of truth-table rows the genotype gets right. Each row costs one
/// evaluation on `evaluator`.
pub fn fitness<S: Substrate>(evaluator: &mut Evaluator<'_, S>, genotype: &S::Genotype, target: Gate) -> f64 {
    let rows = truth_rows(target);
    let correct = rows
        .iter()
        .filter(|&&(a, b)| evaluator.evaluate(genotype, a, b) == expected(target, a, b))
        .count();
    correct as f64 / rows.len() as f64
}

/// [`fitness`] for dynamically typed genotypes and substrates.
pub fn fitness_any(substrate: &AnySubstrate, genotype: &AnyGenotype, target: Gate) -> Result<f64> {
    let rows = truth_rows(target);
    let mut correct = 0;
    for &(a, b) in rows {
        if substrate.evaluate(genotype, a, b)? == expected(target, a, b) {
            correct += 1;
        }
    }
    Ok(correct as f64 / rows.len() as f64)
}

/// One evolutionary run, persisted as a line of JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_index: usize,
    pub run_seed: u64,
    pub target: Gate,
    pub protocol: Protocol,
    /// Best fitness of each generation.
    pub trace: Vec<f64>,
    pub effort: Effort,
    pub generations: u64,
    pub fitness_calls: u64,
    pub evaluations: u64,
    pub best_fitness: f64,
    /// Hex encoding of the best genotype of the run.
    pub genotype: String,
}

impl RunRecord {
    pub fn solved(&self) -> bool {
        !self.effort.censored
    }
}

struct Search<'s, S: Substrate> {
    evaluator: Evaluator<'s, S>,
    target: Gate,
    fitness_calls: u64,
}

impl<'s, S: Substrate> Search<'s, S> {
    fn score(&mut self, g: &S::Genotype) -> f64 {
        self.fitness_calls += 1;
        fitness(&mut self.evaluator, g, self.target)
    }
}

struct Outcome<G> {
    trace: Vec<f64>,
    solved_at: Option<u64>,
    generations: u64,
    best: (G, f64),
}

/// Elitist GA: keep the `elite` fittest, refill with mutated clones of
/// randomly chosen elites. Stops as soon as a perfect genotype is scored.
fn elitist<S: Substrate, R: Rng>(
    search: &mut Search<'_, S>,
    cfg: &ExperimentConfig,
    changes: usize,
    rng: &mut R,
) -> Outcome<S::Genotype> {
    let substrate = search.evaluator.substrate();
    let mut scored: Vec<(S::Genotype, f64)> = Vec::with_capacity(cfg.population);
    let mut trace = Vec::new();
    let mut pending: Vec<S::Genotype> = (0..cfg.population).map(|_| substrate.random_genotype(rng)).collect();

    for generation in 1..=cfg.generation_cutoff {
        let mut solved = false;
        for g in pending.drain(..) {
            let f = search.score(&g);
            scored.push((g, f));
            if f == 1.0 {
                solved = true;
                break;
            }
        }
        scored.sort_by(|a, b| b.1.total_cmp(&a.1));
        trace.push(scored[0].1);
        if solved || generation == cfg.generation_cutoff {
            return Outcome {
                trace,
                solved_at: solved.then_some(generation),
                generations: generation,
                best: scored.swap_remove(0),
            };
        }
        scored.truncate(cfg.elite);
        pending = (0..cfg.population - cfg.elite)
            .map(|_| {
                let mut child = scored[rng.gen_range(0..scored.len())].0.clone();
                substrate.mutate(&mut child, changes, rng);
                child
            })
            .collect();
    }
    unreachable!("generation_cutoff is at least 1")
}

/// Random search: a fresh population every generation, no selection.
fn random_search<S: Substrate, R: Rng>(
    search: &mut Search<'_, S>,
    cfg: &ExperimentConfig,
    rng: &mut R,
) -> Outcome<S::Genotype> {
    let substrate = search.evaluator.substrate();
    let mut trace = Vec::new();
    let mut best: Option<(S::Genotype, f64)> = None;
    for generation in 1..=cfg.generation_cutoff {
        let mut gen_best = 0.0f64;
        let mut solved = false;
        for _ in 0..cfg.population {
            let g = substrate.random_genotype(rng);
            let f = search.score(&g);
            gen_best = gen_best.max(f);
            if best.as_ref().is_none_or(|(_, bf)| f > *bf) {
                best = Some((g, f));
            }
            if f == 1.0 {
                solved = true;
                break;
            }
        }
        trace.push(gen_best);
        if solved || generation == cfg.generation_cutoff {
            return Outcome {
                trace,
                solved_at: solved.then_some(generation),
                generations: generation,
                best: best.unwrap(),
            };
        }
    }
    unreachable!("generation_cutoff is at least 1")
}

fn run_on<S: Substrate>(substrate: &S, cfg: &ExperimentConfig, run_index: usize, changes: usize) -> RunRecord {
    let run_seed = cfg.run_seed(run_index);
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    let mut search = Search {
        evaluator: Evaluator::new(substrate),
        target: cfg.target,
        fitness_calls: 0,
    };
    let outcome = match cfg.protocol {
        Protocol::BzRandom => random_search(&mut search, cfg, &mut rng),
        Protocol::LcStyle | Protocol::BzCoevolutionary => elitist(&mut search, cfg, changes, &mut rng),
    };
    let evaluations = search.evaluator.count();
    let unit = cfg.protocol.unit();
    let effort = match (unit, outcome.solved_at) {
        (EffortUnit::Evaluations, Some(_)) => Effort::exact(evaluations, unit),
        (EffortUnit::Evaluations, None) => Effort::censored(evaluations, unit),
        (EffortUnit::Generations, Some(g)) => Effort::exact(g, unit),
        (EffortUnit::Generations, None) => Effort::censored(cfg.generation_cutoff, unit),
    };
    RunRecord {
        run_index,
        run_seed,
        target: cfg.target,
        protocol: cfg.protocol,
        trace: outcome.trace,
        effort,
        generations: outcome.generations,
        fitness_calls: search.fitness_calls,
        evaluations,
        best_fitness: outcome.best.1,
        genotype: substrate.encode(&outcome.best.0),
    }
}

/// Runs one evolutionary search. Fully determined by the config and
/// `run_index`.
pub fn run_evolution(cfg: &ExperimentConfig, run_index: usize) -> Result<RunRecord> {
    cfg.validate()?;
    Ok(match cfg.substrate.build() {
        AnySubstrate::Material(m) => run_on(&m, cfg, run_index, cfg.mutations_per_individual),
        AnySubstrate::Medium(m) => run_on(&m, cfg, run_index, cfg.mutation_rate),
    })
}

/// Runs `cfg.runs` searches on `workers` threads and aggregates them.
/// Results do not depend on `workers`.
pub fn run_experiment(cfg: &ExperimentConfig, workers: usize) -> Result<(GateStats, Vec<RunRecord>)> {
    cfg.validate()?;
    let substrate = cfg.substrate.build();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    let records: Vec<RunRecord> = pool.install(|| {
        (0..cfg.runs)
            .into_par_iter()
            .map(|i| match &substrate {
                AnySubstrate::Material(m) => run_on::<VirtualMaterial>(m, cfg, i, cfg.mutations_per_individual),
                AnySubstrate::Medium(m) => run_on::<ExcitableMedium>(m, cfg, i, cfg.mutation_rate),
            })
            .collect()
    });
    let stats = GateStats::from_records(cfg, &records)?;
    Ok((stats, records))
}

/// Success rate as printed, e.g. `7/10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuccessRate {
    pub successes: u32,
    pub runs: u32,
}

impl SuccessRate {
    pub fn fraction(&self) -> f64 {
        self.successes as f64 / self.runs as f64
    }
}

impl fmt::Display for SuccessRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.successes, self.runs)
    }
}

/// One row of an effort table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateStats {
    pub gate: Gate,
    /// Protocol or controller label; rankings only compare equal labels.
    pub protocol: String,
    pub mutation_rate: Option<u64>,
    pub success: Option<SuccessRate>,
    pub min: Effort,
    pub max: Effort,
    pub avg: f64,
    pub std: f64,
    pub unit: EffortUnit,
    /// Some censored run entered `avg`/`std` at its cutoff value.
    pub censored: bool,
}

impl GateStats {
    /// Aggregates efforts. Censored efforts enter the mean and the sample
    /// standard deviation at their cutoff value; a single run has std 0.
    pub fn from_efforts(gate: Gate, protocol: &str, mutation_rate: Option<u64>, efforts: &[Effort]) -> Result<Self> {
        let first = efforts.first().ok_or(Error::NoStats)?;
        if let Some(e) = efforts.iter().find(|e| e.unit != first.unit) {
            return Err(Error::MixedUnits(first.unit, e.unit));
        }
        let min = *efforts.iter().min_by(|a, b| a.compare(b)).unwrap();
        let max = *efforts.iter().max_by(|a, b| a.compare(b)).unwrap();
        let n = efforts.len() as f64;
        let avg = efforts.iter().map(|e| e.value as f64).sum::<f64>() / n;
        let std = if efforts.len() > 1 {
            let ss: f64 = efforts.iter().map(|e| (e.value as f64 - avg).powi(2)).sum();
            (ss / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let successes = efforts.iter().filter(|e| !e.censored).count() as u32;
        Ok(Self {
            gate,
            protocol: protocol.to_string(),
            mutation_rate,
            success: Some(SuccessRate {
                successes,
                runs: efforts.len() as u32,
            }),
            min,
            max,
            avg,
            std,
            unit: first.unit,
            censored: successes < efforts.len() as u32,
        })
    }

    pub fn from_records(cfg: &ExperimentConfig, records: &[RunRecord]) -> Result<Self> {
        let efforts: Vec<Effort> = records.iter().map(|r| r.effort).collect();
        let rate = match cfg.protocol {
            Protocol::LcStyle => cfg.mutations_per_individual,
            _ => cfg.mutation_rate,
        };
        Self::from_efforts(cfg.target, cfg.protocol.name(), Some(rate as u64), &efforts)
    }

    pub fn success_rate(&self) -> Option<f64> {
        self.success.map(|s| s.fraction())
    }
}

pub const STATS_CSV_HEADER: &str = "gate,controller,mutation_rate,success_rate,min,max,avg,std,unit,censored";

/// Writes the table in effort-table column order, plus `unit` and `censored`.
pub fn write_stats_csv<W: Write>(stats: &[GateStats], mut out: W) -> io::Result<()> {
    writeln!(out, "{STATS_CSV_HEADER}")?;
    for s in stats {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.2},{:.2},{},{}",
            s.gate,
            s.protocol,
            s.mutation_rate.map(|r| r.to_string()).unwrap_or_default(),
            s.success.map(|r| r.to_string()).unwrap_or_default(),
            s.min,
            s.max,
            s.avg,
            s.std,
            s.unit,
            s.censored
        )?;
    }
    Ok(())
}

pub fn write_records_jsonl<W: Write>(records: &[RunRecord], mut out: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        writeln!(out)?;
    }
    Ok(())
}

pub fn read_records_jsonl(text: &str) -> Result<Vec<RunRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EVALS: EffortUnit = EffortUnit::Evaluations;
    const GENS: EffortUnit = EffortUnit::Generations;

    #[test]
    fn censored_efforts_compare_as_lower_bounds() {
        let a = Effort::censored(2000, GENS);
        let b = Effort::censored(2000, GENS);
        assert_eq!(a.compare(&b), Ordering::Equal);
        assert_eq!(Effort::exact(2000, GENS).compare(&a), Ordering::Less);
        assert_eq!(Effort::exact(1080, GENS).compare(&a), Ordering::Less);
        assert_eq!(a.to_string(), ">2000");
    }

    #[test]
    fn singleton_statistics() {
        let s = GateStats::from_efforts(Gate::And, "x", None, &[Effort::exact(17, EVALS)]).unwrap();
        assert_eq!((s.min.value, s.max.value, s.avg, s.std), (17, 17, 17.0, 0.0));
        assert!(!s.censored);
        assert_eq!(s.success_rate(), Some(1.0));
    }

    #[test]
    fn censored_run_enters_mean_at_cutoff() {
        let s = GateStats::from_efforts(
            Gate::Xor,
            "x",
            None,
            &[Effort::censored(2000, GENS), Effort::exact(1000, GENS)],
        )
        .unwrap();
        assert_eq!(s.max.to_string(), ">2000");
        assert_eq!(s.min.to_string(), "1000");
        assert_eq!(s.avg, 1500.0);
        assert!(s.censored);
        assert_eq!(s.success.unwrap().to_string(), "1/2");
    }

    #[test]
    fn ten_run_row_shape() {
        // Ten efforts with min 8, max 144 and mean 61.
        let values = [8, 144, 30, 40, 50, 55, 60, 70, 75, 78];
        assert_eq!(values.iter().sum::<u64>(), 610);
        let efforts: Vec<Effort> = values.iter().map(|&v| Effort::exact(v, GENS)).collect();
        let s = GateStats::from_efforts(Gate::And, "BZ_COEVOLUTIONARY", Some(4000), &efforts).unwrap();
        assert_eq!((s.min.value, s.max.value, s.avg), (8, 144, 61.0));
        assert!(s.min.value as f64 <= s.avg && s.avg <= s.max.value as f64);
    }

    #[test]
    fn mixed_units_refused() {
        let r = GateStats::from_efforts(Gate::And, "x", None, &[Effort::exact(1, EVALS), Effort::exact(1, GENS)]);
        assert!(matches!(r, Err(Error::MixedUnits(..))));
    }

    #[test]
    fn constant_responders() {
        // Constant 0 gets XOR right on (0,0) and (1,1); constant 1 gets three NAND rows.
        let zero = |t: Gate| truth_rows(t).iter().filter(|&&(a, b)| !expected(t, a, b)).count() as f64 / 4.0;
        let one = |t: Gate| truth_rows(t).iter().filter(|&&(a, b)| expected(t, a, b)).count() as f64 / 4.0;
        assert_eq!(zero(Gate::Xor), 0.5);
        assert_eq!(one(Gate::Nand), 0.75);
    }

    #[test]
    fn config_rejects_every_bad_field() {
        let text = r#"
            [experiment]
            protocol = "LC_STYLE"
            target = "XNOR"
            master_seed = -3
            population = 4
            elite = 9
            colour = "red"
            [substrate]
            kind = "EXCITABLE_MEDIUM"
        "#;
        match ExperimentConfig::from_toml_str(text) {
            Err(Error::Config(v)) => {
                let all = v.join("\n");
                for needle in ["target", "master_seed", "elite", "colour", "substrate.kind"] {
                    assert!(all.contains(needle), "missing {needle} in\n{all}");
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn config_round_trip() {
        for p in [Protocol::LcStyle, Protocol::BzCoevolutionary, Protocol::BzRandom] {
            let cfg = ExperimentConfig::defaults(p, Gate::Nand, 99);
            let back = ExperimentConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
            assert_eq!(back, cfg);
        }
    }

    #[test]
    fn run_seeds_depend_only_on_index() {
        let cfg = ExperimentConfig::defaults(Protocol::LcStyle, Gate::Or, 5);
        let seeds: Vec<u64> = (0..10).map(|i| cfg.run_seed(i)).collect();
        assert_eq!(seeds, (0..10).map(|i| cfg.run_seed(i)).collect::<Vec<_>>());
        let mut sorted = seeds.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 10);
    }
}
