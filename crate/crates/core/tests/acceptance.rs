//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Every criterion runs even when an earlier one fails.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use gatecx_core::ca::{run, Boundary, Configuration};
use gatecx_core::evolution::{run_experiment, write_stats_csv, ExperimentConfig, Protocol};
use gatecx_core::fixtures::{Controller, ReferenceTable};
use gatecx_core::hierarchy::{check_findings, kendall_tau_b, pairwise_agreement, ranking_from_stats, StatKey};
use gatecx_core::measures::{analyse_seed, behavioural_ranking, detect_attractor, BehaviourParams};
use gatecx_core::{Error, Gate, Ranking};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn c1_fixture_hierarchy() -> Outcome {
    let stats = ReferenceTable::fig1a().stats(None, None);
    let min = ranking_from_stats(&stats, StatKey::Min).map_err(err)?.to_string();
    let avg = ranking_from_stats(&stats, StatKey::Avg).map_err(err)?.to_string();
    ensure(min == "{OR, NOR} ◀ AND ◀ NOT ◀ NAND ◀ XOR", || {
        format!("MIN gave {min}")
    })?;
    ensure(avg == "NOT ◀ XOR ◀ OR ◀ NAND ◀ NOR ◀ AND", || {
        format!("AVG gave {avg}")
    })
}

fn c2_medium_hierarchy() -> Outcome {
    let t = ReferenceTable::fig1b();
    let coev = Some(Controller::Coevolutionary);
    let at = |rate, key| -> Result<String, String> {
        Ok(ranking_from_stats(&t.stats(coev, Some(rate)), key)
            .map_err(err)?
            .to_string())
    };
    for (rate, key, want) in [
        (6000, StatKey::Min, "AND ◀ NAND ◀ XOR"),
        (6000, StatKey::Avg, "AND ◀ NAND ◀ XOR"),
        (6000, StatKey::Max, "AND ◀ {NAND, XOR}"),
        (4000, StatKey::Avg, "AND ◀ XOR ◀ NAND"),
    ] {
        let got = at(rate, key)?;
        ensure(got == want, || format!("rate {rate} {key}: {got}, want {want}"))?;
    }
    Ok(())
}

fn c3_rule_numbers() -> Outcome {
    for (gate, want) in [
        (Gate::And, 160),
        (Gate::Or, 250),
        (Gate::Xor, 90),
        (Gate::Nand, 95),
        (Gate::Nor, 5),
    ] {
        let got = gate.eca_rule_number().map_err(err)?;
        let oracle = common::rule_by_enumeration(gate.name());
        ensure(got == want && oracle == want, || {
            format!("{gate}: library {got}, oracle {oracle}, want {want}")
        })?;
    }
    Ok(())
}

fn c4_ring_behaviour() -> Outcome {
    let params = BehaviourParams::default();
    let mut failures = Vec::new();
    for gate in Gate::BINARY {
        let mut hits = 0;
        for &seed in &params.seeds {
            let c = Configuration::random(params.cells, params.density, seed, Boundary::Periodic).map_err(err)?;
            let o = analyse_seed(&c, gate, &params, seed).map_err(err)?;
            let a = o.attractor;
            let mut end = c.clone();
            for _ in 0..a.transient.min(64) {
                end = end.step(gate).map_err(err)?;
            }
            let ok = match gate {
                Gate::And => !a.censored && a.period == 1 && a.transient <= 32 && end.count_ones() == 0,
                Gate::Or => !a.censored && a.period == 1 && a.transient <= 32 && end.count_ones() == params.cells,
                Gate::Nor => !a.censored && a.period == 2 && !o.heterogeneous,
                Gate::Nand => !a.censored && a.period == 2 && o.heterogeneous,
                Gate::Xor => a.transient_plus_period() > 2000,
                Gate::Not => unreachable!(),
            };
            hits += ok as usize;
        }
        let need = if gate == Gate::Nand { 15 } else { 20 };
        if hits < need {
            failures.push(format!("{gate} {hits}/20 (need {need})"));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))
}

fn c5_oracle_equivalence() -> Outcome {
    for n in [8usize, 12, 16] {
        for gate in Gate::BINARY {
            for seed in 0..100u64 {
                let bits = common::random_row(n, seed * 31 + n as u64);
                let c = Configuration::from_bits(&bits, Boundary::Periodic).map_err(err)?;
                let r = detect_attractor(&c, gate, 1 << 16).map_err(err)?;
                let o = common::orbit_oracle(&bits, gate.name());
                ensure((r.transient, r.period) == o, || {
                    format!("{gate} N={n} seed {seed}: {:?} vs {o:?}", (r.transient, r.period))
                })?;
            }
        }
    }
    Ok(())
}

fn c6_rule90() -> Outcome {
    let d = run(
        &Configuration::single_seed(64, Boundary::Periodic).map_err(err)?,
        Gate::Xor,
        16,
    )
    .map_err(err)?;
    for (t, row) in d.rows().iter().enumerate() {
        let want = 1usize << (t as u32).count_ones();
        ensure(row.count_ones() == want, || {
            format!("t={t}: {} cells, want {want}", row.count_ones())
        })?;
    }
    Ok(())
}

fn c7_behavioural_ranking() -> Outcome {
    let (ranking, profiles) = behavioural_ranking(&Gate::BINARY, &BehaviourParams::default()).map_err(err)?;
    let report = check_findings(&[ReferenceTable::fig1a(), ReferenceTable::fig1b()]).map_err(err)?;
    let flagged = report.behavioural_discrepancy && report.to_text().contains("FLAG");
    let got = ranking.to_string();
    let detail: Vec<String> = profiles
        .iter()
        .map(|p| {
            format!(
                "{} {:?} T+P {:.2} H {:.3}",
                p.gate, p.morphology, p.mean_transient_plus_period, p.mean_attractor_entropy
            )
        })
        .collect();
    ensure(flagged, || {
        "findings report does not flag the behavioural discrepancy".into()
    })?;
    ensure(got == "{AND, OR} ◀ NOR ◀ NAND ◀ XOR", || {
        format!("got {got} [{}]", detail.join(", "))
    })
}

fn stats_csv(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<u8>, String> {
    let (stats, _) = run_experiment(cfg, workers).map_err(err)?;
    let mut out = Vec::new();
    write_stats_csv(&[stats], &mut out).map_err(|e| e.to_string())?;
    Ok(out)
}

fn c8_evolution() -> Outcome {
    let mut configs: Vec<ExperimentConfig> = Gate::BINARY
        .iter()
        .map(|&g| ExperimentConfig::defaults(Protocol::LcStyle, g, 2024))
        .collect();
    for protocol in [Protocol::BzCoevolutionary, Protocol::BzRandom] {
        let mut cfg = ExperimentConfig::defaults(protocol, Gate::And, 2024);
        cfg.generation_cutoff = 3;
        cfg.runs = 4;
        configs.push(cfg);
    }
    for cfg in &configs {
        let one = stats_csv(cfg, 1)?;
        let eight = stats_csv(cfg, 8)?;
        ensure(one == eight, || {
            format!("(a) {} {}: stats differ across worker counts", cfg.protocol, cfg.target)
        })?;
        let (_, records) = run_experiment(cfg, 8).map_err(err)?;
        for r in &records {
            ensure(r.trace.windows(2).all(|w| w[1] >= w[0]), || {
                format!("(b) run {} of {} not monotone", r.run_index, cfg.target)
            })?;
        }
    }
    let cfg = ExperimentConfig::defaults(Protocol::LcStyle, Gate::Or, 42);
    let (stats, _) = run_experiment(&cfg, 8).map_err(err)?;
    let rate = stats.success.ok_or("(c) no success rate")?;
    ensure(rate.successes == 10 && rate.runs == 10, || {
        format!("(c) OR success {rate}")
    })
}

/// Every weak order over `gates`, as rankings.
fn weak_orders(gates: &[Gate]) -> Vec<Ranking> {
    let k = gates.len();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for code in 0..k.pow(k as u32) {
        let mut levels = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            levels.push(c % k);
            c /= k;
        }
        let mut groups = vec![Vec::new(); k];
        for (g, l) in gates.iter().zip(&levels) {
            groups[*l].push(*g);
        }
        groups.retain(|g: &Vec<Gate>| !g.is_empty());
        let r = Ranking::new(groups).unwrap();
        if seen.insert(r.to_string()) {
            out.push(r);
        }
    }
    out
}

/// (tau-b, agreement) by plain enumeration of gate pairs.
fn enumerate(r1: &Ranking, r2: &Ranking) -> Option<(f64, f64)> {
    let common: Vec<Gate> = Gate::ALL
        .iter()
        .copied()
        .filter(|g| r1.level(*g).is_some() && r2.level(*g).is_some())
        .collect();
    let (mut s, mut n1, mut n2, mut same, mut pairs) = (0i64, 0i64, 0i64, 0u32, 0u32);
    for i in 0..common.len() {
        for j in i + 1..common.len() {
            let a = (r1.level(common[i])? as i64 - r1.level(common[j])? as i64).signum();
            let b = (r2.level(common[i])? as i64 - r2.level(common[j])? as i64).signum();
            s += a * b;
            n1 += a * a;
            n2 += b * b;
            same += (a == b) as u32;
            pairs += 1;
        }
    }
    if pairs == 0 || n1 * n2 == 0 {
        return None;
    }
    Some((s as f64 / ((n1 * n2) as f64).sqrt(), same as f64 / pairs as f64))
}

fn c9_rank_correlation() -> Outcome {
    let mut sets: Vec<Vec<Gate>> = (2..=5).map(|k| Gate::BINARY[..k].to_vec()).collect();
    sets.push(vec![Gate::Not, Gate::Xor, Gate::Nand, Gate::Nor, Gate::Or]);
    let orders: Vec<Vec<Ranking>> = sets.iter().map(|s| weak_orders(s)).collect();
    let mut compared = 0u64;
    for (i, a) in orders.iter().enumerate() {
        for b in &orders[i..] {
            for r1 in a {
                for r2 in b {
                    let lib = kendall_tau_b(r1, r2).and_then(|t| Ok((t, pairwise_agreement(r1, r2)?)));
                    match (lib, enumerate(r1, r2)) {
                        (Ok((t, p)), Some((te, pe))) => {
                            ensure((t - te).abs() < 1e-12 && (p - pe).abs() < 1e-12, || {
                                format!("{r1} vs {r2}: ({t}, {p}) vs ({te}, {pe})")
                            })?;
                        }
                        (Err(_), None) => {}
                        (l, e) => return Err(format!("{r1} vs {r2}: library {l:?}, enumeration {e:?}")),
                    }
                    compared += 1;
                }
            }
        }
    }
    ensure(orders[3].len() == 541 && compared > 300_000, || {
        format!("only {compared} pairs compared")
    })
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 fixture hierarchy reproduction", c1_fixture_hierarchy),
        ("2 excitable-medium hierarchy reproduction", c2_medium_hierarchy),
        ("3 gate/rule equivalence", c3_rule_numbers),
        ("4 ring behaviour N=200", c4_ring_behaviour),
        ("5 attractor oracle equivalence", c5_oracle_equivalence),
        ("6 rule 90 single-seed popcount", c6_rule90),
        ("7 behavioural ranking", c7_behavioural_ranking),
        ("8 evolution harness properties", c8_evolution),
        ("9 rank correlation enumeration", c9_rank_correlation),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS criterion {name} ({secs:.2}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.2}s): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
