use std::time::{Instant, SystemTime, UNIX_EPOCH};

use gatecx_core::evolution::{run_experiment, write_records_jsonl, write_stats_csv, ExperimentConfig, Protocol};
use gatecx_core::hierarchy::{published, ranking_from_stats, Correlation, FindingsReport, StatKey};
use gatecx_core::Error;

use crate::args::EvolveArgs;
use crate::commands::ca::parse_gate;
use crate::exit::{CliError, CliResult, Code};
use crate::output::{create_dir, read_to_string, write_atomic};
use crate::record::{ExperimentRecord, KeyedRanking, WallClock, RECORD_FILE, RUNS_FILE, STATS_FILE};

/// Resolves one config per target. Targets are substituted in the TOML text
/// so that target-dependent defaults are re-derived.
pub fn resolve_configs(source: &str, targets: &[String]) -> CliResult<Vec<ExperimentConfig>> {
    let base = ExperimentConfig::from_toml_str(source)?;
    if targets.is_empty() {
        return Ok(vec![base]);
    }
    let mut doc: toml::Table = source.parse().map_err(Error::from)?;
    let mut configs = Vec::new();
    for name in targets {
        let gate = parse_gate(name)?;
        if let Some(toml::Value::Table(exp)) = doc.get_mut("experiment") {
            exp.insert("target".into(), toml::Value::String(gate.name().into()));
        }
        configs.push(ExperimentConfig::from_toml_str(
            &toml::to_string(&doc).expect("table serializes"),
        )?);
    }
    Ok(configs)
}

pub fn evolve_cmd(args: &EvolveArgs) -> CliResult {
    if args.workers == 0 {
        return Err(CliError::new(Code::InvalidInput, "--workers must be at least 1"));
    }
    let source = read_to_string(&args.config)?;
    let configs = resolve_configs(&source, &args.targets)?;
    create_dir(&args.out)?;

    let started_unix_ms = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    let clock = Instant::now();
    let mut stats = Vec::new();
    let mut records = Vec::new();
    for cfg in &configs {
        let (s, r) = run_experiment(cfg, args.workers)?;
        eprintln!(
            "{} {}: success {} min {} max {} avg {:.2}",
            cfg.protocol,
            cfg.target,
            s.success.map(|x| x.to_string()).unwrap_or_default(),
            s.min,
            s.max,
            s.avg
        );
        stats.push(s);
        records.extend(r);
    }

    let mut runs = Vec::new();
    write_records_jsonl(&records, &mut runs).map_err(|e| CliError::io(&args.out.join(RUNS_FILE), e))?;
    write_atomic(&args.out.join(RUNS_FILE), &runs)?;
    let mut csv = Vec::new();
    write_stats_csv(&stats, &mut csv).map_err(|e| CliError::io(&args.out.join(STATS_FILE), e))?;
    write_atomic(&args.out.join(STATS_FILE), &csv)?;

    let mut rankings = Vec::new();
    for key in [StatKey::Min, StatKey::Avg, StatKey::Max] {
        let ranking = ranking_from_stats(&stats, key)?;
        rankings.push(KeyedRanking {
            key,
            chain: ranking.to_string(),
            ranking,
        });
    }
    let reference = match configs[0].protocol {
        Protocol::LcStyle => ("finding1-min", published::lc_min()),
        _ => ("finding2-min", published::bz_min_avg()),
    };
    let mut findings = FindingsReport {
        checks: Vec::new(),
        correlations: Vec::new(),
        behavioural_discrepancy: false,
        notes: Vec::new(),
    };
    match Correlation::between("experiment MIN", &rankings[0].ranking, reference.0, &reference.1) {
        Ok(c) => findings.correlations.push(c),
        Err(e) => findings.notes.push(format!("no correlation with {}: {e}", reference.0)),
    }

    let record = ExperimentRecord {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_source: source,
        configs,
        stats,
        runs_file: RUNS_FILE.to_string(),
        stats_file: STATS_FILE.to_string(),
        rankings,
        findings,
        wall_clock: WallClock {
            started_unix_ms,
            elapsed_ms: clock.elapsed().as_millis(),
            workers: args.workers,
        },
    };
    let json = serde_json::to_string_pretty(&record).map_err(Error::from)?;
    write_atomic(&args.out.join(RECORD_FILE), json.as_bytes())?;
    print!("{}", String::from_utf8_lossy(&csv));
    for r in &record.rankings {
        println!("{}: {}", r.key, r.chain);
    }
    Ok(Code::Ok)
}
