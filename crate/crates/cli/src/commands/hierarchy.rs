use std::collections::BTreeSet;

use gatecx_core::evolution::GateStats;
use gatecx_core::fixtures::{Controller, ReferenceTable, TableId};
use gatecx_core::hierarchy::{check_findings, ranking_from_stats, reference_by_name, Correlation, StatKey};
use gatecx_core::Error;

use crate::args::{ControllerArg, FixtureArg, HierarchyArgs, KeyArg};
use crate::exit::{CliError, CliResult, Code};
use crate::output::read_to_string;
use crate::record::ExperimentRecord;

pub fn hierarchy_cmd(args: &HierarchyArgs) -> CliResult {
    let references = args
        .reference
        .iter()
        .map(|name| {
            reference_by_name(name)
                .map(|r| (name.clone(), r))
                .ok_or_else(|| CliError::new(Code::InvalidInput, format!("unknown reference hierarchy `{name}`")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let controller = args.controller.map(|c| match c {
        ControllerArg::Coevolutionary => Controller::Coevolutionary,
        ControllerArg::Random => Controller::Random,
    });
    let key = match args.key {
        KeyArg::Min => StatKey::Min,
        KeyArg::Max => StatKey::Max,
        KeyArg::Avg => StatKey::Avg,
    };

    let mut tables = Vec::new();
    let mut stats: Vec<GateStats> = Vec::new();
    for f in &args.fixture {
        let table = ReferenceTable::by_id(match f {
            FixtureArg::Fig1a => TableId::Fig1a,
            FixtureArg::Fig1b => TableId::Fig1b,
        });
        table.verify()?;
        // Only the excitable-medium table has controller and rate columns.
        let rows = match table.id {
            TableId::Fig1a => table.stats(None, None),
            TableId::Fig1b => table.stats(controller, args.rate),
        };
        println!("input: {} ({} rows)", table.id, rows.len());
        stats.extend(rows);
        tables.push(table);
    }
    for path in &args.record {
        let record: ExperimentRecord = serde_json::from_str(&read_to_string(path)?)
            .map_err(|e| CliError::new(Code::Data, format!("{}: {e}", path.display())))?;
        let rows = record.stats;
        println!("input: {} ({} rows)", path.display(), rows.len());
        stats.extend(rows);
    }
    if stats.is_empty() {
        return Err(CliError::new(Code::InvalidInput, "the filters leave no rows to rank"));
    }
    let mut seen = BTreeSet::new();
    for s in &stats {
        if s.unit == stats[0].unit && s.protocol == stats[0].protocol && !seen.insert(s.gate) {
            return Err(CliError::new(
                Code::InvalidInput,
                format!(
                    "several rows for {} under `{}`; narrow them with --controller or --rate",
                    s.gate, s.protocol
                ),
            ));
        }
    }

    let ranking = ranking_from_stats(&stats, key)?;
    println!("key: {key}");
    println!("ranking: {ranking}");
    for (name, reference) in &references {
        println!("reference {name}: {reference}");
        match Correlation::between("ranking", &ranking, name, reference) {
            Ok(c) => println!(
                "  common gates {}, tau-b {:+.4}, agreement {:.4}",
                c.common_gates, c.tau_b, c.agreement
            ),
            Err(e @ (Error::TooFewCommonGates(_) | Error::AllTied)) => println!("  no correlation: {e}"),
            Err(e) => return Err(e.into()),
        }
    }

    if tables.is_empty() {
        return Ok(Code::Ok);
    }
    let report = check_findings(&tables)?;
    for c in &report.checks {
        println!(
            "{} {} {} {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.id,
            c.source,
            c.key,
            c.observed
        );
    }
    Ok(if report.all_pass() { Code::Ok } else { Code::CheckFailed })
}
