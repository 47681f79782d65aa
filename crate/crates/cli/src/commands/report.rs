use gatecx_core::fixtures::ReferenceTable;
use gatecx_core::hierarchy::check_findings;
use gatecx_core::measures::{behavioural_ranking, BehaviourParams};
use gatecx_core::{Error, Gate};

use crate::args::{FormatArg, ReportArgs};
use crate::exit::{CliResult, Code};
use crate::output::write_atomic;

pub fn report_cmd(args: &ReportArgs) -> CliResult {
    let mut report = check_findings(&[ReferenceTable::fig1a(), ReferenceTable::fig1b()])?;
    let mut extra = String::new();
    if args.behaviour {
        let (ranking, _) = behavioural_ranking(&Gate::BINARY, &BehaviourParams::default())?;
        report.score_behavioural("measured behaviour", &ranking)?;
        extra = format!("measured behavioural ranking: {ranking}\n");
    }
    let text = match args.format {
        FormatArg::Text => format!("{extra}{}", report.to_text()),
        FormatArg::Json => serde_json::to_string_pretty(&report).map_err(Error::from)? + "\n",
    };
    match &args.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(if report.all_pass() { Code::Ok } else { Code::CheckFailed })
}
