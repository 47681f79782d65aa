use std::fmt::Write as _;

use gatecx_core::ca::{run, Boundary, Configuration};
use gatecx_core::measures::{behavioural_ranking, detect_attractor, neighbourhood_frequencies, BehaviourParams};
use gatecx_core::pbm::to_pbm_string;
use gatecx_core::Gate;
use serde::Serialize;

use crate::args::{BoundaryArg, CaRunArgs, MeasureArgs};
use crate::exit::{CliError, CliResult, Code};
use crate::output::{create_dir, write_atomic};

pub fn parse_gate(name: &str) -> CliResult<Gate> {
    name.trim().parse::<Gate>().map_err(CliError::from)
}

fn binary_gate(name: &str) -> CliResult<Gate> {
    let gate = parse_gate(name)?;
    if !gate.is_binary() {
        return Err(CliError::new(
            Code::InvalidInput,
            format!("{gate} is unary and cannot drive an automaton"),
        ));
    }
    Ok(gate)
}

pub fn run_cmd(args: &CaRunArgs) -> CliResult {
    let gate = binary_gate(&args.gate)?;
    let boundary = match args.boundary {
        BoundaryArg::Periodic => Boundary::Periodic,
        BoundaryArg::FixedFalse => Boundary::FixedFalse,
    };
    let initial = match args.seed {
        Some(seed) => Configuration::random(args.n, args.density, seed, boundary)?,
        None => Configuration::single_seed(args.n, boundary)?,
    };
    let diagram = run(&initial, gate, args.steps)?;
    write_atomic(&args.out, to_pbm_string(&diagram).as_bytes())?;
    print!("{}", summary(gate, &initial, args)?);
    Ok(Code::Ok)
}

fn summary(gate: Gate, initial: &Configuration, args: &CaRunArgs) -> CliResult<String> {
    let mut s = String::new();
    let start = match args.seed {
        Some(seed) => format!("seed {seed}, density {}", args.density),
        None => "single seed".to_string(),
    };
    let _ = writeln!(
        s,
        "gate {gate} (rule {}), {} cells, {} steps, {start}",
        gate.eca_rule_number()?,
        args.n,
        args.steps
    );
    let _ = writeln!(s, "diagram: {} x {} -> {}", args.n, args.steps + 1, args.out.display());
    let a = detect_attractor(initial, gate, args.cap)?;
    if a.censored {
        let _ = writeln!(s, "attractor: censored, none found within {} steps", a.cap);
        return Ok(s);
    }
    let _ = writeln!(s, "attractor: transient {}, period {}", a.transient, a.period);
    let mut row = initial.clone();
    for _ in 0..a.transient {
        row = row.step(gate)?;
    }
    let mut rows = vec![row];
    for _ in 1..a.period.min(2) {
        let next = rows.last().unwrap().step(gate)?;
        rows.push(next);
    }
    let describe = |c: &Configuration| match c.count_ones() {
        0 => "all-FALSE".to_string(),
        n if n == c.len() => "all-TRUE".to_string(),
        n => format!("heterogeneous, {n} TRUE"),
    };
    match a.period {
        1 => {
            let _ = writeln!(s, "fixed point: {}", describe(&rows[0]));
        }
        2 => {
            let _ = writeln!(s, "cycle: {} / {}", describe(&rows[0]), describe(&rows[1]));
        }
        _ => {}
    }
    Ok(s)
}

#[derive(Serialize)]
struct MeasureOutput<'a> {
    params: &'a BehaviourParams,
    profiles: &'a [gatecx_core::measures::BehaviourProfile],
    ranking: &'a gatecx_core::Ranking,
    chain: String,
    frequency_files: Vec<String>,
}

pub fn measure_cmd(args: &MeasureArgs) -> CliResult {
    let gates = args
        .gates
        .iter()
        .map(|g| binary_gate(g))
        .collect::<CliResult<Vec<_>>>()?;
    if args.seeds == 0 {
        return Err(CliError::new(Code::InvalidInput, "--seeds must be at least 1"));
    }
    let params = BehaviourParams {
        density: args.density,
        seeds: (args.seed..args.seed + args.seeds).collect(),
        cap: args.cap,
        ..BehaviourParams::for_cells(args.n)
    };
    create_dir(&args.out)?;
    let initial = Configuration::random(args.n, args.density, args.seed, Boundary::Periodic)?;
    let mut files = Vec::new();
    for &gate in &gates {
        let profile = neighbourhood_frequencies(&run(&initial, gate, args.steps)?)?;
        let name = format!("freq_{gate}.csv");
        let mut csv = Vec::new();
        profile
            .write_csv(&mut csv)
            .map_err(|e| CliError::io(&args.out.join(&name), e))?;
        write_atomic(&args.out.join(&name), &csv)?;
        files.push(name);
    }
    let (ranking, profiles) = behavioural_ranking(&gates, &params)?;
    let out = MeasureOutput {
        params: &params,
        profiles: &profiles,
        ranking: &ranking,
        chain: ranking.to_string(),
        frequency_files: files,
    };
    let json = serde_json::to_string_pretty(&out).map_err(gatecx_core::Error::from)?;
    write_atomic(&args.out.join("profiles.json"), json.as_bytes())?;
    for p in &profiles {
        println!(
            "{:<5} {:<22} T+P {:>10.2}  entropy {:.3}",
            p.gate.to_string(),
            format!("{:?}", p.morphology),
            p.mean_transient_plus_period,
            p.mean_attractor_entropy
        );
    }
    println!("ranking: {ranking}");
    Ok(Code::Ok)
}
