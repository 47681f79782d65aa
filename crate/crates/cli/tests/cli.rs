use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn gatecx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gatecx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Brute-force ring rendering: x'[i] = f(x[i-1], x[i+1]).
fn render_oracle(n: usize, steps: usize, f: fn(bool, bool) -> bool) -> String {
    let mut row = vec![false; n];
    row[n / 2] = true;
    let mut s = format!("P1\n{n} {}\n", steps + 1);
    for t in 0..=steps {
        s.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
        s.push('\n');
        if t < steps {
            row = (0..n).map(|i| f(row[(i + n - 1) % n], row[(i + 1) % n])).collect();
        }
    }
    s
}

#[test]
fn nor_single_seed_matches_oracle_rendering() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("nor.pbm");
    let o = gatecx(&[
        "ca",
        "run",
        "--gate",
        "NOR",
        "--n",
        "16",
        "--steps",
        "8",
        "--single-seed",
        "--out",
        p(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        render_oracle(16, 8, |l, r| !(l || r))
    );
}

#[test]
fn ca_run_summaries() {
    let dir = TempDir::new().unwrap();
    let and = dir.path().join("and.pbm");
    let o = gatecx(&[
        "ca",
        "run",
        "--gate",
        "AND",
        "--n",
        "200",
        "--steps",
        "200",
        "--seed",
        "7",
        "--out",
        p(&and),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("fixed point: all-FALSE"), "{}", stdout(&o));

    let xor = dir.path().join("xor.pbm");
    let o = gatecx(&[
        "ca",
        "run",
        "--gate",
        "xor",
        "--n",
        "200",
        "--steps",
        "200",
        "--seed",
        "7",
        "--out",
        p(&xor),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&xor).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(&lines[..2], &["P1", "200 201"]);
    assert_eq!(lines.len(), 203);
    assert!(lines[2..].iter().all(|l| l.len() == 200));

    // Same flags, same bytes.
    let again = dir.path().join("xor2.pbm");
    gatecx(&[
        "ca",
        "run",
        "--gate",
        "XOR",
        "--n",
        "200",
        "--steps",
        "200",
        "--seed",
        "7",
        "--out",
        p(&again),
    ]);
    assert_eq!(fs::read(&xor).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn ca_run_exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.pbm");
    let o = gatecx(&["ca", "run", "--gate", "MAYBE", "--single-seed", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(3));
    let o = gatecx(&["ca", "run", "--gate", "NOT", "--single-seed", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(3));
    let o = gatecx(&[
        "ca",
        "run",
        "--gate",
        "AND",
        "--single-seed",
        "--out",
        p(&dir.path().join("missing/x.pbm")),
    ]);
    assert_eq!(o.status.code(), Some(5));
    let o = gatecx(&["ca", "run", "--gate", "AND", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2), "seed is mandatory");
    assert!(!out.exists());
}

#[test]
fn measure_writes_frequencies_and_profiles() {
    let dir = TempDir::new().unwrap();
    let o = gatecx(&["ca", "measure", "--seed", "0", "--seeds", "3", "--out", p(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("ranking: "));

    let xor = fs::read_to_string(dir.path().join("freq_XOR.csv")).unwrap();
    let mut lines = xor.lines();
    assert_eq!(lines.next().unwrap(), "t,f000,f001,f010,f011,f100,f101,f110,f111");
    let row0: Vec<u64> = lines
        .next()
        .unwrap()
        .split(',')
        .skip(1)
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(row0.len(), 8);
    assert_eq!(row0.iter().sum::<u64>(), 200);

    let nand = fs::read_to_string(dir.path().join("freq_NAND.csv")).unwrap();
    let rows: Vec<&str> = nand.lines().skip(1).map(|l| l.split_once(',').unwrap().1).collect();
    assert_eq!(rows.len(), 201);
    let last = &rows[rows.len() - 4..];
    assert_eq!(last[0], last[2]);
    assert_eq!(last[1], last[3]);
    assert_ne!(last[0], last[1]);

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("profiles.json")).unwrap()).unwrap();
    assert_eq!(json["profiles"].as_array().unwrap().len(), 5);
    assert_eq!(json["profiles"][0]["gate"], "AND");
    assert!(json["profiles"][2]["mean_attractor_entropy"].is_f64());
}

const LC_CONFIG: &str = r#"
[experiment]
protocol = "LC_STYLE"
target = "OR"
master_seed = 42
runs = 10

[substrate]
kind = "VIRTUAL_MATERIAL"
seed = 1
planted = true
"#;

#[test]
fn evolve_is_reproducible_across_workers() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("lc.toml");
    fs::write(&cfg, LC_CONFIG).unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let o = gatecx(&["evolve", "--config", p(&cfg), "--out", p(&a), "--targets", "OR,AND,XOR"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = gatecx(&[
        "evolve",
        "--config",
        p(&cfg),
        "--out",
        p(&b),
        "--targets",
        "OR,AND,XOR",
        "--workers",
        "8",
    ]);
    assert!(o.status.success());
    let stats = fs::read_to_string(a.join("stats.csv")).unwrap();
    assert_eq!(stats, fs::read_to_string(b.join("stats.csv")).unwrap());
    assert_eq!(
        fs::read(a.join("runs.jsonl")).unwrap(),
        fs::read(b.join("runs.jsonl")).unwrap()
    );

    let lines: Vec<&str> = stats.lines().collect();
    assert_eq!(
        lines[0],
        "gate,controller,mutation_rate,success_rate,min,max,avg,std,unit,censored"
    );
    assert!(lines[1].starts_with("OR,LC_STYLE,5,10/10,"), "{}", lines[1]);
    assert_eq!(lines.len(), 4);
    assert_eq!(fs::read_to_string(a.join("runs.jsonl")).unwrap().lines().count(), 30);

    // The stored config source reproduces the stats.
    let record: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("record.json")).unwrap()).unwrap();
    assert_eq!(record["stats"].as_array().unwrap().len(), 3);
    assert_eq!(record["configs"][1]["target"], "AND");
    let replay = dir.path().join("replay.toml");
    fs::write(&replay, record["config_source"].as_str().unwrap()).unwrap();
    let c = dir.path().join("c");
    gatecx(&[
        "evolve",
        "--config",
        p(&replay),
        "--out",
        p(&c),
        "--targets",
        "OR,AND,XOR",
        "--workers",
        "3",
    ]);
    assert_eq!(stats, fs::read_to_string(c.join("stats.csv")).unwrap());
}

#[test]
fn evolve_censors_at_cutoff() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bz.toml");
    fs::write(&cfg, "[experiment]\nprotocol = \"BZ_COEVOLUTIONARY\"\ntarget = \"XOR\"\nmaster_seed = 3\nruns = 2\ngeneration_cutoff = 1\n").unwrap();
    let out = dir.path().join("bz");
    let o = gatecx(&["evolve", "--config", p(&cfg), "--out", p(&out), "--workers", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let stats = fs::read_to_string(out.join("stats.csv")).unwrap();
    let row = stats.lines().nth(1).unwrap();
    if row.contains("0/2") {
        assert_eq!(row, "XOR,BZ_COEVOLUTIONARY,4000,0/2,>1,>1,1.00,0.00,GENERATIONS,true");
    }
}

#[test]
fn evolve_reports_every_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(
        &cfg,
        "[experiment]\nprotocol = \"BZ_RANDOM\"\ntarget = \"FOO\"\npopulation = 0\ncolour = 1\n",
    )
    .unwrap();
    let o = gatecx(&["evolve", "--config", p(&cfg), "--out", p(&dir.path().join("x"))]);
    assert_eq!(o.status.code(), Some(4));
    let err = stderr(&o);
    for needle in ["FOO", "master_seed", "colour", "population"] {
        assert!(err.contains(needle), "missing {needle} in {err}");
    }
    let o = gatecx(&[
        "evolve",
        "--config",
        p(&dir.path().join("none.toml")),
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn hierarchy_from_fixtures() {
    let o = gatecx(&[
        "hierarchy",
        "--fixture",
        "fig1a",
        "--key",
        "min",
        "--reference",
        "finding3",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("ranking: {OR, NOR} ◀ AND ◀ NOT ◀ NAND ◀ XOR"));
    assert!(out.contains("common gates 5, tau-b +0.9487"), "{out}");
    assert!(out.contains("PASS finding1-min"));

    let o = gatecx(&[
        "hierarchy",
        "--fixture",
        "fig1b",
        "--controller",
        "coevolutionary",
        "--rate",
        "6000",
        "--key",
        "min",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("ranking: AND ◀ NAND ◀ XOR\n"));

    let o = gatecx(&[
        "hierarchy",
        "--fixture",
        "fig1a",
        "--key",
        "avg",
        "--fixture",
        "fig1b",
        "--controller",
        "coevolutionary",
        "--rate",
        "6000",
    ]);
    assert_eq!(o.status.code(), Some(6));
    assert!(stderr(&o).contains("EVALUATIONS"));

    let o = gatecx(&["hierarchy", "--fixture", "fig1a", "--reference", "finding9"]);
    assert_eq!(o.status.code(), Some(3));
    let o = gatecx(&["hierarchy", "--key", "min"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hierarchy_from_record() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("lc.toml");
    fs::write(&cfg, LC_CONFIG).unwrap();
    let out = dir.path().join("run");
    assert!(gatecx(&[
        "evolve",
        "--config",
        p(&cfg),
        "--out",
        p(&out),
        "--targets",
        "AND,OR,NAND"
    ])
    .status
    .success());
    let record = out.join("record.json");
    let o = gatecx(&[
        "hierarchy",
        "--record",
        p(&record),
        "--key",
        "avg",
        "--reference",
        "finding1-avg",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("common gates 3"));
    let o = gatecx(&[
        "hierarchy",
        "--record",
        p(&record),
        "--fixture",
        "fig1b",
        "--controller",
        "random",
        "--rate",
        "4000",
    ]);
    assert_eq!(o.status.code(), Some(6));
    fs::write(&record, "{").unwrap();
    assert_eq!(gatecx(&["hierarchy", "--record", p(&record)]).status.code(), Some(7));
}

#[test]
fn report_text_and_json() {
    let o = gatecx(&["report"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 8);
    assert!(text.contains("FLAG behavioural hierarchy"));

    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    assert!(gatecx(&["report", "--format", "json", "--out", p(&path)])
        .status
        .success());
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["behavioural_discrepancy"], true);
    assert_eq!(json["checks"].as_array().unwrap().len(), 8);
}
