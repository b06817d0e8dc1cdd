use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rydberg_bec_cli::config::{parse_config, Format};
use rydberg_bec_cli::table::{emit, parse};

const BIN: &str = env!("CARGO_BIN_EXE_rydberg-bec");

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn shipped_configs_parse() {
    for entry in std::fs::read_dir(config("")).unwrap() {
        let p = entry.unwrap().path();
        let text = std::fs::read_to_string(&p).unwrap();
        parse_config(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("macro_both.json");
    let mut bodies = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}.csv"));
        let res = run(&["phase", "--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()]);
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
        bodies.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);

    let a = run(&["evolve", "--config", config("general.json").to_str().unwrap(), "--steps", "64"]);
    let b = run(&["evolve", "--config", config("general.json").to_str().unwrap(), "--steps", "64"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn evolve_emits_one_row_per_step_and_roundtrips() {
    let res = run(&["evolve", "--config", config("micro_micro.json").to_str().unwrap(), "--steps", "32"]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 33);
    let table = parse(&text, Format::Csv).unwrap();
    let mut again = Vec::new();
    emit(&table, Format::Csv, &mut again).unwrap();
    assert_eq!(again, text.as_bytes());
}

#[test]
fn tsv_flag_switches_delimiter() {
    let res = run(&["phase", "--config", config("micro_micro.json").to_str().unwrap(), "--format", "tsv"]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.contains('\t') && !header.contains(','));
}

#[test]
fn witness_recovers_concurrence() {
    let res = run(&["witness", "--config", config("witness_micro_micro.json").to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let table = parse(&String::from_utf8(res.stdout).unwrap(), Format::Csv).unwrap();
    assert_eq!(table.rows.len(), 1);
}

#[test]
fn validate_runs_without_config() {
    let res = run(&["validate"]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let report = String::from_utf8(res.stdout).unwrap();
    assert!(report.lines().any(|l| l.starts_with("macro_single:")));
}

#[test]
fn unknown_keys_are_rejected_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.json",
        r#"{"scenario":"micro_micro","omega":1,"lambda_c":0.05,"alpha":1,"eta0":0.3,
            "lamda":2,"grid":{"nsteps":10}}"#,
    );
    let res = run(&["phase", "--config", &cfg]);
    assert_eq!(res.status.code(), Some(1));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("lamda") && err.contains("grid.nsteps"), "{err}");
}

#[test]
fn validation_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"scenario":"micro_micro","omega":-1,"lambda_c":0.05,"alpha":1,"eta0":0.3}"#,
        r#"{"scenario":"micro_micro","omega":1,"lambda_c":0.05,"alpha":1}"#,
        r#"{"scenario":"general","omega":1,"lambda_c":0.05,"alpha":1,"coefficients":[1,1,0,0]}"#,
        r#"{"scenario":"micro_micro","omega":1,"lambda_c":0.05,"alpha":1,"eta0":0.3,"grid":{"n_steps":2}}"#,
        "not json",
    ];
    for (k, body) in cases.iter().enumerate() {
        let cfg = write(dir.path(), &format!("c{k}.json"), body);
        let res = run(&["phase", "--config", &cfg]);
        assert_eq!(res.status.code(), Some(1), "case {k}: {}", String::from_utf8_lossy(&res.stderr));
        assert!(String::from_utf8_lossy(&res.stderr).starts_with("error:"));
    }
    let res = run(&["phase"]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn normalisation_message_reports_the_norm() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "n.json",
        r#"{"scenario":"general","omega":1,"lambda_c":0.05,"alpha":1,"coefficients":[1,1,0,0]}"#,
    );
    let err = String::from_utf8(run(&["evolve", "--config", &cfg]).stderr).unwrap();
    assert!(err.contains("|c0|²") && err.contains("got norm"), "{err}");
}

#[test]
fn non_convergence_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "tight.json",
        r#"{"scenario":"micro_micro","omega":1,"lambda_c":0.05,"alpha":1,"eta0":0.3,
            "grid":{"n_steps":16384,"phase_tol":1e-300}}"#,
    );
    let res = run(&["phase", "--config", &cfg]);
    assert_eq!(res.status.code(), Some(2), "{}", String::from_utf8_lossy(&res.stderr));
}

#[test]
fn unwritable_output_exits_1() {
    let res = run(&[
        "phase",
        "--config",
        config("micro_micro.json").to_str().unwrap(),
        "--output",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(res.status.code(), Some(1));
}
