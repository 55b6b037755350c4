use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entangle-bench"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(experiment: &str, config: &Path, extra: &[&str]) -> Output {
    bin().arg(experiment).arg("--config").arg(config).args(extra).output().unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(2)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn moments_table_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "m.json", r#"{"n_qubits": 6}"#);
    let out = dir.path().join("m.csv");
    let o = run("moments", &cfg, &["--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# entangle-bench moments schema v1"));
    assert_eq!(lines.next(), Some("n,n_a,mean_exact,var_exact"));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[2][..3], ["6", "3", "16/65"]);
    assert_eq!(rows[0][2], rows[4][2]);

    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("m.csv.json")).unwrap()).unwrap();
    let config = &sidecar["config"];
    for key in ["experiment", "n_qubits", "method", "layers", "ensemble", "settings", "shots", "topology", "noise", "steps", "count", "seed", "out"] {
        assert!(!config[key].is_null(), "sidecar is missing {key}");
    }
    assert_eq!(config["ensemble"], 10);
    assert_eq!(config["settings"], 20);
    assert_eq!(config["shots"], 1000);
    assert_eq!(config["seed"], 0);
}

#[test]
fn flags_override_file_fields() {
    let dir = tempfile::tempdir().unwrap();
    let file_out = dir.path().join("from_file.csv");
    let body = format!(r#"{{"n_qubits": 3, "seed": 1, "out": {:?}}}"#, file_out.to_str().unwrap());
    let cfg = write_config(dir.path(), "e.json", &body);
    let flag_out = dir.path().join("flag.csv");
    assert!(run("estimate", &cfg, &["--seed", "2", "--out", flag_out.to_str().unwrap()]).status.success());
    assert!(!file_out.exists());
    let sidecar: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("flag.csv.json")).unwrap()).unwrap();
    assert_eq!(sidecar["config"]["seed"], 2);

    assert!(run("estimate", &cfg, &[]).status.success());
    assert_ne!(std::fs::read(&file_out).unwrap(), std::fs::read(&flag_out).unwrap());
}

#[test]
fn invalid_config_gives_error_record() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown.json", r#"{"n_qubits": 4, "colour": 1}"#, "emulate"),
        ("zero.json", r#"{"n_qubits": 4, "shots": 0}"#, "estimate"),
        ("missing.json", r#"{}"#, "converge"),
        ("wide.json", r#"{"n_qubits": 8, "topology": "lagos7"}"#, "emulate"),
        ("noise.json", r#"{"n_qubits": 4, "noise": {"p1": 2.0, "p2": 0.0, "p_spam": 0.0}}"#, "evolve"),
    ];
    for (name, body, experiment) in cases {
        let cfg = write_config(dir.path(), name, body);
        let o = run(experiment, &cfg, &["--out", dir.path().join("x.csv").to_str().unwrap()]);
        assert!(!o.status.success(), "{name} should fail");
        let record: Value = serde_json::from_slice(&o.stderr).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(record["message"].as_str().unwrap().len() > 5);
        assert_eq!(record["exit_code"].as_i64().unwrap(), i64::from(o.status.code().unwrap()));
    }
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn runtime_errors_keep_module_messages() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "e.json", r#"{"n_qubits": 5}"#);
    let o = run("emulate", &cfg, &["--out", dir.path().join("e.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let record: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(record["kind"], "runtime");
    assert_eq!(record["message"], "unknown preset `pair schedule for 5 qubits`");
}

#[test]
fn exported_records_reproduce_estimates() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.jsonl");
    let body = format!(r#"{{"n_qubits": 3, "settings": 5, "shots": 200, "records_out": {:?}}}"#, records.to_str().unwrap());
    let cfg = write_config(dir.path(), "out.json", &body);
    let simulated = dir.path().join("sim.csv");
    assert!(run("estimate", &cfg, &["--out", simulated.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read_to_string(&records).unwrap().lines().count(), 5);

    let body = format!(r#"{{"records_in": {:?}}}"#, records.to_str().unwrap());
    let cfg = write_config(dir.path(), "in.json", &body);
    let ingested = dir.path().join("in.csv");
    assert!(run("estimate", &cfg, &["--out", ingested.to_str().unwrap()]).status.success());
    for (a, b) in csv_rows(&simulated).iter().zip(csv_rows(&ingested)) {
        assert_eq!(a[..4], b[..4]);
        assert!(!a[4].is_empty());
        assert!(b.len() == 4 || b[4].is_empty());
    }
}

#[test]
fn emulate_rows_cover_every_subsystem_size() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "e.json", r#"{"n_qubits": 4, "ensemble": 2, "topology": "lagos7", "noise": "lagos"}"#);
    let out = dir.path().join("e.csv");
    assert!(run("emulate", &cfg, &["--out", out.to_str().unwrap()]).status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows.iter().map(|r| r[1].as_str()).collect::<Vec<_>>(), ["1", "2", "3", "4"]);
    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("e.csv.json")).unwrap()).unwrap();
    assert_eq!(sidecar["summary"]["cnot_count"], 10);
}
