//! End-to-end tests of the command-line interface: exit codes, validation
//! diagnostics, subcommand selection, and the shape of the emitted files.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardygroups")).args(args).output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const GOOD: &str = "\
[group]\nweights = [1.0, 1.0, 2.0]\n\n\
[[identities]]\nid = \"hardy_l2\"\n\n\
[[identities]]\nid = \"hardy_lp\"\np = 2.0\n\n\
[[sharpness]]\ninequality = \"hardy\"\np = 2.0\ndeltas = [1e-1, 1e-2]\n";

#[test]
fn verify_subcommand_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), GOOD);
    let out_dir = dir.path().join("out");
    let out = run(&["verify", &config, "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("hardy_l2"), "summary missing job line:\n{stdout}");
    // verify runs identity jobs only.
    assert!(
        stdout.contains("overall: pass (2 identity jobs, 0 sharpness jobs"),
        "unexpected overall line:\n{stdout}"
    );

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(json["overall_pass"], serde_json::Value::Bool(true));
    assert_eq!(json["identities"].as_array().unwrap().len(), 2);
    assert_eq!(json["sharpness"].as_array().unwrap().len(), 0);
    assert_eq!(json["config"]["group"]["weights"].as_array().unwrap().len(), 3);

    let csv = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "kind,id,params,lhs,rhs,rel_residual,pass,delta,quotient,target,gap"
    );
    assert_eq!(lines.count(), 2, "one CSV row per identity job");
}

#[test]
fn sharpness_subcommand_runs_only_sharpness_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), GOOD);
    let out_dir = dir.path().join("out");
    let out = run(&[
        "sharpness",
        &config,
        "--out",
        out_dir.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(json["identities"].as_array().unwrap().len(), 0);
    assert_eq!(json["sharpness"].as_array().unwrap().len(), 1);
    assert!(!out_dir.join("report.csv").exists(), "json format must not write CSV");
}

#[test]
fn invalid_config_exits_2_and_lists_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[group]\nweights = [1.0, 1.0, 2.0]\n\n\
         [[identities]]\nid = \"rellich\"\n\n\
         [[identities]]\nid = \"hardy_lp\"\np = 7.5\n",
    );
    let out = run(&["all", &config]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("Q >= 5 required, got Q = 4"), "missing violation:\n{stderr}");
    assert!(stderr.contains("p = 7.5"), "missing second violation:\n{stderr}");
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[group]\nweights = [1.0, 1.0]\nextra_knob = 3\n",
    );
    let out = run(&["all", &config]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("extra_knob"), "unknown key not named:\n{stderr}");
}

#[test]
fn missing_config_file_exits_2() {
    let out = run(&["all", "/nonexistent/run.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_job_list_passes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "[group]\nweights = [1.0, 1.0]\n");
    let out_dir = dir.path().join("out");
    let out = run(&["all", &config, "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("overall: pass (0 identity jobs, 0 sharpness jobs"));
}
