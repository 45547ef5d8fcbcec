//! End-to-end runs of the `abc-chain` binary.

use std::path::Path;
use std::process::{Command, Output};

fn abc_chain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abc-chain"))
        .args(args)
        .env_remove("ABC_CHAIN_THREADS")
        .output()
        .unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn trace_writes_csv_to_stdout() {
    let out = abc_chain(&["trace", "-p", "ii", "-r", "0.3", "--times", "0:10:2.5"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,eof");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("0,"));
    assert!(!text.contains('\r'));
}

#[test]
fn sweep_writes_manifest_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = abc_chain(&[
        "disorder-sweep",
        "-p",
        "iii",
        "-r",
        "0.28",
        "--levels",
        "0:1:0.5",
        "--realizations",
        "30",
        "--seed",
        "5",
        "--threads",
        "2",
        "-o",
        path_str(&csv),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let first = std::fs::read_to_string(&csv).unwrap();
    assert!(first.starts_with("E,percent_of_delta,mean_eof,std_eof,n\n"));
    assert_eq!(first.lines().count(), 4);
    assert!(first.lines().nth(3).unwrap().starts_with("1,50,"));

    let manifest_path = dir.path().join("sweep.manifest.json");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["command"], "disorder-sweep");
    assert_eq!(manifest["seed"], 5);
    assert_eq!(manifest["threads"], 2);
    assert_eq!(manifest["config"]["realizations"], 30);
    assert_eq!(manifest["config"]["levels"], "0:1:0.5");
    assert!(manifest["wall_time_seconds"].as_f64().unwrap() >= 0.0);
    assert!(manifest["version"].is_string());

    let again = dir.path().join("again.csv");
    let out = abc_chain(&[
        "--config",
        path_str(&manifest_path),
        "--threads",
        "1",
        "-o",
        path_str(&again),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(std::fs::read_to_string(&again).unwrap(), first);
}

#[test]
fn toml_config_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "command = \"delay-sweep\"\nprotocol = \"ii\"\nratio = 0.1\ndelays = \"0,0.1\"\n",
    )
    .unwrap();
    let out = abc_chain(&["--config", path_str(&cfg)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("D,eof"));
    assert_eq!(text.lines().count(), 3);

    let out = abc_chain(&[
        "--config",
        path_str(&cfg),
        "delay-sweep",
        "--delays",
        "0.05",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("0.05,"));
}

#[test]
fn thread_count_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_abc-chain"))
        .args([
            "ratio-sweep",
            "-p",
            "i",
            "--ratios",
            "0.3,0.4",
            "-o",
            path_str(&csv),
        ])
        .env("ABC_CHAIN_THREADS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["threads"], 3);
    assert_eq!(
        manifest["summary"]["local_maxima"]
            .as_array()
            .unwrap()
            .len(),
        0
    );
}

#[test]
fn exit_codes() {
    // Invalid configuration.
    for args in [
        &["trace", "-r", "0.3"][..],
        &["trace", "-p", "iv", "-r", "0.3"],
        &["ratio-sweep", "-p", "i", "--bogus"],
        &["delay-sweep", "-p", "iii", "-r", "0.3"],
        &["disorder-sweep", "-p", "i", "-r", "0.3", "--levels", "0:1"],
        &[],
    ] {
        assert_eq!(abc_chain(args).status.code(), Some(2), "{args:?}");
    }

    let dir = tempfile::tempdir().unwrap();
    // The window ends before the first maximum, so the search fails.
    let cfg = dir.path().join("narrow.toml");
    std::fs::write(&cfg, "[search]\nwindow = [0.0, 1.0]\n").unwrap();
    let out = abc_chain(&[
        "--config",
        path_str(&cfg),
        "ratio-sweep",
        "-p",
        "i",
        "--ratios",
        "0.3",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let missing = dir.path().join("no/such/dir/out.csv");
    let out = abc_chain(&[
        "trace",
        "-p",
        "i",
        "-r",
        "0.3",
        "--times",
        "0,1",
        "-o",
        path_str(&missing),
    ]);
    assert_eq!(out.status.code(), Some(4));
    let out = abc_chain(&["--config", path_str(&dir.path().join("absent.toml"))]);
    assert_eq!(out.status.code(), Some(4));
}
