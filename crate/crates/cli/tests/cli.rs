use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qbattery_cli::config::ExperimentConfig;
use qbattery_cli::execute;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qbattery-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn qbattery(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qbattery"));
    cmd.args(args).env_remove("QBATTERY_MAX_N");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

const TRACE: &str = r#"
experiment = "stroboscopic-trace"
engine = "both"
n_max = 12
[params]
h_z = 2.0
j0 = 1.0
[grid]
sites = [4, 6]
omega = [2.5, 3.0, 7.0]
"#;

#[test]
fn writes_csv_and_sidecar() {
    let dir = scratch("sidecar");
    let cfg = write_config(&dir, TRACE);
    let out = dir.join("trace.csv");
    let o = qbattery(&["stroboscopic-trace", "--config", &cfg, "--out", out.to_str().unwrap(), "--seedless"], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("experiment,engine,boundary,h_z,j0,h0,"));
    assert!(header.ends_with(",build"));
    // 2 sizes x 3 frequencies x 2 engines x 12 periods
    assert_eq!(lines.count(), 144);

    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("trace.json")).unwrap()).unwrap();
    assert_eq!(side["config"]["params"]["j0"], 1.0);
    assert_eq!(side["rows"], 144);
    assert_eq!(side["summary"]["points"].as_array().unwrap().len(), 6);
}

#[test]
fn serial_runs_are_byte_identical() {
    let dir = scratch("bytes");
    let cfg = write_config(&dir, TRACE);
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for p in [&a, &b] {
        let o = qbattery(&["stroboscopic-trace", "--config", &cfg, "--out", p.to_str().unwrap(), "--workers", "1"], &[]);
        assert!(o.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn parallel_matches_serial() {
    let cfg = ExperimentConfig::from_toml(TRACE).unwrap();
    let serial = execute(&cfg, 1).unwrap().table;
    let parallel = execute(&cfg, 4).unwrap().table;
    assert_eq!(serial.header, parallel.header);
    assert_eq!(serial.rows.len(), parallel.rows.len());
    for (r, s) in serial.rows.iter().zip(&parallel.rows) {
        for (a, b) in r.iter().zip(s) {
            match (a.as_f64(), b.as_f64()) {
                (Some(x), Some(y)) => assert!((x - y).abs() <= 1e-12, "{x} vs {y}"),
                _ => assert_eq!(a, b),
            }
        }
    }
}

#[test]
fn invalid_config_exits_2() {
    let dir = scratch("invalid");
    let cfg = write_config(
        &dir,
        r#"
experiment = "sweep-frequency"
engine = "integrable"
[params]
h_z = 2.0
j0 = 1.0
h0 = 0.3
num_sites = 13
[grid]
omega = []
"#,
    );
    let o = qbattery(&["sweep-frequency", "--config", &cfg, "--out", dir.join("x.csv").to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("h0 = 0") && err.contains("even site count") && err.contains("frequency grid is empty"), "{err}");
}

#[test]
fn mismatched_experiment_exits_2() {
    let dir = scratch("mismatch");
    let cfg = write_config(&dir, TRACE);
    let o = qbattery(&["bandwidth-scan", "--config", &cfg], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn size_guard_exits_3() {
    let dir = scratch("guard");
    let cfg = write_config(
        &dir,
        r#"
experiment = "bandwidth-scan"
[params]
h_z = 2.0
j0 = 0.5
h0 = 0.3
omega = 2.0
[grid]
sites = [4, 6]
"#,
    );
    let out = dir.join("w.csv");
    let o = qbattery(&["bandwidth-scan", "--config", &cfg, "--out", out.to_str().unwrap()], &[("QBATTERY_MAX_N", "5")]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let o = qbattery(&["bandwidth-scan", "--config", &cfg, "--out", out.to_str().unwrap()], &[]);
    assert!(o.status.success());
}

#[test]
fn missing_config_exits_4() {
    let o = qbattery(&["sweep-frequency", "--config", "/nonexistent/run.toml"], &[]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn every_shipped_config_validates() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut count = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let cfg = ExperimentConfig::load(&path).unwrap();
            assert!(cfg.validate().is_empty(), "{}: {:?}", path.display(), cfg.validate());
            count += 1;
        }
    }
    assert!(count >= 7);
}
