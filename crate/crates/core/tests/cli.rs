use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use paramstab::cli::{analyze, config_from_csv, num, AnalysisConfig};

const PENDULUM: &str = r#"{"model":{"kind":"pendulum","m_s":10,"m_p":1,"ell":5,"k_s":4000,"gamma_s":2,"gamma_p":50,"g0":981},"epsilon":0}"#;
const FARADAY: &str = r#"{"model":{"kind":"faraday","rho":0.95,"nu":0.1,"tension":70,"g0":1000,"alpha":5,"depth":1}}"#;

fn paramstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paramstab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect()
}

#[test]
fn missing_field_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.json",
        r#"{"model":{"kind":"faraday","rho":1,"tension":70,"g0":1000,"alpha":5,"depth":1}}"#,
    );
    let out = paramstab(&["analyze", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nu"));
}

#[test]
fn missing_file_is_an_error() {
    let out = paramstab(&["analyze", "--config", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unforced_pendulum_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.json", PENDULUM);
    let out = paramstab(&["analyze", "--config", &cfg, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let text = v.to_string();
    assert!(text.contains("epsilon_crit"), "{text}");
}

#[test]
fn strong_forcing_is_unstable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.json", PENDULUM);
    let out = paramstab(&["analyze", "--config", &cfg, "--epsilon", "1e6"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_has_one_row_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "f.json", FARADAY);
    let csv = dir.path().join("s.csv");
    let out = paramstab(&[
        "sweep",
        "--config",
        &cfg,
        "--alpha-min",
        "4",
        "--alpha-max",
        "6",
        "--steps",
        "2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        let eps: f64 = cols[5].parse().unwrap();
        assert!(eps.is_finite() && eps > 0.0);
        assert_eq!(cols[6], "");
    }
}

#[test]
fn sweep_point_matches_single_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "f.json", FARADAY);
    let csv = dir.path().join("s.csv");
    let out = paramstab(&[
        "sweep",
        "--config",
        &cfg,
        "--alpha-min",
        "4",
        "--alpha-max",
        "6",
        "--steps",
        "3",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let mid: Vec<&str> = data_rows(&text)[1].split(',').collect();
    assert_eq!(mid[0].parse::<f64>().unwrap(), 5.0);

    let single = dir.path().join("a.csv");
    assert!(paramstab(&[
        "analyze",
        "--config",
        &cfg,
        "--out",
        single.to_str().unwrap()
    ])
    .status
    .success());
    let cfg_struct = AnalysisConfig::load(Path::new(&cfg)).unwrap();
    let report = analyze(&cfg_struct).unwrap();
    let p = report.primary();
    assert_eq!(num(p.pair.lambda0.re), mid[2]);
    assert_eq!(num(p.lambda2.re), mid[4]);
    assert_eq!(num(p.epsilon_crit), mid[5]);
}

#[test]
fn csv_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "f.json", FARADAY);
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = paramstab(&[
            "sweep",
            "--config",
            &cfg,
            "--alpha-min",
            "3",
            "--alpha-max",
            "7",
            "--steps",
            "5",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        fs::read(path).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn config_header_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "f.json", FARADAY);
    let csv = dir.path().join("a.csv");
    assert!(
        paramstab(&["analyze", "--config", &cfg, "--out", csv.to_str().unwrap()])
            .status
            .success()
    );
    let echoed = config_from_csv(&fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(echoed, AnalysisConfig::load(Path::new(&cfg)).unwrap());
}

#[test]
fn psd_lists_eight_poles() {
    let out = paramstab(&["psd", "--a", "20", "--omega0", "100", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["poles"].as_array().unwrap().len(), 8);
}

#[test]
fn both_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.json", PENDULUM);
    let out = paramstab(&["analyze", "--config", &cfg, "--method", "both", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let d = v["lambda2_relative_difference"].as_f64().unwrap();
    assert!(d < 1e-10, "{d}");
}

#[test]
fn matrix_file_model() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "m.json",
        r#"{"B0":[[1,0],[0,1]],"A0":[[-1,2],[-2,-1]],"u":[1,0],"v":[0,1]}"#,
    );
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"model":{"kind":"matrix-file","path":"m.json"},"epsilon":0}"#,
    );
    let out = paramstab(&["analyze", "--config", &cfg]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
