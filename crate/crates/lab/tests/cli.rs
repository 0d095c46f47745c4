use std::fs;
use std::process::Command;

fn lab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_schlicht-lab"))
}

#[test]
fn run_writes_both_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        format!(
            r#"{{"scenario":"counterexample","m_range":[2,12],"n_range":[1,12],"series_order":16,"grunsky_order":8,"tolerances":{{}},"seed":0,"out_dir":{:?}}}"#,
            out.display().to_string()
        ),
    )
    .unwrap();
    let status = lab()
        .args(["run", "--config"])
        .arg(&cfg)
        .env("SCHLICHT_LAB_THREADS", "2")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = fs::read_to_string(out.join("counterexample.csv")).unwrap();
    assert!(csv.contains("counterexample,10,10,0.38742049,0.0,0.38742049,ok"));
    assert!(out.join("counterexample.json").exists());
}

#[test]
fn failing_flag_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        format!(
            r#"{{"scenario":"counterexample","m_range":[2,12],"n_range":[1,12],"series_order":16,"grunsky_order":8,"tolerances":{{"diagonal_floor":0.9}},"out_dir":{:?}}}"#,
            dir.path().display().to_string()
        ),
    )
    .unwrap();
    let out = lab().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL diagonal_exceeds_floor"));
}

#[test]
fn errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"scenario":"theorem1","m_range":[2,10],"n_range":[4,1],"series_order":64,"grunsky_order":8}"#,
    )
    .unwrap();
    assert_eq!(
        lab()
            .args(["run", "--config"])
            .arg(&cfg)
            .status()
            .unwrap()
            .code(),
        Some(2)
    );
    let status = lab()
        .args([
            "grunsky",
            "--function",
            "koebe",
            "--order",
            "8",
            "--z",
            "0.5,0",
        ])
        .env("SCHLICHT_LAB_THREADS", "many")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    let status = lab()
        .args(["audit", "--function", "nobody", "--order", "40"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn audit_subcommand() {
    let out = lab()
        .args(["audit", "--function", "koebe", "--order", "40"])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("ok   milin [koebe]"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn grunsky_subcommand_prints_json() {
    let out = lab()
        .args([
            "grunsky",
            "--function",
            "koebe",
            "--order",
            "16",
            "--z",
            "0.5,0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let norm = v["strong_norm"].as_f64().unwrap();
    assert!((norm - 1.0).abs() < 1e-6);
    let area = v["defect"]["area_sum"].as_f64().unwrap();
    // Σ_{n≤16} 0.25ⁿ/n against -log(0.75)
    let want: f64 = (1..=16).map(|n| 0.25f64.powi(n) / n as f64).sum();
    assert!((area - want).abs() < 1e-12);
    let out = lab()
        .args([
            "grunsky",
            "--function",
            "halfplane",
            "--order",
            "8",
            "--z",
            "-0.3,0.4",
        ])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["strong_norm"].as_f64(), Some(0.0));
}
