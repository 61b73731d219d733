use std::process::{Command, Output};

fn siegel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_siegel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn threshold_for_weight_three() {
    let o = siegel(&["n0", "--n", "1", "--l", "0", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("14"));
}

#[test]
fn cmn_value() {
    let o = siegel(&["cmn", "--n", "1", "--m", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).lines().next().unwrap().trim().parse().unwrap();
    assert!((v - 1.1423973285781).abs() < 1e-10);
}

#[test]
fn table_verification_passes() {
    let o = siegel(&["verify", "table1", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn weight_too_small_is_usage_error() {
    let o = siegel(&["n0", "--n", "2", "--l", "0", "--m", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = siegel(&["n0", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "--format",
        "json",
        "--seed",
        "7",
        "cmn",
        "--n",
        "2",
        "--m",
        "6",
        "--mc-samples",
        "20000",
    ];
    let a = siegel(&args);
    let b = siegel(&args);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["monte_carlo"]["value"].as_f64().is_some());
}

#[test]
fn table_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = siegel(&[
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
        "n0-table",
        "--n",
        "1",
        "--l-range",
        "0..2",
        "--m-range",
        "3..5",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,l,m,N0,method,margin"));
    assert_eq!(lines.next().unwrap().split(',').nth(3), Some("14"));
}

#[test]
fn vanishing_poincare_series() {
    let o = siegel(&[
        "poincare", "--n", "1", "--N", "1", "--m", "13", "--mu", "1", "--z", "0.2+1.1i",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    let first = out.lines().next().unwrap();
    assert!(first.contains("+-"));
    assert!(out.contains("terms="));
}
