use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const AFFINE2: &str = "# two users\n2\n0 0.1\n0.2 0\n1 1\n";
const NETWORK: &str = "\
# desk-scale network
L = 9
N = 2
K = 8
cluster_size = 3
mc_draws = 2000
rng_seed = 11
budget_dbm = 20
policy_seed = 4
";

fn fairpower(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairpower"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Utilities of the two-user example computed by hand.
fn affine2_utilities(p: &[f64]) -> [f64; 2] {
    [p[0] / (0.1 * p[1] + 1.0), p[1] / (0.2 * p[0] + 1.0)]
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn solve_reports_closed_form_optimum() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "affine2.txt", AFFINE2);
    let out = stdout(&fairpower(&[
        "solve",
        "--model",
        s(&model),
        "--norm",
        "linf",
        "--budget",
        "10",
        "--weights",
        "1,1",
    ]));
    let v: Value = serde_json::from_str(&out).unwrap();
    let c0 = (17f64.sqrt() - 1.0) / 0.8;
    assert!((v["c_star"].as_f64().unwrap() - c0).abs() < 1e-9);
    assert_eq!(v["converged"], Value::Bool(true));
    let p = floats(&v["p_star"]);
    assert!((p[0] - 2.0 * c0).abs() < 1e-8 && (p[1] - 10.0).abs() < 1e-12);
    assert!(v["residual_trace"].as_array().unwrap().len() == v["iterations"].as_u64().unwrap() as usize);
    for key in ["utilities", "iterations"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn solve_csv_round_trips_against_json() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "affine2.txt", AFFINE2);
    let base = [
        "solve",
        "--model",
        s(&model),
        "--norm",
        "weighted-l1",
        "--norm-weights",
        "1,2",
        "--budget",
        "7",
        "--weights",
        "2,0.5",
    ];
    let v: Value = serde_json::from_str(&stdout(&fairpower(&base))).unwrap();
    let csv_out = dir.path().join("solve.csv");
    let mut args = base.to_vec();
    args.extend(["--out-format", "csv", "--out", s(&csv_out)]);
    stdout(&fairpower(&args));
    let mut reader = csv::Reader::from_path(&csv_out).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["k", "p_star", "utility", "weight"]);
    let (p, u) = (floats(&v["p_star"]), floats(&v["utilities"]));
    let weights = [2.0, 0.5];
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    for (k, row) in rows.iter().enumerate() {
        let vals: Vec<f64> = row.iter().map(|x| x.parse().unwrap()).collect();
        assert_eq!(vals[0] as usize, k);
        assert!((vals[1] - p[k]).abs() <= 1e-12 * p[k].abs().max(1.0));
        assert!((vals[2] - u[k]).abs() <= 1e-12 * u[k].abs().max(1.0));
        assert_eq!(vals[3], weights[k]);
    }
}

#[test]
fn verify_off_boundary_point_returns_checked_dominator() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "affine2.txt", AFFINE2);
    let out = stdout(&fairpower(&[
        "boundary",
        "verify",
        "--model",
        s(&model),
        "--norm",
        "linf",
        "--budget",
        "10",
        "--p",
        "5,5",
    ]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["on_boundary"], Value::Bool(false));
    let d = floats(&v["dominator"]);
    assert!(d.iter().all(|x| *x <= 10.0));
    let (ud, up) = (affine2_utilities(&d), affine2_utilities(&[5.0, 5.0]));
    assert!(ud[0] > up[0] && ud[1] > up[1]);
}

#[test]
fn verify_boundary_point_with_crosscheck() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "affine2.txt", AFFINE2);
    let out = stdout(&fairpower(&[
        "boundary",
        "verify",
        "--model",
        s(&model),
        "--norm",
        "linf",
        "--budget",
        "10",
        "--p",
        "3,10",
        "--crosscheck",
    ]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["on_boundary"], Value::Bool(true));
    assert!((v["solver_crosscheck"]["c_star"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(v["dominator"], Value::Null);
}

#[test]
fn boundary_sample_csv_matches_json_and_is_on_boundary() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "affine2.txt", AFFINE2);
    let base = [
        "boundary",
        "sample",
        "--model",
        s(&model),
        "--norm",
        "l1",
        "--budget",
        "4",
        "--n",
        "12",
        "--seed",
        "3",
    ];
    let json: Value = serde_json::from_str(&stdout(&fairpower(&base))).unwrap();
    let mut args = base.to_vec();
    args.extend(["--out-format", "csv"]);
    let csv_text = stdout(&fairpower(&args));
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["sample_id", "k", "p", "utility"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 24);
    let samples = json.as_array().unwrap();
    for row in &rows {
        let (id, k): (usize, usize) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        let (p, u): (f64, f64) = (row[2].parse().unwrap(), row[3].parse().unwrap());
        assert!((p - floats(&samples[id]["p"])[k]).abs() <= 1e-12);
        assert!((u - floats(&samples[id]["u"])[k]).abs() <= 1e-12);
    }
    for sample in samples {
        let p = floats(&sample["p"]);
        assert!((p.iter().sum::<f64>() - 4.0).abs() < 1e-12);
        let u = affine2_utilities(&p);
        let reported = floats(&sample["u"]);
        assert!((u[0] - reported[0]).abs() < 1e-12 && (u[1] - reported[1]).abs() < 1e-12);
    }
}

#[test]
fn cellless_run_is_reproducible_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "net.cfg", NETWORK);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        stdout(&fairpower(&[
            "cellless",
            "run",
            "--config",
            s(&cfg),
            "--out-format",
            "csv",
            "--out",
            s(out),
        ]));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());

    let json: Value = serde_json::from_str(&stdout(&fairpower(&["cellless", "run", "--config", s(&cfg)]))).unwrap();
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    assert_eq!(
        reader.headers().unwrap(),
        vec!["policy", "user", "p_watts", "sinr", "rate_bits_per_hz"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3 * 8);
    let policies = json.as_array().unwrap();
    for (i, row) in rows.iter().enumerate() {
        let entry = &policies[i / 8];
        assert_eq!(entry["policy"].as_str().unwrap(), &row[0]);
        let k: usize = row[1].parse().unwrap();
        for (col, key) in [(2, "p_watts"), (3, "sinr"), (4, "rate_bits_per_hz")] {
            let x: f64 = row[col].parse().unwrap();
            let y = floats(&entry[key])[k];
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0), "{key} row {i}");
        }
        let (p, sinr, rate): (f64, f64, f64) = (
            row[2].parse().unwrap(),
            row[3].parse().unwrap(),
            row[4].parse().unwrap(),
        );
        assert!(p <= 0.1 * (1.0 + 1e-12));
        assert!((rate - (1.0 + sinr).log2()).abs() <= 1e-12 * rate.max(1.0));
    }
    assert_eq!(
        policies
            .iter()
            .map(|p| p["policy"].as_str().unwrap())
            .collect::<Vec<_>>(),
        ["full", "random", "fractional"]
    );
}

#[test]
fn si_check_passes_on_both_model_families() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "affine2.txt", AFFINE2);
    let cfg = write(&dir, "net.cfg", NETWORK);
    for args in [["si-check", "--model", s(&model)], ["si-check", "--config", s(&cfg)]] {
        let v: Value = serde_json::from_str(&stdout(&fairpower(&args))).unwrap();
        assert_eq!(v["passed"], Value::Bool(true));
        assert_eq!(v["trials_run"].as_u64(), Some(1000));
    }
}

#[test]
fn exit_codes_distinguish_usage_and_domain_errors() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "affine2.txt", AFFINE2);
    let broken = write(&dir, "broken.txt", "2\n0 0.1\n0.2 zero\n1 1\n");
    let code = |args: &[&str]| fairpower(args).status.code();

    assert_eq!(code(&["solve", "--model", s(&model), "--norm", "linf"]), Some(2));
    assert_eq!(
        code(&["solve", "--model", s(&model), "--norm", "l3", "--budget", "1"]),
        Some(2)
    );
    assert_eq!(
        code(&["solve", "--model", s(&broken), "--norm", "linf", "--budget", "1"]),
        Some(2)
    );
    assert_eq!(
        code(&["solve", "--model", s(&model), "--norm", "linf", "--budget", "-1"]),
        Some(2)
    );
    assert_eq!(
        code(&[
            "solve",
            "--model",
            s(&model),
            "--norm",
            "linf",
            "--budget",
            "1",
            "--weights",
            "1"
        ]),
        Some(2)
    );
    assert_eq!(
        code(&["solve", "--model", s(&model), "--norm", "weighted-l1", "--budget", "1"]),
        Some(2)
    );

    let out = fairpower(&[
        "solve",
        "--model",
        s(&model),
        "--norm",
        "linf",
        "--budget",
        "10",
        "--max-iter",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(v["converged"], Value::Bool(false));
    assert_eq!(
        code(&[
            "boundary",
            "verify",
            "--model",
            s(&model),
            "--norm",
            "linf",
            "--budget",
            "10",
            "--p",
            "50,5"
        ]),
        Some(1)
    );

    let err = String::from_utf8(fairpower(&["solve", "--model", s(&broken), "--norm", "linf", "--budget", "1"]).stderr)
        .unwrap();
    assert!(err.contains("line 3"), "{err}");
}
