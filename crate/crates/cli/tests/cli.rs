use std::fs;
use std::process::{Command, Output};

fn oscdeform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscdeform"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

struct Row {
    lambda: f64,
    n: usize,
    var_x: f64,
    var_p: f64,
    squeezed_x: bool,
    squeezed_p: bool,
}

fn parse_csv(text: &str) -> Vec<Row> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "preset,lambda,n,mean_x,var_x,var_p,product,squeezed_x,squeezed_p"
    );
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f.len(), 9, "{line}");
            Row {
                lambda: f[1].parse().unwrap(),
                n: f[2].parse().unwrap(),
                var_x: f[4].parse().unwrap(),
                var_p: f[5].parse().unwrap(),
                squeezed_x: f[7].parse().unwrap(),
                squeezed_p: f[8].parse().unwrap(),
            }
        })
        .collect()
}

#[test]
fn verify_case_ii_passes_all_suites() {
    let out = oscdeform(&["verify", "--preset", "case_ii", "--lambda", "9"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("6/6 suites pass"));
}

#[test]
fn verify_harmonic_baseline() {
    let out = oscdeform(&["verify", "--c", "0,0,0,0,0,0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn verify_inadmissible_preset_is_config_error() {
    let out = oscdeform(&["verify", "--preset", "case_iii", "--lambda", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("admissibility A<0 violated"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn verify_every_preset() {
    for args in [
        ["harmonic", "0"],
        ["lambda_shift", "-1.3"],
        ["case_i", "1"],
        ["case_ii", "0.25"],
        ["case_iii", "-0.7"],
        ["case_iii", "0.5"],
    ] {
        let out = oscdeform(&[
            "verify", "--preset", args[0], "--lambda", args[1], "--n-max", "8",
        ]);
        assert_eq!(out.status.code(), Some(0), "{args:?}\n{}", stdout(&out));
    }
}

#[test]
fn verify_json_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verify.json");
    let out = oscdeform(&[
        "verify",
        "--preset",
        "lambda_shift",
        "--lambda",
        "0.8",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let printed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let written: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(printed, written);
    assert_eq!(printed["passed"], 6);
    let names: Vec<&str> = printed["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "constraint",
            "spectrum",
            "normalization",
            "heisenberg",
            "commutator",
            "gram"
        ]
    );
}

#[test]
fn exit_code_contract() {
    let config_errors: &[&[&str]] = &[
        &["verify"],
        &["verify", "--preset", "case_iii", "--lambda", "-1.5"],
        &["verify", "--preset", "case_ii", "--lambda", "-2"],
        &["verify", "--preset", "case_ii"],
        &["verify", "--preset", "nope", "--lambda", "1"],
        &["verify", "--c", "1,0,0,0,0,0"],
        &["verify", "--c", "0,0,0"],
        &["verify", "--preset", "harmonic", "--c", "0,0,0,0,0,0"],
        &["verify", "--preset", "harmonic", "--quad-order", "8"],
        &["verify", "--preset", "harmonic", "--dim", "2"],
        &["scan"],
        &["scan", "--c", "0,0,0,0,0,0"],
        &["scan", "--preset", "case_iii", "--lambda-min", "-1.2"],
        &["scan", "--preset", "case_ii", "--lambda-steps", "1"],
        &[
            "scan",
            "--preset",
            "case_ii",
            "--lambda-min",
            "5",
            "--lambda-max",
            "2",
        ],
        &[
            "spectrum", "--preset", "harmonic", "--dim", "10", "--n-max", "9",
        ],
        &["discrepancies", "--quad-order", "4"],
        &["frobnicate"],
        &["verify", "--config", "/nonexistent/config.json"],
    ];
    for args in config_errors {
        let out = oscdeform(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn failed_invariant_exits_one() {
    // a quadrature too coarse for the high levels breaks normalization
    let out = oscdeform(&[
        "verify",
        "--preset",
        "case_iii",
        "--lambda",
        "0.9",
        "--n-max",
        "20",
        "--quad-order",
        "16",
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("FAIL"));
    assert!(stderr(&out).contains("failed suites"));
}

#[test]
fn scan_is_byte_identical() {
    let args = [
        "scan",
        "--preset",
        "lambda_shift",
        "--n-max",
        "4",
        "--lambda-steps",
        "41",
    ];
    let first = oscdeform(&args);
    assert_eq!(first.status.code(), Some(0));
    for _ in 0..3 {
        assert_eq!(oscdeform(&args).stdout, first.stdout);
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(oscdeform(&with_out).status.code(), Some(0));
    assert_eq!(fs::read(&path).unwrap(), first.stdout);
}

#[test]
fn scan_rows_are_n_major() {
    let out = oscdeform(&[
        "scan",
        "--preset",
        "case_iii",
        "--n-max",
        "2",
        "--lambda-min",
        "-0.5",
        "--lambda-max",
        "0.5",
        "--lambda-steps",
        "3",
    ]);
    let rows = parse_csv(&stdout(&out));
    let keys: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.lambda)).collect();
    let expected: Vec<(usize, f64)> = (0..=2)
        .flat_map(|n| [(n, -0.5), (n, 0.0), (n, 0.5)])
        .collect();
    assert_eq!(keys, expected);
}

#[test]
fn scan_case_ii_window() {
    let out = oscdeform(&[
        "scan",
        "--preset",
        "case_ii",
        "--n-max",
        "5",
        "--lambda-min",
        "1",
        "--lambda-max",
        "15",
        "--lambda-steps",
        "15",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 6 * 15);
    for r in &rows {
        assert_eq!(
            r.squeezed_x,
            r.lambda > 2.0 * r.n as f64 + 1.0,
            "n={} lambda={}",
            r.n,
            r.lambda
        );
        let expected = (r.n as f64 + 0.5) / r.lambda;
        assert!((r.var_x - expected).abs() / expected < 1e-9);
    }
}

#[test]
fn scan_case_i_squeezed_only_low_levels() {
    let out = oscdeform(&["scan", "--preset", "case_i", "--n-max", "5"]);
    let rows = parse_csv(&stdout(&out));
    for r in &rows {
        assert_eq!(r.squeezed_x, r.n <= 3, "n={} lambda={}", r.n, r.lambda);
        assert!(!r.squeezed_p);
        assert!((r.var_x * 9.0 - (r.n as f64 + 0.5)).abs() < 1e-9);
    }
}

#[test]
fn scan_case_iii_signs() {
    let out = oscdeform(&[
        "scan",
        "--preset",
        "case_iii",
        "--n-max",
        "0",
        "--lambda-min",
        "-0.9",
        "--lambda-max",
        "0.9",
        "--lambda-steps",
        "19",
    ]);
    let rows = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 19);
    for r in &rows {
        assert_eq!(r.squeezed_x, r.lambda > 0.0, "lambda={}", r.lambda);
        assert_eq!(r.squeezed_p, r.lambda < 0.0, "lambda={}", r.lambda);
        assert!((r.var_x * r.var_p - 0.25).abs() < 1e-9);
    }
}

#[test]
fn scan_json_windows() {
    let out = oscdeform(&[
        "scan", "--preset", "case_ii", "--n-max", "4", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let table: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(table["preset"], "case_ii");
    let windows = table["windows"].as_array().unwrap();
    assert_eq!(windows.len(), 5);
    for (n, w) in windows.iter().enumerate() {
        let intervals = w["intervals"].as_array().unwrap();
        assert_eq!(intervals.len(), 1);
        let lo = intervals[0]["lo"].as_f64().unwrap();
        assert!((lo - (2.0 * n as f64 + 1.0)).abs() < 1e-6, "n={n}: {lo}");
        assert!(intervals[0]["hi"].is_null());
    }
    assert_eq!(table["rows"].as_array().unwrap().len(), 5 * 15);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    fs::write(
        &path,
        r#"{"schema": 1, "preset": "case_ii", "n_max": 1, "lambda_grid": {"min": 2, "max": 4, "steps": 3}}"#,
    )
    .unwrap();
    let out = oscdeform(&["scan", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(parse_csv(&stdout(&out)).len(), 6);
    let out = oscdeform(&[
        "scan",
        "--config",
        path.to_str().unwrap(),
        "--n-max",
        "3",
        "--lambda-steps",
        "5",
    ]);
    assert_eq!(parse_csv(&stdout(&out)).len(), 20);

    fs::write(&path, r#"{"schema": 1, "preset": "case_ii", "lamda": 4}"#).unwrap();
    let out = oscdeform(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("lamda"));

    fs::write(&path, r#"{"schema": 2, "preset": "harmonic"}"#).unwrap();
    assert_eq!(
        oscdeform(&["verify", "--config", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn spectrum_lambda_shift() {
    let out = oscdeform(&[
        "spectrum",
        "--preset",
        "lambda_shift",
        "--lambda",
        "1",
        "--dim",
        "100",
        "--n-max",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for (n, r) in rows.iter().enumerate() {
        assert!((r["eigenvalue"].as_f64().unwrap() - (n as f64 + 0.5)).abs() < 1e-6);
    }
}

#[test]
fn discrepancies_report() {
    let out = oscdeform(&["discrepancies"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for id in [
        "laguerre-variance",
        "case-i-coefficients",
        "case-iii-normalization",
        "ladder-prefactors",
        "ground-mean",
    ] {
        assert!(text.contains(&format!("[{id}]")), "{id}");
    }
    assert!(text.contains("-3.5") && text.contains("0.5"));
    assert_eq!(oscdeform(&["discrepancies"]).stdout, out.stdout);

    let out = oscdeform(&["discrepancies", "--format", "json"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let entry = report["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["id"] == "laguerre-variance")
        .unwrap();
    let row = entry["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["label"] == "n=1 lambda=1")
        .unwrap();
    assert_eq!(row["printed"].as_f64().unwrap(), -3.5);
    assert!((row["oracle"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}
