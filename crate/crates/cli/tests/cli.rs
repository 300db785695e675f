use std::process::{Command, Output};

use kneadlab::schwarzian::PositivityReport;
use kneadlab::solver::SolveReport;
use kneadlab::sweep::SweepReport;
use kneadlab::KneadingResult;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneadlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn knead_examples() {
    let v = json(&["knead", "--family", "logistic", "--mu", "0.5"]);
    assert_eq!(v["word"], "C");
    assert_eq!(v["termination"], "hit_C");
    let v = json(&["knead", "--family", "logistic", "--mu", "1", "--len", "8"]);
    assert_eq!(v["word"], "RLLLLLLL");
    assert_eq!(v["termination"], "truncated");
}

#[test]
fn compare_and_shiftmax() {
    assert_eq!(
        json(&["compare", "--a", "RL", "--b", "RR"])["order"],
        "greater"
    );
    assert_eq!(
        json(&["compare", "--a", "RL", "--b", "RLL"])["order"],
        "undecided"
    );
    assert_eq!(json(&["shiftmax", "--word", "RLLC"])["shift_maximal"], true);
    assert_eq!(json(&["shiftmax", "--word", "LR"])["shift_maximal"], false);
}

#[test]
fn census_counts() {
    let v = json(&["census", "--max-period", "6"]);
    let counts: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["enumerated"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [1, 1, 1, 2, 3, 5]);
    let v = json(&["census", "--max-period", "4", "--list"]);
    assert_eq!(v[3]["words"], serde_json::json!(["RLRC", "RLLC"]));
}

#[test]
fn level_and_superstable() {
    let v = json(&[
        "level", "--family", "logistic", "--word", "RL", "--mu", "0.4",
    ]);
    assert_eq!(v["level"]["status"], "domain_violation");
    let v = json(&["superstable", "--family", "logistic", "--word", "RC"]);
    let mu = v["fixed_points"][0]["mu"].as_f64().unwrap();
    assert!((mu - (1.0 + 5f64.sqrt()) / 4.0).abs() < 1e-12);
    // an inadmissible word has no superstable parameter: verification failure
    assert_eq!(
        run(&["superstable", "--family", "logistic", "--word", "RRC"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn json_round_trips() {
    let cases: [&[&str]; 4] = [
        &["knead", "--family", "sine", "--mu", "0.9", "--len", "20"],
        &["solve", "--family", "sine", "--word", "RLLC"],
        &["schwarzian", "--family", "logistic", "--grid", "10x10"],
        &[
            "sweep", "--family", "logistic", "--grid", "50", "--format", "json",
        ],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        let again = match args[0] {
            "knead" => serde_json::to_string_pretty(
                &serde_json::from_str::<KneadingResult>(&text).unwrap(),
            ),
            "solve" => {
                serde_json::to_string_pretty(&serde_json::from_str::<SolveReport>(&text).unwrap())
            }
            "schwarzian" => serde_json::to_string_pretty(
                &serde_json::from_str::<PositivityReport>(&text).unwrap(),
            ),
            _ => serde_json::to_string_pretty(&serde_json::from_str::<SweepReport>(&text).unwrap()),
        }
        .unwrap();
        assert_eq!(text.trim_end(), again, "{args:?}");
    }
}

#[test]
fn solve_with_bracket_and_errors() {
    let v = json(&[
        "solve", "--family", "logistic", "--word", "RC", "--lo", "0.6", "--hi", "0.9",
    ]);
    assert!((v["mu_star"].as_f64().unwrap() - (1.0 + 5f64.sqrt()) / 4.0).abs() < 1e-10);
    let bad = run(&[
        "solve", "--family", "logistic", "--word", "RLC", "--lo", "0.6", "--hi", "0.9",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());
    assert_eq!(
        run(&["solve", "--family", "logistic", "--word", "RRC"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn solve_all_sorted() {
    let v = json(&["solve-all", "--family", "logistic", "--max-period", "4"]);
    let words: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["target"].as_str().unwrap())
        .collect();
    assert_eq!(words, ["C", "RC", "RLRC", "RLC", "RLLC"]);
}

#[test]
fn sweep_csv() {
    let out = run(&["sweep", "--family", "logistic", "--grid", "2", "--len", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "mu,word,termination,c_distance");
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(first[1..3], ["LLLLL", "truncated"]);
    let last: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(last[1], "RLLLL");
}

#[test]
fn entropy_csv() {
    let text = stdout(&run(&["entropy", "--family", "logistic", "--mu", "1"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("mu,h"));
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(row[0], 1.0);
    assert!((row[1] - std::f64::consts::LN_2).abs() < 1e-3);

    let out = run(&[
        "entropy-sweep",
        "--family",
        "sine",
        "--grid",
        "41",
        "--nmax",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 42);
    // 17 significant digits
    let mu = text.lines().nth(2).unwrap().split(',').next().unwrap();
    assert_eq!(mu.split('e').next().unwrap().replace('.', "").len(), 17);
    assert_eq!(mu.parse::<f64>().unwrap(), 1.0 / 40.0);
}

#[test]
fn output_file_and_threads() {
    let dir = std::env::temp_dir().join(format!("kneadlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_kneadlab"))
        .env("KNEADLAB_THREADS", "1")
        .args([
            "sweep",
            "--family",
            "sine",
            "--grid",
            "100",
            "--output",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 101);
    std::fs::remove_dir_all(&dir).unwrap();

    let bad = Command::new(env!("CARGO_BIN_EXE_kneadlab"))
        .env("KNEADLAB_THREADS", "zero")
        .args(["census", "--max-period", "3"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["knead", "--family", "cubic", "--mu", "0.5"][..],
        &["knead", "--family", "logistic", "--mu", "1.5"],
        &[
            "knead", "--family", "logistic", "--mu", "0.5", "--ctol", "0",
        ],
        &["compare", "--a", "RXL", "--b", "RR"],
        &["sweep", "--family", "logistic", "--grid", "1"],
        &["schwarzian", "--family", "sine", "--grid", "50"],
        &["entropy", "--family", "sine", "--mu", "0.9", "--nmax", "4"],
        &["frobnicate"],
        &[],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["sweep", "--help"]).status.code(), Some(0));
}
