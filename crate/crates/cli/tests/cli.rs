use std::fs;
use std::process::{Command, Output};

use proptest::prelude::*;
use udec_core::example;

fn udec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udec"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const EXAMPLE: [&str; 4] = [
    "--source",
    "builtin:source",
    "--code",
    "builtin:alternative_code",
];
const FULL: [&str; 4] = [
    "--source",
    "builtin:full_support_source",
    "--code",
    "builtin:alternative_code",
];

fn with(cmd: &str, files: [&str; 4], extra: &[&str]) -> Output {
    let mut args = vec![cmd];
    args.extend(files);
    args.extend(extra);
    udec(&args)
}

#[test]
fn analyze_example_pair() {
    let o = with("analyze", EXAMPLE, &[]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kraft_sum"], 1.5);
    assert!((v["rho"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert_eq!(v["passes_necessary"], true);
    assert_eq!(v["decodable"], true);
    assert!(v.get("witness").is_none());
}

#[test]
fn analyze_full_support_is_negative() {
    let o = with("analyze", FULL, &[]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["decodable"], false);
    assert_eq!(v["witness"], serde_json::json!([["A", "B"], ["C"]]));
    let text = stdout(&o);
    let at: Vec<usize> = [
        "kraft_sum",
        "rho",
        "passes_necessary",
        "decodable",
        "witness",
    ]
    .iter()
    .map(|k| text.find(&format!("\"{k}\"")).unwrap())
    .collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn analyze_classic_code() {
    let o = udec(&[
        "analyze",
        "--source",
        "builtin:source",
        "--code",
        "builtin:classic_code",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["decodable"], true);
    assert!(v.get("kraft_sum").is_none());
}

#[test]
fn malformed_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("code.json");
    fs::write(&code, r#"{"kind": "codebook", "words": {"A": "0"}}"#).unwrap();
    let o = udec(&[
        "analyze",
        "--source",
        "builtin:source",
        "--code",
        code.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("radix"));

    let broken = dir.path().join("source.json");
    fs::write(
        &broken,
        "{\n  \"kind\": \"moore\",\n  \"alphabet\": [\"A\"\n}",
    )
    .unwrap();
    let o = udec(&[
        "analyze",
        "--source",
        broken.to_str().unwrap(),
        "--code",
        "builtin:alternative_code",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let bad_rows = dir.path().join("rows.json");
    fs::write(
        &bad_rows,
        r#"{"kind":"moore","alphabet":["A","B"],"transition":[[0.5,0.4],[0,1]],"initial":[1,0]}"#,
    )
    .unwrap();
    let o = udec(&[
        "analyze",
        "--source",
        bad_rows.to_str().unwrap(),
        "--code",
        "builtin:alternative_code",
    ]);
    assert_eq!(o.status.code(), Some(1));

    assert_eq!(
        udec(&["analyze", "--source", "/nonexistent", "--code", "x"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(udec(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(udec(&["--help"]).status.code(), Some(0));
}

#[test]
fn encode_and_decode() {
    let o = with("encode", EXAMPLE, &["--text", "ACD"]);
    assert_eq!(stdout(&o), "00110\n");
    for (digits, text) in [("01", "C"), ("1", "B"), ("00", "AA"), ("00110", "ACD")] {
        let o = with("decode", EXAMPLE, &["--digits", digits]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), format!("{text}\n"));
    }
    // Not producible by the constrained source.
    assert_eq!(
        with("encode", EXAMPLE, &["--text", "AB"]).status.code(),
        Some(1)
    );
    assert_eq!(
        with("decode", EXAMPLE, &["--digits", "012"]).status.code(),
        Some(1)
    );
}

#[test]
fn decode_reports_ambiguity() {
    let o = with("decode", FULL, &["--digits", "01"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "ambiguous\nAB\nC\n");
}

#[test]
fn reproduce_table_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.csv");
    let o = udec(&[
        "reproduce-paper",
        "--n",
        "64",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 65);
    assert_eq!(lines[0], "n,entropy,classic,alternative,gap");
    assert_eq!(lines[1], "1,2,2,1.5,0.5");
    assert_eq!(lines[10], "10,15.5,15.5,15,0.5");
    for (n, line) in lines[1..].iter().enumerate() {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(f[0], (n + 1) as f64);
        assert!((f[2] - f[1]).abs() <= 1e-9 && (f[1] - f[3] - 0.5).abs() <= 1e-9 && f[4] == 0.5);
    }
    let o = udec(&[
        "reproduce-paper",
        "--n",
        "16",
        "--out",
        "/nonexistent/dir/t.csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        udec(&["reproduce-paper", "--n", "0"]).status.code(),
        Some(1)
    );
}

#[test]
fn simulate_output() {
    let one = with(
        "simulate",
        EXAMPLE,
        &["--n", "20", "--trials", "1", "--seed", "3"],
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&one)).unwrap();
    assert!(v["std_error"].is_null());
    assert_eq!(v["exact"], 30.0);
    let a = with(
        "simulate",
        EXAMPLE,
        &["--n", "20", "--trials", "500", "--seed", "3"],
    );
    let b = with(
        "simulate",
        EXAMPLE,
        &["--n", "20", "--trials", "500", "--seed", "3"],
    );
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        with("simulate", EXAMPLE, &["--n", "20", "--trials", "0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn capacity_of_channels() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("ch.json");
    fs::write(&file, r#"{"kind": "unconstrained", "durations": [1, 1]}"#).unwrap();
    let o = udec(&["capacity", "--channel", file.to_str().unwrap()]);
    assert_eq!(
        stdout(&o),
        "{\n  \"root\": 2.0,\n  \"capacity_bits\": 1.0\n}\n"
    );

    fs::write(&file, r#"{"kind": "unconstrained", "durations": [1, 2]}"#).unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&udec(&[
        "capacity",
        "--channel",
        file.to_str().unwrap(),
    ])))
    .unwrap();
    assert!((v["root"].as_f64().unwrap() - 1.618033988749895).abs() < 1e-9);

    let o = udec(&["capacity", "--channel", "builtin:channel"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["capacity_bits"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!(v["determinant_residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(
        o.stdout,
        udec(&["capacity", "--channel", "builtin:channel"]).stdout
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn encode_decode_round_trip(seed in any::<u64>(), n in 1usize..30) {
        let s = example::source();
        let text = s.format_sequence(&s.sample(n, seed));
        let digits = stdout(&with("encode", EXAMPLE, &["--text", &text]));
        let back = with("decode", EXAMPLE, &["--digits", digits.trim()]);
        prop_assert_eq!(stdout(&back), format!("{text}\n"));
    }
}
