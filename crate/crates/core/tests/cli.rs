use std::process::{Command, Output};

use serde_json::Value;

fn cfx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfx"))
        .args(args)
        .output()
        .expect("spawn cfx")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = cfx(&full);
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

#[test]
fn e_table_in_text() {
    let o = cfx(&["convergents", "--expansion", "e-euler", "--depth", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let values: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split_whitespace().nth(3).unwrap())
        .collect();
    assert_eq!(
        values,
        ["3", "11/4", "49/18", "87/32", "1631/600", "11743/4320"]
    );
}

#[test]
fn output_is_deterministic() {
    for args in [
        &[
            "convergents",
            "--expansion",
            "exp-n",
            "--n",
            "3",
            "--depth",
            "30",
            "--format",
            "json",
        ][..],
        &[
            "verify",
            "--suite",
            "diff,qform",
            "--max-n",
            "4",
            "--format",
            "csv",
        ][..],
        &[
            "eval",
            "--expansion",
            "inc-gamma",
            "--z",
            "2+3i",
            "--format",
            "text",
        ][..],
    ] {
        assert_eq!(cfx(args).stdout, cfx(args).stdout, "{args:?}");
    }
}

#[test]
fn formats_carry_the_same_numbers() {
    let args = [
        "convergents",
        "--expansion",
        "rat-exp",
        "--l",
        "2",
        "--n",
        "5",
        "--depth",
        "8",
    ];
    let j = json(&args);
    let json_values: Vec<String> = j["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_str().unwrap().to_string())
        .collect();

    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let csv_out = stdout(&cfx(&csv_args));
    let mut reader = csv::Reader::from_reader(csv_out.as_bytes());
    let col = reader
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == "value")
        .unwrap();
    let csv_values: Vec<String> = reader
        .records()
        .map(|r| r.unwrap()[col].to_string())
        .collect();
    assert_eq!(json_values, csv_values);

    let text = stdout(&cfx(&args));
    let text_values: Vec<String> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split_whitespace().nth(3).unwrap().to_string())
        .collect();
    let normalized: Vec<String> = text_values
        .iter()
        .map(|v| {
            if v.contains('/') {
                v.clone()
            } else {
                format!("{v}/1")
            }
        })
        .collect();
    assert_eq!(json_values, normalized);
}

#[test]
fn json_schema_and_parameters() {
    let j = json(&["eval", "--expansion", "exp-n", "--n", "1", "--digits", "30"]);
    assert_eq!(j["schema"], 1);
    assert_eq!(j["command"], "eval");
    let row = &j["rows"][0];
    assert_eq!(row["value"], "2.718281828459045235360287471353");
    assert_eq!(row["agrees"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(
        cfx(&["eval", "--expansion", "exp-n", "--n", "2"])
            .status
            .code(),
        Some(0)
    );
    // usage
    assert_eq!(cfx(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(
        cfx(&["convergents", "--expansion", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cfx(&["convergents", "--expansion", "exp-n"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cfx(&["eval", "--expansion", "exp-inv-n", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cfx(&["eval", "--expansion", "m-fraction", "--b", "-2", "--z", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cfx(&["frobnicate"]).status.code(), Some(2));
    // domain
    assert_eq!(
        cfx(&["eval", "--expansion", "inc-gamma", "--z", "-3+0i"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        cfx(&["eval", "--expansion", "confluent-1f1", "--z", "0"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn depth_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cfx"))
        .args(["convergents", "--expansion", "e-euler", "--depth", "20"])
        .env("CFX_MAX_DEPTH", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("CFX_MAX_DEPTH"));
}

#[test]
fn verify_diff_reports_the_table_discrepancy() {
    let o = cfx(&[
        "verify", "--suite", "diff", "--max-n", "3", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let j: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = j["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["passed"] == true));
    assert!(rows[0]["note"].as_str().unwrap().contains("-1/288"));
}

#[test]
fn verify_exits_one_on_a_failed_claim() {
    // the fixed-constant rate bound does not hold for n = 3
    let o = cfx(&[
        "verify", "--suite", "rate", "--max-n", "3", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let j: Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<&Value> = j["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["passed"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0]["parameters"].as_str().unwrap().ends_with("n=3"));
}

#[test]
fn diff_table_matches_formula() {
    let j = json(&["diff-table", "--n", "2", "--depth", "6"]);
    let rows = j["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[2]["difference"], "-2/45");
    assert!(rows.iter().all(|r| r["match"] == true));
}

#[test]
fn compare_reports_first_differences() {
    let j = json(&[
        "compare",
        "--value",
        "e",
        "--expansions",
        "e-euler,e-regular,e-over,e-sporadic",
    ]);
    assert_eq!(j["diagnostics"]["limits_agree"], true);
    let first = j["diagnostics"]["first_difference"].as_object().unwrap();
    assert_eq!(first.len(), 6);
    assert_eq!(first["e-regular,e-over"], 3);
    // a member whose limit is a different constant is a usage error
    assert_eq!(
        cfx(&[
            "compare",
            "--value",
            "e",
            "--expansions",
            "e-euler,e-squared"
        ])
        .status
        .code(),
        Some(2)
    );
}
