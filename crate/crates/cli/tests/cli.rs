use std::collections::BTreeMap;
use std::process::{Command, Output};

use serde_json::Value;

fn cdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdiff"))
        .args(args)
        .env_remove("CDIFF_MAX_Q")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_rows(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn spectrum_over_f343_prints_the_multiset() {
    let o = cdiff(&["spectrum", "--p", "7", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("S = {omega_0=86, omega_1=195, omega_2=38, omega_3=24}"));
}

#[test]
fn spectrum_json_has_ordered_keys() {
    let o = cdiff(&["spectrum", "--p", "7", "--n", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json_rows(&o);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["omega"], serde_json::json!([2, 3, 2]));
    let line = stdout(&o);
    let keys = [
        "\"p\"",
        "\"n\"",
        "\"q\"",
        "\"d\"",
        "\"gcd\"",
        "\"branch\"",
        "\"lambda1\"",
        "\"lambda2\"",
        "\"omega\"",
        "\"uniformity\"",
        "\"n4\"",
        "\"verdict\"",
        "\"wall_ms\"",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| line.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn exit_codes() {
    let even = cdiff(&["spectrum", "--p", "4", "--n", "1"]);
    assert_eq!(even.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&even.stderr).contains("p must be an odd prime"));
    assert_eq!(cdiff(&["verify", "--p", "3"]).status.code(), Some(2));
    assert_eq!(
        cdiff(&["spectrum", "--p", "7", "--c", "z"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cdiff(&["spectrum", "--p", "7", "--d", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(cdiff(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        cdiff(&["spectrum", "--p", "101", "--max-q", "100"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(cdiff(&["bound", "--p", "4099"]).status.code(), Some(3));
    let env = Command::new(env!("CARGO_BIN_EXE_cdiff"))
        .args(["spectrum", "--p", "101"])
        .env("CDIFF_MAX_Q", "100")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
    assert_eq!(cdiff(&["verify", "--p", "7"]).status.code(), Some(0));
}

#[test]
fn charsum_traces() {
    for (curve, p, n, want) in [("1", "5", "1", 2), ("2", "13", "1", 2), ("1", "5", "2", 6)] {
        let o = cdiff(&[
            "charsum", "--curve", curve, "--p", p, "--n", n, "--format", "json",
        ]);
        assert_eq!(o.status.code(), Some(0));
        let row = &json_rows(&o)[0];
        assert_eq!(row["lambda_pn"], want);
        assert_eq!(row["direct"], want);
    }
    let o = cdiff(&[
        "charsum", "--curve", "1", "--p", "5", "--n", "2", "--format", "json",
    ]);
    assert_eq!(
        json_rows(&o)[0]["s_sequence"],
        serde_json::json!([2, -2, -6])
    );
    assert_eq!(
        cdiff(&["charsum", "--curve", "3", "--p", "5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_f29_passes_every_claim() {
    let o = cdiff(&["verify", "--p", "29", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    for claim in [
        "spectrum",
        "n4-closed-form",
        "special-b",
        "identities",
        "c-bound",
    ] {
        assert!(
            text.lines()
                .any(|l| l.starts_with("pass") && l.contains(claim)),
            "{claim}"
        );
    }
}

#[test]
fn scan_excludes_characteristic_three() {
    let o = cdiff(&["scan", "--q-max", "100", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json_rows(&o);
    let qs: Vec<u64> = rows.iter().map(|r| r["q"].as_u64().unwrap()).collect();
    for absent in [9, 27, 81, 3] {
        assert!(!qs.contains(&absent));
    }
    for present in [5, 7, 25, 49, 97] {
        assert!(qs.contains(&present));
    }
    assert!(qs.windows(2).all(|w| w[0] < w[1]));
    assert!(rows.iter().all(|r| r["verdict"] == "pass"));
    assert!(String::from_utf8_lossy(&o.stderr)
        .contains("summary: 25 fields, 25 pass, 0 fail, 0 skipped"));
}

#[test]
fn scan_csv_header_and_quoting() {
    let o = cdiff(&["scan", "--q-max", "30", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema=1"));
    let header = lines.next().unwrap();
    assert!(header.starts_with("p,n,q,d,gcd,branch,lambda1,lambda2,omega_0,"));
    assert!(header.ends_with(",uniformity,n4,verdict,wall_ms"));
    let width = header.split(',').count();
    assert_eq!(lines.clone().count(), 9);
    assert!(lines.all(|l| l.split(',').count() == width));
    let bound = cdiff(&["bound", "--p", "5", "--n", "2", "--format", "csv"]);
    assert!(stdout(&bound).contains("\"0,1\""));
}

/// Numeric content of a row keyed by column, dropping wall time.
fn canonical(pairs: impl Iterator<Item = (String, String)>) -> BTreeMap<String, String> {
    pairs.filter(|(k, _)| k != "wall_ms").collect()
}

#[test]
fn json_and_csv_agree() {
    let j = cdiff(&["scan", "--q-max", "60", "--format", "json"]);
    let c = cdiff(&["scan", "--q-max", "60", "--format", "csv"]);
    let from_json: Vec<_> = json_rows(&j)
        .into_iter()
        .map(|row| {
            let obj = row.as_object().unwrap().clone();
            canonical(obj.into_iter().flat_map(|(k, v)| {
                match v {
                    Value::Array(items) => items
                        .iter()
                        .enumerate()
                        .map(|(i, x)| (format!("omega_{i}"), x.to_string()))
                        .collect::<Vec<_>>(),
                    Value::Null => vec![(k, "-".to_string())],
                    Value::String(s) => vec![(k, s)],
                    other => vec![(k, other.to_string())],
                }
            }))
        })
        .collect();
    let text = stdout(&c);
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let from_csv: Vec<_> = reader
        .records()
        .map(|r| {
            canonical(
                headers
                    .iter()
                    .cloned()
                    .zip(r.unwrap().iter().map(String::from)),
            )
        })
        .collect();
    assert_eq!(from_json.len(), from_csv.len());
    assert_eq!(from_json, from_csv);
}

#[test]
fn scan_is_independent_of_thread_count() {
    let strip = |o: Output| -> Vec<Value> {
        json_rows(&o)
            .into_iter()
            .map(|mut r| {
                r.as_object_mut().unwrap().remove("wall_ms");
                r
            })
            .collect()
    };
    let one = strip(cdiff(&[
        "scan",
        "--q-max",
        "200",
        "--threads",
        "1",
        "--format",
        "json",
    ]));
    let many = strip(cdiff(&[
        "scan",
        "--q-max",
        "200",
        "--threads",
        "4",
        "--format",
        "json",
    ]));
    assert_eq!(one, many);
}

#[test]
fn output_file_receives_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let o = cdiff(&[
        "scan",
        "--q-max",
        "30",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("summary: 9 fields"));
    let written = std::fs::read_to_string(path).unwrap();
    assert!(written.starts_with("# schema=1\n"));
}

#[test]
fn extension_multiplier_syntax() {
    let o = cdiff(&[
        "spectrum", "--p", "5", "--n", "2", "--c", "0,1", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let row = &json_rows(&o)[0];
    assert_eq!(row["verdict"], "skipped");
    let total: u64 = row["omega"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .sum();
    assert_eq!(total, 25);
}
