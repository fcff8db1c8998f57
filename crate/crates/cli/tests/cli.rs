use std::path::PathBuf;
use std::process::{Command, Output};

fn critcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critcoh")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn passing_suite_exits_zero() {
    let o = critcoh(&["verify", "classical-vacuum", "--algebra", "sl2", "--max-energy", "5", "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["match"] == true));
}

#[test]
fn generic_level_vanishing() {
    let o = critcoh(&[
        "verify", "quantum-vacuum-generic", "--algebra", "sl2", "--max-energy", "5", "--max-degree", "2", "--level", "generic:1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for r in v.as_array().unwrap() {
        if r["p"].as_u64().unwrap() > 0 {
            assert_eq!(r["dim"], 0);
        }
    }
}

#[test]
fn cutoff_zero_single_record() {
    let o = critcoh(&["verify", "classical-vacuum", "--algebra", "sl2", "--max-energy", "0", "--max-degree", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!((recs[0]["p"].as_u64(), recs[0]["energy"].as_u64(), recs[0]["dim"].as_u64()), (Some(0), Some(0), Some(1)));
}

#[test]
fn mismatch_exits_one() {
    // The composite homotopy check has known failures.
    let o = critcoh(&["verify", "vertex-identities", "--algebra", "sl2", "--max-energy", "2", "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn configuration_errors_exit_two() {
    let cases: [&[&str]; 6] = [
        &["verify", "no-such-suite", "--algebra", "sl2", "--max-energy", "2"],
        &["verify", "classical-vacuum", "--algebra", "so5", "--max-energy", "2"],
        &["verify", "quantum-vacuum-generic", "--algebra", "sl2", "--max-energy", "2", "--level", "generic:0"],
        &["verify", "classical-verma", "--algebra", "sl2", "--max-energy", "2", "--weight", "1/2"],
        &["verify", "classical-vacuum", "--algebra", "sl2", "--max-energy", "2", "--format", "xml"],
        &["dims", "--series", "Nope", "--algebra", "sl2", "--max-energy", "3"],
    ];
    for args in cases {
        assert_eq!(critcoh(args).status.code(), Some(2), "{args:?}");
    }
    let missing = critcoh(&["oper", "canonicalize", "--algebra", "sl2", "--precision", "4", "--input", "/nonexistent.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let wrong_k = critcoh(&[
        "oper", "canonicalize", "--algebra", "sl2", "--precision", "3", "--input", fixture("regular_sl2.json").to_str().unwrap(),
    ]);
    assert_eq!(wrong_k.status.code(), Some(2));
}

#[test]
fn reports_are_reproducible() {
    let args = ["verify", "quantum-verma-critical", "--algebra", "sl2", "--max-energy", "3", "--weight", "1"];
    assert_eq!(critcoh(&args).stdout, critcoh(&args).stdout);
}

#[test]
fn report_file_tsv_and_json_agree() {
    let dir = std::env::temp_dir().join(format!("critcoh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (j, t) = (dir.join("r.json"), dir.join("r.tsv"));
    let base = ["verify", "classical-verma", "--algebra", "sl2", "--max-energy", "4", "--report"];
    let mut a: Vec<&str> = base.to_vec();
    a.extend([j.to_str().unwrap(), "--format", "json"]);
    assert_eq!(critcoh(&a).status.code(), Some(0));
    let mut b: Vec<&str> = base.to_vec();
    b.extend([t.to_str().unwrap(), "--format", "tsv"]);
    assert_eq!(critcoh(&b).status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&j).unwrap()).unwrap();
    let tsv = std::fs::read_to_string(&t).unwrap();
    let rows: Vec<Vec<&str>> = tsv.lines().skip(1).map(|l| l.split('\t').collect()).collect();
    let recs = json.as_array().unwrap();
    assert_eq!(rows.len(), recs.len());
    for (row, rec) in rows.iter().zip(recs) {
        assert_eq!(row[2], rec["p"].to_string());
        assert_eq!(row[3], rec["energy"].to_string());
        assert_eq!(row[5], rec["dim"].to_string());
        assert_eq!(row[6], rec["expected"].to_string());
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn canonicalize_golden() {
    for (input, k, golden) in [("regular_sl2.json", "4", "regular_sl2.canonical.json"), ("rs_sl2.json", "3", "rs_sl2.canonical.json")] {
        let o = critcoh(&["oper", "canonicalize", "--algebra", "sl2", "--precision", k, "--input", fixture(input).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let got: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        let want: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(fixture(golden)).unwrap()).unwrap();
        assert_eq!(got, want, "{input}");
    }
}

#[test]
fn dims_series() {
    let o = critcoh(&["dims", "--series", "FunC", "--algebra", "sl2", "--max-energy", "6"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dims"][0], serde_json::json!([1, 0, 1, 1, 2, 2, 4]));
    let o = critcoh(&["dims", "--series", "FunCRS", "--algebra", "sl2", "--max-energy", "5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dims"][0], serde_json::json!([1, 1, 2, 3, 5, 7]));
}
