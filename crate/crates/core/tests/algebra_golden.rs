//! Golden export of the algebra data. Set `UPDATE_GOLDEN=1` to regenerate.

use std::path::PathBuf;

use critcoh_core::algebra::{AlgebraName, SimpleLieAlgebra};

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(format!("{name}_algebra.json"))
}

fn constant(v: &serde_json::Value, a: &str, b: &str, c: &str) -> Option<String> {
    v["structure"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["a"] == a && x["b"] == b && x["c"] == c)
        .map(|x| x["value"].as_str().unwrap().to_string())
}

#[test]
fn algebra_exports_match_golden_files() {
    for name in [AlgebraName::Sl2, AlgebraName::Sl3] {
        let got = SimpleLieAlgebra::new(name).to_json();
        let file = path(&name.to_string());
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&file, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
        }
        let want: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn sl2_golden_has_the_standard_relations() {
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path("sl2")).unwrap()).unwrap();
    assert_eq!(v["dim"], 3);
    assert_eq!(constant(&v, "e", "f", "h").as_deref(), Some("1/1"));
    assert_eq!(constant(&v, "h", "e", "e").as_deref(), Some("2/1"));
    assert_eq!(constant(&v, "h", "f", "f").as_deref(), Some("-2/1"));
    assert_eq!(constant(&v, "e", "e", "h"), None);
}
