use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

#[path = "common/cases.rs"]
mod cases;

use cases::CASES;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn flatp(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_flatp"))
        .current_dir(root().join("tests/fixtures"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(root().join("schema/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn check_golden(name: &str, got: &str) {
    let path = root().join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}; run with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(got, want, "golden mismatch for {name}");
}

#[test]
fn goldens_match_and_validate() {
    let validator = schema();
    for &(name, code, args) in CASES {
        let mut a = args.to_vec();
        a.push("--json");
        let (got_code, out, _) = flatp(&a);
        assert_eq!(got_code, code, "{name}: {out}");
        let doc: Value = serde_json::from_str(&out).unwrap();
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{name}: {errors:?}");
        check_golden(name, &out);
        let (_, again, _) = flatp(&a);
        assert_eq!(out, again, "{name} is not deterministic");
    }
}

#[test]
fn every_subcommand_has_a_case() {
    let (_, help, _) = flatp(&["--help"]);
    for &(name, _, _) in CASES {
        assert!(help.contains(name), "{name}");
    }
    assert_eq!(CASES.len(), 23);
}

#[test]
fn worked_values() {
    let value = |args: &[&str]| -> Value {
        let mut a = args.to_vec();
        a.push("--json");
        serde_json::from_str(&flatp(&a).1).unwrap()
    };
    let v = value(&["flatnormp", "square_boundary.chain", "--p", "2"]);
    assert_eq!(v["result"]["value"], 1.0);
    assert_eq!(v["result"]["s"]["terms"][0]["cell"], "[0,1]x[0,1]");
    let v = value(&["flatnorm", "path_endpoints.chain"]);
    assert_eq!(v["result"]["value"], 2.0);
    let v = value(&["isoratio", "square_boundary.chain", "--p", "2"]);
    assert_eq!(v["result"]["ratio"], 0.0625);
    let v = value(&["cyclecut", "parallel_curves.chain", "--p", "2"]);
    assert_eq!(v["result"]["gamma1"], serde_json::json!([1]));
    let v = value(&["validate", "corrupt_complex.chain"]);
    assert!(v["error"]["message"].as_str().unwrap().contains("∂∂ ≠ 0"));
}

#[test]
fn exit_codes_and_text_output() {
    let (code, out, _) = flatp(&["mass", "square_boundary.chain"]);
    assert_eq!(code, 0);
    assert_eq!(out, "mass\nmass: 4.0\n");
    let (code, _, err) = flatp(&["slice", "unit_square.chain", "--axis", "1", "--r", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("perturb"), "{err}");
    let (code, _, err) = flatp(&["massp", "square_boundary.chain"]);
    assert_eq!(code, 2);
    assert!(err.contains("--p"), "{err}");
    let (code, _, _) = flatp(&["mass", "no_such_file.chain"]);
    assert_eq!(code, 2);
    let (code, _, err) = flatp(&["cyclecut", "parallel_curves.chain", "--p", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("not divisible"), "{err}");
    let (code, out, _) = flatp(&["mass", "--seed", "7", "--json"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["input"]["source"], "seed");
    assert_eq!(flatp(&["mass", "--seed", "7", "--json"]).1, out);
    let (_, timed, _) = flatp(&["mass", "square_boundary.chain", "--json", "--timing"]);
    let doc: Value = serde_json::from_str(&timed).unwrap();
    assert!(doc["timing"]["elapsed_ms"].is_number());
    assert!(schema().is_valid(&doc));
}

#[test]
fn fixtures_roundtrip() {
    let dir = root().join("tests/fixtures");
    let mut count = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("chain") {
            continue;
        }
        roundtrip(&path);
        count += 1;
    }
    assert!(count >= 12);
}

fn roundtrip(path: &Path) {
    let text = std::fs::read_to_string(path).unwrap();
    let file = flatp::io::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let once = flatp::io::serialize(&file).unwrap();
    let back = flatp::io::parse(&once).unwrap();
    assert_eq!(back, file, "{}", path.display());
    assert_eq!(flatp::io::serialize(&back).unwrap(), once, "{}", path.display());
}
