use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

use serde_json::Value;

use gabrank::gf::{default_spec, Field};
use gabrank::linpoly::Algebra;
use gabrank::rankcode::gabidulin;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gabrank")).args(args).output().expect("binary runs")
}

fn code_of(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn schema_root() -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas/gabrank.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_schema(def: &str, value: &Value) {
    let mut schema = schema_root();
    schema["$ref"] = Value::String(format!("#/$defs/{def}"));
    let v = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = v.iter_errors(value).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{def}: {errors:?}");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["field-info", "--q", "6", "--n", "2"][..],
        &["trk", "--q", "2", "--n", "4"],
        &["trk", "--q", "2", "--n", "4", "--k", "9"],
        &["trk", "--q", "2", "--n", "4", "--k", "2", "--modulus", "1x011"],
        &["verify-table", "--row", "9,9,9"],
        &["no-such-command"],
    ] {
        let o = run(args);
        assert_eq!(code_of(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn offending_flag_is_named() {
    let o = run(&["trk", "--q", "2", "--n", "4", "--k", "2", "--modulus", "1x011"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--modulus"));
}

#[test]
fn exact_rank_q2() {
    let o = run(&["trk", "--q", "2", "--n", "4", "--k", "2", "--json"]);
    assert_eq!(code_of(&o), 0);
    let v = json(&o);
    assert_schema("SearchResult", &v);
    assert_eq!(v["status"], "Exact");
    assert_eq!(v["trk"], 12);
    assert_eq!(v["basis"].as_array().unwrap().len(), 12);
}

#[test]
fn q4_without_deep_is_an_interval() {
    let o = run(&["trk", "--q", "4", "--n", "4", "--k", "2", "--json"]);
    assert_eq!(code_of(&o), 0);
    let v = json(&o);
    assert_schema("SearchResult", &v);
    assert_eq!(v["status"], "Interval");
    assert_eq!((v["trk_low"].as_u64(), v["trk_high"].as_u64()), (Some(10), Some(11)));
    assert!(v["note"].as_str().unwrap().contains("--deep"));
}

#[test]
fn t_max_zero_leaves_an_interval() {
    let v = json(&run(&["trk", "--q", "2", "--n", "4", "--k", "2", "--t-max", "0", "--json"]));
    assert_eq!(v["status"], "Interval");
    assert_eq!(v["trk_low"], 10);
}

#[test]
fn byte_identical_json_across_threads() {
    for args in [
        &["trk", "--q", "4", "--n", "4", "--k", "1", "--json"][..],
        &["search-random", "--q", "4", "--n", "4", "--k", "1", "--r", "8", "--seed", "7", "--json"],
        &["verify-theorems", "--q", "5", "--seed", "3", "--samples", "5", "--json"],
    ] {
        let one = run(&[&["--threads", "1"], args].concat());
        let many = run(&[&["--threads", "4"], args].concat());
        let again = run(&[&["--threads", "4"], args].concat());
        assert_eq!(code_of(&one), 0, "{args:?}");
        assert_eq!(one.stdout, many.stdout, "{args:?}");
        assert_eq!(many.stdout, again.stdout, "{args:?}");
    }
}

#[test]
fn verify_table_reports_every_row() {
    let o = run(&["verify-table", "--json"]);
    // three printed bases do not contain their code
    assert_eq!(code_of(&o), 1);
    let v = json(&o);
    assert_schema("TableReport", &v);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let failing = rows.iter().filter(|r| !r["failures"].as_array().unwrap().is_empty()).count();
    assert_eq!(failing, 3);

    let o = run(&["verify-table", "--row", "3,2,2"]);
    assert_eq!(code_of(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("x^3+x+1"));
}

#[test]
fn theorem_report_q3() {
    let o = run(&["verify-theorems", "--q", "3", "--json"]);
    assert_eq!(code_of(&o), 0);
    let v = json(&o);
    assert_schema("TheoremReport", &v);
    let status = |id: &str| {
        v["claims"].as_array().unwrap().iter().find(|c| c["claim_id"] == id).unwrap()["status"].clone()
    };
    assert_eq!(status("sistemone-classification"), "pass");
    assert_eq!(status("quartic-identity"), "pass");
    assert_eq!(status("m10-rank"), "vacuous");
    assert_eq!(status("det-s6-closed-form"), "vacuous");
}

#[test]
fn field_info_and_embedded_table_match_schema() {
    let v = json(&run(&["field-info", "--q", "4", "--n", "4", "--json"]));
    assert_schema("FieldInfo", &v);
    assert_eq!(v["order"], 256);
    let table: Value =
        serde_json::from_str(include_str!("../../core/data/table1.json")).unwrap();
    assert_schema("Table1", &table);
}

#[test]
fn code_file_round_trip() {
    let alg = Algebra::new(Arc::new(Field::build(default_spec(2, 3).unwrap()).unwrap())).unwrap();
    let doc = gabidulin(&alg, 2, 1).unwrap().to_doc();
    let doc = serde_json::to_value(doc).unwrap();
    assert_schema("Code", &doc);
    let dir = std::env::temp_dir().join(format!("gabrank-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("code.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = dir.join("out.json");
    let o = run(&["trk", "--code", path.to_str().unwrap(), "--json", "--out", out.to_str().unwrap()]);
    assert_eq!(code_of(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_schema("SearchResult", &v);
    assert_eq!(v["trk"], 7);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bench_json() {
    let o = run(&["bench", "--json"]);
    assert_eq!(code_of(&o), 0);
    assert_schema("Bench", &json(&o));
}
