//! End-to-end tests of the `cornerforge` binary: golden values for the
//! corner blow-up, exit codes, round-tripping and byte stability.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use cornerforge_cli::document::{
    monoid_record, morphism_entities, parse_document, serialize_document, Document, Entity,
};
use cornerforge_core::{blowup_base, stellar_subdivision, ToricMonoid};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_cornerforge")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env("CORNERFORGE_LOG", "off")
        .output()
        .expect("binary runs")
}

fn write_doc(dir: &Path, name: &str, doc: &Document) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serialize_document(doc)).unwrap();
    path.to_string_lossy().into_owned()
}

/// Document with the N² monoid and the corner refinement of its dual
/// complex.
fn corner_document() -> Document {
    let p = ToricMonoid::standard(2);
    let base = blowup_base(&p).unwrap();
    let refinement = stellar_subdivision(&base.face_complex, &[1, 1]).unwrap();
    let mut entities = BTreeMap::new();
    entities.insert("P".to_string(), Entity::Monoid(monoid_record(&p)));
    morphism_entities("R", "r", "d", refinement.morphism(), &mut entities);
    Document {
        version: "1".to_string(),
        entities,
    }
}

/// Document with the doubling map N → N, n ↦ 2n, as a refinement record.
fn doubling_document() -> String {
    r#"{
      "version": "1",
      "entities": {
        "zero": {"monoid": {"rank": 0, "rays": []}},
        "ray": {"monoid": {"rank": 1, "rays": [[1]]}},
        "C": {"complex": {
          "objects": ["zero", "ray"],
          "arrows": [
            {"source": 0, "target": 0, "matrix": []},
            {"source": 0, "target": 1, "matrix": [[]]},
            {"source": 1, "target": 1, "matrix": [[1]]}
          ]
        }},
        "R": {"refinement": {
          "source": "C",
          "target": "C",
          "assignment": [
            {"object": 0, "matrix": []},
            {"object": 1, "matrix": [[2]]}
          ]
        }}
      }
    }"#
    .to_string()
}

#[test]
fn corner_blowup_reproduces_golden_values() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_doc(dir.path(), "corner.json", &corner_document());
    let out = run(&[
        "blowup", "--input", &input, "--entity", "P", "--entity", "R", "--format", "json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let charts = v["charts"].as_array().unwrap();
    assert_eq!(charts.len(), 2);
    assert_eq!(charts[0]["blowdown"], serde_json::json!([[1, 0], [1, 1]]));
    assert_eq!(charts[1]["blowdown"], serde_json::json!([[0, 1], [1, 1]]));
    assert_eq!(
        charts[0]["hilbert_basis"],
        serde_json::json!([[1, -1], [0, 1]])
    );
    assert_eq!(
        charts[1]["hilbert_basis"],
        serde_json::json!([[-1, 1], [1, 0]])
    );
    let gluings = v["gluings"].as_array().unwrap();
    assert_eq!(gluings.len(), 1);
    // u' = u^{-1}, v' = u v
    assert_eq!(gluings[0]["transition"], serde_json::json!([[-1, 1], [0, 1]]));
    assert_eq!(gluings[0]["separating"], serde_json::json!([1, -1]));
}

#[test]
fn blowup_output_round_trips_through_check_complex() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_doc(dir.path(), "corner.json", &corner_document());
    let emitted = dir.path().join("blowup.json");
    let out = run(&[
        "blowup",
        "--input",
        &input,
        "--entity",
        "P",
        "--entity",
        "R",
        "--format",
        "json",
        "--output",
        emitted.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let check = run(&[
        "check-complex",
        "--input",
        emitted.to_str().unwrap(),
        "--entity",
        "blowup_complex",
    ]);
    assert!(
        check.status.success(),
        "{}{}",
        String::from_utf8_lossy(&check.stdout),
        String::from_utf8_lossy(&check.stderr)
    );
    // the emitted refinement also revalidates
    let check = run(&[
        "check-refinement",
        "--input",
        emitted.to_str().unwrap(),
        "--entity",
        "beta",
    ]);
    assert!(check.status.success());
}

#[test]
fn blowup_json_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_doc(dir.path(), "corner.json", &corner_document());
    let args = [
        "blowup", "--input", &input, "--entity", "P", "--entity", "R", "--format", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn doubling_refinement_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("doubling.json");
    std::fs::write(&path, doubling_document()).unwrap();
    let out = run(&[
        "check-refinement",
        "--input",
        path.to_str().unwrap(),
        "--entity",
        "R",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("not saturated"), "{text}");
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = run(&["hilbert", "--input", path.to_str().unwrap(), "--entity", "P"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unresolved_reference_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dangling.json");
    std::fs::write(
        &path,
        r#"{"version":"1","entities":{"f":{"map":{"domain":"P","codomain":"Q","mu":[[1]]}}}}"#,
    )
    .unwrap();
    let out = run(&["eval", "--input", path.to_str().unwrap(), "--entity", "f"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn primitivity_normalization_warns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nonprim.json");
    std::fs::write(
        &path,
        r#"{"version":"1","entities":{"P":{"monoid":{"rank":2,"rays":[[2,0],[0,1]]}}}}"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .args(["hilbert", "--input", path.to_str().unwrap(), "--entity", "P"])
        .env("CORNERFORGE_LOG", "info")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalized"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[1, 0]"));
}

#[test]
fn lift_of_diagonal_map() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = corner_document();
    doc.entities.insert(
        "N".to_string(),
        Entity::Monoid(monoid_record(&ToricMonoid::standard(1))),
    );
    doc.entities.insert(
        "f".to_string(),
        Entity::Map(cornerforge_cli::document::MapRecord {
            domain: "N".to_string(),
            codomain: "P".to_string(),
            mu: vec![vec![1, 1]],
        }),
    );
    let input = write_doc(dir.path(), "lift.json", &doc);
    let out = run(&[
        "lift", "--input", &input, "--entity", "f", "--entity", "R", "--format", "json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["chart"], 0);
    assert_eq!(v["exponents"], serde_json::json!([[0, 1]]));
}

#[test]
fn pullback_of_corner_along_diagonal_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = corner_document();
    doc.entities.insert(
        "N".to_string(),
        Entity::Monoid(monoid_record(&ToricMonoid::standard(1))),
    );
    doc.entities.insert(
        "f".to_string(),
        Entity::Map(cornerforge_cli::document::MapRecord {
            domain: "N".to_string(),
            codomain: "P".to_string(),
            mu: vec![vec![1, 1]],
        }),
    );
    let input = write_doc(dir.path(), "pb.json", &doc);
    let out = run(&[
        "pullback", "--input", &input, "--entity", "f", "--entity", "R", "--format", "json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // trivial refinement of N: the zero cell and the ray
    let record = &v["entities"]["pullback"]["refinement"];
    assert_eq!(record["assignment"].as_array().unwrap().len(), 2);
    assert_eq!(v["assignment_counts"], serde_json::json!([1, 1]));

    // and it revalidates as a refinement
    let emitted = dir.path().join("pb_out.json");
    std::fs::write(&emitted, &out.stdout).unwrap();
    let check = run(&[
        "check-refinement",
        "--input",
        emitted.to_str().unwrap(),
        "--entity",
        "pullback",
    ]);
    assert!(check.status.success());
}

#[test]
fn resolve_a1_yields_two_smooth_charts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a1.json");
    std::fs::write(
        &path,
        r#"{"version":"1","entities":{"A1":{"monoid":{"rank":2,"rays":[[1,0],[1,2]]}}}}"#,
    )
    .unwrap();
    let out = run(&[
        "resolve",
        "--input",
        path.to_str().unwrap(),
        "--entity",
        "A1",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["charts"], 2);
    assert_eq!(v["all_smooth"], true);

    let text_out = run(&[
        "resolve",
        "--input",
        path.to_str().unwrap(),
        "--entity",
        "A1",
    ]);
    assert!(String::from_utf8_lossy(&text_out.stdout).contains("2 smooth chart(s)"));
}

#[test]
fn eval_is_deterministic_for_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = corner_document();
    doc.entities.insert(
        "N".to_string(),
        Entity::Monoid(monoid_record(&ToricMonoid::standard(1))),
    );
    doc.entities.insert(
        "f".to_string(),
        Entity::Map(cornerforge_cli::document::MapRecord {
            domain: "N".to_string(),
            codomain: "P".to_string(),
            mu: vec![vec![1, 2]],
        }),
    );
    let input = write_doc(dir.path(), "eval.json", &doc);
    let args = [
        "eval", "--input", &input, "--entity", "f", "--format", "json", "--seed", "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let different = run(&[
        "eval", "--input", &input, "--entity", "f", "--format", "json", "--seed", "8",
    ]);
    assert_ne!(a.stdout, different.stdout);
}

#[test]
fn document_round_trip() {
    let doc = corner_document();
    let text = serialize_document(&doc);
    let parsed = parse_document(&text).unwrap();
    assert_eq!(parsed, doc);
}
