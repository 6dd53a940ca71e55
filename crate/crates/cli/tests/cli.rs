use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures_dir().join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffrest"))
        .args(args)
        .env_remove("DIFFREST_SIZE_CAP")
        .output()
        .unwrap()
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_diffrest"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn json_err(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap()
}

fn fixture_files(suffix: &str) -> Vec<String> {
    let mut files: Vec<String> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(suffix))
        .collect();
    files.sort();
    files
}

#[test]
fn checked_in_fixtures_match_the_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["catalog", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let mut written: Vec<String> = json_out(&out)["written"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    written.sort();
    assert_eq!(written, fixture_files(".json"));
    for name in written {
        let fresh = std::fs::read(dir.path().join(&name)).unwrap();
        let stored = std::fs::read(fixtures_dir().join(&name)).unwrap();
        assert_eq!(
            fresh, stored,
            "{name} is stale; regenerate with `diffrest catalog --out fixtures`"
        );
    }
}

#[test]
fn a3c_fixture_parses_to_three_elements() {
    let out = run(&["validate", &fixture("A3c.algebra.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_out(&out);
    assert_eq!(report["elements"], 3);
    assert_eq!(report["valid"], true);
}

#[test]
fn every_fixture_validates_except_the_broken_one() {
    for name in fixture_files(".json") {
        if name.ends_with(".operator.json") {
            continue;
        }
        let out = run(&["validate", &fixture(&name)]);
        let expected = if name.starts_with("A3c_broken") { 1 } else { 0 };
        assert_eq!(
            out.status.code(),
            Some(expected),
            "{name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn broken_restriction_reports_the_fourth_axiom() {
    let out = run(&["validate", &fixture("A3c_broken_restriction.algebra.json")]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_out(&out);
    assert_eq!(report["axioms"][3]["holds"], false);
    assert!(report["axioms"][3]["counterexample"].is_object());
    for k in [0, 1, 2, 4] {
        assert_eq!(report["axioms"][k]["holds"], true);
    }
}

#[test]
fn completing_a3c_gives_four_elements() {
    let out = run(&["complete", &fixture("A3c.algebra.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_out(&out);
    let algebra = &report["algebra"];
    assert_eq!(algebra["kind"], "algebra");
    assert_eq!(algebra["elements"].as_array().unwrap().len(), 4);
    assert_eq!(report["dense"], true);
    assert!(report["density"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| d["holds"] == true));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, serde_json::to_string(algebra).unwrap()).unwrap();
    let v = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(json_out(&v)["fin_compatibly_complete"], true);
    assert_eq!(json_out(&v)["subtraction_algebra"], true);
}

#[test]
fn completing_with_an_operator_lifts_it() {
    let out = run(&[
        "complete",
        &fixture("B4.pfalgebra.json"),
        "--with-op",
        "meet",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json_out(&out);
    assert_eq!(report["algebra"]["operators"][0]["name"], "meet");
    assert_eq!(report["embedding_preserves_operations"], true);
}

#[test]
fn roundtrip_passes_on_every_fixture() {
    for suffix in [".algebra.json", ".pfalgebra.json", ".space.json"] {
        for name in fixture_files(suffix) {
            if name.starts_with("A3c_broken") {
                continue;
            }
            let out = run(&["roundtrip", &fixture(&name)]);
            assert_eq!(
                out.status.code(),
                Some(0),
                "{name}: {}",
                String::from_utf8_lossy(&out.stdout)
            );
            assert_eq!(json_out(&out)["holds"], true);
        }
    }
}

#[test]
fn commands_refuse_algebras_failing_the_axioms() {
    let out = run(&["roundtrip", &fixture("A3c_broken_restriction.algebra.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_err(&out)["error"], "input");
}

#[test]
fn morphisms_check_and_dualize() {
    for name in fixture_files(".morphism.json") {
        let out = run(&["check-hom", &fixture(&name)]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(json_out(&out)["hom"], true);
        let dual = run(&["check-hom", "--dualize", &fixture(&name)]);
        assert_eq!(dual.status.code(), Some(0));
        let back = run_with_stdin(
            &["check-hom", "-"],
            std::str::from_utf8(&dual.stdout).unwrap(),
        );
        assert_eq!(
            back.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&back.stdout)
        );
        assert_eq!(json_out(&back)["valid"], true);
    }
    let out = run(&["check-hom", &fixture("A3c_into_B4.morphism.json")]);
    assert_eq!(json_out(&out)["proper"], false);
    assert_eq!(json_out(&out)["embedding"], true);
}

#[test]
fn non_homomorphism_exits_with_one() {
    let text = std::fs::read_to_string(fixture("A1_e_to_a.morphism.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["map"][0][1] = Value::String("a".into());
    let out = run_with_stdin(&["check-hom", "-"], &doc.to_string());
    assert_eq!(out.status.code(), Some(1));
    assert!(!json_out(&out)["violations"].as_array().unwrap().is_empty());
}

#[test]
fn operators_and_relations() {
    let out = run(&[
        "check-op",
        &fixture("B4.algebra.json"),
        &fixture("B4_domain.operator.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_out(&out)["compat_preserving_operator"], true);

    let rel = run(&[
        "check-op",
        &fixture("B4.algebra.json"),
        &fixture("B4_domain.operator.json"),
        "--relation",
    ]);
    assert_eq!(rel.status.code(), Some(0));
    let rel_text = String::from_utf8(rel.stdout).unwrap();
    let valid = run_with_stdin(&["validate", "-"], &rel_text);
    assert_eq!(valid.status.code(), Some(0));
    let dual = run_with_stdin(&["dualize", "-"], &rel_text);
    assert_eq!(dual.status.code(), Some(0));
    assert_eq!(json_out(&dual)["operators"][0]["name"], "domain");

    let comp = run(&["check-op", &fixture("I2.pfalgebra.json"), "compose"]);
    assert_eq!(comp.status.code(), Some(0));
    let conv = run(&["check-op", &fixture("I2.pfalgebra.json"), "converse"]);
    assert_eq!(conv.status.code(), Some(1));
    let report = json_out(&conv);
    assert_eq!(report["compat_preserving"]["holds"], false);
    assert_eq!(
        report["compat_preserving"]["witness"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
    assert_eq!(report["operator"], true);
}

#[test]
fn classification_table() {
    let out = run(&["classify-op", &fixture("P2.pfalgebra.json")]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_out(&out)["operations"].as_array().unwrap().clone();
    let row = |n: &str| rows.iter().find(|r| r["operation"] == n).unwrap().clone();
    for op in ["compose", "domain", "range", "fixset", "identity"] {
        assert_eq!(row(op)["compat_preserving_operator"], true, "{op}");
    }
    assert_eq!(row("antidomain")["compat_preserving_operator"], false);
    assert_eq!(row("converse")["status"], "not_applicable");
    assert_eq!(row("update")["status"], "not_implemented");

    let out = run(&["classify-op", &fixture("I2.pfalgebra.json")]);
    let rows = json_out(&out)["operations"].as_array().unwrap().clone();
    let conv = rows.iter().find(|r| r["operation"] == "converse").unwrap();
    assert_eq!(conv["compat_preserving"], false);
    assert_eq!(conv["normal"], true);
    assert_eq!(conv["additive"], true);
}

#[test]
fn filters_of_a3i() {
    let out = run(&["filters", &fixture("A3i.algebra.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_out(&out);
    assert_eq!(report["points"].as_array().unwrap().len(), 2);
    assert_eq!(report["classes"].as_array().unwrap().len(), 1);
}

#[test]
fn dualize_round_trips_through_spaces() {
    let space = run(&["dualize", &fixture("A3c.algebra.json")]);
    assert_eq!(space.status.code(), Some(0));
    let alg = run_with_stdin(
        &["dualize", "-"],
        std::str::from_utf8(&space.stdout).unwrap(),
    );
    assert_eq!(alg.status.code(), Some(0));
    assert_eq!(json_out(&alg)["elements"].as_array().unwrap().len(), 4);
}

#[test]
fn malformed_table_is_located() {
    let text = std::fs::read_to_string(fixture("A3c.algebra.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["rest"][1].as_array_mut().unwrap().pop();
    let out = run_with_stdin(&["validate", "-"], &doc.to_string());
    assert_eq!(out.status.code(), Some(2));
    let err = json_err(&out);
    assert_eq!(err["path"], "/rest/1");
    assert!(out.stdout.is_empty());

    let out = run_with_stdin(
        &["validate", "-"],
        "{\"kind\": \"algebra\", \"version\": 1, \"elements\": [",
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(json_err(&out)["message"].as_str().unwrap().contains("line"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["complete".to_string(), fixture("A4.algebra.json")],
        vec!["filters".to_string(), fixture("I2.algebra.json")],
        vec!["catalog".to_string()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}

#[test]
fn size_cap_override() {
    let p2 = fixture("P2.algebra.json");
    let capped = Command::new(env!("CARGO_BIN_EXE_diffrest"))
        .args(["filters", &p2])
        .env("DIFFREST_SIZE_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
    assert!(json_err(&capped)["message"]
        .as_str()
        .unwrap()
        .contains("cap"));
    let bad = Command::new(env!("CARGO_BIN_EXE_diffrest"))
        .args(["filters", &p2])
        .env("DIFFREST_SIZE_CAP", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn normalize_is_idempotent_on_fixtures() {
    for name in fixture_files(".json") {
        let once = run(&["normalize", &fixture(&name)]);
        assert_eq!(once.status.code(), Some(0), "{name}");
        let twice = run_with_stdin(
            &["normalize", "-"],
            std::str::from_utf8(&once.stdout).unwrap(),
        );
        assert_eq!(once.stdout, twice.stdout, "{name}");
    }
}
