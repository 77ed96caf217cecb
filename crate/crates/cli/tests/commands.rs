use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hqds_cli::document::AlgebraDocument;
use hqds_core::catalog::{catalog, emit_canonical};
use hqds_core::scalar::rat;
use hqds_core::tensor::StructureTensor;
use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;

fn hqds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hqds")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes `emit --family` output for the given family into `dir`.
fn emit_to(dir: &TempDir, family: u8, params: Option<&str>) -> PathBuf {
    let f = family.to_string();
    let mut args = vec!["emit", "--family", f.as_str()];
    if let Some(p) = params {
        args.extend(["--params", p]);
    }
    let out = hqds(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join(format!("a{family}.json"));
    std::fs::write(&path, out.stdout).unwrap();
    path
}

fn json_out(dir: &TempDir, args: &[&str], name: &str) -> (i32, Value) {
    let target = dir.path().join(name);
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--json-out", path_str(&target)]);
    let out = hqds(&all);
    let value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    (code(&out), value)
}

#[test]
fn classify_a10_reports_six_derivations() {
    let dir = TempDir::new().unwrap();
    let doc = emit_to(&dir, 10, None);
    let (status, report) = json_out(&dir, &["classify", path_str(&doc)], "r.json");
    assert_eq!(status, 0);
    assert_eq!(report["verdict"]["family"], "A10");
    assert_eq!(report["invariants"]["dim_der"], 6);
    assert_eq!(report["matches_expected"], true);
}

#[test]
fn zero_document_is_the_null_algebra() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("zero.json");
    std::fs::write(&path, AlgebraDocument::from_tensor(&StructureTensor::zero()).to_json()).unwrap();
    let out = hqds(&["classify", path_str(&path)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("verdict: null algebra"));
}

#[test]
fn conjugated_a8_is_recognised_with_a_witness() {
    let dir = TempDir::new().unwrap();
    let doc = emit_to(&dir, 8, None);
    let out = hqds(&["conjugate", path_str(&doc), "--seed", "5"]);
    assert_eq!(code(&out), 0);
    let moved = dir.path().join("moved.json");
    std::fs::write(&moved, &out.stdout).unwrap();
    let parsed = AlgebraDocument::load(&moved).unwrap();
    assert_eq!(parsed.conjugation.as_ref().unwrap().seed, 5);
    assert_ne!(parsed.tensor().unwrap(), AlgebraDocument::load(&doc).unwrap().tensor().unwrap());

    let out = hqds(&["classify", path_str(&moved)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("verdict: A8"), "{text}");
    assert!(text.contains("witness"), "{text}");
}

#[test]
fn seed_zero_leaves_the_document_unchanged() {
    let dir = TempDir::new().unwrap();
    let doc = emit_to(&dir, 1, None);
    let out = hqds(&["conjugate", path_str(&doc), "--seed", "0"]);
    let moved = AlgebraDocument::parse(&stdout(&out)).unwrap();
    assert_eq!(moved.tensor().unwrap(), AlgebraDocument::load(&doc).unwrap().tensor().unwrap());
}

#[test]
fn seeded_conjugates_classify_back() {
    let dir = TempDir::new().unwrap();
    for (family, params, seed, expect) in
        [(1u8, None, "1", "verdict: A1\n"), (23, Some("1,2"), "2", "verdict: A23(1/1, 2/1)\n")]
    {
        let doc = emit_to(&dir, family, params);
        let out = hqds(&["conjugate", path_str(&doc), "--seed", seed]);
        let moved = dir.path().join(format!("moved{family}.json"));
        std::fs::write(&moved, &out.stdout).unwrap();
        let out = hqds(&["classify", path_str(&moved)]);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).contains(expect), "{}", stdout(&out));
    }
}

#[test]
fn emit_system_and_range_errors() {
    let out = hqds(&["emit", "--family", "23", "--params", "1,2", "--system"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    // e1e3 = e1 − 2e2, e2e3 = 2e1 + e2, e3² = e3 with a = 1, b = 2
    assert!(text.contains("dx1/dt = 2*x1*x3 + 4*x2*x3"), "{text}");
    assert!(text.contains("dx2/dt = -4*x1*x3 + 2*x2*x3"), "{text}");
    assert!(text.contains("dx3/dt = x3^2"), "{text}");

    let out = hqds(&["emit", "--family", "8"]);
    let t = AlgebraDocument::parse(&stdout(&out)).unwrap().tensor().unwrap();
    assert_eq!(t, emit_canonical(&hqds_core::catalog::FamilyLabel::new(8, vec![]), 0.0).unwrap());

    let out = hqds(&["emit", "--family", "18", "--params", "1/2"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn derivations_of_a10_have_six_basis_matrices() {
    let dir = TempDir::new().unwrap();
    let doc = emit_to(&dir, 10, None);
    let out = hqds(&["derivations", path_str(&doc)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("dim Der A = 6"));
    assert_eq!(text.lines().filter(|l| l.starts_with('D')).count(), 6);
}

#[test]
fn simulate_ray_check_on_a8() {
    let dir = TempDir::new().unwrap();
    let doc = emit_to(&dir, 8, None);
    let (status, report) =
        json_out(&dir, &["simulate", path_str(&doc), "--x0", "0,0,1", "--checks", "ray", "--dt", "1e-4"], "s.json");
    assert_eq!(status, 0);
    assert!(report["checks"]["ray"]["max_relative_error"].as_f64().unwrap() < 1e-6);
}

#[test]
fn simulate_exports_a_trajectory() {
    let dir = TempDir::new().unwrap();
    let doc = emit_to(&dir, 1, None);
    let export = dir.path().join("traj.csv");
    let out = hqds(&["simulate", path_str(&doc), "--x0", "1,-1/2,1", "--t", "0.1", "--dt", "0.01", "--checks", "equilibrium", "--export", path_str(&export)]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(export).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x1,x2,x3"));
    assert_eq!(lines.count(), 11);
}

#[test]
fn catalog_lists_all_families() {
    let dir = TempDir::new().unwrap();
    let (status, listing) = json_out(&dir, &["catalog"], "c.json");
    assert_eq!(status, 0);
    assert_eq!(listing.as_array().unwrap().len(), 35);
    assert_eq!(listing.as_array().unwrap().len(), catalog().len());
    assert!(stdout(&hqds(&["catalog"])).trim_end().ends_with("35 families"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&hqds(&["classify", path_str(&bad)])), 2);
    assert_eq!(code(&hqds(&["classify", "/nonexistent/doc.json"])), 2);
    assert_eq!(code(&hqds(&["frobnicate"])), 2);

    // L_e3 has eigenvalues 1 ± √2 on span{e1, e2}
    let irrational = dir.path().join("irr.json");
    let mut doc = AlgebraDocument::from_tensor(&StructureTensor::zero());
    doc.products.insert("13".into(), ["1".into(), "1".into(), "0".into()]);
    doc.products.insert("23".into(), ["2".into(), "1".into(), "0".into()]);
    doc.products.insert("33".into(), ["0".into(), "0".into(), "1".into()]);
    std::fs::write(&irrational, doc.to_json()).unwrap();
    let out = hqds(&["classify", path_str(&irrational)]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--mode float"));
    let out = hqds(&["classify", path_str(&irrational), "--mode", "float"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("verdict: A14("), "{}", stdout(&out));

    // e1² = e2, e2² = e1 has no semisimple derivation with one-dimensional kernel
    let outside = dir.path().join("outside.json");
    let mut doc = AlgebraDocument::from_tensor(&StructureTensor::zero());
    doc.products.insert("11".into(), ["0".into(), "1".into(), "0".into()]);
    doc.products.insert("22".into(), ["1".into(), "0".into(), "0".into()]);
    doc.products.insert("33".into(), ["0".into(), "0".into(), "1".into()]);
    std::fs::write(&outside, doc.to_json()).unwrap();
    assert_eq!(code(&hqds(&["classify", path_str(&outside)])), 3);
}

#[test]
fn batch_mode_reports_every_file() {
    let dir = TempDir::new().unwrap();
    emit_to(&dir, 8, None);
    emit_to(&dir, 13, Some("3/4"));
    std::fs::write(dir.path().join("broken.json"), "[]").unwrap();
    let out_dir = TempDir::new().unwrap();
    let (status, report) = json_out(&out_dir, &["classify", path_str(dir.path())], "batch.json");
    assert_eq!(status, 2);
    let entries = report.as_array().unwrap();
    assert_eq!(entries.len(), 3);
    let families: Vec<&str> = entries.iter().filter_map(|e| e["verdict"]["family"].as_str()).collect();
    assert_eq!(families, ["A13", "A8"]);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let doc = emit_to(&dir, 23, Some("1,2"));
    let first = hqds(&["conjugate", path_str(&doc), "--seed", "11"]);
    let second = hqds(&["conjugate", path_str(&doc), "--seed", "11"]);
    assert_eq!(first.stdout, second.stdout);
    let moved = dir.path().join("moved.json");
    std::fs::write(&moved, &first.stdout).unwrap();

    let runs: Vec<(Vec<u8>, Vec<u8>)> = (0..2)
        .map(|i| {
            let target = dir.path().join(format!("r{i}.json"));
            let out = hqds(&["classify", path_str(&moved), "--json-out", path_str(&target)]);
            (out.stdout, std::fs::read(&target).unwrap())
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn misprinted_family_reports_a_discrepancy() {
    let dir = TempDir::new().unwrap();
    let doc = emit_to(&dir, 5, Some("1/3"));
    let (_, report) = json_out(&dir, &["classify", path_str(&doc)], "r.json");
    let kinds: Vec<&str> =
        report["discrepancies"].as_array().unwrap().iter().map(|d| d["kind"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"published_system_misprint"), "{kinds:?}");
}

fn rational_text() -> impl Strategy<Value = String> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| hqds_core::scalar::format_rational(&rat(n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn documents_round_trip(entries in proptest::collection::vec(rational_text(), 18)) {
        let mut doc = AlgebraDocument::from_tensor(&StructureTensor::zero());
        for (i, key) in ["11", "12", "13", "22", "23", "33"].iter().enumerate() {
            doc.products.insert(key.to_string(), [entries[3 * i].clone(), entries[3 * i + 1].clone(), entries[3 * i + 2].clone()]);
        }
        let t = doc.tensor().unwrap();
        let again = AlgebraDocument::parse(&AlgebraDocument::from_tensor(&t).to_json()).unwrap();
        prop_assert_eq!(again.tensor().unwrap(), t);
    }
}

#[test]
fn catalog_tensors_round_trip() {
    for label in catalog().iter().flat_map(|f| f.sample_labels()) {
        let t: StructureTensor = emit_canonical(&label, 0.0).unwrap();
        let doc = AlgebraDocument::parse(&AlgebraDocument::from_tensor(&t).to_json()).unwrap();
        assert_eq!(doc.tensor().unwrap(), t);
    }
}
