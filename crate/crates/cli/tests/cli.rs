//! End-to-end tests of the binary: input formats, exit codes, JSON schema,
//! and byte determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use rootform::linalg::{random_basis, random_orthogonal};
use rootform::reconstruct::superbase_from_coform;
use rootform::superbase::CoForm;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rootform"))
}

fn write_file(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn write_basis(dir: &tempfile::TempDir, name: &str, b: &rootform::linalg::Basis3) -> PathBuf {
    let rows = b
        .vectors()
        .map(|v| format!("{:.17e} {:.17e} {:.17e}", v.x, v.y, v.z));
    write_file(
        dir,
        name,
        &format!("{}\n{}\n{}\n", rows[0], rows[1], rows[2]),
    )
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn reduce_prints_forms_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(&dir, "op.txt", "# comment\n1 0 0\n0 2 0\n0 0 3\n");
    let out = run(&["reduce", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("steps: 0"));
    assert!(text.contains("coform:  (0 0 0 / 1 4 9)"));

    // A skewed basis takes at least one step and ends obtuse.
    let path = write_file(&dir, "skew.txt", "1 0 0\n0.9 1 0\n0 0 1\n");
    let out = run(&["reduce", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(!v["steps"].as_array().unwrap().is_empty());
    for p in v["coform"].as_array().unwrap() {
        assert!(p.as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn cell_parameter_line_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(&dir, "cubic.txt", "1 1 1 90 90 90\n");
    let out = run(&["reduce", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("coform:  (0 0 0 / 1 1 1)"));
}

#[test]
fn invariant_json_schema_scaling_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(&dir, "op.txt", "1 0 0\n0 2 0\n0 0 3\n");
    let out = run(&["invariant", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out).trim(),
        r#"{"vtype":"V5","values":[1.0,2.0,3.0],"tol":1e-9}"#
    );

    // Doubled input doubles the values exactly.
    let path2 = write_file(&dir, "op2.txt", "2 0 0\n0 4 0\n0 0 6\n");
    let out2 = run(&["invariant", "--json", path2.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out2)).unwrap();
    assert_eq!(v["values"], serde_json::json!([2.0, 4.0, 6.0]));

    // Byte determinism across reruns.
    let again = run(&["invariant", "--json", path.to_str().unwrap()]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn invariant_csv_batch_keeps_row_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(
        &dir,
        "batch.csv",
        "1, 0, 0, 0, 2, 0, 0, 0, 3\n1, 1, 1, 90, 90, 90\n",
    );
    let out = run(&["invariant", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["values"], serde_json::json!([1.0, 2.0, 3.0]));
    assert_eq!(rows[1]["values"], serde_json::json!([1.0, 1.0, 1.0]));

    let text = run(&["invariant", path.to_str().unwrap()]);
    let text = stdout_of(&text);
    assert!(text.lines().next().unwrap().starts_with("row 1: V5"));
}

#[test]
fn compare_exit_codes_and_similarity() {
    let dir = tempfile::tempdir().unwrap();
    let b = random_basis(42);
    let q = random_orthogonal(43);
    let rotated = b.transformed(&q);
    let pa = write_basis(&dir, "a.txt", &b);
    let pb = write_basis(&dir, "b.txt", &rotated);
    let out = run(&["compare", pa.to_str().unwrap(), pb.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("verdict: isometric"));

    // The seven-neighbour counterexample pair: not isometric, exit 1.
    let la = superbase_from_coform(&CoForm::from_slots([5.0, 3.0, 4.0, 1.0, 1.0, 4.0]))
        .unwrap()
        .basis();
    let lb = superbase_from_coform(&CoForm::from_slots([6.0, 3.0, 3.0, 2.0, 1.0, 3.0]))
        .unwrap()
        .basis();
    let pa = write_basis(&dir, "dc7a.txt", &la);
    let pb = write_basis(&dir, "dc7b.txt", &lb);
    let out = run(&["compare", pa.to_str().unwrap(), pb.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("verdict: not isometric"));

    // Similarity recovers the scale.
    let tripled = b.scaled(3.0);
    let pa = write_basis(&dir, "s1.txt", &b);
    let pb = write_basis(&dir, "s3.txt", &tripled);
    let out = run(&[
        "compare",
        "--similarity",
        "--json",
        pa.to_str().unwrap(),
        pb.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["relation"], "similar");
    assert!((v["scale"].as_f64().unwrap() - 3.0).abs() < 1e-9);
}

#[test]
fn reconstruct_round_trips_and_reports_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(
        &dir,
        "inv.json",
        r#"{"vtype":"V5","values":[1,2,3],"tol":1e-9}"#,
    );
    let out = run(&["reconstruct", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["round_trip"]["vtype"], "V5");
    assert_eq!(v["round_trip_matches"], true);
    assert_eq!(
        v["coform"],
        serde_json::json!([0.0, 0.0, 0.0, 1.0, 4.0, 9.0])
    );

    let bad = write_file(&dir, "bad.json", "{not json");
    let out = run(&["reconstruct", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // A coform whose Gram matrix is singular: exit 4.
    let unreal = write_file(
        &dir,
        "unreal.json",
        r#"{"vtype":"V1","values":[3,3,3,0,0,0],"tol":1e-9}"#,
    );
    let out = run(&["reconstruct", unreal.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn oracle_checks_pass_on_reference_lattices() {
    let dir = tempfile::tempdir().unwrap();
    let cuboid = write_file(&dir, "op.txt", "1 0 0\n0 2 0\n0 0 3\n");
    let out = run(&["oracle", cuboid.to_str().unwrap(), "--check", "superbases"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("32 superbases, 4 length classes, PASS"));

    let out = run(&["oracle", cuboid.to_str().unwrap(), "--check", "voronoi"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("3 strict, V5, PASS"));

    let cubic = write_file(&dir, "cubic.txt", "1 1 1 90 90 90\n");
    let out = run(&[
        "oracle",
        "--json",
        cubic.to_str().unwrap(),
        "--check",
        "dc7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["pass"], true);
    let d = v["found"]["dc7"].as_array().unwrap();
    assert!((d[3].as_f64().unwrap() - 2.0_f64.sqrt()).abs() < 1e-12);

    // A generic lattice: 7 strict classes, 2 superbases.
    let b = random_basis(7);
    let generic = write_basis(&dir, "generic.txt", &b);
    let out = run(&["oracle", generic.to_str().unwrap(), "--check", "voronoi"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("7 strict, V1, PASS"));
    let out = run(&["oracle", generic.to_str().unwrap(), "--check", "superbases"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("2 superbases"));
}

#[test]
fn parse_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_file(&dir, "bad.txt", "1 2 3 4\n");
    let out = run(&["invariant", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let nonnum = write_file(&dir, "nonnum.txt", "a b c\nd e f\ng h i\n");
    let out = run(&["reduce", nonnum.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let degenerate = write_file(&dir, "deg.txt", "1 0 0\n2 0 0\n0 0 1\n");
    let out = run(&["invariant", degenerate.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Batches are for `invariant` only.
    let batch = write_file(&dir, "batch.csv", "1,0,0,0,2,0,0,0,3\n");
    let out = run(&["reduce", batch.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_flag_and_env_are_honored() {
    let dir = tempfile::tempdir().unwrap();
    // A cell one part in 1e-7 away from cubic: coarse tolerance snaps it
    // to the cubic invariant, the default keeps it distinct.
    let nearly = write_file(&dir, "near.txt", "1 1 1.0000001 90 90 90\n");
    let cubic = write_file(&dir, "cubic.txt", "1 1 1 90 90 90\n");
    let out = run(&[
        "compare",
        "--tol",
        "1e-4",
        nearly.to_str().unwrap(),
        cubic.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["compare", nearly.to_str().unwrap(), cubic.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = bin()
        .args(["invariant", cubic.to_str().unwrap()])
        .env("ROOTFORM_JSON", "true")
        .output()
        .unwrap();
    assert!(stdout_of(&out).starts_with('{'));
}
