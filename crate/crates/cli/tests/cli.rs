use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tensor-sos"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen_file(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let p = dir.path().join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path(&p)]);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

fn line<'a>(text: &'a str, prefix: &str) -> &'a str {
    text.lines().find(|l| l.starts_with(prefix)).unwrap_or_else(|| panic!("no `{prefix}` line in\n{text}"))
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["gen", "example53", "--m", "12"]).status.code(), Some(64));
    let dir = TempDir::new().unwrap();
    let dup = write(&dir, "dup.txt", "tensor 2 2\n1 2 1\n2 1 3\n");
    let o = run(&["classify", path(&dup)]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let bad = write(&dir, "bad.txt", "tensor 4 2\n1 1 1 1 x\n");
    assert_eq!(run(&["sos", path(&bad)]).status.code(), Some(64));
    let id = gen_file(&dir, "id.txt", &["identity", "--m", "4", "--n", "2"]);
    assert_eq!(run(&["--tol", "0", "sos", path(&id)]).status.code(), Some(64));
}

#[test]
fn unreadable_input_is_a_usage_error_and_unwritable_output_a_runtime_error() {
    assert_eq!(run(&["sos", "/nonexistent/tensor.txt"]).status.code(), Some(64));
    let o = run(&["gen", "identity", "--m", "4", "--n", "2", "--out", "/nonexistent/dir/id.txt"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn generation_is_deterministic_and_round_trips() {
    let a = stdout(&run(&["--seed", "5", "gen", "procedure1", "--m", "4", "--n", "6", "--s", "2", "--k", "3", "--big-m", "10"]));
    let b = stdout(&run(&["--seed", "5", "gen", "procedure1", "--m", "4", "--n", "6", "--s", "2", "--k", "3", "--big-m", "10"]));
    assert_eq!(a, b);
    assert!(a.starts_with("tensor 4 6"));
    let c = stdout(&run(&["--seed", "6", "gen", "random-class", "--class", "b0", "--m", "4", "--n", "3"]));
    let d = stdout(&run(&["--seed", "6", "gen", "random-class", "--class", "b0", "--m", "4", "--n", "3"]));
    assert_eq!(c, d);

    let dir = TempDir::new().unwrap();
    let f = gen_file(&dir, "e54.txt", &["example54", "--n", "8"]);
    let text = std::fs::read_to_string(&f).unwrap();
    let parsed = tensor_sos::io::parse_tensor(&text).unwrap();
    assert_eq!(tensor_sos::io::write_tensor(&parsed), text);
}

#[test]
fn classify_mixed_cubes_example() {
    let dir = TempDir::new().unwrap();
    let f = gen_file(&dir, "e51.txt", &["example51"]);
    let out = stdout(&run(&["classify", path(&f)]));
    assert!(line(&out, "extended Z").ends_with("yes"));
    assert!(line(&out, "Z-tensor").ends_with("no"));
}

#[test]
fn classify_identity_and_all_one() {
    let dir = TempDir::new().unwrap();
    let id = gen_file(&dir, "id.txt", &["identity", "--m", "4", "--n", "3"]);
    let out = stdout(&run(&["classify", path(&id)]));
    assert!(line(&out, "diagonally dominated").ends_with("yes"));
    assert!(line(&out, "H-tensor").contains("yes"));
    let ones = gen_file(&dir, "ones.txt", &["all-one", "--m", "4", "--n", "3"]);
    let out = stdout(&run(&["classify", path(&ones)]));
    assert!(line(&out, "B0 ").ends_with("yes"));
}

#[test]
fn sos_identity_has_four_squares() {
    let dir = TempDir::new().unwrap();
    let id = gen_file(&dir, "id.txt", &["identity", "--m", "4", "--n", "4"]);
    let cert = dir.path().join("cert.json");
    let o = run(&["sos", path(&id), "--out", path(&cert)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(line(&out, "certified").starts_with("certified: 4 squares"), "{out}");
    // a = C(7, 4) = 35 gives (sqrt(281) - 1) / 2.
    assert!(line(&out, "rank bound").contains("Lambda = 7.8815"), "{out}");
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(json["rank_estimate"], 4);
}

#[test]
fn sos_certifies_a_cauchy_tensor() {
    let dir = TempDir::new().unwrap();
    let f = gen_file(&dir, "cauchy.txt", &["cauchy", "--m", "4", "--c", "1,1/2,2"]);
    let o = run(&["sos", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("certified"));
}

#[test]
fn sos_reports_a_nonnegative_form_that_is_not_sos() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "motzkin.txt", "poly 6 3\n1 4 2 0\n1 2 4 0\n1 0 0 6\n-3 2 2 2\n");
    let o = run(&["--format", "json", "sos", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["status"], "not SOS");
    assert!(json["outcome"]["NotCertified"]["evidence"]["value"].as_f64().unwrap() < 0.0);
}

#[test]
fn eigmin_json_matches_known_value() {
    let dir = TempDir::new().unwrap();
    let f = gen_file(&dir, "e51.txt", &["example51"]);
    let o = run(&["--format", "json", "eigmin", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((json["lambda_min"].as_f64().unwrap() + 1.0).abs() < 1e-4);
    assert!((json["oracle_value"].as_f64().unwrap() + 1.0).abs() < 1e-4);
    assert_eq!(json["exact"], true);
}

#[test]
fn pd_verdicts() {
    let dir = TempDir::new().unwrap();
    let id = gen_file(&dir, "id.txt", &["identity", "--m", "4", "--n", "3"]);
    assert!(stdout(&run(&["pd", path(&id)])).starts_with("positive definite"));
    let e51 = gen_file(&dir, "e51.txt", &["example51"]);
    assert!(stdout(&run(&["pd", path(&e51)])).starts_with("not positive definite"));
}

#[test]
fn quick_examples_repro_runs() {
    let o = run(&["--format", "json", "repro", "examples", "--quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!rows.as_array().unwrap().is_empty());
}
