use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgl-neron")).args(args).env("FGL_NERON_THREADS", "1").output().unwrap()
}

fn compute(dir: &TempDir, spec: &str, degree: u32, out: &str) -> (PathBuf, Output) {
    let path = dir.path().join(out);
    let o = run(&[
        "compute",
        "--input",
        fixture(spec).to_str().unwrap(),
        "--degree",
        &degree.to_string(),
        "--output",
        path.to_str().unwrap(),
    ]);
    (path, o)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn compute_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, oa) = compute(&dir, "q3_norm_one.json", 10, "a.json");
    let (b, ob) = compute(&dir, "q3_norm_one.json", 10, "b.json");
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(ob.status.code(), Some(0));
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn verify_accepts_computed_reports() {
    let dir = TempDir::new().unwrap();
    for (spec, degree) in [
        ("q3_norm_one.json", 8),
        ("q3_split.json", 8),
        ("q3_swap.json", 6),
        ("q5_norm_one.json", 6),
        ("q5_rotation.json", 6),
        ("q15_sign.json", 6),
        ("q15_rotation.json", 6),
        ("rs_1_m1.json", 8),
        ("local_p5_unramified.json", 8),
        ("local_p3_additive.json", 8),
    ] {
        let (path, o) = compute(&dir, spec, degree, "r.json");
        assert_eq!(o.status.code(), Some(0), "{spec}: {}", String::from_utf8_lossy(&o.stderr));
        let v = run(&["verify", "--input", path.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(0), "{spec}: {}", stdout(&v));
    }
}

#[test]
fn verify_rejects_edited_coefficient() {
    let dir = TempDir::new().unwrap();
    let (path, _) = compute(&dir, "q3_norm_one.json", 8, "r.json");
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    v["F"][0][2]["coefficient"] = serde_json::Value::String("7/1".into());
    fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let o = run(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("report.F[0][2]"), "{}", stdout(&o));
}

#[test]
fn text_format_lists_coefficients() {
    let o =
        run(&["compute", "--input", fixture("q3_split.json").to_str().unwrap(), "--degree", "3", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("F_1 = X + Y - X*Y"), "{}", stdout(&o));
}

#[test]
fn wild_and_malformed_specs_are_usage_errors() {
    let o = run(&["compute", "--input", fixture("wild_q4.json").to_str().unwrap(), "--degree", "6"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"base\":\"Q\"}").unwrap();
    let o = run(&["compute", "--input", bad.to_str().unwrap(), "--degree", "6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["compute", "--input", fixture("q3_split.json").to_str().unwrap(), "--degree", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_reports() {
    let dir = TempDir::new().unwrap();
    let (q3, _) = compute(&dir, "q3_norm_one.json", 12, "q3.json");
    let (rs, _) = compute(&dir, "rs_1_1.json", 12, "rs.json");
    let o = run(&["compare", "--a", q3.to_str().unwrap(), "--b", rs.to_str().unwrap(), "--mode", "strong-iso"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["compare", "--a", q3.to_str().unwrap(), "--b", q3.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let (gm, _) = compute(&dir, "q3_split.json", 6, "gm.json");
    let (ga, _) = compute(&dir, "local_p3_additive.json", 6, "ga.json");
    let o = run(&["compare", "--a", gm.to_str().unwrap(), "--b", ga.to_str().unwrap(), "--mode", "strong-iso"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("monomial [3]"), "{}", stdout(&o));

    let (q15, _) = compute(&dir, "q15_rotation.json", 4, "q15.json");
    let o = run(&["compare", "--a", q3.to_str().unwrap(), "--b", q15.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_hom_with_matrix() {
    let dir = TempDir::new().unwrap();
    let (swap, _) = compute(&dir, "q3_swap.json", 6, "swap.json");
    let (split, _) = compute(&dir, "q3_split.json", 6, "split.json");
    let matrix = dir.path().join("d.json");
    fs::write(&matrix, "[[1, 1]]").unwrap();
    let args = |m: &Path| {
        run(&[
            "compare",
            "--a",
            swap.to_str().unwrap(),
            "--b",
            split.to_str().unwrap(),
            "--mode",
            "hom",
            "--matrix",
            m.to_str().unwrap(),
        ])
    };
    let o = args(&matrix);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    fs::write(&matrix, "[[1, 0]]").unwrap();
    let o = args(&matrix);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_fgl-neron"))
        .args(["verify", "--input", "missing.json"])
        .env("FGL_NERON_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
