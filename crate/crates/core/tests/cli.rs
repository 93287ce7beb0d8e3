use std::path::{Path, PathBuf};
use std::process::Command;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_divides")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn file(name: &str) -> String {
    corpus().join(name).display().to_string()
}

#[test]
fn invariants_of_curl_and_arc() {
    let (code, out, _) = run(&["invariants", &file("curl.div")]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("delta=1 branches=1 jminus=-2 jplus=-1 j2=1"));
    let (code, out, _) = run(&["invariants", &file("arc.div")]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("delta=0 branches=1 jminus=0 jplus=0 j2=0"));
}

#[test]
fn bad_input_exits_two_with_line() {
    let (code, out, err) = run(&["invariants", &file("invalid/bad.div")]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("bad.div: 6:1:"), "{err}");
}

#[test]
fn link_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let (code, summary, _) = run(&["link", &file("curl.div"), "--out", &out]);
    assert_eq!(code, 0);
    assert!(summary.contains("components=1") && summary.contains("genus=1"), "{summary}");
    for ext in ["pd", "surface", "svg"] {
        assert!(dir.path().join(format!("curl.{ext}")).is_file(), "{ext}");
    }
    let (_, summary, _) = run(&["link", &file("a1.div"), "--out", &out]);
    assert!(summary.contains("components=2") && summary.contains("lk=1"), "{summary}");
    let (_, summary, _) = run(&["link", &file("e6.div"), "--out", &out]);
    assert!(summary.contains("genus=3"), "{summary}");
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for p in [&a, &b] {
        let (code, _, _) = run(&["render", &file("example.div"), "--svg", &p.display().to_string()]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

fn copy(dir: &Path, name: &str, edit: impl Fn(String) -> String) {
    let text = std::fs::read_to_string(corpus().join(name)).unwrap();
    std::fs::write(dir.join(name), edit(text)).unwrap();
}

#[test]
fn corrupted_expectation_fails_by_name() {
    let dir = tempfile::tempdir().unwrap();
    copy(dir.path(), "curl.div", |t| t);
    copy(dir.path(), "e6.div", |t| t.replace("expect c2 5", "expect c2 6"));
    let (code, out, _) = run(&["verify", &dir.path().display().to_string()]);
    assert_eq!(code, 1);
    let e6 = out.lines().find(|l| l.starts_with("e6 ")).unwrap();
    assert!(e6.contains("fail") && e6.contains("expect-c2:fail"), "{e6}");
    assert!(out.lines().any(|l| l.starts_with("curl ") && l.contains(" pass ")));
}

#[test]
fn seeded_random_entries_join_the_run() {
    let dir = tempfile::tempdir().unwrap();
    copy(dir.path(), "d2.div", |t| t);
    let (code, out, _) = run(&["verify", &dir.path().display().to_string(), "--jobs", "2", "--seed", "1"]);
    assert_eq!(code, 0, "{out}");
    let json: serde_json::Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
    assert_eq!(json["summary"]["fail"], 0);
    assert!(json["entries"].as_array().unwrap().len() > 1);
}

#[test]
fn verify_output_is_stable_across_jobs() {
    let dir = file("");
    let (c1, one, _) = run(&["verify", &dir, "--jobs", "1"]);
    let (c4, four, _) = run(&["verify", &dir, "--jobs", "4"]);
    assert_eq!((c1, c4), (0, 0));
    assert_eq!(one, four);
}
