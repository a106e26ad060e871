use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gstar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn table() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/knots.txt")
}

fn gstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gstar")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn h1_and_snf() {
    let g = scratch("klein.txt", "generators: x y\nrelator: x y x^-1 y\n");
    let o = gstar(&["h1", g.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "Z + Z/2\n");
    let m = scratch("m.txt", "2 2\n2 4\n6 8\n");
    assert_eq!(stdout(&gstar(&["snf", m.to_str().unwrap()])), "2 4\n");
}

#[test]
fn prepare_lists_marked_words() {
    let g = scratch("z2.txt", "generators: b\nrelator: b b\n");
    let out = stdout(&gstar(&["prepare", g.to_str().unwrap()]));
    assert!(out.starts_with("generators: b x a1 s t\n"), "{out}");
    assert!(out.contains("F1: a1 s^-1 t s\n"));
    assert!(out.contains("F2: x t\n"));
}

#[test]
fn fill_then_h1() {
    let t = table();
    let o = gstar(&["fill", t.to_str().unwrap(), "3_1", "-p", "-5", "-q", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let filled = scratch("filled.txt", &stdout(&o));
    assert_eq!(stdout(&gstar(&["h1", filled.to_str().unwrap()])), "Z/5\n");
    let w = stdout(&gstar(&["wirtinger", t.to_str().unwrap(), "4_1"]));
    assert!(w.contains("meridian: x1\n") && w.contains("longitude: "));
}

#[test]
fn embed_and_audit_klein_bottle() {
    let g = scratch("klein2.txt", "generators: x y\nrelator: x y x^-1 y\n");
    let o = gstar(&[
        "embed", g.to_str().unwrap(), "--knot1", "10_102", "--slope1", "7/1", "--knot2", "10_106", "--slope2", "5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = scratch("klein-report.txt", &stdout(&o));
    let o = gstar(&["audit", report.to_str().unwrap(), "--bound", "4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for line in [
        "check: h1-finite:A1 status: verified witness: -",
        "check: h1-finite:A2 status: verified witness: -",
        "check: non-isomorphic:A1-A2 status: verified witness: -",
        "check: rank:F1 status: verified witness: -",
    ] {
        assert!(out.contains(line), "missing `{line}` in\n{out}");
    }
    assert!(!out.contains("falsified"));
    assert!(out.contains("detail: UNVERIFIED: A1 = 10_102(7/1)"));
}

#[test]
fn falsified_audit_sets_exit_code() {
    let report = "\
[group]
generators:
[oracle]
kind: free
[A1]
generators: u v
[L1]
word: u u
word: v
[A2]
generators: p q r
[L2]
word: p
word: q
word: r
";
    let f = scratch("degenerate.txt", report);
    let o = gstar(&["audit", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("check: malnormal:L1 status: falsified witness: u\n"), "{}", stdout(&o));
}

#[test]
fn bad_input_is_an_error() {
    let g = scratch("bad.txt", "relator: x\n");
    let o = gstar(&["h1", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error:"));
}
