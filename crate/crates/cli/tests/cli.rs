use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qmut::format::{export_dot, parse_quiver, parse_quiver_stream, serialize_quiver};
use qmut::*;
use tempfile::TempDir;

fn qmut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmut"))
        .args(args)
        .env_remove("QMUT_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, q: &Quiver) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serialize_quiver(q)).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn tri() -> Quiver {
    Quiver::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
}

#[test]
fn check_reports_membership() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "tri.txt", &tri());
    let o = qmut(&["check", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "member t=1\n");

    let square = Quiver::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let f = write(&dir, "sq.txt", &square);
    let o = qmut(&["check", s(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "not-member cycle-length\n");

    let o = qmut(&["--json", "check", s(&write(&dir, "t.txt", &tri()))]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["member"], true);
    assert_eq!(v["t"], 1);
}

#[test]
fn equiv_and_det() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "tri.txt", &tri());
    let b = write(&dir, "a3.txt", &Quiver::linear_a(3));
    let o = qmut(&["equiv", s(&a), s(&b)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "not-derived-equivalent det 2 vs 1\n");
    let o = qmut(&["equiv", s(&a), s(&a)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "derived-equivalent det 2\n");

    let a5 = write(&dir, "a5.txt", &Quiver::linear_a(5));
    assert_eq!(stdout(&qmut(&["det", s(&a5)])), "1\n");
    let o = qmut(&["equiv", s(&a5), s(&b)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verbs_match_library() {
    let dir = TempDir::new().unwrap();
    for m in a_n_class(5).unwrap().quivers() {
        let f = write(&dir, "m.txt", m);
        let p = presentation_of(m).unwrap();
        let cartan: Cartan = cartan_matrix(&p).unwrap();
        assert_eq!(stdout(&qmut(&["cartan", s(&f)])), cartan.to_text());
        assert_eq!(stdout(&qmut(&["det", s(&f)])), format!("{}\n", cartan.determinant()));
        assert_eq!(stdout(&qmut(&["dot", s(&f)])), export_dot(m));
        assert_eq!(
            stdout(&qmut(&["mutate", "-k", "2", s(&f)])),
            serialize_quiver(&m.mutate(2).unwrap())
        );
        let lines = stdout(&qmut(&["tricycles", s(&f)])).lines().count();
        assert_eq!(lines, count_3cycles(m));
    }
}

#[test]
fn tricycles_follow_arrows() {
    let dir = TempDir::new().unwrap();
    let q = Quiver::new(3, &[(0, 2), (2, 1), (1, 0)]).unwrap();
    let f = write(&dir, "q.txt", &q);
    assert_eq!(stdout(&qmut(&["tricycles", s(&f)])), "0 -> 2 -> 1\n");
}

#[test]
fn normalize_then_verify() {
    let dir = TempDir::new().unwrap();
    for (i, m) in a_n_class(6).unwrap().quivers().enumerate().step_by(5) {
        let f = write(&dir, &format!("m{i}.txt"), m);
        let o = qmut(&["normalize", s(&f)]);
        assert_eq!(o.status.code(), Some(0));
        let script = dir.path().join(format!("m{i}.seq"));
        fs::write(&script, stdout(&o)).unwrap();
        let o = qmut(&["verify-seq", s(&script)]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).starts_with("valid steps="));
    }
}

#[test]
fn verify_rejects_bad_steps() {
    let dir = TempDir::new().unwrap();
    write(&dir, "a3.txt", &Quiver::linear_a(3));
    let script = dir.path().join("bad.seq");
    fs::write(&script, "start a3.txt\nmutate 0\nmutate 2\n\nmutate 1\n").unwrap();
    let o = qmut(&["verify-seq", s(&script)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid step=2 line=5:"), "{}", stdout(&o));

    fs::write(&script, "start a3.txt\nmutate 0  # 0000000000000000\n").unwrap();
    let o = qmut(&["verify-seq", s(&script)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("state hash"));

    fs::write(&script, "start a3.txt\nmutate x\n").unwrap();
    assert_eq!(qmut(&["verify-seq", s(&script)]).status.code(), Some(2));
}

#[test]
fn enumerate_and_target() {
    let o = qmut(&["enumerate", "-n", "5"]);
    let qs = parse_quiver_stream(&stdout(&o)).unwrap();
    assert_eq!(qs.len(), 19);
    let forms: std::collections::BTreeSet<_> = qs.iter().map(canonical_form).collect();
    assert_eq!(forms, a_n_class(5).unwrap().form_set());
    let parallel = qmut(&["--jobs", "4", "enumerate", "-n", "5"]);
    assert_eq!(parallel.stdout, o.stdout);
    assert_eq!(qmut(&["enumerate", "-n", "6", "--limit", "10"]).status.code(), Some(2));

    let o = qmut(&["target", "-n", "7", "-t", "2"]);
    let t = parse_quiver(&stdout(&o)).unwrap();
    assert_eq!(t, normal_form_target(ClassSignature { n: 7, t: 2 }).unwrap());
    assert_eq!(qmut(&["target", "-n", "4", "-t", "2"]).status.code(), Some(2));
}

#[test]
fn generate_is_seeded() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_qmut"))
            .args(["generate", "--enlargements", "cycle:0:cw,random:6"])
            .env("QMUT_SEED", seed)
            .output()
            .unwrap()
    };
    let a = run("11");
    assert_eq!(a.stdout, run("11").stdout);
    let q = parse_quiver(&stdout(&a)).unwrap();
    assert!(is_in_qn(&q).member);
    assert!(count_3cycles(&q) >= 1);

    let o = qmut(&["generate", "--enlargements", "pendant:0:out,pendant:1:out"]);
    assert_eq!(parse_quiver(&stdout(&o)).unwrap(), Quiver::linear_a(3));
    assert_eq!(qmut(&["generate", "--enlargements", "pendant:0:up"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("one_based.txt");
    fs::write(&f, "n 3\n1 -> 2\n2 -> 3\n").unwrap();
    let o = qmut(&["check", s(&f)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3, column 6") && err.contains("0-based"), "{err}");

    fs::write(&f, "n 2\n0 -> 0\n").unwrap();
    let err = String::from_utf8(qmut(&["check", s(&f)]).stderr).unwrap();
    assert!(err.contains("line 2") && err.contains("loop"), "{err}");

    assert_eq!(qmut(&["check", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(qmut(&["frobnicate"]).status.code(), Some(2));
}
