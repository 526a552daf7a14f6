use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

const DELTA1: &str = "ssx 1\ndim 0: a b\ndim 1: ab(b,a)\n";
const DELTA2: &str = "ssx 1\ndim 0: a b c\ndim 1: ab(b,a) ac(c,a) bc(c,b)\ndim 2: abc(bc,ac,ab)\n";
const LOOP: &str = "ssx 1\ndim 0: v\ndim 1: e(v,v)\nmarked: e\n";

fn ssx(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ssx"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn subdivision_then_fvector() {
    let dir = tempfile::tempdir().unwrap();
    let d2 = file(dir.path(), "delta2.ssx", DELTA2);
    let o = ssx(&["sd", "--in", d2.to_str().unwrap()], None);
    assert!(o.status.success());
    let f = ssx(&["fvector"], Some(&stdout(&o)));
    assert_eq!(stdout(&f), "7 12 6\n");
}

#[test]
fn verify_h_reports_no_failures() {
    let o = ssx(&["verify-h", "--dim", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "OK: 0 failures\n");
}

#[test]
fn certificate_pipe() {
    let dir = tempfile::tempdir().unwrap();
    let d1 = file(dir.path(), "delta1.ssx", DELTA1);
    for marked in [true, false] {
        let mut args = vec!["cert-left", "--in", d1.to_str().unwrap()];
        if marked {
            args.push("--marked");
        }
        let cert = ssx(&args, None);
        assert!(cert.status.success());
        let v = ssx(&["cert-verify"], Some(&stdout(&cert)));
        assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stderr));
    }
    // Dropping a cell leaves a replay that does not match the declared map.
    let cert = stdout(&ssx(&["cert-left", "--in", d1.to_str().unwrap()], None));
    let last = cert.lines().last().unwrap();
    let truncated = cert.replace(&format!("{last}\n"), "");
    assert_eq!(ssx(&["cert-verify"], Some(&truncated)).status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = file(dir.path(), "bad.ssx", "ssx 1\ndim 0: a\ndim 1: e(a,b)\n");
    assert_eq!(ssx(&["validate", "--in", bad.to_str().unwrap()], None).status.code(), Some(2));
    let twisted = file(dir.path(), "t.ssx", "ssx 1\ndim 0: a b c\ndim 1: x(b,a) y(c,a) z(c,b)\ndim 2: t(x,y,z)\n");
    assert_eq!(ssx(&["validate", "--in", twisted.to_str().unwrap()], None).status.code(), Some(1));
    let ok = file(dir.path(), "ok.ssx", DELTA2);
    let o = ssx(&["validate", "--in", ok.to_str().unwrap()], None);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "OK\n".to_string()));
    assert_eq!(ssx(&["no-such-command"], None).status.code(), Some(2));
    assert_eq!(ssx(&["tensor", "--in", ok.to_str().unwrap()], None).status.code(), Some(2));
}

#[test]
fn binary_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d1 = file(dir.path(), "delta1.ssx", DELTA1);
    let d1 = d1.to_str().unwrap();
    let fv = |cmd: &str| {
        let o = ssx(&[cmd, "--in", d1, "--in", d1], None);
        assert!(o.status.success());
        stdout(&ssx(&["fvector"], Some(&stdout(&o))))
    };
    assert_eq!(fv("tensor"), "4 5 2\n");
    assert_eq!(fv("join"), "4 6 4 1\n");
    assert_eq!(fv("cartesian"), "4 1\n");
    let m = ssx(&["mjoin", "--in", d1, "--in", d1], None);
    let marked = stdout(&m).lines().find(|l| l.starts_with("marked:")).unwrap().to_string();
    assert_eq!(marked.split_whitespace().count() - 1, 4);
}

#[test]
fn output_file_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let l = file(dir.path(), "loop.ssx", LOOP);
    let out = dir.path().join("loop.dot");
    let o = ssx(&["dot", "--in", l.to_str().unwrap(), "--out", out.to_str().unwrap()], None);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "digraph {\n  0;\n  0 -> 0 [style=bold];\n}\n");
}

#[test]
fn invariants_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d2 = file(dir.path(), "delta2.ssx", DELTA2);
    let d2 = d2.to_str().unwrap();
    assert_eq!(stdout(&ssx(&["tau0", "--in", d2], None)), "1\n0 0 0\n");
    let t1 = stdout(&ssx(&["tau1", "--in", d2], None));
    assert!(t1.starts_with("objects 3\n"));
    assert!(t1.contains("rel g0 g2 = g1\n"));
    assert_eq!(ssx(&["eta-check", "--in", d2, "--dim", "2"], None).status.code(), Some(0));
    let ul = ssx(&["ul", "--in", d2, "--dim", "2"], None);
    assert_eq!(stdout(&ssx(&["fvector"], Some(&stdout(&ul)))), "3 6 10\n");
    let marked = "ssx 1\ndim 0: a b c\ndim 1: ab(b,a) ac(c,a) bc(c,b)\ndim 2: abc(bc,ac,ab)\nmarked: ab bc\n";
    let s = stdout(&ssx(&["saturate"], Some(marked)));
    assert!(s.ends_with("marked: e0 e1 e2\n"));
}

#[test]
fn horn_commands() {
    let horn = "ssx 1\ndim 0: a b c\ndim 1: ab(b,a) bc(c,b)\n";
    let c = ssx(&["complete"], Some(horn));
    assert_eq!(stdout(&ssx(&["fvector"], Some(&stdout(&c)))), "3 3 1\n");
    let scan = stdout(&ssx(&["scan-horns", "--dim", "2"], Some(DELTA2)));
    assert!(scan.contains("horn 2 1 [0 1 2]: filled by 0\n"));
    assert!(scan.contains("unfilled"));
}

#[test]
fn lifting_command() {
    let dir = tempfile::tempdir().unwrap();
    let map = |name: &str, src: &str, tgt: &str, images: &str| {
        file(dir.path(), name, &format!("ssxmap 1\nsource\n{src}target\n{tgt}images\n{images}\n"))
    };
    let two = "ssx 1\ndim 0: a b\n";
    // ∂Δ¹ → Δ¹ against the identity lifts by the identity.
    let left = map("left", two, DELTA1, "a->a b->b");
    let top = map("top", two, DELTA1, "a->a b->b");
    let id = map("id", DELTA1, DELTA1, "a->a b->b ab->ab");
    let args = |l: &Path, r: &Path, t: &Path, b: &Path| {
        ssx(&["lift", "--in", l.to_str().unwrap(), "--in", r.to_str().unwrap(), "--in", t.to_str().unwrap(), "--in", b.to_str().unwrap()], None)
    };
    let o = args(&left, &id, &top, &id);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("e0->e0"));
    // Two points over a loop: the edge has nowhere to go.
    let lp = "ssx 1\ndim 0: p\ndim 1: l(p,p)\n";
    let points = map("points", two, two, "a->a b->b");
    let collapse = map("collapse", two, lp, "a->p b->p");
    let wrap = map("wrap", DELTA1, lp, "a->p b->p ab->l");
    assert_eq!(args(&left, &collapse, &points, &wrap).status.code(), Some(1));
    // Swapping the endpoints breaks commutativity.
    let swapped = map("swapped", two, DELTA1, "a->b b->a");
    assert_eq!(args(&left, &id, &swapped, &id).status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let a = stdout(&ssx(&["sd", "--marked"], Some(DELTA2)));
    let b = stdout(&ssx(&["sd", "--marked"], Some(DELTA2)));
    assert_eq!(a, b);
    assert!(a.contains("marked:"));
}
