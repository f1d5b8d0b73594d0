use std::io::Write;
use std::process::{Command, Output, Stdio};

const PRELUDE: &str = "field 32003\nring Q = poly x,y | ideal x^2\nring R = Q | extra y^2\n";

fn tac(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tac"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn fixture_runs_clean() {
    let path = format!("{}/tests/fixtures/example2.tac", env!("CARGO_MANIFEST_DIR"));
    let o = tac(&[&path], "");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("ring R: "), "{out}");
    assert!(out.contains("source is the zero complex; pd_Q(Im ∂₀) = 1"), "{out}");
}

#[test]
fn machine_blocks() {
    let src = format!("{PRELUDE}complex C over R = window 0..1 {{ deg 1: [[y]] }} period 1\nrun check C\n");
    let o = tac(&["--machine"], &src);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "begin check C");
    assert_eq!(lines[1], "status=ok");
    assert!(lines.contains(&"totally_acyclic=true"));
    assert_eq!(*lines.last().unwrap(), "end");
}

#[test]
fn failed_verification_exits_one() {
    // x*y is not exact over R: y kills x*y but is not a multiple of it
    let src = format!("{PRELUDE}complex C over R = window 0..1 {{ deg 1: [[x*y]] }} period 1\nrun check C\n");
    let o = tac(&["--machine", "-"], &src);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("totally_acyclic=false"));
}

#[test]
fn zero_map_is_not_the_counit() {
    let src = format!(
        "{PRELUDE}complex C over R = window 0..1 {{ deg 1: [[x]] }} period 1\n\
         complex STC over R = st C\nmap z: STC -> C = zero\nrun counit C --against z\n"
    );
    let o = tac(&["--machine"], &src);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn parse_error_exits_two() {
    let o = tac(&[], "ring Q = poly x\nrun @\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:5"));
}

#[test]
fn missing_file_exits_two() {
    let o = tac(&["/nonexistent/session.tac"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn print_round_trips() {
    let path = format!("{}/tests/fixtures/example1.tac", env!("CARGO_MANIFEST_DIR"));
    let first = stdout(&tac(&["--print", &path], ""));
    let second = stdout(&tac(&["--print"], &first));
    assert_eq!(first, second);
}
