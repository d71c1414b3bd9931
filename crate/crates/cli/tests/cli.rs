use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use tempfile::tempdir;

fn treeduce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treeduce"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SWAP: &str = "input {a:2,b:1,c:0}
output {a:2,b:1,c:0}
states {q0,q1}
initial q0
rules {
  q0<a(t,u)> -> a(q0<u>,q0<t>);
  q0<b(t)> -> b(q1<t>);
  q0<c> -> c;
  q1<a(t,u)> -> a(q1<t>,q1<u>);
  q1<b(t)> -> b(q1<t>);
  q1<c> -> c;
}
";

#[test]
fn run_from_file() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("swap.td");
    fs::write(&path, SWAP).unwrap();
    let o = treeduce(&["run", "-t", path.to_str().unwrap(), "-i", "a(b(c),c)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "a(c,b(c))\n");
}

#[test]
fn run_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_treeduce"))
        .args(["run", "-t", "-", "-i", "b(a(b(c),c))"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(SWAP.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "b(a(b(c),c))\n");
}

#[test]
fn run_variants() {
    let o = treeduce(&["run", "-t", "builtin:conditional_swap", "-i", "a(b(c),c)", "--bottom-up"]);
    assert_eq!(stdout(&o), "q0 = a(c,b(c))\nq1 = a(b(c),c)\noutput = a(c,b(c))\n");
    let o = treeduce(&["run", "-t", "builtin:postfix", "-i", "a(b(c),c)"]);
    assert_eq!(stdout(&o), "cbca\n");
    let o = treeduce(&["run", "-t", "builtin:reverse_mtt", "-s", "abc"]);
    assert_eq!(stdout(&o), "cba\n");
    let o = treeduce(&["run", "-t", "builtin:remark_example", "-s", "abab"]);
    assert_eq!(stdout(&o), "abbb\n");
    let o = treeduce(&["run", "-t", "builtin:quadratic", "-i", "S(S(0))", "--shared"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("root: 5\n"));
}

#[test]
fn exit_codes() {
    // no rule for q at b
    let partial = "input {a:2,b:1,c:0} output {a:2,b:1,c:0} states {q} initial q rules { q<c> -> c; }";
    let dir = tempdir().unwrap();
    let path = dir.path().join("partial.td");
    fs::write(&path, partial).unwrap();
    let o = treeduce(&["run", "-t", path.to_str().unwrap(), "-i", "b(c)"]);
    assert_eq!(o.status.code(), Some(1));
    let o = treeduce(&["run", "-t", path.to_str().unwrap(), "-i", "b("]);
    assert_eq!(o.status.code(), Some(2));
    fs::write(&path, "input {").unwrap();
    let o = treeduce(&["run", "-t", path.to_str().unwrap(), "-i", "c"]);
    assert_eq!(o.status.code(), Some(2));
    let o = treeduce(&["run", "-t", "builtin:nope", "-i", "c"]);
    assert_eq!(o.status.code(), Some(2));
    let o = treeduce(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn conversions_check_out() {
    let dir = tempdir().unwrap();
    let cases = [
        ("builtin:b_replacement", "--to-register-machine"),
        ("builtin:b_replacement_mtt", "--eliminate-lookahead"),
        ("builtin:postfix", "--tdtts-to-mtt"),
        ("builtin:reverse_mtt", "--mtt-to-tdtts"),
        ("builtin:double_before_b", "--tdtts-to-sst"),
    ];
    for (i, (source, flag)) in cases.into_iter().enumerate() {
        let out = dir.path().join(format!("out{i}.txt"));
        let o = treeduce(&["convert", source, flag, "-o", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{flag}");
        let o = treeduce(&["check-equiv", source, out.to_str().unwrap(), "--max-size", "6"]);
        assert_eq!(o.status.code(), Some(0), "{flag}: {}", stdout(&o));
        assert!(stdout(&o).starts_with("equivalent on"));
    }
    let o = treeduce(&["convert", "builtin:context_mtt", "--to-register-machine"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn counterexample_exit_code() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("altered.td");
    fs::write(&path, SWAP.replace("q1<b(t)> -> b(q1<t>);", "q1<b(t)> -> c;")).unwrap();
    let o = treeduce(&["check-equiv", "builtin:conditional_swap", path.to_str().unwrap(), "--max-size", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample"));
}

#[test]
fn fuzz_is_deterministic() {
    let args = ["fuzz", "--kind", "tdtt", "--seed", "3", "--count", "3", "--max-size", "5"];
    let a = treeduce(&args);
    let b = treeduce(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).ends_with("0 failures\n"));
}

#[test]
fn stats_csv() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("growth.csv");
    let o = treeduce(&[
        "stats", "--example", "quadratic", "--n-from", "1", "--n-to", "5", "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,input_size,tree_size,dag_memo_nodes,dag_dedup_nodes,micros");
    assert_eq!(lines.len(), 6);
    assert!(lines[2].starts_with("2,3,8,6,5,"));
}

#[test]
fn dot_output() {
    let o = treeduce(&["dot", "-t", "builtin:quadratic", "-i", "S(S(0))", "--shared", "--dedup"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("->").count(), 6);
    let o = treeduce(&["dot", "-t", "builtin:b_replacement", "--lookahead"]);
    assert!(stdout(&o).contains("shape=ellipse"));
    let o = treeduce(&["dot", "-t", "builtin:b_replacement", "-i", "b(c)", "--trace"]);
    assert!(stdout(&o).contains("state = r+"));
    let o = treeduce(&["dot", "-t", "builtin:quadratic", "-i", "S(0)", "--dedup"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn builtins_print_and_parse() {
    let list = stdout(&treeduce(&["builtin"]));
    let dir = tempdir().unwrap();
    for name in list.lines() {
        let text = stdout(&treeduce(&["builtin", name]));
        let path = dir.path().join(name);
        fs::write(&path, &text).unwrap();
        let o = treeduce(&["check-equiv", &format!("builtin:{name}"), path.to_str().unwrap(), "--max-size", "4"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}
