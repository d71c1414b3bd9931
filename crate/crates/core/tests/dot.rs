use treeduce::builtins::{self, abc, quadratic, quadratic_input};
use treeduce::dot::{dag_to_dot, dbta_to_dot, trace_to_dot, tree_to_dot};
use treeduce::sharing::{dedup, run_shared};
use treeduce::tdtt::to_register_machine;
use treeduce::terms::parse_term;

fn node_statements(dot: &str) -> usize {
    dot.lines()
        .map(str::trim)
        .filter(|l| l.strip_prefix('n').is_some_and(|r| r.starts_with(|c: char| c.is_ascii_digit())))
        .filter(|l| !l.contains("->"))
        .count()
}

fn edge_statements(dot: &str) -> usize {
    dot.lines().filter(|l| l.contains("->")).count()
}

#[test]
fn single_leaf() {
    let dot = tree_to_dot(&parse_term("c", &abc()).unwrap());
    assert!(dot.starts_with("digraph "));
    assert_eq!(node_statements(&dot), 1);
    assert_eq!(edge_statements(&dot), 0);
}

#[test]
fn tree_edges_are_labelled_by_position() {
    let dot = tree_to_dot(&parse_term("a(b(c),c)", &abc()).unwrap());
    assert_eq!(node_statements(&dot), 4);
    assert!(dot.contains("n0 -> n1 [label=\"1\"];"));
    assert!(dot.contains("n0 -> n3 [label=\"2\"];"));
}

#[test]
fn shared_quadratic_dag() {
    let d = dedup(&run_shared(&quadratic(), &quadratic_input(2)).unwrap());
    let dot = dag_to_dot(&d);
    assert_eq!(node_statements(&dot), 5);
    assert_eq!(edge_statements(&dot), 6);
    assert_eq!(dot.matches("peripheries=2").count(), 1);
}

#[test]
fn output_is_stable() {
    let make = || dag_to_dot(&dedup(&run_shared(&quadratic(), &quadratic_input(6)).unwrap()));
    assert_eq!(make(), make());
    let la = builtins::contains_b();
    assert_eq!(dbta_to_dot(&la), dbta_to_dot(&builtins::contains_b()));
}

#[test]
fn lookahead_automaton() {
    let dot = dbta_to_dot(&builtins::contains_b());
    assert_eq!(dot.matches("shape=ellipse").count(), 2);
    assert!(dot.contains("\"r+\""));
}

#[test]
fn register_trace() {
    let tt = builtins::b_replacement();
    let m = to_register_machine(&tt);
    let trace = m.run_trace(&parse_term("b(c)", &abc()).unwrap()).unwrap();
    let dot = trace_to_dot(&trace, m.registers(), Some(m.states()));
    assert_eq!(node_statements(&dot), 2);
    assert!(dot.contains("state = r+"));
    assert!(dot.contains("q = a(c,c)"));
}
