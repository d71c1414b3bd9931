use std::collections::{BTreeMap, HashSet};

use treeduce::builtins::{self, abc, quadratic, quadratic_input};
use treeduce::sharing::{dedup, growth_report, run_shared, CSV_HEADER};
use treeduce::tdtt::{TdRhs, TreeRhs};
use treeduce::terms::{enumerate_trees, parse_term, DagNode, TermDag, Tree};

fn distinct_subtrees(t: &Tree, seen: &mut HashSet<Tree>) {
    if seen.insert(t.clone()) {
        for c in t.children() {
            distinct_subtrees(c, seen);
        }
    }
}

fn letters(rhs: &TreeRhs) -> usize {
    match rhs {
        TreeRhs::Letter(_, cs) => 1 + cs.iter().map(letters).sum::<usize>(),
        TreeRhs::Call { .. } => 0,
    }
}

fn closed_form(n: u128) -> u128 {
    n * (n + 1) / 2 + 2 * n + 1
}

/// One `a` per step, plus the chain `b^(k+1)(c)` it carries.
fn summed(n: u128) -> u128 {
    1 + (1..=n).map(|k| 1 + (k + 1)).sum::<u128>()
}

#[test]
fn small_quadratic_dag() {
    let tt = quadratic();
    let x = quadratic_input(2);
    assert_eq!(x, parse_term("S(S(0))", tt.input()).unwrap());
    let memo = run_shared(&tt, &x).unwrap();
    assert_eq!(memo.node_count(), 6);
    let d = dedup(&memo);
    assert_eq!(d.stats(), (5, 6));
    let out = parse_term("a(b(b(c)),a(b(c),c))", &abc()).unwrap();
    assert_eq!(memo.unfold(), out);
    assert_eq!(d.unfold(), out);
}

#[test]
fn quadratic_sizes_follow_closed_form() {
    let tt = quadratic();
    for n in 1..=100usize {
        let d = run_shared(&tt, &quadratic_input(n)).unwrap();
        assert_eq!(closed_form(n as u128), summed(n as u128));
        assert_eq!(d.unfolded_size(), closed_form(n as u128), "n = {n}");
        assert_eq!(dedup(&d).node_count(), 2 * n + 1);
    }
}

#[test]
fn shared_size_ratios() {
    let report = growth_report(&quadratic(), quadratic_input, [25, 50]).unwrap();
    let (a, b) = (&report.rows[0], &report.rows[1]);
    let dag = b.dag_dedup_nodes as f64 / a.dag_dedup_nodes as f64;
    let tree = b.tree_size as f64 / a.tree_size as f64;
    assert!((1.8..=2.2).contains(&dag), "{dag}");
    assert!((3.5..=4.5).contains(&tree), "{tree}");
}

#[test]
fn unfolding_agrees_with_top_down_run() {
    let tt = quadratic();
    for n in 0..=50 {
        let x = quadratic_input(n);
        let d = run_shared(&tt, &x).unwrap();
        assert_eq!(d.unfold(), tt.run_topdown(&x).unwrap().into_tree().unwrap());
    }
    for (name, tt) in builtins::all_tdtts() {
        if tt.output().is_string() {
            continue;
        }
        for x in enumerate_trees(tt.input(), 7).unwrap() {
            match (run_shared(&tt, &x), tt.run_topdown(&x)) {
                (Ok(d), Ok(v)) => assert_eq!(Some(d.unfold()), v.into_tree(), "{name} on {x}"),
                (Err(_), Err(_)) => {}
                (l, r) => panic!("{name} on {x}: {l:?} vs {r:?}"),
            }
        }
    }
}

#[test]
fn memo_nodes_bounded_by_rules_times_input() {
    let tt = quadratic();
    let widest = tt
        .rules()
        .iter()
        .map(|r| match &r.rhs {
            TdRhs::Tree(t) => letters(t),
            TdRhs::Str(_) => unreachable!(),
        })
        .max()
        .unwrap();
    for n in 0..=30 {
        let x = quadratic_input(n);
        let d = run_shared(&tt, &x).unwrap();
        assert!(d.node_count() <= tt.states().len() * x.size() * widest);
    }
}

#[test]
fn dedup_is_minimal_and_idempotent() {
    let tt = builtins::conditional_swap();
    for x in enumerate_trees(&abc(), 7).unwrap() {
        let d = dedup(&run_shared(&tt, &x).unwrap());
        let mut seen = HashSet::new();
        distinct_subtrees(&d.unfold(), &mut seen);
        assert_eq!(d.node_count(), seen.len());
        assert_eq!(dedup(&d), d);
    }
}

#[test]
fn dedup_of_hand_built_dag() {
    let node = |label: &str, children: Vec<usize>| DagNode {
        label: label.into(),
        children,
    };
    // two separate c leaves and two copies of b(c)
    let nodes = BTreeMap::from([
        (0, node("c", vec![])),
        (1, node("c", vec![])),
        (2, node("b", vec![0])),
        (3, node("b", vec![1])),
        (4, node("a", vec![2, 3])),
    ]);
    let d = TermDag::new(nodes, 4).unwrap();
    let merged = dedup(&d);
    assert_eq!(merged.stats(), (3, 3));
    assert_eq!(merged.unfold(), d.unfold());
}

#[test]
fn growth_report_csv() {
    let report = growth_report(&quadratic(), quadratic_input, 1..=3).unwrap();
    let csv = report.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(CSV_HEADER, "n,input_size,tree_size,dag_memo_nodes,dag_dedup_nodes,micros");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&first[..5], &["1", "2", "4", "4", "3"]);
    assert_eq!(lines.count(), 2);
}

#[test]
fn string_output_is_rejected() {
    assert!(run_shared(&builtins::postfix(), &parse_term("c", &abc()).unwrap()).is_err());
}
