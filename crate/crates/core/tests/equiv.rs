use treeduce::builtins::{self, abc, CONDITIONAL_SWAP};
use treeduce::equiv::{check_equiv_on, enumerate_inputs, EquivError};
use treeduce::pipeline::Signature;
use treeduce::syntax::parse_tdtt;
use treeduce::terms::{enumerate_trees, RankedAlphabet};
use treeduce::{check_equiv, Value};

/// Counts letter sequences of length `1..=max_nodes` that spell exactly
/// one tree in preorder.
fn brute_force_count(alphabet: &RankedAlphabet, max_nodes: usize) -> usize {
    fn exact(arities: &[usize], pending: usize, left: usize) -> usize {
        match (pending, left) {
            (0, 0) => 1,
            (0, _) | (_, 0) => 0,
            _ => arities.iter().map(|&k| exact(arities, pending - 1 + k, left - 1)).sum(),
        }
    }
    let arities: Vec<usize> = alphabet.letters().map(|(_, k)| k).collect();
    (1..=max_nodes).map(|n| exact(&arities, 1, n)).sum()
}

#[test]
fn enumeration_count_matches_brute_force() {
    for n in 0..=7 {
        assert_eq!(enumerate_trees(&abc(), n).unwrap().len(), brute_force_count(&abc(), n));
    }
    assert_eq!(enumerate_trees(&abc(), 7).unwrap().len(), 89);
}

#[test]
fn equivalent_models_pass() {
    let tt = builtins::conditional_swap();
    let v = check_equiv(tt.clone(), tt, 7).unwrap();
    assert!(v.pass);
    assert!(v.counterexample.is_none());
    assert_eq!(v.tested, brute_force_count(&abc(), 7));
    assert_eq!(v.to_string(), "equivalent on 89 inputs");
}

#[test]
fn altered_rule_gives_counterexample() {
    let altered = CONDITIONAL_SWAP.replace("q1<b(t)> -> b(q1<t>);", "q1<b(t)> -> c;");
    let altered = parse_tdtt(&altered).unwrap();
    let v = check_equiv(builtins::conditional_swap(), altered.clone(), 4).unwrap();
    assert!(!v.pass);
    let c = v.counterexample.clone().unwrap();
    assert_ne!(c.left, c.right);
    let Value::Tree(input) = &c.input else { panic!() };
    assert_eq!(input.to_string(), "b(b(c))");
    // deterministic: the same first counterexample every time
    let again = check_equiv(builtins::conditional_swap(), altered, 4).unwrap();
    assert_eq!(again, v);
    assert!(v.to_string().contains("counterexample"));
}

#[test]
fn definedness_differences_count() {
    let partial = parse_tdtt(
        "input {a:2,b:1,c:0} output {a:2,b:1,c:0} states {q} initial q
         rules { q<b(t)> -> b(q<t>); q<c> -> c; }",
    )
    .unwrap();
    let v = check_equiv(builtins::identity_mtt(), partial, 4).unwrap();
    let c = v.counterexample.unwrap();
    assert!(c.left.is_some());
    assert!(c.right.is_none());
}

#[test]
fn string_and_unary_tree_models_are_aligned() {
    let v = check_equiv(builtins::reverse_string(), treeduce::sst::reverse(&["a", "b"]), 8).unwrap();
    assert!(v.pass, "{v}");
    // empty string plus 2 + 4 + ... + 256 strings
    assert_eq!(v.tested, 511);
}

#[test]
fn mismatched_signatures_are_rejected() {
    let err = check_equiv(builtins::conditional_swap(), builtins::postfix(), 3).unwrap_err();
    assert!(matches!(err, EquivError::Incompatible(_)));
    let err = check_equiv(builtins::conditional_swap(), builtins::reverse_mtt(), 3).unwrap_err();
    assert!(matches!(err, EquivError::Incompatible(_)));
}

#[test]
fn explicit_inputs() {
    let inputs = enumerate_inputs(&Signature::Strings(vec!["a".into()]), 3).unwrap();
    assert_eq!(inputs.len(), 4);
    let (id, rev) = (treeduce::sst::identity(&["a", "b"]), treeduce::sst::reverse(&["a", "b"]));
    // strings over {a} are palindromes
    let v = check_equiv_on(id.clone(), rev.clone(), &inputs).unwrap();
    assert!(v.pass);
    assert_eq!(v.tested, 4);
    assert!(!check_equiv(id.clone(), rev, 2).unwrap().pass);
    let trees = [Value::Tree(treeduce::terms::Tree::leaf("c"))];
    assert!(matches!(check_equiv_on(id.clone(), id, &trees), Err(EquivError::Run { .. })));
}
