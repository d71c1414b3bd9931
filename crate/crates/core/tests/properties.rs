use std::collections::HashSet;

use proptest::prelude::*;
use treeduce::builtins::{self, abc, quadratic, quadratic_input};
use treeduce::equiv::{check_mtt_duality, check_tdtt_duality};
use treeduce::fuzz::{generate, mtt_output_bound, tdtt_output_bound, FuzzConfig, FuzzModel, ModelKind};
use treeduce::mtt::eliminate_lookahead;
use treeduce::sharing::{dedup, run_shared};
use treeduce::sst::{self, tdtts_unary_to_sst};
use treeduce::tdtt::to_register_machine;
use treeduce::terms::{decode_string, encode_string, parse_term, Context, Symbol, Term, TermDag, Tree, Word};
use treeduce::{run_dbta, Value};

const CAP: u64 = 4096;

fn tree() -> impl Strategy<Value = Tree> {
    Just(Tree::leaf("c")).prop_recursive(6, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Tree::node("b", vec![t])),
            (inner.clone(), inner).prop_map(|(l, r)| Tree::node("a", vec![l, r])),
        ]
    })
}

fn unary_context() -> impl Strategy<Value = Context> {
    let leaf = prop_oneof![Just(Term::Param(0)), Just(Term::Node("c".into(), vec![]))];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::Node("b".into(), vec![t])),
            (inner.clone(), inner).prop_map(|(l, r)| Term::Node("a".into(), vec![l, r])),
        ]
    })
    .prop_map(|body| Context::new(1, body).unwrap())
}

fn word(symbols: &'static str, max: usize) -> impl Strategy<Value = Word> {
    let n = symbols.len();
    prop::collection::vec(0..n, 0..=max)
        .prop_map(move |ix| ix.into_iter().map(|i| Symbol::from(&symbols[i..=i])).collect())
}

fn subtrees(t: &Tree, seen: &mut HashSet<Tree>) {
    if seen.insert(t.clone()) {
        t.children().iter().for_each(|c| subtrees(c, seen));
    }
}

proptest! {
    #[test]
    fn printed_trees_parse_back(t in tree()) {
        prop_assert_eq!(parse_term(&t.to_string(), &abc()).unwrap(), t);
    }

    #[test]
    fn dags_unfold_to_their_tree(t in tree()) {
        let d = TermDag::from_tree(&t);
        prop_assert_eq!(d.unfold(), t.clone());
        let m = dedup(&d);
        prop_assert_eq!(m.unfold(), t.clone());
        prop_assert_eq!(m.unfolded_size(), t.size() as u128);
        let mut seen = HashSet::new();
        subtrees(&t, &mut seen);
        prop_assert_eq!(m.node_count(), seen.len());
        prop_assert_eq!(dedup(&m), m.clone());
        prop_assert_eq!(TermDag::parse_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn string_codecs_round_trip(w in word("abc", 40)) {
        let a = builtins::reverse_mtt().input().clone();
        let t = encode_string(&w, &a).unwrap();
        prop_assert_eq!(t.size(), w.len() + 1);
        prop_assert_eq!(decode_string(&t, &a).unwrap(), w);
    }

    #[test]
    fn conditional_swap_is_an_involution(t in tree()) {
        let tt = builtins::conditional_swap();
        let once = tt.run_topdown(&t).unwrap().into_tree().unwrap();
        prop_assert_eq!(tt.run_topdown(&once).unwrap().into_tree().unwrap(), t);
    }

    #[test]
    fn three_readings_of_a_transducer_agree(t in tree()) {
        for (_, tt) in builtins::all_tdtts() {
            if tt.input() != &abc() {
                continue;
            }
            let topdown = tt.run_topdown(&t).ok();
            let machine = to_register_machine(&tt).run(&t).unwrap().output;
            prop_assert_eq!(&topdown, &machine);
            prop_assert_eq!(&tt.run_bottomup(&t).unwrap().output, &machine);
            if !tt.output().is_string() {
                let shared = run_shared(&tt, &t).ok().map(|d| Value::Tree(d.unfold()));
                prop_assert_eq!(shared, topdown);
            }
        }
    }

    #[test]
    fn context_composition_is_associative(
        f in unary_context(),
        g in unary_context(),
        h in unary_context(),
    ) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(f.compose(&Context::identity()).unwrap(), f);
    }

    #[test]
    fn remark_formula_on_long_words(w in word("ab", 40)) {
        let text = w.to_string();
        let expected = match text.find('b') {
            None => text.clone(),
            Some(n) => format!("{}b{}", &text[..n], "b".repeat(text.len() - n - 1)),
        };
        prop_assert_eq!(sst::remark_example().run(&w).unwrap().to_string(), expected);
    }

    #[test]
    fn streaming_reverse_and_identity(w in word("abc", 40)) {
        prop_assert_eq!(sst::reverse(&["a", "b", "c"]).run(&w).unwrap(), w.reversed());
        prop_assert_eq!(sst::identity(&["a", "b", "c"]).run(&w).unwrap(), w);
    }

    #[test]
    fn unary_transducers_stream(w in word("ab", 30)) {
        for tt in [builtins::reverse_string(), builtins::suffixes(), builtins::double_before_b()] {
            let s = tdtts_unary_to_sst(&tt).unwrap();
            let expected = tt.run_topdown(&encode_string(&w, tt.input()).unwrap()).unwrap();
            prop_assert_eq!(Value::Word(s.run(&w).unwrap()), expected);
        }
    }

    #[test]
    fn doubling_length(n in 0usize..=16) {
        let w = Word::from("a".repeat(n).as_str());
        prop_assert_eq!(sst::doubling().run(&w).unwrap().len(), 1 << n);
    }

    #[test]
    fn quadratic_closed_form(n in 1usize..300) {
        let d = run_shared(&quadratic(), &quadratic_input(n)).unwrap();
        let n = n as u128;
        prop_assert_eq!(d.unfolded_size(), n * (n + 1) / 2 + 2 * n + 1);
        prop_assert_eq!(dedup(&d).node_count() as u128, 2 * n + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fuzzed_transducers_agree_with_their_machines(seed in any::<u64>(), t in tree()) {
        let cfg = FuzzConfig::new(ModelKind::Tdtt, 0, 1, 5);
        let (FuzzModel::TopDown(tt), _) = generate(&cfg, seed) else { unreachable!() };
        prop_assume!(tdtt_output_bound(&tt, &t) <= CAP);
        let machine = to_register_machine(&tt).run(&t).unwrap().output;
        prop_assert_eq!(tt.run_topdown(&t).ok(), machine);
        let v = check_tdtt_duality(&tt, std::slice::from_ref(&t)).unwrap();
        prop_assert!(v.pass, "{:?}", v.mismatch);
    }

    #[test]
    fn fuzzed_lookahead_elimination(seed in any::<u64>(), t in tree()) {
        let cfg = FuzzConfig::new(ModelKind::Mtt, 0, 1, 5);
        let (FuzzModel::Macro(m), _) = generate(&cfg, seed) else { unreachable!() };
        prop_assume!(mtt_output_bound(&m, &t) <= CAP);
        let e = eliminate_lookahead(&m);
        prop_assert_eq!(e.run_oi(&t).ok(), m.run_oi(&t).ok());
        if let Some(la) = m.lookahead() {
            let sel = e.state_index("sel").unwrap();
            let want = Context::projection(la.state_count(), run_dbta(la, &t));
            prop_assert_eq!(e.run_oi_open(sel, &t).unwrap(), want);
        }
        let v = check_mtt_duality(&m, std::slice::from_ref(&t)).unwrap();
        prop_assert!(v.pass, "{:?}", v.mismatch);
    }
}
