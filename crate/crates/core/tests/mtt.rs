use treeduce::builtins::{self, abc};
use treeduce::equiv::{check_equiv, check_mtt_duality};
use treeduce::mtt::{eliminate_lookahead, mtt_unary_to_tdtts, tdtts_to_mtt_unary, MacroRhs, MacroTT};
use treeduce::syntax::{parse_mtt, parse_tdtt};
use treeduce::terms::{
    decode_string, encode_string, enumerate_trees, enumerate_words, parse_context, parse_term,
    Context, RankedAlphabet, Symbol, Term, Tree, Word,
};
use treeduce::{run_dbta, Value};

fn t(s: &str) -> Tree {
    parse_term(s, &abc()).unwrap()
}

fn ctx(s: &str, arity: usize) -> Context {
    parse_context(s, &abc(), arity).unwrap()
}

#[test]
fn open_evaluation_of_parameterized_state() {
    let m = builtins::context_mtt();
    let q1 = m.state_index("q1").unwrap();
    assert_eq!(m.run_oi_open(q1, &t("a(c,c)")).unwrap(), ctx("a(a(x1,x1),a(x1,x1))", 1));
    assert_eq!(m.run_oi_open(q1, &t("c")).unwrap(), ctx("a(x1,x1)", 1));
}

#[test]
fn open_evaluation_at_initial_state_is_closed_run() {
    let m = builtins::context_mtt();
    for x in enumerate_trees(&abc(), 6).unwrap() {
        let open = m.run_oi_open(m.initial(), &x).unwrap();
        assert_eq!(open.arity(), 0);
        assert_eq!(open.to_tree().unwrap(), m.run_oi(&x).unwrap());
    }
}

#[test]
fn context_mtt_run() {
    let m = builtins::context_mtt();
    // q0<a(t,u)> -> q1<t>(b(q0<u>)) with t = u = c
    assert_eq!(m.run_oi(&t("a(c,c)")).unwrap(), t("a(b(c),b(c))"));
    assert_eq!(
        m.run_oi(&t("a(a(c,c),c)")).unwrap(),
        t("a(a(b(c),b(c)),a(b(c),b(c)))")
    );
}

fn unary_abc() -> RankedAlphabet {
    builtins::reverse_mtt().input().clone()
}

fn abc_symbols() -> Vec<Symbol> {
    ["a", "b", "c"].into_iter().map(Symbol::from).collect()
}

#[test]
fn reverse_mtt_reverses_strings() {
    let m = builtins::reverse_mtt();
    let a = unary_abc();
    for w in enumerate_words(&abc_symbols(), 8) {
        let out = m.run_oi(&encode_string(&w, &a).unwrap()).unwrap();
        assert_eq!(decode_string(&out, &a).unwrap(), w.reversed());
    }
}

#[test]
fn reverse_mtt_registers() {
    let m = builtins::reverse_mtt();
    let a = unary_abc();
    let regs = m.run_bottomup(&encode_string(&Word::from("ab"), &a).unwrap()).unwrap();
    let q = m.state_index("q").unwrap();
    assert_eq!(regs[q], Some(parse_context("b(a(x1))", &a, 1).unwrap()));
    let leaf = builtins::context_mtt().run_bottomup(&t("c")).unwrap();
    assert_eq!(leaf[1], Some(ctx("a(x1,x1)", 1)));
}

const DISCARDING: &str = "input {a:2,b:1,c:0}
output {a:2,b:1,c:0}
states {q0:0,q1:1,p:0}
initial q0
rules {
  q0<b(t)> -> q1<t>(p<t>);
  q0<c> -> c;
  q1<c>(x) -> c;
  q1<b(t)>(x) -> c;
  q1<a(t,u)>(x) -> b(x);
  p<b(t)> -> c;
}
";

#[test]
fn discarded_undefined_argument_is_harmless() {
    let m = parse_mtt(DISCARDING).unwrap();
    // p has no rule at c, but q1<c> discards its parameter
    assert_eq!(m.run_oi(&t("b(c)")).unwrap(), t("c"));
    let p = m.state_index("p").unwrap();
    let regs = m.run_bottomup(&t("b(c)")).unwrap();
    assert_eq!(regs[m.initial()], Some(ctx("c", 0)));
    assert_eq!(m.run_bottomup(&t("c")).unwrap()[p], None);
    // here the argument is used
    assert!(m.run_oi(&t("b(a(c,c))")).is_err());
    assert_eq!(m.run_bottomup(&t("b(a(c,c))")).unwrap()[m.initial()], None);
}

#[test]
fn identity_mtt_is_identity() {
    let m = builtins::identity_mtt();
    for x in enumerate_trees(&abc(), 7).unwrap() {
        assert_eq!(m.run_oi(&x).unwrap(), x);
    }
}

#[test]
fn bottom_up_agrees_with_open_evaluation() {
    for (name, m) in builtins::all_mtts() {
        let trees = enumerate_trees(m.input(), 7).unwrap();
        let v = check_mtt_duality(&m, &trees).unwrap();
        assert!(v.pass, "{name}: {:?}", v.mismatch);
        let v = check_mtt_duality(&eliminate_lookahead(&m), &trees).unwrap();
        assert!(v.pass, "{name} without lookahead: {:?}", v.mismatch);
    }
    let m = parse_mtt(DISCARDING).unwrap();
    let v = check_mtt_duality(&m, &enumerate_trees(&abc(), 7).unwrap()).unwrap();
    assert!(v.pass, "{:?}", v.mismatch);
}

#[test]
fn elimination_without_lookahead_is_identity() {
    let m = builtins::context_mtt();
    let e = eliminate_lookahead(&m);
    assert_eq!(e.states(), m.states());
    assert_eq!(e.rules(), m.rules());
}

#[test]
fn elimination_preserves_the_function() {
    let m = builtins::b_replacement_mtt();
    let e = eliminate_lookahead(&m);
    assert!(e.lookahead().is_none());
    let v = check_equiv(m, e, 7).unwrap();
    assert!(v.pass, "{v}");
    assert_eq!(v.tested, 89);
}

#[test]
fn selector_projects_onto_lookahead_state() {
    let m = builtins::b_replacement_mtt();
    let la = m.lookahead().unwrap().clone();
    let e = eliminate_lookahead(&m);
    let sel = e.state_index("sel").unwrap();
    assert_eq!(e.arity(sel), 2);
    assert_eq!(
        e.run_oi_open(sel, &t("b(c)")).unwrap(),
        Context::projection(2, la.state_index("r+").unwrap())
    );
    for x in enumerate_trees(&abc(), 7).unwrap() {
        let got = e.run_oi_open(sel, &x).unwrap();
        assert_eq!(got, Context::projection(2, run_dbta(&la, &x)), "on {x}");
    }
}

fn tower_leaves(rhs: &MacroRhs, sel: usize) -> usize {
    match rhs {
        MacroRhs::Call { state, args, .. } if *state == sel => {
            args.iter().map(|a| tower_leaves(a, sel)).sum()
        }
        _ => 1,
    }
}

#[test]
fn dispatch_towers_are_bounded() {
    let m = builtins::b_replacement_mtt();
    let n = m.lookahead().unwrap().state_count();
    let e = eliminate_lookahead(&m);
    let sel = e.state_index("sel").unwrap();
    for r in e.rules() {
        let k = e.input().arity(r.letter.as_str()).unwrap();
        assert!(tower_leaves(&r.rhs, sel) <= n.pow(k as u32), "{r:?}");
    }
}

#[test]
fn string_transducers_become_unary_mtts() {
    let tt = builtins::postfix();
    let m = tdtts_to_mtt_unary(&tt).unwrap();
    assert!(m.is_unary_output());
    let q = m.state_index("q").unwrap();
    let c = m.input().index_of("c").unwrap();
    let rule = m.find_rule(q, c, &[]).unwrap();
    assert_eq!(rule.rhs, MacroRhs::Letter("c".into(), vec![MacroRhs::Param(0)]));
    let out = m.run_oi(&t("a(b(c),c)")).unwrap();
    assert_eq!(decode_string(&out, m.output()).unwrap(), Word::from("cbca"));
    assert!(check_equiv(tt, m, 7).unwrap().pass);
}

#[test]
fn empty_and_single_literal_rules() {
    let tt = parse_tdtt(
        "input {a:1,e:0} output string {a} states {q} initial q
         rules { q<a(t)> -> 'a'; q<e> -> \"\"; }",
    )
    .unwrap();
    let m = tdtts_to_mtt_unary(&tt).unwrap();
    let q = m.state_index("q").unwrap();
    let at = |s: &str| parse_term(s, m.input()).unwrap();
    assert_eq!(m.run_oi_open(q, &at("e")).unwrap(), Context::identity());
    let a_x = Context::new(1, Term::Node("a".into(), vec![Term::Param(0)])).unwrap();
    assert_eq!(m.run_oi_open(q, &at("a(e)")).unwrap(), a_x);
}

#[test]
fn conversions_round_trip_on_builtins() {
    for (name, tt) in builtins::all_tdtts() {
        if !tt.output().is_string() {
            continue;
        }
        let m = tdtts_to_mtt_unary(&tt).unwrap();
        let v = check_equiv(tt.clone(), m.clone(), 7).unwrap();
        assert!(v.pass, "{name} to mtt: {v}");
        let back = mtt_unary_to_tdtts(&m).unwrap();
        let v = check_equiv(tt, back, 7).unwrap();
        assert!(v.pass, "{name} round trip: {v}");
    }
}

#[test]
fn unary_mtts_become_string_transducers() {
    let m = builtins::reverse_mtt();
    let tt = mtt_unary_to_tdtts(&m).unwrap();
    assert!(tt.output().is_string());
    let v = check_equiv(m, tt.clone(), 9).unwrap();
    assert!(v.pass, "{v}");
    for w in enumerate_words(&abc_symbols(), 8) {
        let x = encode_string(&w, tt.input()).unwrap();
        assert_eq!(tt.run_topdown(&x).unwrap(), Value::Word(w.reversed()));
    }
    let id = mtt_unary_to_tdtts(&builtins::identity_unary_mtt()).unwrap();
    assert!(check_equiv(id, builtins::identity_string(), 9).unwrap().pass);
    assert!(mtt_unary_to_tdtts(&builtins::context_mtt()).is_err());
}

/// `q@1`, `q@g` or `q@u` from the shape of the open value.
fn tail_entry(m: &MacroTT, q: usize, x: &Tree) -> String {
    let tail = match m.run_oi_open(q, x) {
        Err(_) => "u".to_string(),
        Ok(c) => {
            let mut body = c.body();
            loop {
                match body {
                    Term::Param(i) => break (i + 1).to_string(),
                    Term::Node(_, cs) if cs.is_empty() => break "g".to_string(),
                    Term::Node(_, cs) => body = &cs[0],
                }
            }
        }
    };
    format!("{}@{tail}", m.states()[q])
}

#[test]
fn tail_maps_match_open_evaluation() {
    for m in [builtins::reverse_mtt(), builtins::identity_unary_mtt()] {
        let tt = mtt_unary_to_tdtts(&m).unwrap();
        let la = tt.lookahead().unwrap();
        for x in enumerate_trees(m.input(), 7).unwrap() {
            let expected: Vec<String> = (0..m.states().len()).map(|q| tail_entry(&m, q, &x)).collect();
            assert_eq!(la.state_name(run_dbta(la, &x)).as_str(), expected.join("/"));
        }
    }
}

#[test]
fn unary_contexts_are_chains() {
    for (_, m) in builtins::all_mtts().into_iter().filter(|(_, m)| m.is_unary_output()) {
        for x in enumerate_trees(m.input(), 7).unwrap() {
            for q in 0..m.states().len() {
                let Ok(c) = m.run_oi_open(q, &x) else { continue };
                let mut body = c.body();
                while let Term::Node(_, cs) = body {
                    assert!(cs.len() <= 1);
                    match cs.first() {
                        Some(next) => body = next,
                        None => break,
                    }
                }
            }
        }
    }
}
