use treeduce::builtins::{self, NAMES};
use treeduce::equiv::check_equiv;
use treeduce::mtt::{eliminate_lookahead, tdtts_to_mtt_unary};
use treeduce::sst::tdtts_unary_to_sst;
use treeduce::syntax::{
    parse_definition, parse_mtt, parse_register_machine, parse_sst, parse_tdtt, print_mtt,
    print_register_machine, print_sst, print_tdtt, Definition, ParseError,
};
use treeduce::tdtt::to_register_machine;
use treeduce::terms::{enumerate_words, Symbol, Word};

fn round_trip(d: &Definition) -> Definition {
    let text = d.to_string();
    let back = parse_definition(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    assert_eq!(back.to_string(), text);
    assert_eq!(back.kind(), d.kind());
    back
}

fn same_function(a: Definition, b: Definition) {
    if let (Definition::Sst(x), Definition::Sst(y)) = (&a, &b) {
        assert_eq!(x.def(), y.def());
        for w in enumerate_words(x.input(), 6) {
            assert_eq!(x.run(&w).ok(), y.run(&w).ok());
        }
        return;
    }
    let v = check_equiv(a, b, 6).unwrap();
    assert!(v.pass, "{v}");
}

#[test]
fn every_builtin_round_trips() {
    for name in NAMES {
        let d = builtins::definition(name).unwrap();
        let back = round_trip(&d);
        same_function(d, back);
    }
    assert!(builtins::definition("nope").is_none());
}

#[test]
fn converted_machines_round_trip() {
    let mut defs = Vec::new();
    for (_, tt) in builtins::all_tdtts() {
        defs.push(Definition::Machine(to_register_machine(&tt)));
        if tt.output().is_string() {
            defs.push(Definition::Macro(tdtts_to_mtt_unary(&tt).unwrap()));
            if let Ok(s) = tdtts_unary_to_sst(&tt) {
                defs.push(Definition::Sst(s));
            }
        }
    }
    for (_, m) in builtins::all_mtts() {
        defs.push(Definition::Macro(eliminate_lookahead(&m)));
    }
    for d in defs {
        let back = round_trip(&d);
        same_function(d, back);
    }
}

#[test]
fn typed_parsers() {
    let swap = builtins::conditional_swap();
    assert!(parse_tdtt(&print_tdtt(&swap)).is_ok());
    let m = builtins::context_mtt();
    assert!(parse_mtt(&print_mtt(&m)).is_ok());
    let rm = to_register_machine(&builtins::b_replacement());
    assert!(parse_register_machine(&print_register_machine(&rm)).is_ok());
    let s = treeduce::sst::remark_example();
    assert_eq!(parse_sst(&print_sst(&s)).unwrap(), s);
    let err = parse_mtt(&print_tdtt(&swap)).unwrap_err();
    assert!(matches!(err, ParseError::Kind { .. }), "{err}");
    let err = parse_tdtt(&print_sst(&s)).unwrap_err();
    assert!(matches!(err, ParseError::Kind { .. }), "{err}");
}

#[test]
fn sst_text_format() {
    let text = "sst {
      input {a,b}; output {a,b}; states {s0,s1}; initial s0; registers {R,S,T};
      init R=\"\",S=\"\",T=\"\";
      on s0,a -> s0 with R=a.R, S=b.S, T=T;
      on s0,b -> s1 with R=\"\", S=\"\", T=b.S.T;
      on s1,a -> s1 with R=a.R, S=b.S, T=T;
      on s1,b -> s1 with R=\"\", S=\"\", T=b.S.T;
      output s0 = R; output s1 = R.T;
    }";
    let s = parse_sst(text).unwrap();
    assert_eq!(s, treeduce::sst::remark_example());
    assert_eq!(s.run(&Word::from("abab")).unwrap(), Word::from("abbb"));
    assert_eq!(s.registers(), &[Symbol::from("R"), Symbol::from("S"), Symbol::from("T")]);
}

fn syntax_position(text: &str) -> (usize, usize) {
    match parse_definition(text) {
        Err(ParseError::Syntax { line, col, .. }) => (line, col),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn syntax_errors_carry_positions() {
    assert_eq!(
        syntax_position("input {a:2,c:0}\noutput {a:2,c:0}\nstates {q}\ninitial q\nrules {\n  q<a(t,u)> -> a(q<t>,q<u>)\n  q<c> -> c;\n}\n"),
        (7, 3)
    );
    let (line, _) = syntax_position("input {a:2,c:0}\noutput {a:2 c:0}\n");
    assert_eq!(line, 2);
}

#[test]
fn semantic_errors_are_reported() {
    let bad_state = "input {c:0} output {c:0} states {q} initial p rules { q<c> -> c; }";
    assert!(parse_definition(bad_state).is_err());
    let bad_arity = "input {a:2,c:0} output {a:2,c:0} states {q} initial q rules { q<a(t)> -> c; }";
    assert!(parse_definition(bad_arity).is_err());
    let bad_letter = "input {c:0} output {c:0} states {q} initial q rules { q<c> -> d; }";
    let err = parse_definition(bad_letter).unwrap_err();
    assert!(err.to_string().contains('d'), "{err}");
}
