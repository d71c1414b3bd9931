use treeduce::builtins::{self, abc};
use treeduce::equiv::check_equiv;
use treeduce::pipeline::{run_pipeline_tree, run_pipeline_word, PipelineError, Signature, StageError};
use treeduce::syntax::parse_tdtt;
use treeduce::terms::{enumerate_trees, parse_term, Tree, Word};
use treeduce::{run_pipeline, Pipeline, Stage, Value};

fn t(s: &str) -> Tree {
    parse_term(s, &abc()).unwrap()
}

#[test]
fn yield_after_identity() {
    let p = Pipeline::single(builtins::identity_mtt()).then(Stage::Yield(abc())).unwrap();
    assert_eq!(run_pipeline_tree(&p, &t("a(c,c)")).unwrap(), Value::Word(Word::from("cc")));
    assert_eq!(p.output(), Some(Signature::Strings(vec!["c".into()])));
}

#[test]
fn decode_reverse_encode() {
    let m = builtins::reverse_mtt();
    let a = m.input().clone();
    let p = Pipeline::new(vec![Stage::Encode(a.clone()), m.into(), Stage::Decode(a)]).unwrap();
    assert_eq!(run_pipeline_word(&p, &Word::from("ab")).unwrap(), Value::Word(Word::from("ba")));
    assert_eq!(
        run_pipeline_word(&p, &Word::from("abcc")).unwrap(),
        Value::Word(Word::from("ccba"))
    );
}

#[test]
fn empty_pipeline_is_identity() {
    let p = Pipeline::default();
    assert!(p.input().is_none());
    let x = Value::Tree(t("a(b(c),c)"));
    assert_eq!(run_pipeline(&p, &x).unwrap(), x);
    let w = Value::Word(Word::from("abc"));
    assert_eq!(p.run(&w).unwrap(), w);
}

#[test]
fn composition_is_associative() {
    let a = || Pipeline::single(builtins::conditional_swap());
    let b = || Pipeline::single(builtins::b_replacement());
    let c = || Pipeline::single(builtins::context_mtt());
    let left = a().compose(b()).unwrap().compose(c()).unwrap();
    let right = a().compose(b().compose(c()).unwrap()).unwrap();
    assert_eq!(left.stages().len(), 3);
    for x in enumerate_trees(&abc(), 6).unwrap() {
        let x = Value::Tree(x);
        assert_eq!(left.run(&x).ok(), right.run(&x).ok());
        let stepwise = [builtins::conditional_swap().into(), builtins::b_replacement().into()]
            .iter()
            .try_fold(x.clone(), |v, s: &Stage| s.apply(&v))
            .and_then(|v| Stage::from(builtins::context_mtt()).apply(&v));
        assert_eq!(left.run(&x).ok(), stepwise.ok());
    }
}

#[test]
fn failing_stage_is_identified() {
    let partial = parse_tdtt(
        "input {a:2,b:1,c:0} output {a:2,b:1,c:0} states {q} initial q
         rules { q<a(t,u)> -> a(q<t>,q<u>); q<c> -> c; }",
    )
    .unwrap();
    let p = Pipeline::single(builtins::conditional_swap()).then(partial).unwrap();
    assert!(p.run(&Value::Tree(t("a(c,c)"))).is_ok());
    let err = p.run(&Value::Tree(t("b(c)"))).unwrap_err();
    assert!(err.is_undefined());
    match &err {
        PipelineError::Stage { index, error, .. } => {
            assert_eq!(*index, 1);
            assert!(matches!(error, StageError::Transduce(_)));
        }
        e => panic!("unexpected {e}"),
    }
    assert!(err.to_string().starts_with("stage 1 (top-down transducer)"), "{err}");
}

#[test]
fn wrong_input_kind_is_not_undefinedness() {
    let p = Pipeline::single(builtins::conditional_swap());
    let err = p.run(&Value::Word(Word::from("ab"))).unwrap_err();
    assert!(!err.is_undefined());
}

#[test]
fn incompatible_stages_are_rejected() {
    let err = Pipeline::single(builtins::postfix())
        .then(builtins::conditional_swap())
        .unwrap_err();
    match err {
        PipelineError::Incompatible { index, prev, .. } => assert_eq!((index, prev), (1, 0)),
        e => panic!("unexpected {e}"),
    }
    let err = Pipeline::single(builtins::identity_string())
        .before(builtins::conditional_swap())
        .unwrap_err();
    assert!(matches!(err, PipelineError::Incompatible { index: 1, .. }));
}

#[test]
fn shared_unfold_stage_matches_plain_run() {
    let tt = builtins::quadratic();
    let v = check_equiv(Stage::SharedUnfold(tt.clone()), tt, 12).unwrap();
    assert!(v.pass, "{v}");
    assert_eq!(v.tested, 12);
}
