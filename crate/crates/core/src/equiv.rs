//! Bounded equivalence checking on enumerated inputs.
//!
//! Two runnables are compared on every input up to a size bound, in
//! canonical enumeration order. Outputs and definedness must both agree.
//! Inputs are evaluated in parallel; the reported counterexample is always
//! the first one in canonical order.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::mtt::MacroTT;
use crate::pipeline::{Pipeline, PipelineError, Signature, Stage};
use crate::tdtt::TopDownTT;
use crate::terms::{enumerate_trees, enumerate_words, Context, Symbol, TermError, Tree};
use crate::value::{TransduceError, Value};

/// A value, or `None` where the function is undefined.
pub type Outcome = Option<Value>;

fn show(o: &Outcome) -> String {
    match o {
        Some(v) => v.to_string(),
        None => "undefined".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub input: Value,
    pub left: Outcome,
    pub right: Outcome,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "input {}: left {}, right {}",
            self.input,
            show(&self.left),
            show(&self.right)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivVerdict {
    pub pass: bool,
    pub counterexample: Option<Counterexample>,
    pub tested: usize,
}

impl fmt::Display for EquivVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "equivalent on {} inputs", self.tested),
            Some(c) => write!(f, "counterexample after {} inputs: {c}", self.tested),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("incompatible signatures: {0}")]
    Incompatible(String),
    #[error("cannot enumerate inputs: {0}")]
    Enumerate(#[from] TermError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("on input {input}: {error}")]
    Run { input: Value, error: String },
}

/// All inputs of `sig` up to `bound` nodes (trees) or symbols (strings).
pub fn enumerate_inputs(sig: &Signature, bound: usize) -> Result<Vec<Value>, TermError> {
    Ok(match sig {
        Signature::Trees(a) => enumerate_trees(a, bound)?.into_iter().map(Value::Tree).collect(),
        Signature::Strings(s) => enumerate_words(s, bound).into_iter().map(Value::Word).collect(),
    })
}

fn outcome(p: &Pipeline, input: &Value) -> Result<Outcome, EquivError> {
    match p.run(input) {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_undefined() => Ok(None),
        Err(e) => Err(EquivError::Run {
            input: input.clone(),
            error: e.to_string(),
        }),
    }
}

fn unary(sig: &Signature) -> Option<&crate::terms::RankedAlphabet> {
    match sig {
        Signature::Trees(a) if a.string_end_marker().is_some() => Some(a),
        _ => None,
    }
}

/// Inserts codecs so that a string-level and a unary-tree-level runnable
/// become comparable: unary tree inputs are fed by `encode`, unary tree
/// outputs are read back by `decode`.
pub fn align(left: Pipeline, right: Pipeline) -> Result<(Pipeline, Pipeline), EquivError> {
    fn fix_input(p: Pipeline, other: &Option<Signature>) -> Result<Pipeline, PipelineError> {
        match (p.input(), other) {
            (Some(sig), Some(Signature::Strings(_))) => match unary(&sig) {
                Some(a) => p.before(Stage::Encode(a.clone())),
                None => Ok(p),
            },
            _ => Ok(p),
        }
    }
    fn fix_output(p: Pipeline, other: &Option<Signature>) -> Result<Pipeline, PipelineError> {
        match (p.output(), other) {
            (Some(sig), Some(Signature::Strings(_))) => match unary(&sig) {
                Some(a) => p.then(Stage::Decode(a.clone())),
                None => Ok(p),
            },
            _ => Ok(p),
        }
    }
    let (li, ri) = (left.input(), right.input());
    let left = fix_input(left, &ri)?;
    let right = fix_input(right, &li)?;
    let (lo, ro) = (left.output(), right.output());
    let left = fix_output(left, &ro)?;
    let right = fix_output(right, &lo)?;
    Ok((left, right))
}

fn check_signatures(left: &Pipeline, right: &Pipeline) -> Result<Signature, EquivError> {
    let both = |a: Option<Signature>, b: Option<Signature>, what: &str| match (a, b) {
        (Some(a), Some(b)) if a.same(&b) => Ok(Some(a)),
        (Some(a), Some(b)) => Err(EquivError::Incompatible(format!(
            "left {what} {a}, right {what} {b}"
        ))),
        (a, b) => Ok(a.or(b)),
    };
    let input = both(left.input(), right.input(), "input")?;
    both(left.output(), right.output(), "output")?;
    input.ok_or_else(|| EquivError::Incompatible("no input signature to enumerate".into()))
}

/// Compares on every input up to `bound` (tree nodes or string length).
pub fn check_equiv(
    left: impl Into<Pipeline>,
    right: impl Into<Pipeline>,
    bound: usize,
) -> Result<EquivVerdict, EquivError> {
    let (left, right) = align(left.into(), right.into())?;
    let sig = check_signatures(&left, &right)?;
    let inputs = enumerate_inputs(&sig, bound)?;
    compare(&left, &right, &inputs)
}

/// Compares on the given inputs only.
pub fn check_equiv_on(
    left: impl Into<Pipeline>,
    right: impl Into<Pipeline>,
    inputs: &[Value],
) -> Result<EquivVerdict, EquivError> {
    let (left, right) = align(left.into(), right.into())?;
    check_signatures(&left, &right)?;
    compare(&left, &right, inputs)
}

fn compare(left: &Pipeline, right: &Pipeline, inputs: &[Value]) -> Result<EquivVerdict, EquivError> {
    let results: Vec<Result<(Outcome, Outcome), EquivError>> = inputs
        .par_iter()
        .map(|x| Ok((outcome(left, x)?, outcome(right, x)?)))
        .collect();
    for (i, (input, r)) in inputs.iter().zip(results).enumerate() {
        let (l, r) = r?;
        if l != r {
            return Ok(EquivVerdict {
                pass: false,
                counterexample: Some(Counterexample {
                    input: input.clone(),
                    left: l,
                    right: r,
                }),
                tested: i + 1,
            });
        }
    }
    Ok(EquivVerdict {
        pass: true,
        counterexample: None,
        tested: inputs.len(),
    })
}

/// A disagreement between the rewriting and register readings of one state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityMismatch {
    pub input: Tree,
    pub state: Symbol,
    pub topdown: Option<String>,
    pub bottomup: Option<String>,
}

impl fmt::Display for DualityMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |o: &Option<String>| o.clone().unwrap_or_else(|| "undefined".into());
        write!(
            f,
            "input {}, state {}: top-down {}, bottom-up {}",
            self.input,
            self.state,
            s(&self.topdown),
            s(&self.bottomup)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityVerdict {
    pub pass: bool,
    pub mismatch: Option<DualityMismatch>,
    pub tested: usize,
}

fn defined<T>(r: Result<T, TransduceError>) -> Result<Option<T>, TransduceError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(TransduceError::UndefinedTransition { .. } | TransduceError::UndefinedOutput) => Ok(None),
        Err(e) => Err(e),
    }
}

fn first_mismatch(
    inputs: &[Tree],
    per_input: impl Fn(&Tree) -> Result<Option<DualityMismatch>, TransduceError> + Sync,
) -> Result<DualityVerdict, TransduceError> {
    let results: Vec<_> = inputs.par_iter().map(&per_input).collect();
    for (i, r) in results.into_iter().enumerate() {
        if let Some(m) = r? {
            return Ok(DualityVerdict {
                pass: false,
                mismatch: Some(m),
                tested: i + 1,
            });
        }
    }
    Ok(DualityVerdict {
        pass: true,
        mismatch: None,
        tested: inputs.len(),
    })
}

/// `run_topdown` from every state against the registers of `run_bottomup`.
pub fn check_tdtt_duality(tt: &TopDownTT, inputs: &[Tree]) -> Result<DualityVerdict, TransduceError> {
    first_mismatch(inputs, |t| {
        let bu = tt.run_bottomup(t)?;
        for (q, reg) in bu.registers.iter().enumerate() {
            let td = defined(tt.run_topdown_from(q, t))?;
            if td.as_ref() != reg.as_ref() {
                return Ok(Some(DualityMismatch {
                    input: t.clone(),
                    state: tt.states()[q].clone(),
                    topdown: td.map(|v| v.to_string()),
                    bottomup: reg.as_ref().map(|v| v.to_string()),
                }));
            }
        }
        let out = defined(tt.run_topdown(t))?;
        if out != bu.output {
            return Ok(Some(DualityMismatch {
                input: t.clone(),
                state: tt.states()[tt.initial()].clone(),
                topdown: out.map(|v| v.to_string()),
                bottomup: bu.output.map(|v| v.to_string()),
            }));
        }
        Ok(None)
    })
}

/// `run_oi_open` for every state against the context registers of
/// `run_bottomup`.
pub fn check_mtt_duality(m: &MacroTT, inputs: &[Tree]) -> Result<DualityVerdict, TransduceError> {
    first_mismatch(inputs, |t| {
        let bu = m.run_bottomup(t)?;
        for (q, reg) in bu.iter().enumerate() {
            let td: Option<Context> = defined(m.run_oi_open(q, t))?;
            if td.as_ref() != reg.as_ref() {
                return Ok(Some(DualityMismatch {
                    input: t.clone(),
                    state: m.states()[q].clone(),
                    topdown: td.map(|c| c.to_string()),
                    bottomup: reg.as_ref().map(|c| c.to_string()),
                }));
            }
        }
        Ok(None)
    })
}
