//! Sequential composition of transducers and codecs.

use std::fmt;

use thiserror::Error;

use crate::mtt::MacroTT;
use crate::sharing::run_shared;
use crate::sst::{Sst, SstError};
use crate::syntax::Definition;
use crate::tdtt::{OutputKind, RegisterMachine, TopDownTT};
use crate::terms::{decode_string, encode_string, RankedAlphabet, Symbol, TermError, Tree, Word};
use crate::value::{TransduceError, Value};

/// What a stage consumes or produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Signature {
    Trees(RankedAlphabet),
    Strings(Vec<Symbol>),
}

impl Signature {
    /// Every value of `self` is a valid value of `other`.
    pub fn fits(&self, other: &Signature) -> bool {
        match (self, other) {
            (Signature::Trees(a), Signature::Trees(b)) => a.is_subset_of(b),
            (Signature::Strings(a), Signature::Strings(b)) => a.iter().all(|s| b.contains(s)),
            _ => false,
        }
    }

    /// Same kind over the same letters or symbols.
    pub fn same(&self, other: &Signature) -> bool {
        match (self, other) {
            (Signature::Trees(a), Signature::Trees(b)) => a.same_letters(b),
            (Signature::Strings(a), Signature::Strings(b)) => {
                a.len() == b.len() && a.iter().all(|s| b.contains(s))
            }
            _ => false,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Trees(a) => write!(f, "trees over {a}"),
            Signature::Strings(s) => {
                let names: Vec<&str> = s.iter().map(Symbol::as_str).collect();
                write!(f, "strings over {{{}}}", names.join(","))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum Stage {
    TopDown(TopDownTT),
    Machine(RegisterMachine),
    Macro(MacroTT),
    Sst(Sst),
    /// Strings to unary trees over the alphabet.
    Encode(RankedAlphabet),
    /// Unary trees over the alphabet to strings.
    Decode(RankedAlphabet),
    /// Leaf string of trees over the alphabet.
    Yield(RankedAlphabet),
    /// Shared evaluation of a tree-output transducer followed by unfolding.
    SharedUnfold(TopDownTT),
}

fn output_signature(kind: &OutputKind) -> Signature {
    match kind {
        OutputKind::Tree(a) => Signature::Trees(a.clone()),
        OutputKind::String(s) => Signature::Strings(s.clone()),
    }
}

fn unary_symbols(a: &RankedAlphabet) -> Vec<Symbol> {
    a.unary_letters().cloned().collect()
}

impl Stage {
    pub fn input(&self) -> Signature {
        match self {
            Stage::TopDown(t) | Stage::SharedUnfold(t) => Signature::Trees(t.input().clone()),
            Stage::Machine(m) => Signature::Trees(m.input().clone()),
            Stage::Macro(m) => Signature::Trees(m.input().clone()),
            Stage::Sst(s) => Signature::Strings(s.input().to_vec()),
            Stage::Encode(a) => Signature::Strings(unary_symbols(a)),
            Stage::Decode(a) | Stage::Yield(a) => Signature::Trees(a.clone()),
        }
    }

    pub fn output(&self) -> Signature {
        match self {
            Stage::TopDown(t) | Stage::SharedUnfold(t) => output_signature(t.output()),
            Stage::Machine(m) => output_signature(m.output()),
            Stage::Macro(m) => Signature::Trees(m.output().clone()),
            Stage::Sst(s) => Signature::Strings(s.output().to_vec()),
            Stage::Encode(a) => Signature::Trees(a.clone()),
            Stage::Decode(a) => Signature::Strings(unary_symbols(a)),
            Stage::Yield(a) => Signature::Strings(
                a.nullary().filter(|s| !a.is_neutral(s.as_str())).cloned().collect(),
            ),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Stage::TopDown(_) => "top-down transducer",
            Stage::Machine(_) => "register machine",
            Stage::Macro(_) => "macro tree transducer",
            Stage::Sst(_) => "streaming string transducer",
            Stage::Encode(_) => "encode",
            Stage::Decode(_) => "decode",
            Stage::Yield(_) => "yield",
            Stage::SharedUnfold(_) => "shared run and unfold",
        }
    }

    pub fn apply(&self, v: &Value) -> Result<Value, StageError> {
        let tree = || {
            v.as_tree().ok_or(StageError::Transduce(TransduceError::WrongKind {
                expected: "a tree",
            }))
        };
        let word = || {
            v.as_word().ok_or(StageError::Transduce(TransduceError::WrongKind {
                expected: "a string",
            }))
        };
        Ok(match self {
            Stage::TopDown(t) => t.run_topdown(tree()?)?,
            Stage::Machine(m) => m.run(tree()?)?.output.ok_or(TransduceError::UndefinedOutput)?,
            Stage::Macro(m) => Value::Tree(m.run_oi(tree()?)?),
            Stage::Sst(s) => Value::Word(s.run(word()?)?),
            Stage::Encode(a) => Value::Tree(encode_string(word()?, a)?),
            Stage::Decode(a) => Value::Word(decode_string(tree()?, a)?),
            Stage::Yield(a) => {
                let t = tree()?;
                t.check(a)?;
                Value::Word(t.yield_word(a))
            }
            Stage::SharedUnfold(t) => Value::Tree(run_shared(t, tree()?)?.unfold()),
        })
    }
}

impl From<TopDownTT> for Stage {
    fn from(t: TopDownTT) -> Self {
        Stage::TopDown(t)
    }
}

impl From<RegisterMachine> for Stage {
    fn from(m: RegisterMachine) -> Self {
        Stage::Machine(m)
    }
}

impl From<MacroTT> for Stage {
    fn from(m: MacroTT) -> Self {
        Stage::Macro(m)
    }
}

impl From<Sst> for Stage {
    fn from(s: Sst) -> Self {
        Stage::Sst(s)
    }
}

impl From<Definition> for Stage {
    fn from(d: Definition) -> Self {
        match d {
            Definition::TopDown(t) => Stage::TopDown(t),
            Definition::Macro(m) => Stage::Macro(m),
            Definition::Machine(m) => Stage::Machine(m),
            Definition::Sst(s) => Stage::Sst(s),
        }
    }
}

/// A failure inside one stage.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StageError {
    #[error(transparent)]
    Transduce(#[from] TransduceError),
    #[error(transparent)]
    Sst(#[from] SstError),
    #[error(transparent)]
    Term(#[from] TermError),
}

impl StageError {
    /// The computed function has no value here (as opposed to a bad input).
    pub fn is_undefined(&self) -> bool {
        matches!(
            self,
            StageError::Transduce(
                TransduceError::UndefinedTransition { .. } | TransduceError::UndefinedOutput
            ) | StageError::Sst(SstError::OutputUndefined(_) | SstError::UndefinedRegister(_))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("stage {index} ({stage}) expects {expected}, but stage {prev} produces {found}")]
    Incompatible {
        index: usize,
        prev: usize,
        stage: &'static str,
        expected: String,
        found: String,
    },
    #[error("stage {index} ({stage}): {error}")]
    Stage {
        index: usize,
        stage: &'static str,
        error: StageError,
    },
}

impl PipelineError {
    pub fn is_undefined(&self) -> bool {
        matches!(self, PipelineError::Stage { error, .. } if error.is_undefined())
    }
}

/// Stages applied left to right; adjacent signatures are checked on assembly.
#[derive(Debug, Clone, Default)]
pub struct Pipeline {
    stages: Vec<Stage>,
}

impl Pipeline {
    pub fn new(stages: Vec<Stage>) -> Result<Self, PipelineError> {
        for (i, w) in stages.windows(2).enumerate() {
            let (found, expected) = (w[0].output(), w[1].input());
            if !found.fits(&expected) {
                return Err(PipelineError::Incompatible {
                    index: i + 1,
                    prev: i,
                    stage: w[1].name(),
                    expected: expected.to_string(),
                    found: found.to_string(),
                });
            }
        }
        Ok(Pipeline { stages })
    }

    pub fn single(stage: impl Into<Stage>) -> Self {
        Pipeline {
            stages: vec![stage.into()],
        }
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// `None` for the empty pipeline, which accepts anything.
    pub fn input(&self) -> Option<Signature> {
        self.stages.first().map(Stage::input)
    }

    pub fn output(&self) -> Option<Signature> {
        self.stages.last().map(Stage::output)
    }

    pub fn then(mut self, stage: impl Into<Stage>) -> Result<Self, PipelineError> {
        self.stages.push(stage.into());
        Pipeline::new(self.stages)
    }

    pub fn before(self, stage: impl Into<Stage>) -> Result<Self, PipelineError> {
        let mut stages = vec![stage.into()];
        stages.extend(self.stages);
        Pipeline::new(stages)
    }

    /// `self` followed by `next`.
    pub fn compose(mut self, next: Pipeline) -> Result<Self, PipelineError> {
        self.stages.extend(next.stages);
        Pipeline::new(self.stages)
    }

    pub fn run(&self, input: &Value) -> Result<Value, PipelineError> {
        let mut v = input.clone();
        for (index, stage) in self.stages.iter().enumerate() {
            v = stage.apply(&v).map_err(|error| PipelineError::Stage {
                index,
                stage: stage.name(),
                error,
            })?;
        }
        Ok(v)
    }
}

impl<S: Into<Stage>> From<S> for Pipeline {
    fn from(s: S) -> Self {
        Pipeline::single(s)
    }
}

pub fn run_pipeline(p: &Pipeline, input: &Value) -> Result<Value, PipelineError> {
    p.run(input)
}

/// Runs on a tree input.
pub fn run_pipeline_tree(p: &Pipeline, t: &Tree) -> Result<Value, PipelineError> {
    p.run(&Value::Tree(t.clone()))
}

/// Runs on a string input.
pub fn run_pipeline_word(p: &Pipeline, w: &Word) -> Result<Value, PipelineError> {
    p.run(&Value::Word(w.clone()))
}
