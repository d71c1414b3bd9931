//! Runtime values and transduction errors shared by all machine models.

use std::fmt;

use thiserror::Error;

use crate::terms::{Symbol, TermError, Tree, Word};

/// What a transducer consumes or produces.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Tree(Tree),
    Word(Word),
}

impl Value {
    pub fn as_tree(&self) -> Option<&Tree> {
        match self {
            Value::Tree(t) => Some(t),
            Value::Word(_) => None,
        }
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            Value::Word(w) => Some(w),
            Value::Tree(_) => None,
        }
    }

    pub fn into_tree(self) -> Option<Tree> {
        match self {
            Value::Tree(t) => Some(t),
            Value::Word(_) => None,
        }
    }

    pub fn into_word(self) -> Option<Word> {
        match self {
            Value::Word(w) => Some(w),
            Value::Tree(_) => None,
        }
    }
}

impl From<Tree> for Value {
    fn from(t: Tree) -> Self {
        Value::Tree(t)
    }
}

impl From<Word> for Value {
    fn from(w: Word) -> Self {
        Value::Word(w)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Tree(t) => write!(f, "{t}"),
            Value::Word(w) => write!(f, "\"{w}\""),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// 1-based, dot-separated; the root is `ε`.
pub fn format_path(path: &[usize]) -> String {
    if path.is_empty() {
        "ε".to_string()
    } else {
        path.iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransduceError {
    /// No rule applies: the computed function is undefined on this input.
    #[error(
        "undefined transition: state {state} at letter {letter}{} (input path {})",
        if .lookahead.is_empty() { String::new() } else {
            format!(" with lookahead ({})", .lookahead.iter().map(Symbol::as_str).collect::<Vec<_>>().join(","))
        },
        format_path(.path)
    )]
    UndefinedTransition {
        state: Symbol,
        letter: Symbol,
        lookahead: Vec<Symbol>,
        path: Vec<usize>,
    },
    #[error("invalid input: {0}")]
    InvalidInput(#[from] TermError),
    #[error("input of the wrong kind: expected {expected}")]
    WrongKind { expected: &'static str },
    #[error("output register undefined")]
    UndefinedOutput,
}
