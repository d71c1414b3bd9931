//! Ranked alphabets, trees, contexts, term DAGs and the string codecs.

mod alphabet;
mod dag;
mod enumerate;
mod parse;
mod symbol;
mod tree;

pub use alphabet::{is_parameter_name, validate_name, RankedAlphabet, RESERVED_CHARS};
pub use dag::{dag_stats, unfold, DagNode, TermDag};
pub use enumerate::{enumerate_trees, enumerate_words, trees_by_size};
pub use parse::{parse_context, parse_term};
pub use symbol::{Symbol, Word};
pub use tree::{decode_string, encode_string, tree_size, yield_of, Context, Term, Tree};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("letter `{letter}` has arity {expected} but was given {found} children")]
    ArityMismatch {
        letter: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid name `{name}`: {reason}")]
    InvalidName { name: String, reason: String },
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("neutral letter `{0}` must be nullary")]
    NeutralNotNullary(String),
    #[error("alphabet has no nullary letter, so it has no finite trees")]
    NoNullaryLetter,
    #[error("alphabet is not unary letters plus exactly one nullary end marker")]
    NotStringAlphabet,
    #[error("not a string-encoding chain: {0}")]
    NotAChain(String),
    #[error("parameter x{index} out of range for arity {arity}")]
    ParamOutOfRange { index: usize, arity: usize },
    #[error("expected {expected} arguments, found {found}")]
    ArgumentCount { expected: usize, found: usize },
    #[error("dag node {0} does not exist")]
    MissingNode(usize),
    #[error("dag has a cycle through node {0}")]
    Cycle(usize),
    #[error("dag node {0} is not reachable from the root")]
    Unreachable(usize),
}
