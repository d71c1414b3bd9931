//! Deterministic tree transducers and their conversions.
//!
//! The crate covers ranked trees and contexts ([`terms`]), bottom-up tree
//! automata used as regular lookahead ([`bta`]), top-down tree(-to-string)
//! transducers ([`tdtt`]), macro tree transducers ([`mtt`]), right-to-left
//! streaming string transducers ([`sst`]) and DAG-shared evaluation
//! ([`sharing`]). Every model has a top-down (rewriting) and a bottom-up
//! (register) reading, and every conversion can be checked exhaustively on
//! small inputs with [`equiv::check_equiv`].

pub mod bta;
pub mod builtins;
pub mod dot;
pub mod equiv;
pub mod fuzz;
pub mod mtt;
pub mod pipeline;
pub mod rules;
pub mod sharing;
pub mod sst;
pub mod syntax;
pub mod tdtt;
pub mod terms;
pub mod value;

pub use bta::{run_dbta, Dbta, DbtaDef};
pub use mtt::MacroTT;
pub use rules::{DefError, Diagnostic, Rule};
pub use tdtt::TopDownTT;
pub use terms::{Context, RankedAlphabet, Symbol, Term, TermDag, TermError, Tree, Word};
pub use value::{TransduceError, Value};
pub use equiv::{check_equiv, EquivVerdict};
pub use pipeline::{run_pipeline, Pipeline, Stage};
pub use sst::Sst;
pub use syntax::{parse_definition, Definition, ParseError};
