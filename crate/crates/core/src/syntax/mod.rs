//! The textual definition format for all machine models.
//!
//! A top-down transducer:
//!
//! ```text
//! input {a:2,b:1,c:0}
//! output {a:2,b:1,c:0}          # or: output string {a,b,c}
//! states {q0,q1}                # macro transducers: states {q0:0,q1:1}
//! initial q0
//! lookahead {
//!   states {r+,r-};
//!   delta b(r+)->r+; delta c->r-; ...
//! }
//! rules {
//!   q0<a(t1,t2)> -> a(q0<t2>,q0<t1>);
//!   q0<b(t1|r+)> -> b(q0<t1>);
//!   q1<a(t,u)>(x) -> q1<u>(q1<u>(x));      # macro rule with a parameter
//! }
//! ```
//!
//! String right-hand sides concatenate with `.`; quoted symbols are
//! literals, `""` is the empty string, and a bare name is a literal unless
//! followed by `<`. Register machines are written `register-machine { ... }`
//! and streaming string transducers `sst { ... }`. Everything the printers
//! produce parses back to an equal definition.

mod lexer;
mod parse;
mod print;

use std::fmt;

use thiserror::Error;

use crate::bta::{BtaError, Dbta};
use crate::mtt::MacroTT;
use crate::rules::DefError;
use crate::sst::{Sst, SstError};
use crate::tdtt::{RegisterMachine, TopDownTT};
use crate::terms::TermError;

pub use parse::{parse_definition, parse_mtt, parse_register_machine, parse_sst, parse_tdtt};
pub use print::{print_dbta, print_mtt, print_register_machine, print_sst, print_tdtt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("lookahead: {0}")]
    Lookahead(#[from] BtaError),
    #[error(transparent)]
    Definition(#[from] DefError),
    #[error(transparent)]
    Sst(#[from] SstError),
    #[error("expected {expected}, found {found}")]
    Kind {
        expected: &'static str,
        found: &'static str,
    },
}

/// Any parsed definition file.
#[derive(Debug, Clone)]
pub enum Definition {
    TopDown(TopDownTT),
    Macro(MacroTT),
    Machine(RegisterMachine),
    Sst(Sst),
}

impl Definition {
    pub fn kind(&self) -> &'static str {
        match self {
            Definition::TopDown(_) => "a top-down transducer",
            Definition::Macro(_) => "a macro tree transducer",
            Definition::Machine(_) => "a register machine",
            Definition::Sst(_) => "a streaming string transducer",
        }
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Definition::TopDown(t) => f.write_str(&print_tdtt(t)),
            Definition::Macro(m) => f.write_str(&print_mtt(m)),
            Definition::Machine(m) => f.write_str(&print_register_machine(m)),
            Definition::Sst(s) => f.write_str(&print_sst(s)),
        }
    }
}

impl fmt::Display for TopDownTT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_tdtt(self))
    }
}

impl fmt::Display for MacroTT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_mtt(self))
    }
}

impl fmt::Display for RegisterMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_register_machine(self))
    }
}

impl fmt::Display for Sst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_sst(self))
    }
}

impl fmt::Display for Dbta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_dbta(self))
    }
}
