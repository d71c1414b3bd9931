//! Deterministic macro tree transducers: states take parameters, and the
//! value of `q<t>` is a context of arity `arity(q)`.
//!
//! [`MacroTT::run_oi`] rewrites outermost-first (call-by-name): arguments are
//! passed unevaluated, so an argument that is never used cannot make the
//! output undefined. [`MacroTT::run_bottomup`] computes one context register
//! per state and follows the same definedness convention.

mod convert;
mod run;

use std::fmt;

pub use convert::{eliminate_lookahead, mtt_unary_to_tdtts, tdtts_to_mtt_unary, Tail};

use crate::bta::Dbta;
use crate::rules::{check_pattern, DefError, Diagnostic, Dispatch, Rule};
use crate::tdtt::{check_name, check_states};
use crate::terms::{RankedAlphabet, Symbol};

/// Right-hand side of a macro rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MacroRhs {
    Letter(Symbol, Vec<MacroRhs>),
    /// `x_{j+1}`
    Param(usize),
    /// `q<t_{child+1}>(args)`
    Call {
        state: usize,
        child: usize,
        args: Vec<MacroRhs>,
    },
}

impl MacroRhs {
    pub fn size(&self) -> usize {
        match self {
            MacroRhs::Param(_) => 1,
            MacroRhs::Letter(_, cs) => 1 + cs.iter().map(MacroRhs::size).sum::<usize>(),
            MacroRhs::Call { args, .. } => 1 + args.iter().map(MacroRhs::size).sum::<usize>(),
        }
    }

    pub fn leaf(letter: impl Into<Symbol>) -> Self {
        MacroRhs::Letter(letter.into(), Vec::new())
    }

    pub fn call(state: usize, child: usize, args: Vec<MacroRhs>) -> Self {
        MacroRhs::Call { state, child, args }
    }
}

#[derive(Debug, Clone)]
pub struct MacroDef {
    pub input: RankedAlphabet,
    pub output: RankedAlphabet,
    pub states: Vec<Symbol>,
    /// Parameter count of each state.
    pub arities: Vec<usize>,
    pub initial: usize,
    pub lookahead: Option<Dbta>,
    pub rules: Vec<Rule<MacroRhs>>,
}

impl MacroDef {
    pub fn check_wellformed(&self) -> Vec<Diagnostic> {
        self.check_with_dispatch().1
    }

    fn check_with_dispatch(&self) -> (Dispatch, Vec<Diagnostic>) {
        let mut out = Vec::new();
        check_states(&self.states, &mut out);
        for (l, _) in self.output.letters() {
            check_name(l.as_str(), &mut out);
        }
        if self.arities.len() != self.states.len() {
            out.push(Diagnostic::Machine(format!(
                "{} states but {} arities",
                self.states.len(),
                self.arities.len()
            )));
            return (Dispatch::default(), out);
        }
        match self.arities.get(self.initial) {
            None => out.push(Diagnostic::UnknownState {
                index: self.initial,
            }),
            Some(&a) if a != 0 => out.push(Diagnostic::InitialArity {
                state: self.states[self.initial].clone(),
                arity: a,
            }),
            Some(_) => {}
        }
        if let Some(la) = &self.lookahead {
            if !la.alphabet().same_letters(&self.input) {
                out.push(Diagnostic::LookaheadAlphabet);
            }
        }
        for rule in &self.rules {
            let Some(arity) =
                check_pattern(rule, &self.states, &self.input, self.lookahead.as_ref(), &mut out)
            else {
                continue;
            };
            self.check_rhs(rule, arity, &rule.rhs, &mut out);
        }
        let (dispatch, ambiguities) = Dispatch::build(
            &self.rules,
            &self.states,
            &self.input,
            self.lookahead.as_ref(),
            |a, b| a == b,
        );
        out.extend(ambiguities);
        (dispatch, out)
    }

    fn check_rhs(&self, rule: &Rule<MacroRhs>, arity: usize, rhs: &MacroRhs, out: &mut Vec<Diagnostic>) {
        let state = || self.states[rule.state].clone();
        let letter = || rule.letter.clone();
        match rhs {
            MacroRhs::Param(j) => {
                let params = self.arities[rule.state];
                if *j >= params {
                    out.push(Diagnostic::ParamOutOfRange {
                        state: state(),
                        letter: letter(),
                        index: *j,
                        arity: params,
                    });
                }
            }
            MacroRhs::Letter(l, cs) => {
                match self.output.arity(l.as_str()) {
                    None => out.push(Diagnostic::OutputLetter {
                        state: state(),
                        letter: letter(),
                        output: l.clone(),
                    }),
                    Some(a) if a != cs.len() => out.push(Diagnostic::OutputArity {
                        state: state(),
                        letter: letter(),
                        output: l.clone(),
                        expected: a,
                        found: cs.len(),
                    }),
                    Some(_) => {}
                }
                for c in cs {
                    self.check_rhs(rule, arity, c, out);
                }
            }
            MacroRhs::Call { state: q, child, args } => {
                match self.arities.get(*q) {
                    None => out.push(Diagnostic::UnknownState { index: *q }),
                    Some(&a) if a != args.len() => out.push(Diagnostic::CallArguments {
                        state: state(),
                        letter: letter(),
                        callee: self.states[*q].clone(),
                        expected: a,
                        found: args.len(),
                    }),
                    Some(_) => {}
                }
                if *child >= arity {
                    out.push(Diagnostic::ChildOutOfRange {
                        state: state(),
                        letter: letter(),
                        child: *child,
                        arity,
                    });
                }
                for a in args {
                    self.check_rhs(rule, arity, a, out);
                }
            }
        }
    }
}

/// A well-formed deterministic macro tree transducer.
#[derive(Clone)]
pub struct MacroTT {
    def: MacroDef,
    dispatch: Dispatch,
}

impl MacroTT {
    pub fn new(def: MacroDef) -> Result<Self, DefError> {
        let (dispatch, diagnostics) = def.check_with_dispatch();
        if !diagnostics.is_empty() {
            return Err(DefError::IllFormed(diagnostics));
        }
        Ok(MacroTT { def, dispatch })
    }

    pub fn def(&self) -> &MacroDef {
        &self.def
    }

    pub fn into_def(self) -> MacroDef {
        self.def
    }

    pub fn input(&self) -> &RankedAlphabet {
        &self.def.input
    }

    pub fn output(&self) -> &RankedAlphabet {
        &self.def.output
    }

    pub fn states(&self) -> &[Symbol] {
        &self.def.states
    }

    pub fn arity(&self, state: usize) -> usize {
        self.def.arities[state]
    }

    pub fn initial(&self) -> usize {
        self.def.initial
    }

    pub fn lookahead(&self) -> Option<&Dbta> {
        self.def.lookahead.as_ref()
    }

    pub fn rules(&self) -> &[Rule<MacroRhs>] {
        &self.def.rules
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.def.states.iter().position(|s| s == name)
    }

    pub fn find_rule(&self, state: usize, letter: usize, children: &[usize]) -> Option<&Rule<MacroRhs>> {
        self.dispatch
            .find(state, letter, children)
            .map(|i| &self.def.rules[i])
    }

    /// Every output letter has arity at most one and exactly one is nullary.
    pub fn is_unary_output(&self) -> bool {
        self.def.output.string_end_marker().is_some()
    }
}

impl fmt::Debug for MacroTT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MacroTT")
            .field("states", &self.def.states)
            .field("rules", &self.def.rules.len())
            .finish_non_exhaustive()
    }
}
