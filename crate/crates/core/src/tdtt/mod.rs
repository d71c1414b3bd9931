//! Deterministic top-down tree(-to-string) transducers with optional regular
//! lookahead.
//!
//! Two semantics are provided. [`TopDownTT::run_topdown`] rewrites
//! `initial<t>` to normal form, calling states on subtrees. [`TopDownTT::run_bottomup`]
//! reads each state as a register holding `q<t>` for the current subtree and
//! fills all registers in one post-order pass. [`register::to_register_machine`]
//! compiles the lookahead into the finite control of a bottom-up machine.

mod register;
mod run;

use std::collections::HashSet;
use std::fmt;

pub use register::{
    run_register_machine, to_register_machine, MachineRun, MachineTransition, RegExpr, RegItem,
    RegisterMachine, Update,
};
pub use run::{BottomUpRun, RegisterTrace};

use crate::bta::Dbta;
use crate::rules::{check_pattern, DefError, Diagnostic, Dispatch, Rule};
use crate::terms::{validate_name, RankedAlphabet, Symbol};

/// Right-hand side in tree mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreeRhs {
    Letter(Symbol, Vec<TreeRhs>),
    /// `q<t_child>` (0-based child)
    Call { state: usize, child: usize },
}

/// One factor of a string-mode right-hand side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StrItem {
    Lit(Symbol),
    Call { state: usize, child: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TdRhs {
    Tree(TreeRhs),
    /// Concatenation; empty means the empty string.
    Str(Vec<StrItem>),
}

/// Trees over an output alphabet, or strings over output symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutputKind {
    Tree(RankedAlphabet),
    String(Vec<Symbol>),
}

impl OutputKind {
    pub fn is_string(&self) -> bool {
        matches!(self, OutputKind::String(_))
    }
}

/// A transducer as written down.
#[derive(Debug, Clone)]
pub struct TopDownDef {
    pub input: RankedAlphabet,
    pub output: OutputKind,
    pub states: Vec<Symbol>,
    pub initial: usize,
    pub lookahead: Option<Dbta>,
    pub rules: Vec<Rule<TdRhs>>,
}

impl TopDownDef {
    /// Every violated invariant, including determinism (checked on each
    /// concrete lookahead vector).
    pub fn check_wellformed(&self) -> Vec<Diagnostic> {
        self.check_with_dispatch().1
    }

    fn check_with_dispatch(&self) -> (Dispatch, Vec<Diagnostic>) {
        let mut out = Vec::new();
        check_states(&self.states, &mut out);
        if self.initial >= self.states.len() {
            out.push(Diagnostic::UnknownState {
                index: self.initial,
            });
        }
        match &self.output {
            OutputKind::Tree(a) => {
                for (l, _) in a.letters() {
                    check_name(l.as_str(), &mut out);
                }
            }
            OutputKind::String(syms) => {
                for s in syms {
                    check_name(s.as_str(), &mut out);
                }
            }
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
            let cx = RhsCheck {
                def: self,
                state: self.states[rule.state].clone(),
                letter: rule.letter.clone(),
                arity,
            };
            match (&rule.rhs, &self.output) {
                (TdRhs::Tree(t), OutputKind::Tree(a)) => cx.tree(t, a, &mut out),
                (TdRhs::Str(items), OutputKind::String(syms)) => cx.string(items, syms, &mut out),
                _ => out.push(Diagnostic::OutputMode {
                    state: cx.state.clone(),
                    letter: cx.letter.clone(),
                }),
            }
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
}

pub(crate) fn check_states(states: &[Symbol], out: &mut Vec<Diagnostic>) {
    let mut seen = HashSet::new();
    for s in states {
        check_name(s.as_str(), out);
        if !seen.insert(s) {
            out.push(Diagnostic::DuplicateState { state: s.clone() });
        }
    }
}

pub(crate) fn check_name(name: &str, out: &mut Vec<Diagnostic>) {
    if let Err(crate::terms::TermError::InvalidName { name, reason }) = validate_name(name) {
        out.push(Diagnostic::BadName { name, reason });
    }
}

struct RhsCheck<'a> {
    def: &'a TopDownDef,
    state: Symbol,
    letter: Symbol,
    arity: usize,
}

impl RhsCheck<'_> {
    fn call(&self, state: usize, child: usize, out: &mut Vec<Diagnostic>) {
        if state >= self.def.states.len() {
            out.push(Diagnostic::UnknownState { index: state });
        }
        if child >= self.arity {
            out.push(Diagnostic::ChildOutOfRange {
                state: self.state.clone(),
                letter: self.letter.clone(),
                child,
                arity: self.arity,
            });
        }
    }

    fn tree(&self, rhs: &TreeRhs, alphabet: &RankedAlphabet, out: &mut Vec<Diagnostic>) {
        match rhs {
            TreeRhs::Call { state, child } => self.call(*state, *child, out),
            TreeRhs::Letter(l, cs) => {
                match alphabet.arity(l.as_str()) {
                    None => out.push(Diagnostic::OutputLetter {
                        state: self.state.clone(),
                        letter: self.letter.clone(),
                        output: l.clone(),
                    }),
                    Some(a) if a != cs.len() => out.push(Diagnostic::OutputArity {
                        state: self.state.clone(),
                        letter: self.letter.clone(),
                        output: l.clone(),
                        expected: a,
                        found: cs.len(),
                    }),
                    Some(_) => {}
                }
                for c in cs {
                    self.tree(c, alphabet, out);
                }
            }
        }
    }

    fn string(&self, items: &[StrItem], symbols: &[Symbol], out: &mut Vec<Diagnostic>) {
        for item in items {
            match item {
                StrItem::Call { state, child } => self.call(*state, *child, out),
                StrItem::Lit(s) if !symbols.contains(s) => out.push(Diagnostic::OutputSymbol {
                    state: self.state.clone(),
                    letter: self.letter.clone(),
                    symbol: s.clone(),
                }),
                StrItem::Lit(_) => {}
            }
        }
    }
}

/// A well-formed deterministic top-down transducer.
#[derive(Clone)]
pub struct TopDownTT {
    def: TopDownDef,
    dispatch: Dispatch,
}

impl TopDownTT {
    pub fn new(def: TopDownDef) -> Result<Self, DefError> {
        let (dispatch, diagnostics) = def.check_with_dispatch();
        if !diagnostics.is_empty() {
            return Err(DefError::IllFormed(diagnostics));
        }
        Ok(TopDownTT { def, dispatch })
    }

    pub fn def(&self) -> &TopDownDef {
        &self.def
    }

    pub fn into_def(self) -> TopDownDef {
        self.def
    }

    pub fn input(&self) -> &RankedAlphabet {
        &self.def.input
    }

    pub fn output(&self) -> &OutputKind {
        &self.def.output
    }

    pub fn states(&self) -> &[Symbol] {
        &self.def.states
    }

    pub fn initial(&self) -> usize {
        self.def.initial
    }

    pub fn lookahead(&self) -> Option<&Dbta> {
        self.def.lookahead.as_ref()
    }

    pub fn rules(&self) -> &[Rule<TdRhs>] {
        &self.def.rules
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.def.states.iter().position(|s| s == name)
    }

    /// Number of lookahead states seen by the dispatch (1 without lookahead).
    pub fn lookahead_states(&self) -> usize {
        self.lookahead().map_or(1, Dbta::state_count)
    }

    /// The rule selected for `state` at a node with the given letter index and
    /// child lookahead states.
    pub fn find_rule(&self, state: usize, letter: usize, children: &[usize]) -> Option<&Rule<TdRhs>> {
        self.dispatch
            .find(state, letter, children)
            .map(|i| &self.def.rules[i])
    }
}

impl fmt::Debug for TopDownTT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TopDownTT")
            .field("states", &self.def.states)
            .field("rules", &self.def.rules.len())
            .finish_non_exhaustive()
    }
}

pub fn check_wellformed(def: &TopDownDef) -> Result<(), Vec<Diagnostic>> {
    let d = def.check_wellformed();
    if d.is_empty() {
        Ok(())
    } else {
        Err(d)
    }
}
