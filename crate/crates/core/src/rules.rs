//! Rule tables shared by the top-down and macro transducers: lookahead
//! patterns, specificity-based dispatch and well-formedness diagnostics.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::bta::Dbta;
use crate::terms::{RankedAlphabet, Symbol};

/// One entry per child: a required lookahead state, or `None` for `_`.
pub type Pattern = Vec<Option<usize>>;

/// `state<letter(t1|p1,...,tk|pk)>(params) -> rhs`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule<R> {
    pub state: usize,
    pub letter: Symbol,
    pub pattern: Pattern,
    pub rhs: R,
}

/// A problem found by a well-formedness check. Each names the offending
/// rule or `(state, letter, lookahead vector)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    UnknownState { index: usize },
    UnknownLetter { state: Symbol, letter: Symbol },
    PatternArity { state: Symbol, letter: Symbol, expected: usize, found: usize },
    LookaheadWithoutAutomaton { state: Symbol, letter: Symbol },
    UnknownLookaheadState { state: Symbol, letter: Symbol, index: usize },
    LookaheadAlphabet,
    Ambiguous { state: Symbol, letter: Symbol, vector: Vec<Symbol> },
    ChildOutOfRange { state: Symbol, letter: Symbol, child: usize, arity: usize },
    OutputLetter { state: Symbol, letter: Symbol, output: Symbol },
    OutputArity { state: Symbol, letter: Symbol, output: Symbol, expected: usize, found: usize },
    OutputSymbol { state: Symbol, letter: Symbol, symbol: Symbol },
    OutputMode { state: Symbol, letter: Symbol },
    ParamOutOfRange { state: Symbol, letter: Symbol, index: usize, arity: usize },
    CallArguments { state: Symbol, letter: Symbol, callee: Symbol, expected: usize, found: usize },
    InitialArity { state: Symbol, arity: usize },
    DuplicateState { state: Symbol },
    BadName { name: String, reason: String },
    /// A register-machine transition problem, already located.
    Machine(String),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Diagnostic::*;
        match self {
            UnknownState { index } => write!(f, "rule refers to unknown state #{index}"),
            UnknownLetter { state, letter } => write!(f, "{state}<{letter}>: unknown input letter"),
            PatternArity { state, letter, expected, found } => write!(
                f,
                "{state}<{letter}>: pattern has {found} children, letter has arity {expected}"
            ),
            LookaheadWithoutAutomaton { state, letter } => write!(
                f,
                "{state}<{letter}>: lookahead condition but no lookahead automaton"
            ),
            UnknownLookaheadState { state, letter, index } => {
                write!(f, "{state}<{letter}>: unknown lookahead state #{index}")
            }
            LookaheadAlphabet => write!(f, "lookahead alphabet differs from the input alphabet"),
            Ambiguous { state, letter, vector } => write!(
                f,
                "{state}<{letter}({})>: several incomparable rules apply",
                vector.iter().map(Symbol::as_str).collect::<Vec<_>>().join(",")
            ),
            ChildOutOfRange { state, letter, child, arity } => write!(
                f,
                "{state}<{letter}>: child t{} out of range for arity {arity}",
                child + 1
            ),
            OutputLetter { state, letter, output } => {
                write!(f, "{state}<{letter}>: unknown output letter `{output}`")
            }
            OutputArity { state, letter, output, expected, found } => write!(
                f,
                "{state}<{letter}>: output letter `{output}` has arity {expected}, given {found}"
            ),
            OutputSymbol { state, letter, symbol } => {
                write!(f, "{state}<{letter}>: unknown output symbol `{symbol}`")
            }
            OutputMode { state, letter } => {
                write!(f, "{state}<{letter}>: right-hand side does not match the output kind")
            }
            ParamOutOfRange { state, letter, index, arity } => write!(
                f,
                "{state}<{letter}>: parameter x{} out of range for arity {arity}",
                index + 1
            ),
            CallArguments { state, letter, callee, expected, found } => write!(
                f,
                "{state}<{letter}>: call to `{callee}` with {found} arguments, expected {expected}"
            ),
            InitialArity { state, arity } => {
                write!(f, "initial state `{state}` has arity {arity}, must be 0")
            }
            DuplicateState { state } => write!(f, "duplicate state `{state}`"),
            BadName { name, reason } => write!(f, "invalid name `{name}`: {reason}"),
            Machine(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DefError {
    #[error("ill-formed definition:\n  {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n  "))]
    IllFormed(Vec<Diagnostic>),
    #[error("{0}")]
    Unsupported(String),
}

/// `pattern` is at least as specific as `other` (both assumed to match the
/// same concrete vector).
fn at_least_as_specific(pattern: &Pattern, other: &Pattern) -> bool {
    pattern
        .iter()
        .zip(other)
        .all(|(p, o)| o.is_none() || p.is_some())
}

fn matches(pattern: &Pattern, vector: &[usize]) -> bool {
    pattern
        .iter()
        .zip(vector)
        .all(|(p, v)| p.map_or(true, |p| p == *v))
}

/// Precomputed rule selection: `(state, letter, lookahead vector) -> rule`.
#[derive(Debug, Clone, Default)]
pub struct Dispatch {
    table: HashMap<(usize, usize, usize), usize>,
    radix: usize,
}

impl Dispatch {
    /// Resolves every concrete lookahead vector to its most specific rule.
    /// `same_rhs(i, j)` tells whether two rules with equal patterns are
    /// harmless duplicates. Ambiguities are reported, not resolved.
    pub fn build<R>(
        rules: &[Rule<R>],
        states: &[Symbol],
        input: &RankedAlphabet,
        lookahead: Option<&Dbta>,
        same_rhs: impl Fn(&R, &R) -> bool,
    ) -> (Dispatch, Vec<Diagnostic>) {
        let radix = lookahead.map_or(1, Dbta::state_count);
        let la_name = |s: usize| -> Symbol {
            lookahead.map_or_else(|| Symbol::from("_"), |a| a.state_name(s).clone())
        };
        let mut groups: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            if let Some(li) = input.index_of(r.letter.as_str()) {
                groups.entry((r.state, li)).or_default().push(i);
            }
        }
        let mut keys: Vec<_> = groups.keys().copied().collect();
        keys.sort_unstable();
        let mut table = HashMap::new();
        let mut diagnostics = Vec::new();
        for (state, li) in keys {
            let group = &groups[&(state, li)];
            let arity = input.letter(li).1;
            for code in 0..radix.pow(arity as u32) {
                let vector = decode(code, radix, arity);
                let candidates: Vec<usize> = group
                    .iter()
                    .copied()
                    .filter(|&i| matches(&rules[i].pattern, &vector))
                    .collect();
                let best = candidates.iter().copied().find(|&i| {
                    candidates.iter().all(|&j| {
                        at_least_as_specific(&rules[i].pattern, &rules[j].pattern)
                            && (rules[i].pattern != rules[j].pattern
                                || same_rhs(&rules[i].rhs, &rules[j].rhs))
                    })
                });
                match best {
                    Some(i) => {
                        table.insert((state, li, code), i);
                    }
                    None if candidates.is_empty() => {}
                    None => diagnostics.push(Diagnostic::Ambiguous {
                        state: states.get(state).cloned().unwrap_or_else(|| "?".into()),
                        letter: input.letter(li).0.clone(),
                        vector: vector.iter().map(|&s| la_name(s)).collect(),
                    }),
                }
            }
        }
        (Dispatch { table, radix }, diagnostics)
    }

    /// The rule applying to `state` at a node with letter index `letter`
    /// whose children are in lookahead states `children`.
    pub fn find(&self, state: usize, letter: usize, children: &[usize]) -> Option<usize> {
        let code = children.iter().fold(0, |acc, &s| acc * self.radix + s);
        self.table.get(&(state, letter, code)).copied()
    }
}

fn decode(mut code: usize, n: usize, arity: usize) -> Vec<usize> {
    let mut v = vec![0; arity];
    for slot in v.iter_mut().rev() {
        *slot = code % n;
        code /= n;
    }
    v
}

/// `base`, or `base_1`, `base_2`, ... whichever is first not `taken`.
pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> Symbol {
    if !taken(base) {
        return Symbol::from(base);
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !taken(n))
        .map(Symbol::from)
        .expect("unbounded supply of names")
}

/// Checks the pattern of a rule against the input alphabet and lookahead.
pub(crate) fn check_pattern<R>(
    rule: &Rule<R>,
    states: &[Symbol],
    input: &RankedAlphabet,
    lookahead: Option<&Dbta>,
    out: &mut Vec<Diagnostic>,
) -> Option<usize> {
    let Some(state) = states.get(rule.state).cloned() else {
        out.push(Diagnostic::UnknownState { index: rule.state });
        return None;
    };
    let letter = rule.letter.clone();
    let Some(arity) = input.arity(letter.as_str()) else {
        out.push(Diagnostic::UnknownLetter { state, letter });
        return None;
    };
    if rule.pattern.len() != arity {
        out.push(Diagnostic::PatternArity {
            state,
            letter,
            expected: arity,
            found: rule.pattern.len(),
        });
        return None;
    }
    for &p in rule.pattern.iter().flatten() {
        match lookahead {
            None => {
                out.push(Diagnostic::LookaheadWithoutAutomaton { state, letter });
                return None;
            }
            Some(a) if p >= a.state_count() => {
                out.push(Diagnostic::UnknownLookaheadState { state, letter, index: p });
                return None;
            }
            _ => {}
        }
    }
    Some(arity)
}
