//! Deterministic bottom-up tree automata, used as regular lookahead.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::terms::{validate_name, RankedAlphabet, Symbol, TermError, Tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BtaError {
    #[error("unknown lookahead state `{0}`")]
    UnknownState(String),
    #[error("duplicate lookahead state `{0}`")]
    DuplicateState(String),
    #[error("automaton needs at least one state")]
    NoStates,
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("conflicting transitions for {letter}({children})", children = join(.children))]
    Conflict { letter: Symbol, children: Vec<Symbol> },
    #[error("automaton is not total; missing: {}", .0.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", "))]
    Partial(Vec<MissingTransition>),
}

fn join(v: &[Symbol]) -> String {
    v.iter().map(Symbol::as_str).collect::<Vec<_>>().join(",")
}

/// A `(letter, child states)` combination with no transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MissingTransition {
    pub letter: Symbol,
    pub children: Vec<Symbol>,
}

impl fmt::Display for MissingTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.children.is_empty() {
            write!(f, "{}", self.letter)
        } else {
            write!(f, "{}({})", self.letter, join(&self.children))
        }
    }
}

/// An automaton as written down, before the totality check.
#[derive(Debug, Clone)]
pub struct DbtaDef {
    pub alphabet: RankedAlphabet,
    pub states: Vec<Symbol>,
    /// `(letter, child states, target)`
    pub transitions: Vec<(Symbol, Vec<Symbol>, Symbol)>,
}

impl DbtaDef {
    fn resolve(&self) -> Result<(HashMap<(usize, usize), usize>, usize), BtaError> {
        if self.states.is_empty() {
            return Err(BtaError::NoStates);
        }
        let mut index = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            validate_name(s.as_str())?;
            if index.insert(s.clone(), i).is_some() {
                return Err(BtaError::DuplicateState(s.to_string()));
            }
        }
        let n = self.states.len();
        let state = |s: &Symbol| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| BtaError::UnknownState(s.to_string()))
        };
        let mut delta = HashMap::new();
        for (letter, children, target) in &self.transitions {
            let li = self
                .alphabet
                .index_of(letter.as_str())
                .ok_or_else(|| TermError::UnknownLetter(letter.to_string()))?;
            let arity = self.alphabet.letter(li).1;
            if arity != children.len() {
                return Err(TermError::ArityMismatch {
                    letter: letter.to_string(),
                    expected: arity,
                    found: children.len(),
                }
                .into());
            }
            let mut code = 0;
            for c in children {
                code = code * n + state(c)?;
            }
            let t = state(target)?;
            if let Some(old) = delta.insert((li, code), t) {
                if old != t {
                    return Err(BtaError::Conflict {
                        letter: letter.clone(),
                        children: children.clone(),
                    });
                }
            }
        }
        Ok((delta, n))
    }

    /// Every `(letter, child-state vector)` without a transition, in
    /// declaration order. Empty iff the automaton is total.
    pub fn check_total(&self) -> Result<Vec<MissingTransition>, BtaError> {
        let (delta, n) = self.resolve()?;
        let mut missing = Vec::new();
        for (li, (letter, arity)) in self.alphabet.letters().enumerate() {
            for code in 0..n.pow(arity as u32) {
                if !delta.contains_key(&(li, code)) {
                    missing.push(MissingTransition {
                        letter: letter.clone(),
                        children: decode(code, n, arity)
                            .into_iter()
                            .map(|s| self.states[s].clone())
                            .collect(),
                    });
                }
            }
        }
        Ok(missing)
    }

    /// Builds the automaton; partial automata are rejected.
    pub fn build(self) -> Result<Dbta, BtaError> {
        let missing = self.check_total()?;
        if !missing.is_empty() {
            return Err(BtaError::Partial(missing));
        }
        let (delta, n) = self.resolve()?;
        let table = self
            .alphabet
            .letters()
            .enumerate()
            .map(|(li, (_, arity))| {
                (0..n.pow(arity as u32)).map(|code| delta[&(li, code)]).collect()
            })
            .collect();
        Ok(Dbta {
            alphabet: self.alphabet,
            states: self.states,
            table,
        })
    }
}

/// Child-state vector for a mixed-radix code (first child most significant).
fn decode(mut code: usize, n: usize, arity: usize) -> Vec<usize> {
    let mut v = vec![0; arity];
    for slot in v.iter_mut().rev() {
        *slot = code % n;
        code /= n;
    }
    v
}

/// A total deterministic bottom-up tree automaton.
#[derive(Clone, PartialEq, Eq)]
pub struct Dbta {
    alphabet: RankedAlphabet,
    states: Vec<Symbol>,
    /// `table[letter][code(child states)]`
    table: Vec<Vec<usize>>,
}

impl Dbta {
    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[Symbol] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, s: usize) -> &Symbol {
        &self.states[s]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    /// Transition by letter index.
    pub fn step(&self, letter: usize, children: &[usize]) -> usize {
        let n = self.states.len();
        let code = children.iter().fold(0, |acc, &s| acc * n + s);
        self.table[letter][code]
    }

    /// Transition by letter name; `None` if the letter or arity is wrong.
    pub fn delta(&self, letter: &str, children: &[usize]) -> Option<usize> {
        let li = self.alphabet.index_of(letter)?;
        (self.alphabet.letter(li).1 == children.len()).then(|| self.step(li, children))
    }

    /// The state reached at the root of `t`. Panics if `t` is not over the alphabet.
    pub fn run(&self, t: &Tree) -> usize {
        let li = self
            .alphabet
            .index_of(t.label().as_str())
            .expect("tree over the automaton's alphabet");
        let children: Vec<usize> = t.children().iter().map(|c| self.run(c)).collect();
        self.step(li, &children)
    }

    /// All transitions `(letter, child states, target)`, in declaration order
    /// of letters and lexicographic order of child vectors.
    pub fn transitions(&self) -> impl Iterator<Item = (&Symbol, Vec<usize>, usize)> + '_ {
        let n = self.states.len();
        self.alphabet.letters().enumerate().flat_map(move |(li, (letter, arity))| {
            (0..n.pow(arity as u32))
                .map(move |code| (letter, decode(code, n, arity), self.table[li][code]))
        })
    }

    /// Child-state vectors of length `arity`, in lexicographic order.
    pub fn vectors(&self, arity: usize) -> impl Iterator<Item = Vec<usize>> {
        let n = self.states.len();
        (0..n.pow(arity as u32)).map(move |code| decode(code, n, arity))
    }

    pub fn to_def(&self) -> DbtaDef {
        DbtaDef {
            alphabet: self.alphabet.clone(),
            states: self.states.clone(),
            transitions: self
                .transitions()
                .map(|(l, cs, t)| {
                    (
                        l.clone(),
                        cs.into_iter().map(|s| self.states[s].clone()).collect(),
                        self.states[t].clone(),
                    )
                })
                .collect(),
        }
    }

    /// The automaton with states `r+` (the tree contains `letter`) and `r-`.
    pub fn contains_letter(alphabet: &RankedAlphabet, letter: &str) -> Dbta {
        let (plus, minus) = (Symbol::from("r+"), Symbol::from("r-"));
        let states = vec![plus.clone(), minus.clone()];
        let mut transitions = Vec::new();
        for (l, arity) in alphabet.letters() {
            for code in 0..2usize.pow(arity as u32) {
                let v = decode(code, 2, arity);
                let hit = l == letter || v.contains(&0);
                transitions.push((
                    l.clone(),
                    v.iter().map(|&s| states[s].clone()).collect(),
                    if hit { plus.clone() } else { minus.clone() },
                ));
            }
        }
        DbtaDef {
            alphabet: alphabet.clone(),
            states,
            transitions,
        }
        .build()
        .expect("contains-letter automaton is total")
    }
}

impl fmt::Debug for Dbta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dbta")
            .field("alphabet", &self.alphabet)
            .field("states", &self.states)
            .finish_non_exhaustive()
    }
}

pub fn run_dbta(a: &Dbta, t: &Tree) -> usize {
    a.run(t)
}

/// An input tree decorated with letter indices and lookahead states.
/// Without a lookahead automaton every node carries state 0.
#[derive(Debug)]
pub struct Annotated<'t> {
    pub tree: &'t Tree,
    pub letter: usize,
    pub state: usize,
    pub children: Vec<Annotated<'t>>,
}

impl<'t> Annotated<'t> {
    pub fn new(
        tree: &'t Tree,
        alphabet: &RankedAlphabet,
        lookahead: Option<&Dbta>,
    ) -> Result<Self, TermError> {
        tree.check(alphabet)?;
        Ok(Self::build(tree, alphabet, lookahead))
    }

    fn build(tree: &'t Tree, alphabet: &RankedAlphabet, lookahead: Option<&Dbta>) -> Self {
        let letter = alphabet
            .index_of(tree.label().as_str())
            .expect("checked tree");
        let children: Vec<Annotated<'t>> = tree
            .children()
            .iter()
            .map(|c| Self::build(c, alphabet, lookahead))
            .collect();
        let state = match lookahead {
            None => 0,
            Some(a) => {
                let li = a
                    .alphabet()
                    .index_of(tree.label().as_str())
                    .expect("lookahead alphabet equals input alphabet");
                let v: Vec<usize> = children.iter().map(|c| c.state).collect();
                a.step(li, &v)
            }
        };
        Annotated {
            tree,
            letter,
            state,
            children,
        }
    }

    pub fn child_states(&self) -> Vec<usize> {
        self.children.iter().map(|c| c.state).collect()
    }
}
