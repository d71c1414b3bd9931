use std::collections::HashMap;
use std::fmt;

use crate::bta::DbtaDef;
use crate::rules::{fresh_name, DefError, Rule};
use crate::tdtt::{OutputKind, StrItem, TdRhs, TopDownDef, TopDownTT};
use crate::terms::{RankedAlphabet, Symbol};

use super::{MacroDef, MacroRhs, MacroTT};

/// Builds `sel<t1>(B_1,...,B_n)` where `B_j` dispatches on the next child
/// assuming the previous ones are fixed, down to `leaf(vector)`.
fn tower(
    arity: usize,
    n: usize,
    sel: usize,
    prefix: &mut Vec<usize>,
    leaf: &mut impl FnMut(&[usize]) -> MacroRhs,
) -> MacroRhs {
    if prefix.len() == arity {
        return leaf(prefix);
    }
    let child = prefix.len();
    let branches = (0..n)
        .map(|j| {
            prefix.push(j);
            let b = tower(arity, n, sel, prefix, leaf);
            prefix.pop();
            b
        })
        .collect();
    MacroRhs::call(sel, child, branches)
}

/// An equivalent transducer without lookahead. The lookahead state of a
/// subtree `t` is recovered by the fresh state `sel` of arity `n`, whose
/// value on `t` is the projection onto the parameter indexed by that state.
/// A fresh rule-less `sink` stands in where no source rule applies.
/// Transducers without lookahead are returned unchanged.
pub fn eliminate_lookahead(m: &MacroTT) -> MacroTT {
    let Some(la) = m.lookahead() else {
        return m.clone();
    };
    let n = la.state_count();
    let sel_name = fresh_name("sel", |s| m.state_index(s).is_some());
    let sink_name = fresh_name("sink", |s| m.state_index(s).is_some() || s == sel_name.as_str());
    let mut states = m.states().to_vec();
    let mut arities = m.def().arities.clone();
    let (sel, sink) = (states.len(), states.len() + 1);
    states.extend([sel_name, sink_name]);
    arities.extend([n, 0]);
    let mut rules = Vec::new();
    for (li, (letter, k)) in m.input().letters().enumerate() {
        rules.push(Rule {
            state: sel,
            letter: letter.clone(),
            pattern: vec![None; k],
            rhs: tower(k, n, sel, &mut Vec::new(), &mut |v| MacroRhs::Param(la.step(li, v))),
        });
        for q in 0..m.states().len() {
            let mut any = false;
            let rhs = tower(k, n, sel, &mut Vec::new(), &mut |v| match m.find_rule(q, li, v) {
                Some(r) => {
                    any = true;
                    r.rhs.clone()
                }
                None => MacroRhs::call(sink, 0, Vec::new()),
            });
            if any {
                rules.push(Rule {
                    state: q,
                    letter: letter.clone(),
                    pattern: vec![None; k],
                    rhs,
                });
            }
        }
    }
    MacroTT::new(MacroDef {
        input: m.input().clone(),
        output: m.output().clone(),
        states,
        arities,
        initial: m.initial(),
        lookahead: None,
        rules,
    })
    .expect("lookahead elimination preserves well-formedness")
}

fn chain(items: &[StrItem], tail: MacroRhs) -> MacroRhs {
    items.iter().rev().fold(tail, |acc, item| match item {
        StrItem::Lit(s) => MacroRhs::Letter(s.clone(), vec![acc]),
        StrItem::Call { state, child } => MacroRhs::call(*state, *child, vec![acc]),
    })
}

/// Strings become unary contexts: every state gets one parameter holding
/// the continuation, and `u . v` becomes nesting. A fresh initial state of
/// arity 0 closes the result with the end marker. Lookahead is kept.
pub fn tdtts_to_mtt_unary(tt: &TopDownTT) -> Result<MacroTT, DefError> {
    let OutputKind::String(symbols) = tt.output() else {
        return Err(DefError::Unsupported(
            "expected a transducer with string output".into(),
        ));
    };
    let end = fresh_name("e", |s| symbols.iter().any(|x| x == s));
    let output = RankedAlphabet::unary_for(symbols, &end)
        .map_err(|e| DefError::Unsupported(e.to_string()))?;
    let initial = tt.initial();
    let top = fresh_name(&format!("{}_top", tt.states()[initial]), |s| {
        tt.state_index(s).is_some()
    });
    let mut states = tt.states().to_vec();
    let mut arities = vec![1; states.len()];
    let top_index = states.len();
    states.push(top);
    arities.push(0);
    let mut rules = Vec::new();
    for rule in tt.rules() {
        let TdRhs::Str(items) = &rule.rhs else {
            unreachable!("string output")
        };
        rules.push(Rule {
            state: rule.state,
            letter: rule.letter.clone(),
            pattern: rule.pattern.clone(),
            rhs: chain(items, MacroRhs::Param(0)),
        });
        if rule.state == initial {
            rules.push(Rule {
                state: top_index,
                letter: rule.letter.clone(),
                pattern: rule.pattern.clone(),
                rhs: chain(items, MacroRhs::leaf(end.clone())),
            });
        }
    }
    MacroTT::new(MacroDef {
        input: tt.input().clone(),
        output,
        states,
        arities,
        initial: top_index,
        lookahead: tt.lookahead().cloned(),
        rules,
    })
}

/// How the unary context `q<t>` ends: in a parameter, in the end marker,
/// or not at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    Param(usize),
    Ground,
    Undefined,
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tail::Param(j) => write!(f, "{}", j + 1),
            Tail::Ground => f.write_str("g"),
            Tail::Undefined => f.write_str("u"),
        }
    }
}

fn tail_of(rhs: &MacroRhs, children: &[&[Tail]]) -> Tail {
    match rhs {
        MacroRhs::Letter(_, cs) => match cs.first() {
            None => Tail::Ground,
            Some(c) => tail_of(c, children),
        },
        MacroRhs::Param(j) => Tail::Param(*j),
        MacroRhs::Call { state, child, args } => match children[*child][*state] {
            Tail::Param(i) => tail_of(&args[i], children),
            t => t,
        },
    }
}

fn flatten(rhs: &MacroRhs, children: &[&[Tail]], out: &mut Vec<StrItem>) {
    match rhs {
        MacroRhs::Letter(l, cs) => {
            if let Some(c) = cs.first() {
                out.push(StrItem::Lit(l.clone()));
                flatten(c, children, out);
            }
        }
        MacroRhs::Param(_) => {}
        MacroRhs::Call { state, child, args } => {
            out.push(StrItem::Call {
                state: *state,
                child: *child,
            });
            if let Tail::Param(i) = children[*child][*state] {
                flatten(&args[i], children, out);
            }
        }
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

/// A string-output transducer computing the decoded output of a unary-output
/// macro tree transducer. State `q` outputs the letters of `q<t>` above its
/// tail; lookahead supplies the tail of every state on every child (a
/// [`Tail`] map), which is exactly what is needed to continue into the
/// right argument. Lookahead of the source is eliminated first.
pub fn mtt_unary_to_tdtts(m: &MacroTT) -> Result<TopDownTT, DefError> {
    if !m.is_unary_output() {
        return Err(DefError::Unsupported(
            "output alphabet must consist of unary letters and one nullary end marker".into(),
        ));
    }
    let m = eliminate_lookahead(m);
    let nq = m.states().len();
    let input = m.input();
    let mut maps: Vec<Vec<Tail>> = Vec::new();
    let mut index: HashMap<Vec<Tail>, usize> = HashMap::new();
    let mut delta: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    loop {
        let count = maps.len();
        for (li, (_, k)) in input.letters().enumerate() {
            let vectors = if k == 0 { 1 } else { count.pow(k as u32) };
            for code in 0..vectors {
                let v = decode(code, count.max(1), k);
                if delta.contains_key(&(li, v.clone())) {
                    continue;
                }
                let children: Vec<&[Tail]> = v.iter().map(|&s| maps[s].as_slice()).collect();
                let map: Vec<Tail> = (0..nq)
                    .map(|q| {
                        m.find_rule(q, li, &vec![0; k])
                            .map_or(Tail::Undefined, |r| tail_of(&r.rhs, &children))
                    })
                    .collect();
                let id = *index.entry(map.clone()).or_insert_with(|| {
                    maps.push(map);
                    maps.len() - 1
                });
                delta.insert((li, v), id);
            }
        }
        if maps.len() == count {
            break;
        }
    }
    let names: Vec<Symbol> = maps
        .iter()
        .map(|map| {
            let parts: Vec<String> = map
                .iter()
                .zip(m.states())
                .map(|(t, q)| format!("{q}@{t}"))
                .collect();
            Symbol::from(parts.join("/"))
        })
        .collect();
    let mut transitions: Vec<_> = delta
        .iter()
        .map(|((li, v), &t)| {
            (
                input.letter(*li).0.clone(),
                v.iter().map(|&s| names[s].clone()).collect::<Vec<_>>(),
                names[t].clone(),
            )
        })
        .collect();
    transitions.sort();
    let lookahead = DbtaDef {
        alphabet: input.clone(),
        states: names,
        transitions,
    }
    .build()
    .map_err(|e| DefError::Unsupported(e.to_string()))?;
    let count = maps.len();
    let mut rules = Vec::new();
    for q in 0..nq {
        for (li, (letter, k)) in input.letters().enumerate() {
            let Some(rule) = m.find_rule(q, li, &vec![0; k]) else {
                continue;
            };
            for code in 0..count.pow(k as u32) {
                let v = decode(code, count, k);
                if maps[delta[&(li, v.clone())]][q] == Tail::Undefined {
                    continue;
                }
                let children: Vec<&[Tail]> = v.iter().map(|&s| maps[s].as_slice()).collect();
                let mut items = Vec::new();
                flatten(&rule.rhs, &children, &mut items);
                rules.push(Rule {
                    state: q,
                    letter: letter.clone(),
                    pattern: v.into_iter().map(Some).collect(),
                    rhs: TdRhs::Str(items),
                });
            }
        }
    }
    TopDownTT::new(TopDownDef {
        input: input.clone(),
        output: OutputKind::String(m.output().unary_letters().cloned().collect()),
        states: m.states().to_vec(),
        initial: m.initial(),
        lookahead: Some(lookahead),
        rules,
    })
}
