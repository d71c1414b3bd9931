use std::fmt;

use crate::rules::{DefError, Diagnostic};
use crate::terms::{RankedAlphabet, Symbol, Tree, Word};
use crate::value::{TransduceError, Value};

use super::{OutputKind, RegisterTrace, StrItem, TdRhs, TopDownTT, TreeRhs};

/// Tree-valued update: output letters over child registers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RegExpr {
    Letter(Symbol, Vec<RegExpr>),
    Reg { child: usize, register: usize },
}

/// One factor of a string-valued update.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RegItem {
    Lit(Symbol),
    Reg { child: usize, register: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Update {
    Undefined,
    Tree(RegExpr),
    Str(Vec<RegItem>),
}

/// The move of the machine at a node with a given letter and child states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineTransition {
    pub letter: Symbol,
    pub children: Vec<usize>,
    pub next: usize,
    /// One entry per register.
    pub updates: Vec<Update>,
}

/// A bottom-up machine with a finite control state and value registers.
#[derive(Clone, PartialEq, Eq)]
pub struct RegisterMachine {
    input: RankedAlphabet,
    output: OutputKind,
    states: Vec<Symbol>,
    registers: Vec<Symbol>,
    output_register: usize,
    transitions: Vec<MachineTransition>,
    /// `table[letter][code(child states)]` indexes `transitions`
    table: Vec<Vec<usize>>,
}

/// Configuration at the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineRun {
    pub state: usize,
    pub registers: Vec<Option<Value>>,
    pub output: Option<Value>,
}

fn code(children: &[usize], n: usize) -> usize {
    children.iter().fold(0, |acc, &s| acc * n + s)
}

impl RegisterMachine {
    /// Checks that every `(letter, child states)` has exactly one transition
    /// and that all updates are well-typed.
    pub fn new(
        input: RankedAlphabet,
        output: OutputKind,
        states: Vec<Symbol>,
        registers: Vec<Symbol>,
        output_register: usize,
        transitions: Vec<MachineTransition>,
    ) -> Result<Self, DefError> {
        let mut out = Vec::new();
        super::check_states(&states, &mut out);
        super::check_states(&registers, &mut out);
        if states.is_empty() {
            out.push(Diagnostic::Machine("no states".into()));
        }
        if output_register >= registers.len() {
            out.push(Diagnostic::UnknownState {
                index: output_register,
            });
        }
        let n = states.len();
        let mut table: Vec<Vec<Option<usize>>> = input
            .letters()
            .map(|(_, k)| vec![None; n.pow(k as u32)])
            .collect();
        for (i, tr) in transitions.iter().enumerate() {
            let here = || {
                format!(
                    "{}({})",
                    tr.letter,
                    tr.children
                        .iter()
                        .map(|&s| states.get(s).map_or("?", |s| s.as_str()))
                        .collect::<Vec<_>>()
                        .join(",")
                )
            };
            let Some(li) = input.index_of(tr.letter.as_str()) else {
                out.push(Diagnostic::Machine(format!("{}: unknown letter", here())));
                continue;
            };
            let arity = input.letter(li).1;
            if tr.children.len() != arity || tr.children.iter().any(|&s| s >= n) || tr.next >= n {
                out.push(Diagnostic::Machine(format!("{}: bad state vector", here())));
                continue;
            }
            if tr.updates.len() != registers.len() {
                out.push(Diagnostic::Machine(format!(
                    "{}: {} updates for {} registers",
                    here(),
                    tr.updates.len(),
                    registers.len()
                )));
            }
            for u in &tr.updates {
                if let Err(e) = check_update(u, &output, arity, registers.len()) {
                    out.push(Diagnostic::Machine(format!("{}: {e}", here())));
                }
            }
            let slot = &mut table[li][code(&tr.children, n)];
            if slot.is_some() {
                out.push(Diagnostic::Machine(format!("{}: duplicate transition", here())));
            }
            *slot = Some(i);
        }
        let mut full = Vec::with_capacity(table.len());
        for (li, row) in table.into_iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (c, slot) in row.into_iter().enumerate() {
                match slot {
                    Some(i) => r.push(i),
                    None => {
                        let arity = input.letter(li).1;
                        let v = decode(c, n, arity);
                        out.push(Diagnostic::Machine(format!(
                            "missing transition {}({})",
                            input.letter(li).0,
                            v.iter()
                                .map(|&s| states[s].as_str())
                                .collect::<Vec<_>>()
                                .join(",")
                        )));
                    }
                }
            }
            full.push(r);
        }
        if !out.is_empty() {
            return Err(DefError::IllFormed(out));
        }
        Ok(RegisterMachine {
            input,
            output,
            states,
            registers,
            output_register,
            transitions,
            table: full,
        })
    }

    pub fn input(&self) -> &RankedAlphabet {
        &self.input
    }

    pub fn output(&self) -> &OutputKind {
        &self.output
    }

    pub fn states(&self) -> &[Symbol] {
        &self.states
    }

    pub fn registers(&self) -> &[Symbol] {
        &self.registers
    }

    pub fn output_register(&self) -> usize {
        self.output_register
    }

    pub fn transitions(&self) -> &[MachineTransition] {
        &self.transitions
    }

    /// The transition for a letter index and child states.
    pub fn transition(&self, letter: usize, children: &[usize]) -> &MachineTransition {
        &self.transitions[self.table[letter][code(children, self.states.len())]]
    }

    pub fn run(&self, t: &Tree) -> Result<MachineRun, TransduceError> {
        t.check(&self.input)?;
        let (state, registers) = self.eval(t);
        Ok(MachineRun {
            state,
            output: registers[self.output_register].clone(),
            registers,
        })
    }

    pub fn run_trace(&self, t: &Tree) -> Result<RegisterTrace, TransduceError> {
        t.check(&self.input)?;
        Ok(self.trace(t))
    }

    fn trace(&self, t: &Tree) -> RegisterTrace {
        let children: Vec<RegisterTrace> = t.children().iter().map(|c| self.trace(c)).collect();
        let states: Vec<usize> = children.iter().map(|c| c.lookahead).collect();
        let regs: Vec<&[Option<Value>]> = children.iter().map(|c| c.registers.as_slice()).collect();
        let (next, registers) = self.step(t, &states, &regs);
        RegisterTrace {
            letter: t.label().clone(),
            lookahead: next,
            registers,
            children,
        }
    }

    fn eval(&self, t: &Tree) -> (usize, Vec<Option<Value>>) {
        let (states, regs): (Vec<usize>, Vec<Vec<Option<Value>>>) =
            t.children().iter().map(|c| self.eval(c)).unzip();
        let refs: Vec<&[Option<Value>]> = regs.iter().map(Vec::as_slice).collect();
        self.step(t, &states, &refs)
    }

    fn step(
        &self,
        t: &Tree,
        states: &[usize],
        regs: &[&[Option<Value>]],
    ) -> (usize, Vec<Option<Value>>) {
        let li = self.input.index_of(t.label().as_str()).expect("checked tree");
        let tr = self.transition(li, states);
        let values = tr
            .updates
            .iter()
            .map(|u| match u {
                Update::Undefined => None,
                Update::Tree(e) => eval_tree(e, regs).map(Value::Tree),
                Update::Str(items) => eval_word(items, regs).map(Value::Word),
            })
            .collect();
        (tr.next, values)
    }
}

fn check_update(u: &Update, output: &OutputKind, arity: usize, nregs: usize) -> Result<(), String> {
    let reg = |child: usize, register: usize| {
        if child >= arity {
            Err(format!("child t{} out of range", child + 1))
        } else if register >= nregs {
            Err(format!("register #{register} out of range"))
        } else {
            Ok(())
        }
    };
    fn tree(
        e: &RegExpr,
        a: &RankedAlphabet,
        reg: &dyn Fn(usize, usize) -> Result<(), String>,
    ) -> Result<(), String> {
        match e {
            RegExpr::Reg { child, register } => reg(*child, *register),
            RegExpr::Letter(l, cs) => {
                match a.arity(l.as_str()) {
                    None => return Err(format!("unknown output letter `{l}`")),
                    Some(k) if k != cs.len() => {
                        return Err(format!("output letter `{l}` has arity {k}"))
                    }
                    Some(_) => {}
                }
                cs.iter().try_for_each(|c| tree(c, a, reg))
            }
        }
    }
    match (u, output) {
        (Update::Undefined, _) => Ok(()),
        (Update::Tree(e), OutputKind::Tree(a)) => tree(e, a, &reg),
        (Update::Str(items), OutputKind::String(syms)) => items.iter().try_for_each(|i| match i {
            RegItem::Reg { child, register } => reg(*child, *register),
            RegItem::Lit(s) if !syms.contains(s) => Err(format!("unknown output symbol `{s}`")),
            RegItem::Lit(_) => Ok(()),
        }),
        _ => Err("update does not match the output kind".into()),
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

fn eval_tree(e: &RegExpr, regs: &[&[Option<Value>]]) -> Option<Tree> {
    match e {
        RegExpr::Letter(l, cs) => Some(Tree::node(
            l.clone(),
            cs.iter().map(|c| eval_tree(c, regs)).collect::<Option<_>>()?,
        )),
        RegExpr::Reg { child, register } => regs[*child][*register]
            .as_ref()
            .and_then(Value::as_tree)
            .cloned(),
    }
}

fn eval_word(items: &[RegItem], regs: &[&[Option<Value>]]) -> Option<Word> {
    let mut w = Word::new();
    for item in items {
        match item {
            RegItem::Lit(s) => w.push(s.clone()),
            RegItem::Reg { child, register } => {
                w.extend_from(regs[*child][*register].as_ref()?.as_word()?)
            }
        }
    }
    Some(w)
}

fn tree_update(rhs: &TreeRhs) -> RegExpr {
    match rhs {
        TreeRhs::Letter(l, cs) => RegExpr::Letter(l.clone(), cs.iter().map(tree_update).collect()),
        TreeRhs::Call { state, child } => RegExpr::Reg {
            child: *child,
            register: *state,
        },
    }
}

/// Folds the lookahead automaton into the finite control. Without lookahead
/// the machine has the single state `s`.
pub fn to_register_machine(tt: &TopDownTT) -> RegisterMachine {
    let input = tt.input().clone();
    let (states, la) = match tt.lookahead() {
        Some(a) => (a.states().to_vec(), Some(a)),
        None => (vec![Symbol::from("s")], None),
    };
    let n = states.len();
    let mut transitions = Vec::new();
    for (li, (letter, arity)) in input.letters().enumerate() {
        for c in 0..n.pow(arity as u32) {
            let children = decode(c, n, arity);
            let next = la.map_or(0, |a| a.step(li, &children));
            let updates = (0..tt.states().len())
                .map(|q| match tt.find_rule(q, li, &children) {
                    None => Update::Undefined,
                    Some(rule) => match &rule.rhs {
                        TdRhs::Tree(t) => Update::Tree(tree_update(t)),
                        TdRhs::Str(items) => Update::Str(
                            items
                                .iter()
                                .map(|i| match i {
                                    StrItem::Lit(s) => RegItem::Lit(s.clone()),
                                    StrItem::Call { state, child } => RegItem::Reg {
                                        child: *child,
                                        register: *state,
                                    },
                                })
                                .collect(),
                        ),
                    },
                })
                .collect();
            transitions.push(MachineTransition {
                letter: letter.clone(),
                children,
                next,
                updates,
            });
        }
    }
    RegisterMachine::new(
        input,
        tt.output().clone(),
        states,
        tt.states().to_vec(),
        tt.initial(),
        transitions,
    )
    .expect("translation of a well-formed transducer is well-formed")
}

pub fn run_register_machine(m: &RegisterMachine, t: &Tree) -> Result<MachineRun, TransduceError> {
    m.run(t)
}

impl fmt::Debug for RegisterMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RegisterMachine")
            .field("states", &self.states)
            .field("registers", &self.registers)
            .field("transitions", &self.transitions.len())
            .finish_non_exhaustive()
    }
}
