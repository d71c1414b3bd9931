//! Right-to-left streaming string transducers with string registers.
//!
//! The machine starts at the right end of the input in its initial state
//! with the initial register values, reads symbols from right to left and
//! updates all registers simultaneously. After the leftmost symbol the
//! output expression of the reached state is evaluated.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::rules::fresh_name;
use crate::tdtt::{OutputKind, StrItem, TdRhs, TopDownTT};
use crate::terms::{validate_name, Symbol, Word};

/// One factor of a register expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SstItem {
    Lit(Symbol),
    Reg(usize),
}

/// A concatenation, or `None` for the undefined marker.
pub type SstExpr = Option<Vec<SstItem>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SstTransition {
    pub next: usize,
    /// One entry per register.
    pub updates: Vec<SstExpr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SstDef {
    pub input: Vec<Symbol>,
    pub output: Vec<Symbol>,
    pub states: Vec<Symbol>,
    pub initial: usize,
    pub registers: Vec<Symbol>,
    /// Register values at the right end; `None` is undefined.
    pub init: Vec<Option<Word>>,
    /// `transitions[state][input symbol]`
    pub transitions: Vec<Vec<SstTransition>>,
    /// Output expression per final state; `None` means no output.
    pub final_output: Vec<Option<Vec<SstItem>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SstError {
    #[error("ill-formed streaming transducer: {0}")]
    IllFormed(String),
    #[error("unknown input symbol `{0}`")]
    UnknownSymbol(Symbol),
    #[error("no output defined for final state `{0}`")]
    OutputUndefined(Symbol),
    #[error("output of final state `{0}` uses an undefined register")]
    UndefinedRegister(Symbol),
    #[error("{0}")]
    Unsupported(String),
}

/// A register used more than once in one transition or output expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyViolation {
    pub state: Symbol,
    /// `None` for the output expression of `state`.
    pub symbol: Option<Symbol>,
    pub register: Symbol,
    pub uses: usize,
}

impl fmt::Display for CopyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.symbol {
            Some(s) => write!(
                f,
                "register {} used {} times in transition ({}, {s})",
                self.register, self.uses, self.state
            ),
            None => write!(
                f,
                "register {} used {} times in the output of {}",
                self.register, self.uses, self.state
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sst {
    def: SstDef,
}

fn check_expr(e: &[SstItem], def: &SstDef) -> Result<(), String> {
    for item in e {
        match item {
            SstItem::Lit(s) if !def.output.contains(s) => {
                return Err(format!("unknown output symbol `{s}`"))
            }
            SstItem::Reg(r) if *r >= def.registers.len() => {
                return Err(format!("unknown register #{r}"))
            }
            _ => {}
        }
    }
    Ok(())
}

impl Sst {
    pub fn new(def: SstDef) -> Result<Self, SstError> {
        let bad = |m: String| Err(SstError::IllFormed(m));
        for names in [&def.input, &def.output, &def.states, &def.registers] {
            let mut seen = HashSet::new();
            for n in names.iter() {
                if let Err(e) = validate_name(n.as_str()) {
                    return bad(e.to_string());
                }
                if !seen.insert(n) {
                    return bad(format!("duplicate name `{n}`"));
                }
            }
        }
        if def.initial >= def.states.len() {
            return bad("initial state out of range".into());
        }
        if def.init.len() != def.registers.len() {
            return bad("one initial value per register required".into());
        }
        for w in def.init.iter().flatten() {
            if let Some(s) = w.iter().find(|s| !def.output.contains(s)) {
                return bad(format!("unknown output symbol `{s}` in initial value"));
            }
        }
        if def.transitions.len() != def.states.len() || def.final_output.len() != def.states.len() {
            return bad("transitions and outputs must be given per state".into());
        }
        for (q, row) in def.transitions.iter().enumerate() {
            if row.len() != def.input.len() {
                return bad(format!("state `{}` lacks transitions", def.states[q]));
            }
            for (a, tr) in row.iter().enumerate() {
                let here = format!("({}, {})", def.states[q], def.input[a]);
                if tr.next >= def.states.len() {
                    return bad(format!("{here}: target out of range"));
                }
                if tr.updates.len() != def.registers.len() {
                    return bad(format!("{here}: one update per register required"));
                }
                for e in tr.updates.iter().flatten() {
                    check_expr(e, &def).map_err(|m| SstError::IllFormed(format!("{here}: {m}")))?;
                }
            }
        }
        for e in def.final_output.iter().flatten() {
            check_expr(e, &def).map_err(|m| SstError::IllFormed(format!("output: {m}")))?;
        }
        Ok(Sst { def })
    }

    pub fn def(&self) -> &SstDef {
        &self.def
    }

    pub fn input(&self) -> &[Symbol] {
        &self.def.input
    }

    pub fn output(&self) -> &[Symbol] {
        &self.def.output
    }

    pub fn states(&self) -> &[Symbol] {
        &self.def.states
    }

    pub fn registers(&self) -> &[Symbol] {
        &self.def.registers
    }

    /// Final state and register values after reading `w` right to left.
    pub fn configuration(&self, w: &Word) -> Result<(usize, Vec<Option<Word>>), SstError> {
        let mut state = self.def.initial;
        let mut regs = self.def.init.clone();
        for s in w.iter().rev() {
            let a = self
                .def
                .input
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| SstError::UnknownSymbol(s.clone()))?;
            let tr = &self.def.transitions[state][a];
            regs = tr
                .updates
                .iter()
                .map(|u| u.as_ref().and_then(|e| eval(e, &regs)))
                .collect();
            state = tr.next;
        }
        Ok((state, regs))
    }

    pub fn run(&self, w: &Word) -> Result<Word, SstError> {
        let (state, regs) = self.configuration(w)?;
        let name = || self.def.states[state].clone();
        let e = self.def.final_output[state]
            .as_ref()
            .ok_or_else(|| SstError::OutputUndefined(name()))?;
        eval(e, &regs).ok_or_else(|| SstError::UndefinedRegister(name()))
    }

    /// Every register occurs at most once across the updates of each
    /// transition and at most once in each output expression.
    pub fn is_copyless(&self) -> Result<(), Vec<CopyViolation>> {
        let mut out = Vec::new();
        let mut count = |exprs: &mut dyn Iterator<Item = &Vec<SstItem>>,
                         state: usize,
                         symbol: Option<usize>| {
            let mut uses = vec![0usize; self.def.registers.len()];
            for e in exprs {
                for item in e {
                    if let SstItem::Reg(r) = item {
                        uses[*r] += 1;
                    }
                }
            }
            for (r, &n) in uses.iter().enumerate() {
                if n > 1 {
                    out.push(CopyViolation {
                        state: self.def.states[state].clone(),
                        symbol: symbol.map(|a| self.def.input[a].clone()),
                        register: self.def.registers[r].clone(),
                        uses: n,
                    });
                }
            }
        };
        for (q, row) in self.def.transitions.iter().enumerate() {
            for (a, tr) in row.iter().enumerate() {
                count(&mut tr.updates.iter().flatten(), q, Some(a));
            }
            count(&mut self.def.final_output[q].iter(), q, None);
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }
}

fn eval(e: &[SstItem], regs: &[Option<Word>]) -> Option<Word> {
    let mut w = Word::new();
    for item in e {
        match item {
            SstItem::Lit(s) => w.push(s.clone()),
            SstItem::Reg(r) => w.extend_from(regs[*r].as_ref()?),
        }
    }
    Some(w)
}

pub fn run_sst(s: &Sst, w: &Word) -> Result<Word, SstError> {
    s.run(w)
}

pub fn is_copyless(s: &Sst) -> Result<(), Vec<CopyViolation>> {
    s.is_copyless()
}

/// Reads a string-output transducer over unary input as a right-to-left
/// streaming transducer: its lookahead states (or the single state `s`)
/// become the control states and its states become the registers.
pub fn tdtts_unary_to_sst(tt: &TopDownTT) -> Result<Sst, SstError> {
    let OutputKind::String(output) = tt.output() else {
        return Err(SstError::Unsupported("expected string output".into()));
    };
    let end = tt.input().string_end_marker().ok_or_else(|| {
        SstError::Unsupported(
            "input alphabet must consist of unary letters and one nullary end marker".into(),
        )
    })?;
    let end_index = tt.input().index_of(end.as_str()).expect("letter of the alphabet");
    let (states, initial) = match tt.lookahead() {
        Some(a) => (a.states().to_vec(), a.step(end_index, &[])),
        None => (vec![fresh_name("s", |_| false)], 0),
    };
    let input: Vec<Symbol> = tt.input().unary_letters().cloned().collect();
    let registers = tt.states().to_vec();
    let expr = |rhs: &TdRhs| -> Vec<SstItem> {
        let TdRhs::Str(items) = rhs else {
            unreachable!("string output")
        };
        items
            .iter()
            .map(|i| match i {
                StrItem::Lit(s) => SstItem::Lit(s.clone()),
                StrItem::Call { state, .. } => SstItem::Reg(*state),
            })
            .collect()
    };
    let init = (0..registers.len())
        .map(|q| {
            tt.find_rule(q, end_index, &[]).map(|r| {
                expr(&r.rhs)
                    .into_iter()
                    .map(|i| match i {
                        SstItem::Lit(s) => s,
                        SstItem::Reg(_) => unreachable!("nullary letter has no children"),
                    })
                    .collect()
            })
        })
        .collect();
    let transitions = (0..states.len())
        .map(|s| {
            input
                .iter()
                .map(|a| {
                    let li = tt.input().index_of(a.as_str()).expect("unary letter");
                    SstTransition {
                        next: tt.lookahead().map_or(0, |la| la.step(li, &[s])),
                        updates: (0..registers.len())
                            .map(|q| tt.find_rule(q, li, &[s]).map(|r| expr(&r.rhs)))
                            .collect(),
                    }
                })
                .collect()
        })
        .collect();
    let final_output = vec![Some(vec![SstItem::Reg(tt.initial())]); states.len()];
    Sst::new(SstDef {
        input,
        output: output.clone(),
        states,
        initial,
        registers,
        init,
        transitions,
        final_output,
    })
}

fn lit(s: &str) -> SstItem {
    SstItem::Lit(Symbol::from(s))
}

fn syms(names: &[&str]) -> Vec<Symbol> {
    names.iter().map(|s| Symbol::from(*s)).collect()
}

/// The copyless machine for `a^n ↦ a^n`, `a^n b w ↦ a^n b b^|w|`.
/// `s1` records that a `b` has been read; `R` holds the current `a`-run,
/// `S` the same run over `b`, and `T` the `b`-block from the leftmost `b` read so far.
pub fn remark_example() -> Sst {
    use SstItem::Reg;
    let (r, s, t) = (0, 1, 2);
    let on_a = SstTransition {
        next: 0,
        updates: vec![
            Some(vec![lit("a"), Reg(r)]),
            Some(vec![lit("b"), Reg(s)]),
            Some(vec![Reg(t)]),
        ],
    };
    let on_b = SstTransition {
        next: 1,
        updates: vec![Some(vec![]), Some(vec![]), Some(vec![lit("b"), Reg(s), Reg(t)])],
    };
    let row = |next_on_a: usize| {
        vec![
            SstTransition {
                next: next_on_a,
                ..on_a.clone()
            },
            on_b.clone(),
        ]
    };
    Sst::new(SstDef {
        input: syms(&["a", "b"]),
        output: syms(&["a", "b"]),
        states: syms(&["s0", "s1"]),
        initial: 0,
        registers: syms(&["R", "S", "T"]),
        init: vec![Some(Word::new()); 3],
        transitions: vec![row(0), row(1)],
        final_output: vec![Some(vec![Reg(r)]), Some(vec![Reg(r), Reg(t)])],
    })
    .expect("well-formed")
}

/// One-register machine over `{a, b}`: `X := X.X`, starting from `X = "a"`.
pub fn doubling() -> Sst {
    let tr = SstTransition {
        next: 0,
        updates: vec![Some(vec![SstItem::Reg(0), SstItem::Reg(0)])],
    };
    Sst::new(SstDef {
        input: syms(&["a", "b"]),
        output: syms(&["a"]),
        states: syms(&["s"]),
        initial: 0,
        registers: syms(&["X"]),
        init: vec![Some(Word::parse("a"))],
        transitions: vec![vec![tr.clone(), tr]],
        final_output: vec![Some(vec![SstItem::Reg(0)])],
    })
    .expect("well-formed")
}

fn one_register(symbols: &[&str], update: impl Fn(&str) -> Vec<SstItem>) -> Sst {
    Sst::new(SstDef {
        input: syms(symbols),
        output: syms(symbols),
        states: syms(&["s"]),
        initial: 0,
        registers: syms(&["X"]),
        init: vec![Some(Word::new())],
        transitions: vec![symbols
            .iter()
            .map(|a| SstTransition {
                next: 0,
                updates: vec![Some(update(a))],
            })
            .collect()],
        final_output: vec![Some(vec![SstItem::Reg(0)])],
    })
    .expect("well-formed")
}

/// `X := X.σ`: reading right to left, this reverses the input.
pub fn reverse(symbols: &[&str]) -> Sst {
    one_register(symbols, |a| vec![SstItem::Reg(0), lit(a)])
}

/// `X := σ.X`
pub fn identity(symbols: &[&str]) -> Sst {
    one_register(symbols, |a| vec![lit(a), SstItem::Reg(0)])
}

/// Two registers exchanged and extended on every symbol: `X := Y.a`,
/// `Y := X.b`. Reading the updates one after the other gives other results.
pub fn swap() -> Sst {
    use SstItem::Reg;
    let tr = SstTransition {
        next: 0,
        updates: vec![Some(vec![Reg(1), lit("a")]), Some(vec![Reg(0), lit("b")])],
    };
    Sst::new(SstDef {
        input: syms(&["c"]),
        output: syms(&["a", "b"]),
        states: syms(&["s"]),
        initial: 0,
        registers: syms(&["X", "Y"]),
        init: vec![Some(Word::new()), Some(Word::new())],
        transitions: vec![vec![tr]],
        final_output: vec![Some(vec![Reg(0), lit("a"), Reg(1)])],
    })
    .expect("well-formed")
}
