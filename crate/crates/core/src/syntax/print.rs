use std::fmt::Write as _;

use crate::bta::Dbta;
use crate::mtt::{MacroRhs, MacroTT};
use crate::rules::{Pattern, Rule};
use crate::sst::{Sst, SstItem};
use crate::tdtt::{OutputKind, RegExpr, RegItem, RegisterMachine, StrItem, TdRhs, TopDownTT, TreeRhs, Update};
use crate::terms::{RankedAlphabet, Symbol};

fn join<T>(items: impl IntoIterator<Item = T>, sep: &str, f: impl Fn(T) -> String) -> String {
    items.into_iter().map(f).collect::<Vec<_>>().join(sep)
}

fn set(names: &[Symbol]) -> String {
    format!("{{{}}}", join(names, ",", |s| s.to_string()))
}

fn output_section(out: &mut String, kind: &OutputKind) {
    match kind {
        OutputKind::Tree(a) => writeln!(out, "output {a}"),
        OutputKind::String(syms) => writeln!(out, "output string {}", set(syms)),
    }
    .expect("writing to a string");
}

fn lookahead_body(a: &Dbta, indent: &str) -> String {
    let mut s = format!("{indent}states {};\n", set(a.states()));
    for (letter, children, target) in a.transitions() {
        let args = if children.is_empty() {
            String::new()
        } else {
            format!("({})", join(&children, ",", |&c| a.state_name(c).to_string()))
        };
        let _ = writeln!(s, "{indent}delta {letter}{args}->{};", a.state_name(target));
    }
    s
}

/// The automaton as a `lookahead { ... }` section.
pub fn print_dbta(a: &Dbta) -> String {
    format!("lookahead {{\n{}}}\n", lookahead_body(a, "  "))
}

fn var(i: usize) -> String {
    format!("t{}", i + 1)
}

fn call(states: &[Symbol], state: usize, child: usize) -> String {
    format!("{}<{}>", states[state], var(child))
}

fn lhs<R>(rule: &Rule<R>, states: &[Symbol], la: Option<&Dbta>) -> String {
    let pattern: &Pattern = &rule.pattern;
    let mut s = format!("{}<{}", states[rule.state], rule.letter);
    if !pattern.is_empty() {
        s.push('(');
        s.push_str(&join(pattern.iter().enumerate(), ",", |(i, p)| match (p, la) {
            (Some(r), Some(a)) => format!("{}|{}", var(i), a.state_name(*r)),
            _ => var(i),
        }));
        s.push(')');
    }
    s.push('>');
    s
}

fn tree_rhs(rhs: &TreeRhs, states: &[Symbol]) -> String {
    match rhs {
        TreeRhs::Call { state, child } => call(states, *state, *child),
        TreeRhs::Letter(l, cs) if cs.is_empty() => l.to_string(),
        TreeRhs::Letter(l, cs) => format!("{l}({})", join(cs, ",", |c| tree_rhs(c, states))),
    }
}

fn lit(s: &Symbol) -> String {
    format!("'{s}'")
}

fn string_rhs(items: &[StrItem], states: &[Symbol]) -> String {
    if items.is_empty() {
        return "\"\"".into();
    }
    join(items, " . ", |i| match i {
        StrItem::Lit(s) => lit(s),
        StrItem::Call { state, child } => call(states, *state, *child),
    })
}

fn macro_rhs(rhs: &MacroRhs, states: &[Symbol]) -> String {
    match rhs {
        MacroRhs::Param(j) => format!("x{}", j + 1),
        MacroRhs::Letter(l, cs) if cs.is_empty() => l.to_string(),
        MacroRhs::Letter(l, cs) => format!("{l}({})", join(cs, ",", |c| macro_rhs(c, states))),
        MacroRhs::Call { state, child, args } if args.is_empty() => call(states, *state, *child),
        MacroRhs::Call { state, child, args } => format!(
            "{}({})",
            call(states, *state, *child),
            join(args, ",", |a| macro_rhs(a, states))
        ),
    }
}

fn header(
    out: &mut String,
    input: &RankedAlphabet,
    output: &OutputKind,
    states: &str,
    initial: &Symbol,
    la: Option<&Dbta>,
) {
    let _ = writeln!(out, "input {input}");
    output_section(out, output);
    let _ = writeln!(out, "states {states}");
    let _ = writeln!(out, "initial {initial}");
    if let Some(a) = la {
        out.push_str(&print_dbta(a));
    }
}

pub fn print_tdtt(tt: &TopDownTT) -> String {
    let mut out = String::new();
    header(
        &mut out,
        tt.input(),
        tt.output(),
        &set(tt.states()),
        &tt.states()[tt.initial()],
        tt.lookahead(),
    );
    out.push_str("rules {\n");
    for rule in tt.rules() {
        let rhs = match &rule.rhs {
            TdRhs::Tree(t) => tree_rhs(t, tt.states()),
            TdRhs::Str(items) => string_rhs(items, tt.states()),
        };
        let _ = writeln!(out, "  {} -> {rhs};", lhs(rule, tt.states(), tt.lookahead()));
    }
    out.push_str("}\n");
    out
}

pub fn print_mtt(m: &MacroTT) -> String {
    let mut out = String::new();
    let states = format!(
        "{{{}}}",
        join(m.states().iter().enumerate(), ",", |(i, s)| format!("{s}:{}", m.arity(i)))
    );
    header(
        &mut out,
        m.input(),
        &OutputKind::Tree(m.output().clone()),
        &states,
        &m.states()[m.initial()],
        m.lookahead(),
    );
    out.push_str("rules {\n");
    for rule in m.rules() {
        let n = m.arity(rule.state);
        let params = if n == 0 {
            String::new()
        } else {
            format!("({})", join(0..n, ",", |j| format!("x{}", j + 1)))
        };
        let _ = writeln!(
            out,
            "  {}{params} -> {};",
            lhs(rule, m.states(), m.lookahead()),
            macro_rhs(&rule.rhs, m.states())
        );
    }
    out.push_str("}\n");
    out
}

fn reg_tree(e: &RegExpr, regs: &[Symbol]) -> String {
    match e {
        RegExpr::Reg { child, register } => call(regs, *register, *child),
        RegExpr::Letter(l, cs) if cs.is_empty() => l.to_string(),
        RegExpr::Letter(l, cs) => format!("{l}({})", join(cs, ",", |c| reg_tree(c, regs))),
    }
}

pub fn print_register_machine(m: &RegisterMachine) -> String {
    let mut out = String::from("register-machine {\n");
    let _ = writeln!(out, "  input {}", m.input());
    out.push_str("  ");
    output_section(&mut out, m.output());
    let _ = writeln!(out, "  states {}", set(m.states()));
    let _ = writeln!(out, "  registers {}", set(m.registers()));
    let _ = writeln!(out, "  output-register {}", m.registers()[m.output_register()]);
    for tr in m.transitions() {
        let children = if tr.children.is_empty() {
            String::new()
        } else {
            format!("({})", join(&tr.children, ",", |&c| m.states()[c].to_string()))
        };
        let _ = write!(out, "  on {}{children} -> {}", tr.letter, m.states()[tr.next]);
        if !tr.updates.is_empty() {
            out.push_str(" with ");
            out.push_str(&join(tr.updates.iter().enumerate(), ", ", |(r, u)| {
                let value = match u {
                    Update::Undefined => "undefined".to_string(),
                    Update::Tree(e) => reg_tree(e, m.registers()),
                    Update::Str(items) if items.is_empty() => "\"\"".to_string(),
                    Update::Str(items) => join(items, " . ", |i| match i {
                        RegItem::Lit(s) => lit(s),
                        RegItem::Reg { child, register } => call(m.registers(), *register, *child),
                    }),
                };
                format!("{} = {value}", m.registers()[r])
            }));
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}

fn sst_expr(e: Option<&Vec<SstItem>>, regs: &[Symbol]) -> String {
    match e {
        None => "undefined".into(),
        Some(items) if items.is_empty() => "\"\"".into(),
        Some(items) => join(items.iter(), ".", |i| match i {
            SstItem::Lit(s) => lit(s),
            SstItem::Reg(r) => regs[*r].to_string(),
        }),
    }
}

pub fn print_sst(s: &Sst) -> String {
    let d = s.def();
    let regs = &d.registers;
    let mut out = String::from("sst {\n");
    let _ = writeln!(out, "  input {};", set(&d.input));
    let _ = writeln!(out, "  output {};", set(&d.output));
    let _ = writeln!(out, "  states {};", set(&d.states));
    let _ = writeln!(out, "  initial {};", d.states[d.initial]);
    let _ = writeln!(out, "  registers {};", set(regs));
    if !regs.is_empty() {
        let init = join(d.init.iter().enumerate(), ", ", |(r, w)| {
            let e = w
                .as_ref()
                .map(|w| w.iter().cloned().map(SstItem::Lit).collect::<Vec<_>>());
            format!("{}={}", regs[r], sst_expr(e.as_ref(), regs))
        });
        let _ = writeln!(out, "  init {init};");
    }
    for (q, row) in d.transitions.iter().enumerate() {
        for (a, tr) in row.iter().enumerate() {
            let _ = write!(out, "  on {},{} -> {}", d.states[q], d.input[a], d.states[tr.next]);
            if !regs.is_empty() {
                out.push_str(" with ");
                out.push_str(&join(tr.updates.iter().enumerate(), ", ", |(r, u)| {
                    format!("{}={}", regs[r], sst_expr(u.as_ref(), regs))
                }));
            }
            out.push_str(";\n");
        }
    }
    for (q, e) in d.final_output.iter().enumerate() {
        if let Some(e) = e {
            let _ = writeln!(out, "  output {} = {};", d.states[q], sst_expr(Some(e), regs));
        }
    }
    out.push_str("}\n");
    out
}
