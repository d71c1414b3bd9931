//! Graphviz export. Node ids are assigned in a fixed order, so equal inputs
//! give byte-identical output. Edge labels give child positions `1..k`.

use std::fmt::Write as _;

use crate::bta::Dbta;
use crate::tdtt::RegisterTrace;
use crate::terms::{Symbol, TermDag, Tree};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Nodes `n0, n1, ...` in preorder.
pub fn tree_to_dot(t: &Tree) -> String {
    fn go(t: &Tree, next: &mut usize, out: &mut String) -> usize {
        let id = *next;
        *next += 1;
        let _ = writeln!(out, "  n{id} [label={}];", quote(t.label().as_str()));
        for (i, c) in t.children().iter().enumerate() {
            let cid = go(c, next, out);
            let _ = writeln!(out, "  n{id} -> n{cid} [label=\"{}\"];", i + 1);
        }
        id
    }
    let mut out = String::from("digraph tree {\n  node [shape=plaintext];\n");
    go(t, &mut 0, &mut out);
    out.push_str("}\n");
    out
}

/// One node statement per dag node (by id), then one edge per child slot.
/// The root is drawn with a double outline.
pub fn dag_to_dot(d: &TermDag) -> String {
    let mut out = String::from("digraph dag {\n  node [shape=plaintext];\n");
    for (id, node) in d.nodes() {
        let root = if id == d.root() { ", shape=box, peripheries=2" } else { "" };
        let _ = writeln!(out, "  n{id} [label={}{root}];", quote(node.label.as_str()));
    }
    for (id, node) in d.nodes() {
        for (i, c) in node.children.iter().enumerate() {
            let _ = writeln!(out, "  n{id} -> n{c} [label=\"{}\"];", i + 1);
        }
    }
    out.push_str("}\n");
    out
}

/// States as ellipses, each transition as a box fed by its child states.
pub fn dbta_to_dot(a: &Dbta) -> String {
    let mut out = String::from("digraph lookahead {\n");
    for (i, s) in a.states().iter().enumerate() {
        let _ = writeln!(out, "  s{i} [label={}, shape=ellipse];", quote(s.as_str()));
    }
    for (k, (letter, children, target)) in a.transitions().enumerate() {
        let _ = writeln!(out, "  t{k} [label={}, shape=box];", quote(letter.as_str()));
        for (i, c) in children.iter().enumerate() {
            let _ = writeln!(out, "  s{c} -> t{k} [label=\"{}\"];", i + 1);
        }
        let _ = writeln!(out, "  t{k} -> s{target};");
    }
    out.push_str("}\n");
    out
}

/// The input tree with the configuration after each node: its lookahead
/// (control) state, if `states` is given, and every register.
pub fn trace_to_dot(trace: &RegisterTrace, registers: &[Symbol], states: Option<&[Symbol]>) -> String {
    fn go(
        t: &RegisterTrace,
        registers: &[Symbol],
        states: Option<&[Symbol]>,
        next: &mut usize,
        out: &mut String,
    ) -> usize {
        let id = *next;
        *next += 1;
        let mut label = t.letter.to_string();
        if let Some(names) = states {
            let _ = write!(label, "\nstate = {}", names[t.lookahead]);
        }
        for (r, v) in registers.iter().zip(&t.registers) {
            match v {
                Some(v) => {
                    let _ = write!(label, "\n{r} = {v}");
                }
                None => {
                    let _ = write!(label, "\n{r} = undefined");
                }
            }
        }
        let _ = writeln!(out, "  n{id} [label={}];", quote(&label));
        for (i, c) in t.children.iter().enumerate() {
            let cid = go(c, registers, states, next, out);
            let _ = writeln!(out, "  n{id} -> n{cid} [label=\"{}\"];", i + 1);
        }
        id
    }
    let mut out = String::from("digraph run {\n  node [shape=box];\n");
    go(trace, registers, states, &mut 0, &mut out);
    out.push_str("}\n");
    out
}
