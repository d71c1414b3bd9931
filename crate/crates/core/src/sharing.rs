//! Shared evaluation of tree-output top-down transducers.
//!
//! [`run_shared`] memoizes on (state, input node): the output of `q<t>` is
//! built once and referenced wherever it is demanded. [`dedup`] then merges
//! all structurally equal subgraphs.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::time::Instant;

use crate::bta::Annotated;
use crate::tdtt::{TdRhs, TopDownTT, TreeRhs};
use crate::terms::{DagNode, TermDag, Tree};
use crate::value::TransduceError;

struct Builder<'a> {
    tt: &'a TopDownTT,
    nodes: Vec<DagNode>,
    memo: HashMap<(usize, *const Annotated<'a>), usize>,
}

impl<'a> Builder<'a> {
    fn call(
        &mut self,
        state: usize,
        node: &'a Annotated<'a>,
        path: &mut Vec<usize>,
    ) -> Result<usize, TransduceError> {
        if let Some(&id) = self.memo.get(&(state, node as *const _)) {
            return Ok(id);
        }
        let Some(rule) = self.tt.find_rule(state, node.letter, &node.child_states()) else {
            return Err(TransduceError::UndefinedTransition {
                state: self.tt.states()[state].clone(),
                letter: node.tree.label().clone(),
                lookahead: match self.tt.lookahead() {
                    None => Vec::new(),
                    Some(a) => node
                        .children
                        .iter()
                        .map(|c| a.state_name(c.state).clone())
                        .collect(),
                },
                path: path.clone(),
            });
        };
        let TdRhs::Tree(rhs) = &rule.rhs else {
            return Err(TransduceError::WrongKind {
                expected: "a tree-output transducer",
            });
        };
        let id = self.build(rhs, node, path)?;
        self.memo.insert((state, node as *const _), id);
        Ok(id)
    }

    fn build(
        &mut self,
        rhs: &TreeRhs,
        node: &'a Annotated<'a>,
        path: &mut Vec<usize>,
    ) -> Result<usize, TransduceError> {
        match rhs {
            TreeRhs::Call { state, child } => {
                path.push(*child);
                let r = self.call(*state, &node.children[*child], path);
                path.pop();
                r
            }
            TreeRhs::Letter(l, cs) => {
                let children = cs
                    .iter()
                    .map(|c| self.build(c, node, path))
                    .collect::<Result<_, _>>()?;
                self.nodes.push(DagNode {
                    label: l.clone(),
                    children,
                });
                Ok(self.nodes.len() - 1)
            }
        }
    }
}

/// The output of `tt` on `t` as a dag in which each `q<u>` is built once.
pub fn run_shared(tt: &TopDownTT, t: &Tree) -> Result<TermDag, TransduceError> {
    if tt.output().is_string() {
        return Err(TransduceError::WrongKind {
            expected: "a tree-output transducer",
        });
    }
    let node = tt.annotate(t)?;
    let mut b = Builder {
        tt,
        nodes: Vec::new(),
        memo: HashMap::new(),
    };
    let root = b.call(tt.initial(), &node, &mut Vec::new())?;
    let nodes: BTreeMap<usize, DagNode> = b.nodes.into_iter().enumerate().collect();
    Ok(TermDag::new(nodes, root)
        .expect("memoized evaluation yields an acyclic rooted graph")
        .renumbered())
}

/// Merges structurally equal subgraphs; ids are assigned children first.
pub fn dedup(d: &TermDag) -> TermDag {
    let mut canon: HashMap<DagNode, usize> = HashMap::new();
    let mut new_id: HashMap<usize, usize> = HashMap::new();
    let mut nodes = BTreeMap::new();
    for id in d.postorder() {
        let old = d.node(id).expect("postorder visits existing nodes");
        let key = DagNode {
            label: old.label.clone(),
            children: old.children.iter().map(|c| new_id[c]).collect(),
        };
        let next = canon.len();
        let nid = *canon.entry(key.clone()).or_insert_with(|| {
            nodes.insert(next, key);
            next
        });
        new_id.insert(id, nid);
    }
    TermDag::new(nodes, new_id[&d.root()]).expect("merging preserves validity")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthRow {
    pub n: usize,
    pub input_size: usize,
    pub tree_size: u128,
    pub dag_memo_nodes: usize,
    pub dag_dedup_nodes: usize,
    pub micros: u128,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
}

pub const CSV_HEADER: &str = "n,input_size,tree_size,dag_memo_nodes,dag_dedup_nodes,micros";

impl GrowthReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                r.n, r.input_size, r.tree_size, r.dag_memo_nodes, r.dag_dedup_nodes, r.micros
            );
        }
        s
    }
}

/// Runs `tt` with sharing on `family(n)` for every `n` in `range`.
pub fn growth_report(
    tt: &TopDownTT,
    family: impl Fn(usize) -> Tree,
    range: impl IntoIterator<Item = usize>,
) -> Result<GrowthReport, TransduceError> {
    let mut rows = Vec::new();
    for n in range {
        let input = family(n);
        let start = Instant::now();
        let memo = run_shared(tt, &input)?;
        let micros = start.elapsed().as_micros();
        rows.push(GrowthRow {
            n,
            input_size: input.size(),
            tree_size: memo.unfolded_size(),
            dag_memo_nodes: memo.node_count(),
            dag_dedup_nodes: dedup(&memo).node_count(),
            micros,
        });
    }
    Ok(GrowthReport { rows })
}
