use crate::bta::Annotated;
use crate::terms::{Tree, Word};
use crate::value::{TransduceError, Value};

use super::{StrItem, TdRhs, TopDownTT, TreeRhs};

/// Register contents at the root after a bottom-up pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottomUpRun {
    /// Indexed by state; `None` is the undefined marker.
    pub registers: Vec<Option<Value>>,
    /// The register of the initial state.
    pub output: Option<Value>,
}

/// The configuration after every input node, for rendering runs.
#[derive(Debug, Clone)]
pub struct RegisterTrace {
    pub letter: crate::terms::Symbol,
    pub lookahead: usize,
    pub registers: Vec<Option<Value>>,
    pub children: Vec<RegisterTrace>,
}

impl TopDownTT {
    pub(crate) fn annotate<'t>(&self, t: &'t Tree) -> Result<Annotated<'t>, TransduceError> {
        Ok(Annotated::new(t, self.input(), self.lookahead())?)
    }

    fn undefined(&self, state: usize, node: &Annotated<'_>, path: &[usize]) -> TransduceError {
        TransduceError::UndefinedTransition {
            state: self.states()[state].clone(),
            letter: node.tree.label().clone(),
            lookahead: match self.lookahead() {
                None => Vec::new(),
                Some(a) => node
                    .children
                    .iter()
                    .map(|c| a.state_name(c.state).clone())
                    .collect(),
            },
            path: path.to_vec(),
        }
    }

    /// Normal form of `initial<t>`.
    pub fn run_topdown(&self, t: &Tree) -> Result<Value, TransduceError> {
        self.run_topdown_from(self.initial(), t)
    }

    /// Normal form of `state<t>`.
    pub fn run_topdown_from(&self, state: usize, t: &Tree) -> Result<Value, TransduceError> {
        let node = self.annotate(t)?;
        let mut path = Vec::new();
        if self.output().is_string() {
            let mut w = Word::new();
            self.apply_word(state, &node, &mut path, &mut w)?;
            Ok(Value::Word(w))
        } else {
            Ok(Value::Tree(self.apply_tree(state, &node, &mut path)?))
        }
    }

    fn apply_tree(
        &self,
        state: usize,
        node: &Annotated<'_>,
        path: &mut Vec<usize>,
    ) -> Result<Tree, TransduceError> {
        let rule = self
            .find_rule(state, node.letter, &node.child_states())
            .ok_or_else(|| self.undefined(state, node, path))?;
        let TdRhs::Tree(rhs) = &rule.rhs else {
            unreachable!("well-formed tree-mode transducer")
        };
        self.eval_tree(rhs, node, path)
    }

    fn eval_tree(
        &self,
        rhs: &TreeRhs,
        node: &Annotated<'_>,
        path: &mut Vec<usize>,
    ) -> Result<Tree, TransduceError> {
        match rhs {
            TreeRhs::Letter(l, cs) => Ok(Tree::node(
                l.clone(),
                cs.iter()
                    .map(|c| self.eval_tree(c, node, path))
                    .collect::<Result<_, _>>()?,
            )),
            TreeRhs::Call { state, child } => {
                path.push(*child);
                let r = self.apply_tree(*state, &node.children[*child], path);
                path.pop();
                r
            }
        }
    }

    fn apply_word(
        &self,
        state: usize,
        node: &Annotated<'_>,
        path: &mut Vec<usize>,
        out: &mut Word,
    ) -> Result<(), TransduceError> {
        let rule = self
            .find_rule(state, node.letter, &node.child_states())
            .ok_or_else(|| self.undefined(state, node, path))?;
        let TdRhs::Str(items) = &rule.rhs else {
            unreachable!("well-formed string-mode transducer")
        };
        for item in items {
            match item {
                StrItem::Lit(s) => out.push(s.clone()),
                StrItem::Call { state, child } => {
                    path.push(*child);
                    let r = self.apply_word(*state, &node.children[*child], path, out);
                    path.pop();
                    r?;
                }
            }
        }
        Ok(())
    }

    /// Register contents for every state at the root. A register is undefined
    /// exactly when its update uses an undefined child register or no rule applies.
    pub fn run_bottomup(&self, t: &Tree) -> Result<BottomUpRun, TransduceError> {
        let node = self.annotate(t)?;
        let registers = self.registers(&node);
        Ok(BottomUpRun {
            output: registers[self.initial()].clone(),
            registers,
        })
    }

    /// Like [`TopDownTT::run_bottomup`], keeping the configuration at every node.
    pub fn run_bottomup_trace(&self, t: &Tree) -> Result<RegisterTrace, TransduceError> {
        fn go(tt: &TopDownTT, node: &Annotated<'_>) -> RegisterTrace {
            let children: Vec<RegisterTrace> = node.children.iter().map(|c| go(tt, c)).collect();
            let regs: Vec<&[Option<Value>]> = children.iter().map(|c| c.registers.as_slice()).collect();
            RegisterTrace {
                letter: node.tree.label().clone(),
                lookahead: node.state,
                registers: tt.step(node, &regs),
                children,
            }
        }
        let node = self.annotate(t)?;
        Ok(go(self, &node))
    }

    fn registers(&self, node: &Annotated<'_>) -> Vec<Option<Value>> {
        let child_regs: Vec<Vec<Option<Value>>> =
            node.children.iter().map(|c| self.registers(c)).collect();
        let refs: Vec<&[Option<Value>]> = child_regs.iter().map(Vec::as_slice).collect();
        self.step(node, &refs)
    }

    fn step(&self, node: &Annotated<'_>, child_regs: &[&[Option<Value>]]) -> Vec<Option<Value>> {
        let vector = node.child_states();
        (0..self.states().len())
            .map(|q| {
                let rule = self.find_rule(q, node.letter, &vector)?;
                match &rule.rhs {
                    TdRhs::Tree(rhs) => bottom_up_tree(rhs, child_regs).map(Value::Tree),
                    TdRhs::Str(items) => bottom_up_word(items, child_regs).map(Value::Word),
                }
            })
            .collect()
    }
}

fn bottom_up_tree(rhs: &TreeRhs, child_regs: &[&[Option<Value>]]) -> Option<Tree> {
    match rhs {
        TreeRhs::Letter(l, cs) => Some(Tree::node(
            l.clone(),
            cs.iter()
                .map(|c| bottom_up_tree(c, child_regs))
                .collect::<Option<_>>()?,
        )),
        TreeRhs::Call { state, child } => child_regs[*child][*state]
            .as_ref()
            .and_then(Value::as_tree)
            .cloned(),
    }
}

fn bottom_up_word(items: &[StrItem], child_regs: &[&[Option<Value>]]) -> Option<Word> {
    let mut w = Word::new();
    for item in items {
        match item {
            StrItem::Lit(s) => w.push(s.clone()),
            StrItem::Call { state, child } => {
                w.extend_from(child_regs[*child][*state].as_ref()?.as_word()?)
            }
        }
    }
    Some(w)
}
