use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use super::{RankedAlphabet, Symbol, TermError, Tree, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DagNode {
    pub label: Symbol,
    pub children: Vec<usize>,
}

/// A rooted acyclic term graph. Every node is reachable from the root.
#[derive(Clone, PartialEq, Eq)]
pub struct TermDag {
    nodes: BTreeMap<usize, DagNode>,
    root: usize,
}

impl TermDag {
    /// Validates references, reachability from `root` and acyclicity.
    pub fn new(nodes: BTreeMap<usize, DagNode>, root: usize) -> Result<Self, TermError> {
        if !nodes.contains_key(&root) {
            return Err(TermError::MissingNode(root));
        }
        for node in nodes.values() {
            if let Some(&c) = node.children.iter().find(|c| !nodes.contains_key(c)) {
                return Err(TermError::MissingNode(c));
            }
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut mark: HashMap<usize, u8> = HashMap::with_capacity(nodes.len());
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        mark.insert(root, 1);
        while let Some(&mut (id, ref mut next)) = stack.last_mut() {
            let children = &nodes[&id].children;
            if *next < children.len() {
                let c = children[*next];
                *next += 1;
                match mark.get(&c).copied().unwrap_or(0) {
                    0 => {
                        mark.insert(c, 1);
                        stack.push((c, 0));
                    }
                    1 => return Err(TermError::Cycle(c)),
                    _ => {}
                }
            } else {
                mark.insert(id, 2);
                stack.pop();
            }
        }
        if let Some(&id) = nodes.keys().find(|id| !mark.contains_key(id)) {
            return Err(TermError::Unreachable(id));
        }
        Ok(TermDag { nodes, root })
    }

    /// The dag with no sharing at all; ids in postorder.
    pub fn from_tree(t: &Tree) -> Self {
        fn go(t: &Tree, nodes: &mut BTreeMap<usize, DagNode>) -> usize {
            let children = t.children().iter().map(|c| go(c, nodes)).collect();
            let id = nodes.len();
            nodes.insert(
                id,
                DagNode {
                    label: t.label().clone(),
                    children,
                },
            );
            id
        }
        let mut nodes = BTreeMap::new();
        let root = go(t, &mut nodes);
        TermDag { nodes, root }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, id: usize) -> Option<&DagNode> {
        self.nodes.get(&id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (usize, &DagNode)> + '_ {
        self.nodes.iter().map(|(k, v)| (*k, v))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.values().map(|n| n.children.len()).sum()
    }

    /// `(node count, edge count)`
    pub fn stats(&self) -> (usize, usize) {
        (self.node_count(), self.edge_count())
    }

    /// Checks labels and child counts against `alphabet`.
    pub fn check(&self, alphabet: &RankedAlphabet) -> Result<(), TermError> {
        for node in self.nodes.values() {
            match alphabet.arity(node.label.as_str()) {
                None => return Err(TermError::UnknownLetter(node.label.to_string())),
                Some(a) if a != node.children.len() => {
                    return Err(TermError::ArityMismatch {
                        letter: node.label.to_string(),
                        expected: a,
                        found: node.children.len(),
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Ids of all nodes, children before parents, root last.
    pub fn postorder(&self) -> Vec<usize> {
        let mut seen = HashMap::with_capacity(self.nodes.len());
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, 0usize)];
        seen.insert(self.root, ());
        while let Some(&mut (id, ref mut next)) = stack.last_mut() {
            let children = &self.nodes[&id].children;
            if *next < children.len() {
                let c = children[*next];
                *next += 1;
                if seen.insert(c, ()).is_none() {
                    stack.push((c, 0));
                }
            } else {
                order.push(id);
                stack.pop();
            }
        }
        order
    }

    /// Renumbers ids `0..n` in postorder (a topological order, root last).
    pub fn renumbered(&self) -> TermDag {
        let order = self.postorder();
        let new_id: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let nodes = order
            .iter()
            .enumerate()
            .map(|(i, id)| {
                let n = &self.nodes[id];
                (
                    i,
                    DagNode {
                        label: n.label.clone(),
                        children: n.children.iter().map(|c| new_id[c]).collect(),
                    },
                )
            })
            .collect();
        TermDag {
            nodes,
            root: new_id[&self.root],
        }
    }

    /// Expands every shared node; the result can be exponentially larger.
    pub fn unfold(&self) -> Tree {
        let mut memo: HashMap<usize, Tree> = HashMap::new();
        for id in self.postorder() {
            let n = &self.nodes[&id];
            let t = Tree::node(
                n.label.clone(),
                n.children.iter().map(|c| memo[c].clone()).collect(),
            );
            memo.insert(id, t);
        }
        memo.remove(&self.root).expect("root is in postorder")
    }

    /// Size of the unfolding, computed without building it.
    pub fn unfolded_size(&self) -> u128 {
        let mut size: HashMap<usize, u128> = HashMap::new();
        for id in self.postorder() {
            let s = 1 + self.nodes[&id].children.iter().map(|c| size[c]).sum::<u128>();
            size.insert(id, s);
        }
        size[&self.root]
    }

    /// Leaf word of the unfolding, by in-order traversal of the dag with multiplicity.
    pub fn yield_word(&self, alphabet: &RankedAlphabet) -> Word {
        let mut out = Word::new();
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            let n = &self.nodes[&id];
            if n.children.is_empty() {
                if !alphabet.is_neutral(n.label.as_str()) {
                    out.push(n.label.clone());
                }
            } else {
                stack.extend(n.children.iter().rev());
            }
        }
        out
    }

    /// `id: label(id,...)` lines in id order, then `root: id`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (id, n) in &self.nodes {
            write!(s, "{id}: {}", n.label).unwrap();
            if !n.children.is_empty() {
                s.push('(');
                for (i, c) in n.children.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    write!(s, "{c}").unwrap();
                }
                s.push(')');
            }
            s.push('\n');
        }
        writeln!(s, "root: {}", self.root).unwrap();
        s
    }

    pub fn parse_text(text: &str) -> Result<TermDag, TermError> {
        let mut nodes = BTreeMap::new();
        let mut root = None;
        let mut offset = 0;
        for line in text.lines() {
            let pos = offset;
            offset += line.len() + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: &str| TermError::Syntax {
                pos,
                message: message.to_string(),
            };
            let (head, rest) = line.split_once(':').ok_or_else(|| syntax("expected `id:`"))?;
            let head = head.trim();
            let rest = rest.trim();
            if head == "root" {
                let id = rest.parse().map_err(|_| syntax("bad root id"))?;
                if root.replace(id).is_some() {
                    return Err(syntax("duplicate root line"));
                }
                continue;
            }
            let id: usize = head.parse().map_err(|_| syntax("bad node id"))?;
            let (label, children) = match rest.split_once('(') {
                None => (rest, Vec::new()),
                Some((label, args)) => {
                    let args = args
                        .strip_suffix(')')
                        .ok_or_else(|| syntax("expected ')'"))?;
                    let children = args
                        .split(',')
                        .map(|a| a.trim().parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| syntax("bad child id"))?;
                    (label.trim(), children)
                }
            };
            super::validate_name(label)?;
            let node = DagNode {
                label: Symbol::from(label),
                children,
            };
            if nodes.insert(id, node).is_some() {
                return Err(TermError::DuplicateName(format!("node {id}")));
            }
        }
        let root = root.ok_or(TermError::Syntax {
            pos: text.len(),
            message: "missing `root:` line".into(),
        })?;
        TermDag::new(nodes, root)
    }
}

impl fmt::Debug for TermDag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn unfold(d: &TermDag) -> Tree {
    d.unfold()
}

pub fn dag_stats(d: &TermDag) -> (usize, usize) {
    d.stats()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_term;

    fn abc() -> RankedAlphabet {
        RankedAlphabet::new([("a", 2), ("b", 1), ("c", 0)]).unwrap()
    }

    fn shared_figure() -> TermDag {
        // a -> (b, a'); b -> b'; a' -> (b', c); b' -> c
        TermDag::parse_text("0: c\n1: b(0)\n2: a(1,0)\n3: b(1)\n4: a(3,2)\nroot: 4\n").unwrap()
    }

    #[test]
    fn tree_shaped_dag_unfolds_to_itself() {
        let t = parse_term("a(b(c),a(c,c))", &abc()).unwrap();
        let d = TermDag::from_tree(&t);
        assert_eq!(d.unfold(), t);
        assert_eq!(d.stats(), (6, 5));
    }

    #[test]
    fn shared_figure_unfolds() {
        let d = shared_figure();
        d.check(&abc()).unwrap();
        assert_eq!(d.stats(), (5, 6));
        assert_eq!(d.unfold().to_string(), "a(b(b(c)),a(b(c),c))");
        assert_eq!(d.unfolded_size(), 8);
    }

    #[test]
    fn diamond_unfolds_by_copying() {
        let d = TermDag::parse_text("7: c\n3: b(7)\n9: a(3,3)\nroot: 9").unwrap();
        assert_eq!(d.unfold().to_string(), "a(b(c),b(c))");
        assert_eq!(d.renumbered().to_text(), "0: c\n1: b(0)\n2: a(1,1)\nroot: 2\n");
    }

    #[test]
    fn rejects_bad_dags() {
        assert!(matches!(
            TermDag::parse_text("0: b(1)\n1: b(0)\nroot: 0"),
            Err(TermError::Cycle(_))
        ));
        assert!(matches!(
            TermDag::parse_text("0: b(5)\nroot: 0"),
            Err(TermError::MissingNode(5))
        ));
        assert!(matches!(
            TermDag::parse_text("0: c\n1: c\nroot: 0"),
            Err(TermError::Unreachable(1))
        ));
        assert!(TermDag::parse_text("0: c\n").is_err());
        let d = TermDag::parse_text("0: c\n1: a(0)\nroot: 1").unwrap();
        assert!(d.check(&abc()).is_err());
    }

    #[test]
    fn text_round_trip() {
        let d = shared_figure();
        assert_eq!(TermDag::parse_text(&d.to_text()).unwrap(), d);
    }
}
