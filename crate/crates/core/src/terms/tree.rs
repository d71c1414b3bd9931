use std::fmt;

use super::{RankedAlphabet, Symbol, TermError, Word};

/// A finite ranked tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    label: Symbol,
    children: Vec<Tree>,
}

impl Tree {
    pub fn leaf(label: impl Into<Symbol>) -> Self {
        Tree {
            label: label.into(),
            children: Vec::new(),
        }
    }

    pub fn node(label: impl Into<Symbol>, children: Vec<Tree>) -> Self {
        Tree {
            label: label.into(),
            children,
        }
    }

    pub fn label(&self) -> &Symbol {
        &self.label
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn into_parts(self) -> (Symbol, Vec<Tree>) {
        (self.label, self.children)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(Tree::depth).max().unwrap_or(0)
    }

    /// Checks that every label is a letter of `alphabet` with matching arity.
    pub fn check(&self, alphabet: &RankedAlphabet) -> Result<(), TermError> {
        match alphabet.arity(self.label.as_str()) {
            None => Err(TermError::UnknownLetter(self.label.to_string())),
            Some(a) if a != self.children.len() => Err(TermError::ArityMismatch {
                letter: self.label.to_string(),
                expected: a,
                found: self.children.len(),
            }),
            Some(_) => self.children.iter().try_for_each(|c| c.check(alphabet)),
        }
    }

    pub fn preorder(&self) -> Vec<&Symbol> {
        let mut out = Vec::with_capacity(self.size());
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(&t.label);
            stack.extend(t.children.iter().rev());
        }
        out
    }

    /// Subtree at a path of 0-based child indices.
    pub fn at(&self, path: &[usize]) -> Option<&Tree> {
        path.iter()
            .try_fold(self, |t, &i| t.children.get(i))
    }

    /// Left-to-right leaf word with the alphabet's neutral letters erased.
    pub fn yield_word(&self, alphabet: &RankedAlphabet) -> Word {
        let mut out = Word::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if t.children.is_empty() {
                if !alphabet.is_neutral(t.label.as_str()) {
                    out.push(t.label.clone());
                }
            } else {
                stack.extend(t.children.iter().rev());
            }
        }
        out
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label.as_str())?;
        if !self.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn yield_of(t: &Tree, alphabet: &RankedAlphabet) -> Word {
    t.yield_word(alphabet)
}

pub fn tree_size(t: &Tree) -> usize {
    t.size()
}

/// Encodes `w` as the unary chain `w1(w2(...(wn(end))))`.
pub fn encode_string(w: &Word, alphabet: &RankedAlphabet) -> Result<Tree, TermError> {
    let end = alphabet
        .string_end_marker()
        .ok_or(TermError::NotStringAlphabet)?;
    for s in w {
        match alphabet.arity(s.as_str()) {
            Some(1) => {}
            Some(a) => {
                return Err(TermError::ArityMismatch {
                    letter: s.to_string(),
                    expected: 1,
                    found: a,
                })
            }
            None => return Err(TermError::UnknownLetter(s.to_string())),
        }
    }
    let mut t = Tree::leaf(end.clone());
    for s in w.iter().rev() {
        t = Tree::node(s.clone(), vec![t]);
    }
    Ok(t)
}

/// Inverse of [`encode_string`]. The chain must end in the alphabet's end marker.
pub fn decode_string(t: &Tree, alphabet: &RankedAlphabet) -> Result<Word, TermError> {
    let end = alphabet
        .string_end_marker()
        .ok_or(TermError::NotStringAlphabet)?;
    let mut out = Word::new();
    let mut cur = t;
    loop {
        match cur.children.len() {
            0 if cur.label == *end => return Ok(out),
            0 => {
                return Err(TermError::NotAChain(format!(
                    "chain ends in {} instead of {end}",
                    cur.label
                )))
            }
            1 => {
                if alphabet.arity(cur.label.as_str()) != Some(1) {
                    return Err(TermError::UnknownLetter(cur.label.to_string()));
                }
                out.push(cur.label.clone());
                cur = &cur.children[0];
            }
            n => {
                return Err(TermError::NotAChain(format!(
                    "{} has {n} children",
                    cur.label
                )))
            }
        }
    }
}

/// Body of a context: a tree whose leaves may be parameters (0-based internally,
/// printed as `x1`, `x2`, ...).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Node(Symbol, Vec<Term>),
    Param(usize),
}

impl Term {
    pub fn leaf(label: impl Into<Symbol>) -> Self {
        Term::Node(label.into(), Vec::new())
    }

    pub fn from_tree(t: &Tree) -> Self {
        Term::Node(
            t.label.clone(),
            t.children.iter().map(Term::from_tree).collect(),
        )
    }

    /// The tree denoted by a parameter-free term.
    pub fn to_tree(&self) -> Option<Tree> {
        match self {
            Term::Param(_) => None,
            Term::Node(s, cs) => Some(Tree::node(
                s.clone(),
                cs.iter().map(Term::to_tree).collect::<Option<Vec<_>>>()?,
            )),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Param(_) => 1,
            Term::Node(_, cs) => 1 + cs.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Largest parameter index occurring, if any.
    pub fn max_param(&self) -> Option<usize> {
        match self {
            Term::Param(i) => Some(*i),
            Term::Node(_, cs) => cs.iter().filter_map(Term::max_param).max(),
        }
    }

    pub fn occurs(&self, param: usize) -> bool {
        match self {
            Term::Param(i) => *i == param,
            Term::Node(_, cs) => cs.iter().any(|c| c.occurs(param)),
        }
    }

    pub fn occurrences(&self, param: usize) -> usize {
        match self {
            Term::Param(i) => usize::from(*i == param),
            Term::Node(_, cs) => cs.iter().map(|c| c.occurrences(param)).sum(),
        }
    }

    /// Replaces every parameter `x_i` by `args[i]`.
    pub fn substitute(&self, args: &[Term]) -> Term {
        match self {
            Term::Param(i) => args[*i].clone(),
            Term::Node(s, cs) => Term::Node(s.clone(), cs.iter().map(|c| c.substitute(args)).collect()),
        }
    }

    /// Like [`Term::substitute`] but fallible, with a per-parameter callback
    /// that is only invoked for parameters that actually occur.
    pub fn try_substitute<E>(
        &self,
        arg: &mut impl FnMut(usize) -> Result<Term, E>,
    ) -> Result<Term, E> {
        match self {
            Term::Param(i) => arg(*i),
            Term::Node(s, cs) => Ok(Term::Node(
                s.clone(),
                cs.iter()
                    .map(|c| c.try_substitute(arg))
                    .collect::<Result<_, _>>()?,
            )),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Param(i) => write!(f, "x{}", i + 1),
            Term::Node(s, cs) => {
                f.write_str(s.as_str())?;
                if !cs.is_empty() {
                    f.write_str("(")?;
                    for (i, c) in cs.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{c}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A tree context of a fixed arity: the `n`-ary tree function `x1..xn ↦ body`.
/// Parameters may occur any number of times, in any order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Context {
    arity: usize,
    body: Term,
}

impl Context {
    pub fn new(arity: usize, body: Term) -> Result<Self, TermError> {
        if let Some(m) = body.max_param() {
            if m >= arity {
                return Err(TermError::ParamOutOfRange { index: m + 1, arity });
            }
        }
        Ok(Context { arity, body })
    }

    /// `x ↦ x`
    pub fn identity() -> Self {
        Context {
            arity: 1,
            body: Term::Param(0),
        }
    }

    /// `x1..xn ↦ xi` (0-based `i`).
    pub fn projection(arity: usize, i: usize) -> Self {
        assert!(i < arity);
        Context {
            arity,
            body: Term::Param(i),
        }
    }

    pub fn from_tree(t: &Tree) -> Self {
        Context {
            arity: 0,
            body: Term::from_tree(t),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn body(&self) -> &Term {
        &self.body
    }

    pub fn into_body(self) -> Term {
        self.body
    }

    /// The tree denoted by a context without parameter occurrences.
    pub fn to_tree(&self) -> Option<Tree> {
        self.body.to_tree()
    }

    /// Replaces each `x_i` by the body of `args[i]`. The caller fixes the
    /// arity of the result; every parameter used by the arguments must fit.
    pub fn substitute(&self, args: &[Context], arity: usize) -> Result<Context, TermError> {
        if args.len() != self.arity {
            return Err(TermError::ArgumentCount {
                expected: self.arity,
                found: args.len(),
            });
        }
        for a in args {
            if let Some(m) = a.body.max_param() {
                if m >= arity {
                    return Err(TermError::ParamOutOfRange { index: m + 1, arity });
                }
            }
        }
        let bodies: Vec<Term> = args.iter().map(|a| a.body.clone()).collect();
        Ok(Context {
            arity,
            body: self.body.substitute(&bodies),
        })
    }

    /// Composition of unary contexts: `(self ∘ inner)(x) = self(inner(x))`.
    pub fn compose(&self, inner: &Context) -> Result<Context, TermError> {
        self.substitute(std::slice::from_ref(inner), inner.arity)
    }

    /// Shrinks the arity to the largest parameter index actually used.
    pub fn normalized(&self) -> Context {
        Context {
            arity: self.body.max_param().map_or(0, |m| m + 1),
            body: self.body.clone(),
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.body, f)
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.arity {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "x{}", i + 1)?;
        }
        write!(f, ") ↦ {}", self.body)
    }
}
