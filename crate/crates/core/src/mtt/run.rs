use std::cell::OnceCell;
use std::rc::Rc;

use crate::bta::Annotated;
use crate::terms::{Context, Term, Tree};
use crate::value::TransduceError;

use super::{MacroRhs, MacroTT};

/// A suspended argument: either a formal parameter of the outermost call or
/// a right-hand-side fragment with the environment it was written in.
#[derive(Clone)]
enum Thunk<'a, 't> {
    Formal(usize),
    Closure(Rc<Closure<'a, 't>>),
}

struct Closure<'a, 't> {
    rhs: &'a MacroRhs,
    node: &'a Annotated<'t>,
    path: Rc<[usize]>,
    env: Rc<[Thunk<'a, 't>]>,
    value: OnceCell<Result<Rc<Out>, TransduceError>>,
}

/// Output under construction; forced arguments are shared, not copied.
enum Out {
    Node(crate::terms::Symbol, Vec<Rc<Out>>),
    Param(usize),
}

impl Out {
    fn to_term(&self) -> Term {
        match self {
            Out::Node(l, cs) => Term::Node(l.clone(), cs.iter().map(|c| c.to_term()).collect()),
            Out::Param(i) => Term::Param(*i),
        }
    }
}

struct Oi<'a> {
    m: &'a MacroTT,
}

impl<'a> Oi<'a> {
    fn call<'t>(
        &self,
        state: usize,
        node: &'a Annotated<'t>,
        path: Rc<[usize]>,
        env: Rc<[Thunk<'a, 't>]>,
    ) -> Result<Rc<Out>, TransduceError> {
        let Some(rule) = self.m.find_rule(state, node.letter, &node.child_states()) else {
            return Err(TransduceError::UndefinedTransition {
                state: self.m.states()[state].clone(),
                letter: node.tree.label().clone(),
                lookahead: match self.m.lookahead() {
                    None => Vec::new(),
                    Some(a) => node
                        .children
                        .iter()
                        .map(|c| a.state_name(c.state).clone())
                        .collect(),
                },
                path: path.to_vec(),
            });
        };
        self.eval(&rule.rhs, node, &path, &env)
    }

    fn eval<'t>(
        &self,
        rhs: &'a MacroRhs,
        node: &'a Annotated<'t>,
        path: &Rc<[usize]>,
        env: &Rc<[Thunk<'a, 't>]>,
    ) -> Result<Rc<Out>, TransduceError> {
        match rhs {
            MacroRhs::Letter(l, cs) => Ok(Rc::new(Out::Node(
                l.clone(),
                cs.iter()
                    .map(|c| self.eval(c, node, path, env))
                    .collect::<Result<_, _>>()?,
            ))),
            MacroRhs::Param(j) => self.force(&env[*j]),
            MacroRhs::Call { state, child, args } => {
                let env: Rc<[Thunk<'a, 't>]> = args
                    .iter()
                    .map(|a| {
                        Thunk::Closure(Rc::new(Closure {
                            rhs: a,
                            node,
                            path: path.clone(),
                            env: env.clone(),
                            value: OnceCell::new(),
                        }))
                    })
                    .collect();
                let mut p = path.to_vec();
                p.push(*child);
                self.call(*state, &node.children[*child], p.into(), env)
            }
        }
    }

    fn force(&self, thunk: &Thunk<'a, '_>) -> Result<Rc<Out>, TransduceError> {
        match thunk {
            Thunk::Formal(i) => Ok(Rc::new(Out::Param(*i))),
            Thunk::Closure(c) => c
                .value
                .get_or_init(|| self.eval(c.rhs, c.node, &c.path, &c.env))
                .clone(),
        }
    }
}

impl MacroTT {
    /// Normal form of `initial<t>`.
    pub fn run_oi(&self, t: &Tree) -> Result<Tree, TransduceError> {
        let ctx = self.run_oi_open(self.initial(), t)?;
        Ok(ctx.to_tree().expect("initial state has no parameters"))
    }

    /// Normal form of `state<t>(x1,...,xn)` with formal parameters.
    pub fn run_oi_open(&self, state: usize, t: &Tree) -> Result<Context, TransduceError> {
        let node = Annotated::new(t, self.input(), self.lookahead())?;
        let arity = self.arity(state);
        let env: Rc<[Thunk<'_, '_>]> = (0..arity).map(Thunk::Formal).collect();
        let body = Oi { m: self }
            .call(state, &node, Rc::from(Vec::new()), env)?
            .to_term();
        Ok(Context::new(arity, body).expect("parameters come from the formal environment"))
    }

    /// One context register per state at the root; `None` marks undefined.
    pub fn run_bottomup(&self, t: &Tree) -> Result<Vec<Option<Context>>, TransduceError> {
        let node = Annotated::new(t, self.input(), self.lookahead())?;
        Ok(self.registers(&node))
    }

    fn registers(&self, node: &Annotated<'_>) -> Vec<Option<Context>> {
        let child_regs: Vec<Vec<Option<Context>>> =
            node.children.iter().map(|c| self.registers(c)).collect();
        let refs: Vec<&[Option<Context>]> = child_regs.iter().map(Vec::as_slice).collect();
        let vector = node.child_states();
        (0..self.states().len())
            .map(|q| {
                let rule = self.find_rule(q, node.letter, &vector)?;
                let body = bottom_up(&rule.rhs, &refs)?;
                Some(Context::new(self.arity(q), body).expect("checked parameter range"))
            })
            .collect()
    }
}

/// Evaluates a right-hand side over child registers. An argument is only
/// evaluated if the parameter it is bound to occurs in the callee's context.
fn bottom_up(rhs: &MacroRhs, regs: &[&[Option<Context>]]) -> Option<Term> {
    match rhs {
        MacroRhs::Param(j) => Some(Term::Param(*j)),
        MacroRhs::Letter(l, cs) => Some(Term::Node(
            l.clone(),
            cs.iter().map(|c| bottom_up(c, regs)).collect::<Option<_>>()?,
        )),
        MacroRhs::Call { state, child, args } => {
            let ctx = regs[*child][*state].as_ref()?;
            let mut cache: Vec<Option<Option<Term>>> = vec![None; args.len()];
            ctx.body()
                .try_substitute(&mut |i| {
                    cache[i]
                        .get_or_insert_with(|| bottom_up(&args[i], regs))
                        .clone()
                        .ok_or(())
                })
                .ok()
        }
    }
}
