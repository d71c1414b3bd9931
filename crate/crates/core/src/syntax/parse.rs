use std::collections::HashMap;

use crate::bta::{Dbta, DbtaDef};
use crate::mtt::{MacroDef, MacroRhs, MacroTT};
use crate::rules::{Pattern, Rule};
use crate::sst::{Sst, SstDef, SstItem, SstTransition};
use crate::tdtt::{
    MachineTransition, OutputKind, RegExpr, RegItem, RegisterMachine, StrItem, TdRhs, TopDownDef,
    TopDownTT, TreeRhs, Update,
};
use crate::terms::{RankedAlphabet, Symbol, Word};

use super::lexer::{lex, Tok, Token};
use super::{Definition, ParseError};

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type Pos = (usize, usize);

fn syntax(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line: pos.0,
        col: pos.1,
        message: message.into(),
    }
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> Pos {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(Tok::Name(n)) => format!("`{n}`"),
            Some(Tok::Quoted(q)) => format!("'{q}'"),
            Some(Tok::Punct(c)) => format!("`{c}`"),
            Some(Tok::Arrow) => "`->`".to_string(),
        };
        Err(syntax(self.here(), format!("{}, found {found}", message.into())))
    }

    fn at_punct(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Punct(c))
    }

    fn at_name(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Name(n)) if n == kw)
    }

    fn eat_punct(&mut self, c: char) -> bool {
        let hit = self.at_punct(c);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn eat_name(&mut self, kw: &str) -> bool {
        let hit = self.at_name(kw);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expect_arrow(&mut self) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            Ok(())
        } else {
            self.err("expected `->`")
        }
    }

    fn name(&mut self) -> Result<(String, Pos), ParseError> {
        let pos = self.here();
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok((n, pos))
            }
            _ => self.err("expected a name"),
        }
    }

    /// A name or a quoted symbol.
    fn symbol(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Quoted(q)) if !q.is_empty() => {
                let q = q.clone();
                self.pos += 1;
                Ok(q)
            }
            _ => Ok(self.name()?.0),
        }
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        let (n, pos) = self.name()?;
        n.parse()
            .map_err(|_| syntax(pos, format!("expected a number, found `{n}`")))
    }

    fn done(&self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            self.err("expected end of input")
        } else {
            Ok(())
        }
    }

    /// `{ item, item, ... }`, possibly empty.
    fn braced<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        self.expect_punct('{')?;
        let mut out = Vec::new();
        if self.eat_punct('}') {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat_punct('}') {
                return Ok(out);
            }
            self.expect_punct(',')?;
        }
    }

    /// `{a:2, b:1, e:0 neutral}`
    fn alphabet(&mut self) -> Result<RankedAlphabet, ParseError> {
        let mut neutral = Vec::new();
        let letters = self.braced(|p| {
            let name = p.symbol()?;
            p.expect_punct(':')?;
            let arity = p.number()?;
            if p.eat_name("neutral") {
                neutral.push(name.clone());
            }
            Ok((name, arity))
        })?;
        Ok(RankedAlphabet::new(letters)?.with_neutral(neutral)?)
    }

    fn symbol_set(&mut self) -> Result<Vec<Symbol>, ParseError> {
        Ok(self
            .braced(|p| p.symbol())?
            .into_iter()
            .map(Symbol::from)
            .collect())
    }

    /// `{q0, q1}` or `{q0:0, q1:2}`
    fn state_list(&mut self) -> Result<Vec<(String, Option<usize>)>, ParseError> {
        self.braced(|p| {
            let (name, _) = p.name()?;
            let arity = if p.eat_punct(':') {
                Some(p.number()?)
            } else {
                None
            };
            Ok((name, arity))
        })
    }

    fn output(&mut self) -> Result<OutputKind, ParseError> {
        if self.eat_name("string") {
            Ok(OutputKind::String(self.symbol_set()?))
        } else {
            Ok(OutputKind::Tree(self.alphabet()?))
        }
    }
}

/// `lookahead { states {r+,r-}; delta b(r+)->r+; ... }`; also `states r+ r-;`.
struct RawLookahead {
    states: Vec<String>,
    delta: Vec<(String, Vec<String>, String)>,
}

fn lookahead(p: &mut Parser) -> Result<RawLookahead, ParseError> {
    p.expect_punct('{')?;
    let mut states = Vec::new();
    let mut delta = Vec::new();
    while !p.eat_punct('}') {
        if p.eat_name("states") {
            if p.at_punct('{') {
                states.extend(p.braced(|p| Ok(p.name()?.0))?);
            } else {
                while let Some(Tok::Name(_)) = p.peek() {
                    states.push(p.name()?.0);
                }
            }
        } else if p.eat_name("delta") {
            let letter = p.symbol()?;
            let mut children = Vec::new();
            if p.eat_punct('(') {
                loop {
                    children.push(p.name()?.0);
                    if p.eat_punct(')') {
                        break;
                    }
                    p.expect_punct(',')?;
                }
            }
            p.expect_arrow()?;
            delta.push((letter, children, p.name()?.0));
        } else {
            return p.err("expected `states`, `delta` or `}`");
        }
        p.eat_punct(';');
    }
    Ok(RawLookahead { states, delta })
}

fn build_lookahead(raw: RawLookahead, input: &RankedAlphabet) -> Result<Dbta, ParseError> {
    let sym = |s: String| Symbol::from(s);
    Ok(DbtaDef {
        alphabet: input.clone(),
        states: raw.states.into_iter().map(sym).collect(),
        transitions: raw
            .delta
            .into_iter()
            .map(|(l, cs, t)| (sym(l), cs.into_iter().map(sym).collect(), sym(t)))
            .collect(),
    }
    .build()?)
}

/// A right-hand-side expression before names are resolved.
#[derive(Debug)]
enum Expr {
    Quoted(String, Pos),
    /// `name`, `name(args)`, `q<t>` or `q<t>(args)`
    Apply {
        name: String,
        var: Option<String>,
        args: Vec<Vec<Expr>>,
        pos: Pos,
    },
}

/// `factor ('.' factor)*`; a sequence of length one in tree mode.
fn expr(p: &mut Parser) -> Result<Vec<Expr>, ParseError> {
    let mut out = vec![factor(p)?];
    while p.eat_punct('.') {
        out.push(factor(p)?);
    }
    Ok(out)
}

fn factor(p: &mut Parser) -> Result<Expr, ParseError> {
    let pos = p.here();
    if let Some(Tok::Quoted(q)) = p.peek() {
        let q = q.clone();
        p.pos += 1;
        return Ok(Expr::Quoted(q, pos));
    }
    let (name, _) = p.name()?;
    let var = if p.eat_punct('<') {
        let (v, _) = p.name()?;
        p.expect_punct('>')?;
        Some(v)
    } else {
        None
    };
    let mut args = Vec::new();
    if p.eat_punct('(') && !p.eat_punct(')') {
        loop {
            args.push(expr(p)?);
            if p.eat_punct(')') {
                break;
            }
            p.expect_punct(',')?;
        }
    }
    Ok(Expr::Apply {
        name,
        var,
        args,
        pos,
    })
}

struct RawRule {
    state: String,
    letter: String,
    vars: Vec<(String, Option<String>)>,
    params: Option<Vec<String>>,
    rhs: Vec<Expr>,
    pos: Pos,
}

fn rule(p: &mut Parser) -> Result<RawRule, ParseError> {
    let (state, pos) = p.name()?;
    p.expect_punct('<')?;
    let letter = p.symbol()?;
    let mut vars = Vec::new();
    if p.eat_punct('(') {
        loop {
            let (v, _) = p.name()?;
            let la = if p.eat_punct('|') {
                Some(p.name()?.0)
            } else {
                None
            };
            vars.push((v, la));
            if p.eat_punct(')') {
                break;
            }
            p.expect_punct(',')?;
        }
    }
    p.expect_punct('>')?;
    let params = if p.eat_punct('(') {
        let mut ps = Vec::new();
        if !p.eat_punct(')') {
            loop {
                ps.push(p.name()?.0);
                if p.eat_punct(')') {
                    break;
                }
                p.expect_punct(',')?;
            }
        }
        Some(ps)
    } else {
        None
    };
    p.expect_arrow()?;
    let rhs = expr(p)?;
    Ok(RawRule {
        state,
        letter,
        vars,
        params,
        rhs,
        pos,
    })
}

#[derive(Default)]
struct RawTransducer {
    input: Option<RankedAlphabet>,
    output: Option<OutputKind>,
    states: Option<Vec<(String, Option<usize>)>>,
    initial: Option<(String, Pos)>,
    lookahead: Option<RawLookahead>,
    rules: Vec<RawRule>,
}

fn transducer(p: &mut Parser) -> Result<RawTransducer, ParseError> {
    let mut raw = RawTransducer::default();
    while p.peek().is_some() {
        let (section, pos) = p.name()?;
        match section.as_str() {
            "input" => raw.input = Some(p.alphabet()?),
            "output" => raw.output = Some(p.output()?),
            "states" => raw.states = Some(p.state_list()?),
            "initial" => raw.initial = Some(p.name()?),
            "lookahead" => raw.lookahead = Some(lookahead(p)?),
            "rules" => {
                p.expect_punct('{')?;
                while !p.eat_punct('}') {
                    raw.rules.push(rule(p)?);
                    if !p.at_punct('}') {
                        p.expect_punct(';')?;
                    }
                }
            }
            other => return Err(syntax(pos, format!("unknown section `{other}`"))),
        }
        p.eat_punct(';');
    }
    Ok(raw)
}

/// Names bound by one rule: input variables and parameters.
struct Scope<'a> {
    states: &'a HashMap<String, usize>,
    vars: HashMap<&'a str, usize>,
    params: HashMap<String, usize>,
}

impl Scope<'_> {
    fn call(&self, name: &str, var: &str, pos: Pos) -> Result<(usize, usize), ParseError> {
        let state = *self
            .states
            .get(name)
            .ok_or_else(|| syntax(pos, format!("unknown state `{name}`")))?;
        let child = *self
            .vars
            .get(var)
            .ok_or_else(|| syntax(pos, format!("unbound input variable `{var}`")))?;
        Ok((state, child))
    }

    fn tree<R>(
        &self,
        e: &[Expr],
        build: &impl Fn(&Self, &Expr) -> Result<R, ParseError>,
    ) -> Result<R, ParseError> {
        match e {
            [one] => build(self, one),
            _ => {
                let pos = match &e[1] {
                    Expr::Quoted(_, pos) | Expr::Apply { pos, .. } => *pos,
                };
                Err(syntax(pos, "`.` concatenation in a tree right-hand side"))
            }
        }
    }

    fn tree_rhs(&self, e: &Expr) -> Result<TreeRhs, ParseError> {
        match e {
            Expr::Quoted(_, pos) => Err(syntax(*pos, "quoted symbol in a tree right-hand side")),
            Expr::Apply {
                name,
                var: Some(var),
                args,
                pos,
            } => {
                if !args.is_empty() {
                    return Err(syntax(*pos, "arguments in a call of a parameterless state"));
                }
                let (state, child) = self.call(name, var, *pos)?;
                Ok(TreeRhs::Call { state, child })
            }
            Expr::Apply {
                name, var: None, args, ..
            } => Ok(TreeRhs::Letter(
                Symbol::from(name.as_str()),
                args.iter()
                    .map(|a| self.tree(a, &|s, e| s.tree_rhs(e)))
                    .collect::<Result<_, _>>()?,
            )),
        }
    }

    fn macro_rhs(&self, e: &Expr) -> Result<MacroRhs, ParseError> {
        match e {
            Expr::Quoted(_, pos) => Err(syntax(*pos, "quoted symbol in a tree right-hand side")),
            Expr::Apply {
                name,
                var: Some(var),
                args,
                pos,
            } => {
                let (state, child) = self.call(name, var, *pos)?;
                Ok(MacroRhs::Call {
                    state,
                    child,
                    args: args
                        .iter()
                        .map(|a| self.tree(a, &|s, e| s.macro_rhs(e)))
                        .collect::<Result<_, _>>()?,
                })
            }
            Expr::Apply {
                name,
                var: None,
                args,
                pos,
            } => match self.params.get(name.as_str()) {
                Some(&j) if args.is_empty() => Ok(MacroRhs::Param(j)),
                Some(_) => Err(syntax(*pos, format!("parameter `{name}` applied to arguments"))),
                None => Ok(MacroRhs::Letter(
                    Symbol::from(name.as_str()),
                    args.iter()
                        .map(|a| self.tree(a, &|s, e| s.macro_rhs(e)))
                        .collect::<Result<_, _>>()?,
                )),
            },
        }
    }

    fn string_rhs(&self, e: &[Expr]) -> Result<Vec<StrItem>, ParseError> {
        let mut out = Vec::new();
        for f in e {
            match f {
                Expr::Quoted(q, _) if q.is_empty() => {}
                Expr::Quoted(q, _) => out.push(StrItem::Lit(Symbol::from(q.as_str()))),
                Expr::Apply {
                    name,
                    var: Some(var),
                    args,
                    pos,
                } => {
                    if !args.is_empty() {
                        return Err(syntax(*pos, "arguments in a string right-hand side"));
                    }
                    let (state, child) = self.call(name, var, *pos)?;
                    out.push(StrItem::Call { state, child });
                }
                Expr::Apply {
                    name,
                    var: None,
                    args,
                    pos,
                } => {
                    if !args.is_empty() {
                        return Err(syntax(*pos, "letter applied to arguments in a string right-hand side"));
                    }
                    out.push(StrItem::Lit(Symbol::from(name.as_str())));
                }
            }
        }
        Ok(out)
    }
}

struct Resolved {
    input: RankedAlphabet,
    states: Vec<Symbol>,
    arities: Option<Vec<usize>>,
    state_index: HashMap<String, usize>,
    initial: usize,
    lookahead: Option<Dbta>,
}

fn resolve_common(raw: &mut RawTransducer) -> Result<Resolved, ParseError> {
    let missing = |what: &str| syntax((1, 1), format!("missing `{what}` section"));
    let input = raw.input.clone().ok_or_else(|| missing("input"))?;
    let states = raw.states.clone().ok_or_else(|| missing("states"))?;
    let with_arity = states.iter().filter(|(_, a)| a.is_some()).count();
    let arities = if with_arity == 0 {
        None
    } else if with_arity == states.len() {
        Some(states.iter().map(|(_, a)| a.unwrap_or(0)).collect())
    } else {
        return Err(syntax((1, 1), "either all states or none declare an arity"));
    };
    let state_index: HashMap<String, usize> = states
        .iter()
        .enumerate()
        .map(|(i, (n, _))| (n.clone(), i))
        .collect();
    let (init_name, init_pos) = raw.initial.clone().ok_or_else(|| missing("initial"))?;
    let initial = *state_index
        .get(&init_name)
        .ok_or_else(|| syntax(init_pos, format!("unknown state `{init_name}`")))?;
    let lookahead = match raw.lookahead.take() {
        None => None,
        Some(la) => Some(build_lookahead(la, &input)?),
    };
    Ok(Resolved {
        input,
        states: states.into_iter().map(|(n, _)| Symbol::from(n)).collect(),
        arities,
        state_index,
        initial,
        lookahead,
    })
}

fn resolve_rules<R>(
    raw: &RawTransducer,
    r: &Resolved,
    mut rhs: impl FnMut(&Scope<'_>, &RawRule) -> Result<R, ParseError>,
) -> Result<Vec<Rule<R>>, ParseError> {
    let mut out = Vec::new();
    for rule in &raw.rules {
        let state = *r
            .state_index
            .get(&rule.state)
            .ok_or_else(|| syntax(rule.pos, format!("unknown state `{}`", rule.state)))?;
        let mut pattern: Pattern = Vec::new();
        let mut vars = HashMap::new();
        for (i, (v, la)) in rule.vars.iter().enumerate() {
            if vars.insert(v.as_str(), i).is_some() && v != "_" {
                return Err(syntax(rule.pos, format!("input variable `{v}` bound twice")));
            }
            pattern.push(match la.as_deref() {
                None | Some("_") => None,
                Some(name) => {
                    let a = r.lookahead.as_ref().ok_or_else(|| {
                        syntax(rule.pos, "lookahead condition without a lookahead section")
                    })?;
                    Some(a.state_index(name).ok_or_else(|| {
                        syntax(rule.pos, format!("unknown lookahead state `{name}`"))
                    })?)
                }
            });
        }
        vars.remove("_");
        let params = match (&rule.params, &r.arities) {
            (Some(ps), _) => ps.iter().enumerate().map(|(j, p)| (p.clone(), j)).collect(),
            (None, Some(ar)) => (0..ar[state]).map(|j| (format!("x{}", j + 1), j)).collect(),
            (None, None) => HashMap::new(),
        };
        if let (Some(ps), Some(ar)) = (&rule.params, &r.arities) {
            if ps.len() != ar[state] {
                return Err(syntax(
                    rule.pos,
                    format!("state `{}` has {} parameters, rule binds {}", rule.state, ar[state], ps.len()),
                ));
            }
        }
        let scope = Scope {
            states: &r.state_index,
            vars,
            params,
        };
        out.push(Rule {
            state,
            letter: Symbol::from(rule.letter.as_str()),
            pattern,
            rhs: rhs(&scope, rule)?,
        });
    }
    Ok(out)
}

fn build_transducer(mut raw: RawTransducer) -> Result<Definition, ParseError> {
    let r = resolve_common(&mut raw)?;
    let output = raw
        .output
        .clone()
        .ok_or_else(|| syntax((1, 1), "missing `output` section"))?;
    match r.arities.clone() {
        None => {
            let string = output.is_string();
            let rules = resolve_rules(&raw, &r, |s, rule| {
                if rule.params.as_ref().is_some_and(|p| !p.is_empty()) {
                    return Err(syntax(rule.pos, "parameters in a rule of a parameterless state"));
                }
                if string {
                    Ok(TdRhs::Str(s.string_rhs(&rule.rhs)?))
                } else {
                    Ok(TdRhs::Tree(s.tree(&rule.rhs, &|s, e| s.tree_rhs(e))?))
                }
            })?;
            Ok(Definition::TopDown(TopDownTT::new(TopDownDef {
                input: r.input,
                output,
                states: r.states,
                initial: r.initial,
                lookahead: r.lookahead,
                rules,
            })?))
        }
        Some(arities) => {
            let OutputKind::Tree(output) = output else {
                return Err(syntax((1, 1), "macro tree transducers have tree output"));
            };
            let rules = resolve_rules(&raw, &r, |s, rule| s.tree(&rule.rhs, &|s, e| s.macro_rhs(e)))?;
            Ok(Definition::Macro(MacroTT::new(MacroDef {
                input: r.input,
                output,
                states: r.states,
                arities,
                initial: r.initial,
                lookahead: r.lookahead,
                rules,
            })?))
        }
    }
}

/// Register machine: `register-machine { input {...} output ... states {...}
/// registers {...} output-register q; on a(s1,s2) -> s with q = ..., ...; }`.
fn machine(p: &mut Parser) -> Result<RegisterMachine, ParseError> {
    p.expect_punct('{')?;
    let mut input = None;
    let mut output = None;
    let mut states = None;
    let mut registers: Option<Vec<Symbol>> = None;
    let mut output_register = None;
    let mut raw_transitions = Vec::new();
    while !p.eat_punct('}') {
        let (section, pos) = p.name()?;
        match section.as_str() {
            "input" => input = Some(p.alphabet()?),
            "output" => output = Some(p.output()?),
            "states" => states = Some(p.braced(|p| Ok(Symbol::from(p.name()?.0)))?),
            "registers" => registers = Some(p.braced(|p| Ok(Symbol::from(p.name()?.0)))?),
            "output-register" => output_register = Some(p.name()?),
            "on" => {
                let letter = p.symbol()?;
                let mut children = Vec::new();
                if p.eat_punct('(') {
                    loop {
                        children.push(p.name()?);
                        if p.eat_punct(')') {
                            break;
                        }
                        p.expect_punct(',')?;
                    }
                }
                p.expect_arrow()?;
                let next = p.name()?;
                let mut updates = Vec::new();
                if p.eat_name("with") {
                    loop {
                        let reg = p.name()?;
                        p.expect_punct('=')?;
                        let value = if p.eat_name("undefined") {
                            None
                        } else {
                            Some(expr(p)?)
                        };
                        updates.push((reg, value));
                        if !p.eat_punct(',') {
                            break;
                        }
                    }
                }
                raw_transitions.push((letter, children, next, updates));
            }
            other => return Err(syntax(pos, format!("unknown section `{other}`"))),
        }
        p.eat_punct(';');
    }
    let missing = |what: &str| syntax((1, 1), format!("missing `{what}` section"));
    let input = input.ok_or_else(|| missing("input"))?;
    let output = output.ok_or_else(|| missing("output"))?;
    let states = states.ok_or_else(|| missing("states"))?;
    let registers = registers.ok_or_else(|| missing("registers"))?;
    let (out_name, out_pos) = output_register.ok_or_else(|| missing("output-register"))?;
    let reg_index = |name: &str, pos: Pos| {
        registers
            .iter()
            .position(|r| r == name)
            .ok_or_else(|| syntax(pos, format!("unknown register `{name}`")))
    };
    let state_index = |(name, pos): &(String, Pos)| {
        states
            .iter()
            .position(|s| s == name.as_str())
            .ok_or_else(|| syntax(*pos, format!("unknown state `{name}`")))
    };
    let output_register = reg_index(&out_name, out_pos)?;
    let mut transitions = Vec::new();
    for (letter, children, next, updates) in raw_transitions {
        let children: Vec<usize> = children.iter().map(state_index).collect::<Result<_, _>>()?;
        let next = state_index(&next)?;
        let mut slots: Vec<Option<Update>> = vec![None; registers.len()];
        for ((reg, rpos), value) in updates {
            let r = reg_index(&reg, rpos)?;
            let u = match value {
                None => Update::Undefined,
                Some(e) if output.is_string() => Update::Str(machine_string(&e, &reg_index)?),
                Some(e) => match e.as_slice() {
                    [one] => Update::Tree(machine_tree(one, &reg_index)?),
                    _ => return Err(syntax(rpos, "`.` concatenation in a tree update")),
                },
            };
            if slots[r].replace(u).is_some() {
                return Err(syntax(rpos, format!("register `{reg}` updated twice")));
            }
        }
        transitions.push(MachineTransition {
            letter: Symbol::from(letter),
            children,
            next,
            // unmentioned registers become undefined
            updates: slots
                .into_iter()
                .map(|u| u.unwrap_or(Update::Undefined))
                .collect(),
        });
    }
    Ok(RegisterMachine::new(
        input,
        output,
        states,
        registers,
        output_register,
        transitions,
    )?)
}

/// `t3` names child 2 (0-based) in register-machine updates.
fn child_var(var: &str, pos: Pos) -> Result<usize, ParseError> {
    var.strip_prefix('t')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&i| i >= 1)
        .map(|i| i - 1)
        .ok_or_else(|| syntax(pos, format!("expected a child variable t1, t2, ..., found `{var}`")))
}

fn machine_tree(
    e: &Expr,
    reg: &impl Fn(&str, Pos) -> Result<usize, ParseError>,
) -> Result<RegExpr, ParseError> {
    match e {
        Expr::Quoted(_, pos) => Err(syntax(*pos, "quoted symbol in a tree update")),
        Expr::Apply {
            name,
            var: Some(var),
            pos,
            ..
        } => Ok(RegExpr::Reg {
            child: child_var(var, *pos)?,
            register: reg(name, *pos)?,
        }),
        Expr::Apply {
            name, var: None, args, pos,
        } => Ok(RegExpr::Letter(
            Symbol::from(name.as_str()),
            args.iter()
                .map(|a| match a.as_slice() {
                    [one] => machine_tree(one, reg),
                    _ => Err(syntax(*pos, "`.` concatenation in a tree update")),
                })
                .collect::<Result<_, _>>()?,
        )),
    }
}

fn machine_string(
    e: &[Expr],
    reg: &impl Fn(&str, Pos) -> Result<usize, ParseError>,
) -> Result<Vec<RegItem>, ParseError> {
    let mut out = Vec::new();
    for f in e {
        match f {
            Expr::Quoted(q, _) if q.is_empty() => {}
            Expr::Quoted(q, _) => out.push(RegItem::Lit(Symbol::from(q.as_str()))),
            Expr::Apply {
                name,
                var: Some(var),
                pos,
                ..
            } => out.push(RegItem::Reg {
                child: child_var(var, *pos)?,
                register: reg(name, *pos)?,
            }),
            Expr::Apply { name, .. } => out.push(RegItem::Lit(Symbol::from(name.as_str()))),
        }
    }
    Ok(out)
}

/// `sst { input {a,b}; output {a,b}; states {s0,s1}; initial s0;
/// registers {R,S}; init R="", S=a; on s0,a -> s1 with R=a.R, S=undefined;
/// output s0 = R.S; }`. Registers not mentioned in a transition keep their value.
fn sst(p: &mut Parser) -> Result<Sst, ParseError> {
    p.expect_punct('{')?;
    let mut input = None;
    let mut output = None;
    let mut states: Option<Vec<Symbol>> = None;
    let mut initial = None;
    let mut registers: Option<Vec<Symbol>> = None;
    let mut init = Vec::new();
    let mut ons = Vec::new();
    let mut outs = Vec::new();
    while !p.eat_punct('}') {
        let (section, pos) = p.name()?;
        match section.as_str() {
            "input" => input = Some(p.symbol_set()?),
            "output" if p.at_punct('{') => output = Some(p.symbol_set()?),
            "output" => {
                let s = p.name()?;
                p.expect_punct('=')?;
                outs.push((s, sst_expr(p)?));
            }
            "states" => states = Some(p.braced(|p| Ok(Symbol::from(p.name()?.0)))?),
            "initial" => initial = Some(p.name()?),
            "registers" => registers = Some(p.braced(|p| Ok(Symbol::from(p.name()?.0)))?),
            "init" => loop {
                let r = p.name()?;
                p.expect_punct('=')?;
                init.push((r, sst_expr(p)?));
                if !p.eat_punct(',') {
                    break;
                }
            },
            "on" => {
                let s = p.name()?;
                p.expect_punct(',')?;
                let a = (p.symbol()?, p.here());
                p.expect_arrow()?;
                let t = p.name()?;
                let mut updates = Vec::new();
                if p.eat_name("with") {
                    loop {
                        let r = p.name()?;
                        p.expect_punct('=')?;
                        updates.push((r, sst_expr(p)?));
                        if !p.eat_punct(',') {
                            break;
                        }
                    }
                }
                ons.push((s, a, t, updates));
            }
            other => return Err(syntax(pos, format!("unknown section `{other}`"))),
        }
        p.eat_punct(';');
    }
    let missing = |what: &str| syntax((1, 1), format!("missing `{what}` section"));
    let input = input.ok_or_else(|| missing("input"))?;
    let output = output.ok_or_else(|| missing("output"))?;
    let states = states.ok_or_else(|| missing("states"))?;
    let registers = registers.ok_or_else(|| missing("registers"))?;
    let find = |names: &[Symbol], (n, pos): &(String, Pos), what: &str| {
        names
            .iter()
            .position(|s| s == n.as_str())
            .ok_or_else(|| syntax(*pos, format!("unknown {what} `{n}`")))
    };
    let initial = find(&states, &initial.ok_or_else(|| missing("initial"))?, "state")?;
    let resolve = |e: RawSstExpr| -> Option<Vec<SstItem>> {
        e.map(|items| {
            items
                .into_iter()
                .filter(|i| !matches!(i, SstFactor::Quoted(q) if q.is_empty()))
                .map(|i| match i {
                    SstFactor::Quoted(q) => SstItem::Lit(Symbol::from(q)),
                    SstFactor::Name(n) => match registers.iter().position(|r| r == n.as_str()) {
                        Some(r) => SstItem::Reg(r),
                        None => SstItem::Lit(Symbol::from(n)),
                    },
                })
                .collect()
        })
    };
    let mut init_values = vec![Some(Word::new()); registers.len()];
    for (r, e) in init {
        let i = find(&registers, &r, "register")?;
        init_values[i] = match resolve(e) {
            None => None,
            Some(items) => Some(
                items
                    .into_iter()
                    .map(|it| match it {
                        SstItem::Lit(s) => Ok(s),
                        SstItem::Reg(_) => Err(syntax(r.1, "initial values cannot use registers")),
                    })
                    .collect::<Result<Word, _>>()?,
            ),
        };
    }
    let mut table: Vec<Vec<Option<SstTransition>>> = vec![vec![None; input.len()]; states.len()];
    for (s, (a, apos), t, updates) in ons {
        let si = find(&states, &s, "state")?;
        let ai = find(&input, &(a, apos), "input symbol")?;
        let next = find(&states, &t, "state")?;
        let mut ups: Vec<Option<Vec<SstItem>>> =
            (0..registers.len()).map(|r| Some(vec![SstItem::Reg(r)])).collect();
        for (r, e) in updates {
            ups[find(&registers, &r, "register")?] = resolve(e);
        }
        if table[si][ai].is_some() {
            return Err(syntax(s.1, "duplicate transition"));
        }
        table[si][ai] = Some(SstTransition { next, updates: ups });
    }
    let mut transitions = Vec::new();
    for (si, row) in table.into_iter().enumerate() {
        let mut r = Vec::new();
        for (ai, tr) in row.into_iter().enumerate() {
            r.push(tr.ok_or_else(|| {
                syntax(
                    (1, 1),
                    format!("missing transition ({}, {})", states[si], input[ai]),
                )
            })?);
        }
        transitions.push(r);
    }
    let mut final_output = vec![None; states.len()];
    for (s, e) in outs {
        final_output[find(&states, &s, "state")?] = resolve(e);
    }
    Ok(Sst::new(SstDef {
        input,
        output,
        states,
        initial,
        registers,
        init: init_values,
        transitions,
        final_output,
    })?)
}

enum SstFactor {
    Quoted(String),
    Name(String),
}

type RawSstExpr = Option<Vec<SstFactor>>;

fn sst_expr(p: &mut Parser) -> Result<RawSstExpr, ParseError> {
    if p.eat_name("undefined") {
        return Ok(None);
    }
    let mut out = Vec::new();
    loop {
        match p.peek() {
            Some(Tok::Quoted(q)) => {
                out.push(SstFactor::Quoted(q.clone()));
                p.pos += 1;
            }
            _ => out.push(SstFactor::Name(p.name()?.0)),
        }
        if !p.eat_punct('.') {
            return Ok(Some(out));
        }
    }
}

/// Parses any definition file, telling the kinds apart by their shape.
pub fn parse_definition(text: &str) -> Result<Definition, ParseError> {
    let mut p = Parser::new(text)?;
    let def = if p.eat_name("sst") {
        Definition::Sst(sst(&mut p)?)
    } else if p.eat_name("register-machine") {
        Definition::Machine(machine(&mut p)?)
    } else {
        if p.peek().is_none() {
            return p.err("expected a definition");
        }
        build_transducer(transducer(&mut p)?)?
    };
    p.done()?;
    Ok(def)
}

pub fn parse_tdtt(text: &str) -> Result<TopDownTT, ParseError> {
    match parse_definition(text)? {
        Definition::TopDown(t) => Ok(t),
        other => Err(ParseError::Kind {
            expected: "a top-down transducer",
            found: other.kind(),
        }),
    }
}

pub fn parse_mtt(text: &str) -> Result<MacroTT, ParseError> {
    match parse_definition(text)? {
        Definition::Macro(m) => Ok(m),
        other => Err(ParseError::Kind {
            expected: "a macro tree transducer",
            found: other.kind(),
        }),
    }
}

pub fn parse_sst(text: &str) -> Result<Sst, ParseError> {
    match parse_definition(text)? {
        Definition::Sst(s) => Ok(s),
        other => Err(ParseError::Kind {
            expected: "a streaming string transducer",
            found: other.kind(),
        }),
    }
}

pub fn parse_register_machine(text: &str) -> Result<RegisterMachine, ParseError> {
    match parse_definition(text)? {
        Definition::Machine(m) => Ok(m),
        other => Err(ParseError::Kind {
            expected: "a register machine",
            found: other.kind(),
        }),
    }
}
