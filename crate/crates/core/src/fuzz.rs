//! Random well-formed models and randomized differential testing.
//!
//! Everything is derived from one seed: the run seed yields one sub-seed per
//! model, and each model (with its random inputs) is generated from its
//! sub-seed alone, so a failing model is replayed with [`generate`].

use std::fmt::{self, Write as _};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bta::{Dbta, DbtaDef};
use crate::equiv::{
    check_equiv, check_equiv_on, check_mtt_duality, check_tdtt_duality, EquivVerdict,
};
use crate::mtt::{eliminate_lookahead, mtt_unary_to_tdtts, tdtts_to_mtt_unary, MacroDef, MacroRhs, MacroTT};
use crate::pipeline::Stage;
use crate::rules::{Pattern, Rule};
use crate::sst::tdtts_unary_to_sst;
use crate::tdtt::{to_register_machine, OutputKind, StrItem, TdRhs, TopDownDef, TopDownTT, TreeRhs};
use crate::terms::{enumerate_trees, RankedAlphabet, Symbol, Tree};
use crate::value::Value;

/// Upper bound on the (estimated) output size of an accepted model.
pub const GROWTH_CAP: u64 = 4_096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Top-down transducers over `{a:2,b:1,c:0}`, tree or string output.
    Tdtt,
    /// Macro tree transducers over `{a:2,b:1,c:0}`, tree or unary output.
    Mtt,
    /// String transducers over unary input, checked against their
    /// streaming-transducer translation.
    Sst,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Tdtt => "tdtt",
            ModelKind::Mtt => "mtt",
            ModelKind::Sst => "sst",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tdtt" => Ok(ModelKind::Tdtt),
            "mtt" => Ok(ModelKind::Mtt),
            "sst" => Ok(ModelKind::Sst),
            _ => Err(format!("unknown model kind `{s}` (expected tdtt, mtt or sst)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LookaheadMode {
    Never,
    Always,
    /// Decided per model with probability 1/2.
    Mixed,
}

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub kind: ModelKind,
    pub seed: u64,
    pub count: usize,
    /// Largest input: tree nodes, or string length for [`ModelKind::Sst`].
    pub bound: usize,
    pub max_states: usize,
    pub max_lookahead_states: usize,
    pub lookahead: LookaheadMode,
    /// Probability that a rule is present.
    pub rule_probability: f64,
    pub rhs_depth: usize,
    /// Extra random inputs per model, with at most `random_nodes` nodes.
    pub random_inputs: usize,
    pub random_nodes: usize,
}

impl FuzzConfig {
    pub fn new(kind: ModelKind, seed: u64, count: usize, bound: usize) -> Self {
        FuzzConfig {
            kind,
            seed,
            count,
            bound,
            max_states: 3,
            max_lookahead_states: 2,
            lookahead: LookaheadMode::Mixed,
            rule_probability: 0.9,
            rhs_depth: 3,
            random_inputs: 0,
            random_nodes: 30,
        }
    }
}

pub fn abc() -> RankedAlphabet {
    RankedAlphabet::new([("a", 2), ("b", 1), ("c", 0)]).expect("valid alphabet")
}

pub fn unary_ab() -> RankedAlphabet {
    RankedAlphabet::new([("a", 1), ("b", 1), ("e", 0)]).expect("valid alphabet")
}

fn syms(names: &[&str]) -> Vec<Symbol> {
    names.iter().map(|s| Symbol::new(s)).collect()
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

/// A random total automaton with 1 to `max_states` states.
pub fn random_dbta(rng: &mut ChaCha8Rng, alphabet: &RankedAlphabet, max_states: usize) -> Dbta {
    let n = rng.gen_range(1..=max_states.max(1));
    let states: Vec<Symbol> = (0..n).map(|i| Symbol::new(&format!("r{i}"))).collect();
    let mut transitions = Vec::new();
    for (letter, arity) in alphabet.letters() {
        for code in 0..n.pow(arity as u32) {
            let mut children = vec![0; arity];
            let mut c = code;
            for slot in children.iter_mut().rev() {
                *slot = c % n;
                c /= n;
            }
            transitions.push((
                letter.clone(),
                children.iter().map(|&s| states[s].clone()).collect(),
                pick(rng, &states).clone(),
            ));
        }
    }
    DbtaDef {
        alphabet: alphabet.clone(),
        states,
        transitions,
    }
    .build()
    .expect("a total transition table")
}

/// Lookahead patterns for one `(state, letter)`: either a wildcard rule
/// (present with probability `p`) plus occasional concrete overrides, or
/// independent concrete rules each present with probability `p`.
fn patterns(rng: &mut ChaCha8Rng, arity: usize, la_states: Option<usize>, p: f64) -> Vec<Pattern> {
    let Some(n) = la_states else {
        return if rng.gen_bool(p) { vec![vec![None; arity]] } else { Vec::new() };
    };
    if arity == 0 {
        return if rng.gen_bool(p) { vec![Vec::new()] } else { Vec::new() };
    }
    let concrete = |code: usize| -> Pattern {
        let mut v = vec![None; arity];
        let mut c = code;
        for slot in v.iter_mut().rev() {
            *slot = Some(c % n);
            c /= n;
        }
        v
    };
    let mut out = Vec::new();
    if rng.gen_bool(0.5) {
        if rng.gen_bool(p) {
            out.push(vec![None; arity]);
        }
        for code in 0..n.pow(arity as u32) {
            if rng.gen_bool(0.25) {
                out.push(concrete(code));
            }
        }
    } else {
        for code in 0..n.pow(arity as u32) {
            if rng.gen_bool(p) {
                out.push(concrete(code));
            }
        }
    }
    out
}

fn nullary(a: &RankedAlphabet) -> Vec<Symbol> {
    a.nullary().cloned().collect()
}

fn tree_rhs(
    rng: &mut ChaCha8Rng,
    out: &RankedAlphabet,
    states: usize,
    children: usize,
    depth: usize,
) -> TreeRhs {
    let leaf = depth == 0 || rng.gen_bool(0.35);
    if leaf {
        if children > 0 && rng.gen_bool(0.6) {
            return TreeRhs::Call {
                state: rng.gen_range(0..states),
                child: rng.gen_range(0..children),
            };
        }
        return TreeRhs::Letter(pick(rng, &nullary(out)).clone(), Vec::new());
    }
    let letters: Vec<(Symbol, usize)> = out.letters().map(|(s, a)| (s.clone(), a)).collect();
    let (l, k) = pick(rng, &letters).clone();
    let cs = (0..k)
        .map(|_| tree_rhs(rng, out, states, children, depth - 1))
        .collect();
    TreeRhs::Letter(l, cs)
}

fn string_rhs(rng: &mut ChaCha8Rng, out: &[Symbol], states: usize, children: usize) -> Vec<StrItem> {
    (0..rng.gen_range(0..=3))
        .map(|_| {
            if children > 0 && rng.gen_bool(0.5) {
                StrItem::Call {
                    state: rng.gen_range(0..states),
                    child: rng.gen_range(0..children),
                }
            } else {
                StrItem::Lit(pick(rng, out).clone())
            }
        })
        .collect()
}

fn state_names(n: usize) -> Vec<Symbol> {
    (0..n).map(|i| Symbol::new(&format!("q{i}"))).collect()
}

fn random_tdtt_once(
    rng: &mut ChaCha8Rng,
    input: &RankedAlphabet,
    output: &OutputKind,
    lookahead: Option<Dbta>,
    cfg: &FuzzConfig,
) -> TopDownTT {
    let n = rng.gen_range(1..=cfg.max_states.max(1));
    let la_n = lookahead.as_ref().map(Dbta::state_count);
    let mut rules = Vec::new();
    for q in 0..n {
        for (letter, arity) in input.letters() {
            for pattern in patterns(rng, arity, la_n, cfg.rule_probability) {
                let rhs = match output {
                    OutputKind::Tree(a) => TdRhs::Tree(tree_rhs(rng, a, n, arity, cfg.rhs_depth)),
                    OutputKind::String(s) => TdRhs::Str(string_rhs(rng, s, n, arity)),
                };
                rules.push(Rule {
                    state: q,
                    letter: letter.clone(),
                    pattern,
                    rhs,
                });
            }
        }
    }
    TopDownTT::new(TopDownDef {
        input: input.clone(),
        output: output.clone(),
        states: state_names(n),
        initial: 0,
        lookahead,
        rules,
    })
    .expect("generated rules are well-formed")
}

fn macro_rhs(
    rng: &mut ChaCha8Rng,
    out: &RankedAlphabet,
    arities: &[usize],
    params: usize,
    children: usize,
    depth: usize,
) -> MacroRhs {
    if depth == 0 || rng.gen_bool(0.35) {
        let r: f64 = rng.gen();
        if params > 0 && r < 0.35 {
            return MacroRhs::Param(rng.gen_range(0..params));
        }
        if children > 0 && r < 0.75 {
            let state = rng.gen_range(0..arities.len());
            let args = (0..arities[state])
                .map(|_| macro_rhs(rng, out, arities, params, children, 0))
                .collect();
            return MacroRhs::Call {
                state,
                child: rng.gen_range(0..children),
                args,
            };
        }
        return MacroRhs::leaf(pick(rng, &nullary(out)).clone());
    }
    if children > 0 && rng.gen_bool(0.3) {
        let state = rng.gen_range(0..arities.len());
        let args = (0..arities[state])
            .map(|_| macro_rhs(rng, out, arities, params, children, depth - 1))
            .collect();
        return MacroRhs::Call {
            state,
            child: rng.gen_range(0..children),
            args,
        };
    }
    let letters: Vec<(Symbol, usize)> = out.letters().map(|(s, a)| (s.clone(), a)).collect();
    let (l, k) = pick(rng, &letters).clone();
    let cs = (0..k)
        .map(|_| macro_rhs(rng, out, arities, params, children, depth - 1))
        .collect();
    MacroRhs::Letter(l, cs)
}

fn random_mtt_once(
    rng: &mut ChaCha8Rng,
    input: &RankedAlphabet,
    output: &RankedAlphabet,
    lookahead: Option<Dbta>,
    cfg: &FuzzConfig,
) -> MacroTT {
    let n = rng.gen_range(1..=cfg.max_states.max(1));
    let arities: Vec<usize> = (0..n)
        .map(|q| if q == 0 { 0 } else { rng.gen_range(0..=2) })
        .collect();
    let la_n = lookahead.as_ref().map(Dbta::state_count);
    let mut rules = Vec::new();
    for q in 0..n {
        for (letter, arity) in input.letters() {
            for pattern in patterns(rng, arity, la_n, cfg.rule_probability) {
                rules.push(Rule {
                    state: q,
                    letter: letter.clone(),
                    pattern,
                    rhs: macro_rhs(rng, output, &arities, arities[q], arity, cfg.rhs_depth),
                });
            }
        }
    }
    MacroTT::new(MacroDef {
        input: input.clone(),
        output: output.clone(),
        states: state_names(n),
        arities,
        initial: 0,
        lookahead,
        rules,
    })
    .expect("generated rules are well-formed")
}

/// Per-node upper bounds on the output size of every state, ignoring
/// lookahead (every rule of the state and letter is considered).
fn bounds<R>(
    t: &Tree,
    states: usize,
    rules: &[Rule<R>],
    rhs: &impl Fn(&R, &[Vec<u64>]) -> u64,
) -> Vec<u64> {
    let kids: Vec<Vec<u64>> = t
        .children()
        .iter()
        .map(|c| bounds(c, states, rules, rhs))
        .collect();
    let mut out = vec![0u64; states];
    for r in rules.iter().filter(|r| &r.letter == t.label()) {
        out[r.state] = out[r.state].max(rhs(&r.rhs, &kids));
    }
    out
}

fn tree_bound(r: &TreeRhs, kids: &[Vec<u64>]) -> u64 {
    match r {
        TreeRhs::Call { state, child } => kids[*child][*state],
        TreeRhs::Letter(_, cs) => cs
            .iter()
            .fold(1u64, |acc, c| acc.saturating_add(tree_bound(c, kids))),
    }
}

fn td_bound(r: &TdRhs, kids: &[Vec<u64>]) -> u64 {
    match r {
        TdRhs::Tree(t) => tree_bound(t, kids),
        TdRhs::Str(items) => items.iter().fold(0u64, |acc, i| {
            acc.saturating_add(match i {
                StrItem::Lit(_) => 1,
                StrItem::Call { state, child } => kids[*child][*state],
            })
        }),
    }
}

fn macro_bound(r: &MacroRhs, kids: &[Vec<u64>]) -> u64 {
    match r {
        MacroRhs::Param(_) => 1,
        MacroRhs::Letter(_, cs) => cs
            .iter()
            .fold(1u64, |acc, c| acc.saturating_add(macro_bound(c, kids))),
        MacroRhs::Call { state, child, args } => {
            let arg = args.iter().map(|a| macro_bound(a, kids)).max().unwrap_or(0);
            kids[*child][*state].max(1).saturating_mul(arg.saturating_add(1))
        }
    }
}

/// An upper bound on the size of every state's output on `t`.
pub fn tdtt_output_bound(tt: &TopDownTT, t: &Tree) -> u64 {
    let b = bounds(t, tt.states().len(), tt.rules(), &td_bound);
    b.into_iter().max().unwrap_or(0)
}

/// An upper bound on the size of every state's context on `t`.
pub fn mtt_output_bound(m: &MacroTT, t: &Tree) -> u64 {
    let b = bounds(t, m.states().len(), m.rules(), &macro_bound);
    b.into_iter().max().unwrap_or(0)
}

fn within_cap(trees: &[Tree], bound: impl Fn(&Tree) -> u64) -> bool {
    trees.iter().all(|t| bound(t) <= GROWTH_CAP)
}

/// A random tree with at most `max_nodes` nodes.
pub fn random_tree(rng: &mut ChaCha8Rng, alphabet: &RankedAlphabet, max_nodes: usize) -> Tree {
    let size = rng.gen_range(1..=max_nodes.max(1));
    grow(rng, alphabet, size)
}

fn grow(rng: &mut ChaCha8Rng, alphabet: &RankedAlphabet, budget: usize) -> Tree {
    let fitting: Vec<(Symbol, usize)> = alphabet
        .letters()
        .filter(|&(_, k)| if budget == 1 { k == 0 } else { k >= 1 && k < budget })
        .map(|(s, k)| (s.clone(), k))
        .collect();
    if fitting.is_empty() {
        let leaves = nullary(alphabet);
        return Tree::leaf(pick(rng, &leaves).clone());
    }
    let (letter, k) = pick(rng, &fitting).clone();
    if k == 0 {
        return Tree::leaf(letter);
    }
    // split budget - 1 into k positive parts
    let mut parts = vec![1; k];
    for _ in 0..(budget - 1 - k) {
        parts[rng.gen_range(0..k)] += 1;
    }
    let children = parts.into_iter().map(|p| grow(rng, alphabet, p)).collect();
    Tree::node(letter, children)
}

/// A generated model.
#[derive(Debug, Clone)]
pub enum FuzzModel {
    TopDown(TopDownTT),
    Macro(MacroTT),
}

impl fmt::Display for FuzzModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuzzModel::TopDown(t) => write!(f, "{t}"),
            FuzzModel::Macro(m) => write!(f, "{m}"),
        }
    }
}

fn use_lookahead(rng: &mut ChaCha8Rng, mode: LookaheadMode) -> bool {
    match mode {
        LookaheadMode::Never => false,
        LookaheadMode::Always => true,
        LookaheadMode::Mixed => rng.gen_bool(0.5),
    }
}

/// Regenerates until the growth guard accepts; returns the model and the
/// number of rejected attempts.
fn accept<T>(
    rng: &mut ChaCha8Rng,
    mut make: impl FnMut(&mut ChaCha8Rng) -> T,
    ok: impl Fn(&T) -> bool,
) -> (T, usize) {
    let mut rejected = 0;
    loop {
        let m = make(rng);
        if ok(&m) {
            return (m, rejected);
        }
        rejected += 1;
    }
}

/// The model with sub-seed `seed` under `cfg`, and the number of
/// candidates rejected by the growth guard.
pub fn generate(cfg: &FuzzConfig, seed: u64) -> (FuzzModel, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let input = match cfg.kind {
        ModelKind::Sst => unary_ab(),
        _ => abc(),
    };
    let guard_bound = if cfg.kind == ModelKind::Sst { cfg.bound + 1 } else { cfg.bound };
    let guard_trees = enumerate_trees(&input, guard_bound).expect("alphabet has a leaf");
    let la = use_lookahead(&mut rng, cfg.lookahead);
    let lookahead = |rng: &mut ChaCha8Rng| la.then(|| random_dbta(rng, &input, cfg.max_lookahead_states));
    match cfg.kind {
        ModelKind::Tdtt | ModelKind::Sst => {
            let output = if cfg.kind == ModelKind::Sst || rng.gen_bool(0.5) {
                OutputKind::String(syms(&["a", "b"]))
            } else {
                OutputKind::Tree(abc())
            };
            let (tt, rejected) = accept(
                &mut rng,
                |rng| {
                    let l = lookahead(rng);
                    random_tdtt_once(rng, &input, &output, l, cfg)
                },
                |tt| within_cap(&guard_trees, |t| tdtt_output_bound(tt, t)),
            );
            (FuzzModel::TopDown(tt), rejected)
        }
        ModelKind::Mtt => {
            let output = if rng.gen_bool(0.5) { abc() } else { unary_ab() };
            let (m, rejected) = accept(
                &mut rng,
                |rng| {
                    let l = lookahead(rng);
                    random_mtt_once(rng, &input, &output, l, cfg)
                },
                |m| within_cap(&guard_trees, |t| mtt_output_bound(m, t)),
            );
            (FuzzModel::Macro(m), rejected)
        }
    }
}

/// `count` random inputs for a model, each within the growth guard.
pub fn random_inputs(
    seed: u64,
    alphabet: &RankedAlphabet,
    count: usize,
    max_nodes: usize,
    bound: impl Fn(&Tree) -> u64,
) -> Vec<Tree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..count)
        .map(|_| accept(&mut rng, |r| random_tree(r, alphabet, max_nodes), |t| bound(t) <= GROWTH_CAP).0)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub tested: usize,
    /// The first counterexample or error.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelReport {
    pub index: usize,
    pub seed: u64,
    pub description: String,
    pub rejected: usize,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub kind: ModelKind,
    pub seed: u64,
    pub bound: usize,
    pub models: Vec<ModelReport>,
}

impl FuzzReport {
    pub fn checks(&self) -> usize {
        self.models.iter().map(|m| m.checks.len()).sum()
    }

    pub fn failures(&self) -> impl Iterator<Item = (&ModelReport, &CheckResult)> + '_ {
        self.models
            .iter()
            .flat_map(|m| m.checks.iter().filter(|c| c.failure.is_some()).map(move |c| (m, c)))
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "fuzz kind={} seed={} models={} max-size={}",
            self.kind.name(),
            self.seed,
            self.models.len(),
            self.bound
        )?;
        for m in &self.models {
            let mut line = format!("model {} seed={} {}:", m.index, m.seed, m.description);
            for c in &m.checks {
                let status = if c.failure.is_some() { "FAIL" } else { "pass" };
                let _ = write!(line, " {}={status}/{}", c.name, c.tested);
            }
            writeln!(f, "{line}")?;
            for c in m.checks.iter() {
                if let Some(msg) = &c.failure {
                    writeln!(f, "  {} failed: {msg}", c.name)?;
                }
            }
        }
        let failures = self.failures().count();
        writeln!(f, "{} checks, {} failures", self.checks(), failures)
    }
}

fn equiv_result(name: &'static str, r: Result<EquivVerdict, impl fmt::Display>) -> CheckResult {
    match r {
        Ok(v) => CheckResult {
            name,
            tested: v.tested,
            failure: v.counterexample.map(|c| c.to_string()),
        },
        Err(e) => CheckResult {
            name,
            tested: 0,
            failure: Some(e.to_string()),
        },
    }
}

fn failed(name: &'static str, e: impl fmt::Display) -> CheckResult {
    CheckResult {
        name,
        tested: 0,
        failure: Some(e.to_string()),
    }
}

fn duality_result(
    name: &'static str,
    r: Result<crate::equiv::DualityVerdict, crate::value::TransduceError>,
) -> CheckResult {
    match r {
        Ok(v) => CheckResult {
            name,
            tested: v.tested,
            failure: v.mismatch.map(|m| m.to_string()),
        },
        Err(e) => CheckResult {
            name,
            tested: 0,
            failure: Some(e.to_string()),
        },
    }
}

fn describe(model: &FuzzModel) -> String {
    let (states, la, out) = match model {
        FuzzModel::TopDown(t) => (
            t.states().len(),
            t.lookahead().map(Dbta::state_count),
            if t.output().is_string() { "string" } else { "tree" },
        ),
        FuzzModel::Macro(m) => (
            m.states().len(),
            m.lookahead().map(Dbta::state_count),
            if m.is_unary_output() { "unary" } else { "tree" },
        ),
    };
    let la = la.map_or("none".to_string(), |n| n.to_string());
    format!("states={states} lookahead={la} output={out}")
}

/// Runs every applicable conversion check on one model.
pub fn check_model(cfg: &FuzzConfig, model: &FuzzModel, seed: u64) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    match model {
        FuzzModel::TopDown(tt) => {
            let tree_bound = if cfg.kind == ModelKind::Sst { cfg.bound + 1 } else { cfg.bound };
            let trees = enumerate_trees(tt.input(), tree_bound).expect("alphabet has a leaf");
            checks.push(equiv_result(
                "register-machine",
                check_equiv(tt.clone(), to_register_machine(tt), tree_bound),
            ));
            checks.push(duality_result("bottom-up", check_tdtt_duality(tt, &trees)));
            if tt.output().is_string() {
                match tdtts_to_mtt_unary(tt) {
                    Ok(m) => {
                        checks.push(equiv_result("to-mtt", check_equiv(tt.clone(), m.clone(), tree_bound)));
                        checks.push(match mtt_unary_to_tdtts(&m) {
                            Ok(back) => equiv_result("to-mtt-and-back", check_equiv(tt.clone(), back, tree_bound)),
                            Err(e) => failed("to-mtt-and-back", e),
                        });
                    }
                    Err(e) => checks.push(failed("to-mtt", e)),
                }
            } else {
                checks.push(equiv_result(
                    "shared",
                    check_equiv(tt.clone(), Stage::SharedUnfold(tt.clone()), tree_bound),
                ));
            }
            if cfg.kind == ModelKind::Sst {
                checks.push(match tdtts_unary_to_sst(tt) {
                    Ok(s) => equiv_result("to-sst", check_equiv(s, tt.clone(), cfg.bound)),
                    Err(e) => failed("to-sst", e),
                });
            }
            if cfg.random_inputs > 0 {
                let extra: Vec<Value> =
                    random_inputs(seed, tt.input(), cfg.random_inputs, cfg.random_nodes, |t| {
                        tdtt_output_bound(tt, t)
                    })
                    .into_iter()
                    .map(Value::Tree)
                    .collect();
                checks.push(equiv_result(
                    "register-machine-random",
                    check_equiv_on(tt.clone(), to_register_machine(tt), &extra),
                ));
            }
        }
        FuzzModel::Macro(m) => {
            let trees = enumerate_trees(m.input(), cfg.bound).expect("alphabet has a leaf");
            let elim = eliminate_lookahead(m);
            checks.push(equiv_result(
                "eliminate-lookahead",
                check_equiv(m.clone(), elim.clone(), cfg.bound),
            ));
            checks.push(duality_result("bottom-up", check_mtt_duality(m, &trees)));
            if m.is_unary_output() {
                checks.push(match mtt_unary_to_tdtts(m) {
                    Ok(tt) => equiv_result("to-tdtts", check_equiv(m.clone(), tt, cfg.bound)),
                    Err(e) => failed("to-tdtts", e),
                });
            }
            if cfg.random_inputs > 0 {
                let extra: Vec<Value> =
                    random_inputs(seed, m.input(), cfg.random_inputs, cfg.random_nodes, |t| {
                        mtt_output_bound(m, t).max(mtt_output_bound(&elim, t))
                    })
                    .into_iter()
                    .map(Value::Tree)
                    .collect();
                checks.push(equiv_result(
                    "eliminate-lookahead-random",
                    check_equiv_on(m.clone(), elim, &extra),
                ));
            }
        }
    }
    checks
}

/// The sub-seeds of a run, one per model.
pub fn model_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.next_u64()).collect()
}

pub fn fuzz(cfg: &FuzzConfig) -> FuzzReport {
    let models = model_seeds(cfg.seed, cfg.count)
        .into_iter()
        .enumerate()
        .map(|(index, seed)| {
            let (model, rejected) = generate(cfg, seed);
            ModelReport {
                index,
                seed,
                description: describe(&model),
                rejected,
                checks: check_model(cfg, &model, seed),
            }
        })
        .collect();
    FuzzReport {
        kind: cfg.kind,
        seed: cfg.seed,
        bound: cfg.bound,
        models,
    }
}
