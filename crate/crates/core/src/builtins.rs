//! Named example machines, written in the definition format.

use crate::bta::Dbta;
use crate::mtt::MacroTT;
use crate::sst;
use crate::syntax::{parse_mtt, parse_tdtt, Definition};
use crate::tdtt::TopDownTT;
use crate::terms::{RankedAlphabet, Tree};

const CONTAINS_B: &str = "lookahead {
  states {r+,r-};
  delta a(r+,r+)->r+; delta a(r+,r-)->r+; delta a(r-,r+)->r+; delta a(r-,r-)->r-;
  delta b(r+)->r+; delta b(r-)->r+;
  delta c->r-;
}
";

pub const CONDITIONAL_SWAP: &str = "# f(a(t,u)) = a(f(u),f(t)), f(t) = t otherwise
input {a:2,b:1,c:0}
output {a:2,b:1,c:0}
states {q0,q1}
initial q0
rules {
  q0<a(t,u)> -> a(q0<u>,q0<t>);
  q0<b(t)> -> b(q1<t>);
  q0<c> -> c;
  q1<a(t,u)> -> a(q1<t>,q1<u>);
  q1<b(t)> -> b(q1<t>);
  q1<c> -> c;
}
";

/// Replaces every `b(t)` with `t` free of `b` by `a(t,t)`.
pub fn b_replacement_source() -> String {
    format!(
        "input {{a:2,b:1,c:0}}
output {{a:2,b:1,c:0}}
states {{q}}
initial q
{CONTAINS_B}rules {{
  q<a(t,u)> -> a(q<t>,q<u>);
  q<b(t|r+)> -> b(q<t>);
  q<b(t|r-)> -> a(q<t>,q<t>);
  q<c> -> c;
}}
"
    )
}

/// The same function as a macro tree transducer (all states parameterless).
pub fn b_replacement_mtt_source() -> String {
    b_replacement_source().replace("states {q}", "states {q:0}")
}

pub const POSTFIX: &str = "# reverse Polish notation
input {a:2,b:1,c:0}
output string {a,b,c}
states {q}
initial q
rules {
  q<a(t,u)> -> q<t> . q<u> . 'a';
  q<b(t)> -> q<t> . 'b';
  q<c> -> 'c';
}
";

pub const QUADRATIC: &str = "# S^n(0) -> a(b^n(c), a(b^(n-1)(c), ... a(b(c), c)))
input {S:1,0:0}
output {a:2,b:1,c:0}
states {q0,q1}
initial q0
rules {
  q0<S(t)> -> a(q1<t>,q0<t>);
  q0<0> -> c;
  q1<S(t)> -> b(q1<t>);
  q1<0> -> b(c);
}
";

pub const IDENTITY_STRING: &str = "input {a:1,b:1,e:0}
output string {a,b}
states {q}
initial q
rules {
  q<a(t)> -> 'a' . q<t>;
  q<b(t)> -> 'b' . q<t>;
  q<e> -> \"\";
}
";

pub const REVERSE_STRING: &str = "input {a:1,b:1,e:0}
output string {a,b}
states {q}
initial q
rules {
  q<a(t)> -> q<t> . 'a';
  q<b(t)> -> q<t> . 'b';
  q<e> -> \"\";
}
";

pub const SUFFIXES: &str = "# every suffix followed by s, longest first
input {a:1,b:1,e:0}
output string {a,b,s}
states {q,p}
initial q
rules {
  q<a(t)> -> 'a' . p<t> . 's' . q<t>;
  q<b(t)> -> 'b' . p<t> . 's' . q<t>;
  q<e> -> \"\";
  p<a(t)> -> 'a' . p<t>;
  p<b(t)> -> 'b' . p<t>;
  p<e> -> \"\";
}
";

pub const DOUBLE_BEFORE_B: &str = "# doubles every letter followed (somewhere) by a b
input {a:1,b:1,e:0}
output string {a,b}
states {q}
initial q
lookahead {
  states {r+,r-};
  delta a(r+)->r+; delta a(r-)->r-;
  delta b(r+)->r+; delta b(r-)->r+;
  delta e->r-;
}
rules {
  q<a(t|r+)> -> 'a' . 'a' . q<t>;
  q<a(t|r-)> -> 'a' . q<t>;
  q<b(t|r+)> -> 'b' . 'b' . q<t>;
  q<b(t|r-)> -> 'b' . q<t>;
  q<e> -> \"\";
}
";

pub const CONTEXT_MTT: &str = "input {a:2,b:1,c:0}
output {a:2,b:1,c:0}
states {q0:0,q1:1}
initial q0
rules {
  q0<a(t,u)> -> q1<t>(b(q0<u>));
  q0<b(t)> -> b(q0<t>);
  q0<c> -> c;
  q1<a(t,u)>(x) -> q1<u>(q1<u>(x));
  q1<b(t)>(x) -> b(q1<t>(x));
  q1<c>(x) -> a(x,x);
}
";

pub const REVERSE_MTT: &str = "# q0<t> = q<t>(e): the string read backwards
input {a:1,b:1,c:1,e:0}
output {a:1,b:1,c:1,e:0}
states {q0:0,q:1}
initial q0
rules {
  q0<a(t)> -> q<t>(a(e));
  q0<b(t)> -> q<t>(b(e));
  q0<c(t)> -> q<t>(c(e));
  q0<e> -> e;
  q<a(t)>(x) -> q<t>(a(x));
  q<b(t)>(x) -> q<t>(b(x));
  q<c(t)>(x) -> q<t>(c(x));
  q<e>(x) -> x;
}
";

pub const IDENTITY_MTT: &str = "input {a:2,b:1,c:0}
output {a:2,b:1,c:0}
states {q:0}
initial q
rules {
  q<a(t,u)> -> a(q<t>,q<u>);
  q<b(t)> -> b(q<t>);
  q<c> -> c;
}
";

pub const IDENTITY_UNARY_MTT: &str = "input {a:1,b:1,e:0}
output {a:1,b:1,e:0}
states {q:0}
initial q
rules {
  q<a(t)> -> a(q<t>);
  q<b(t)> -> b(q<t>);
  q<e> -> e;
}
";

pub fn abc() -> RankedAlphabet {
    RankedAlphabet::new([("a", 2), ("b", 1), ("c", 0)]).expect("valid alphabet")
}

/// The lookahead automaton with `r+` iff the tree contains `b`.
pub fn contains_b() -> Dbta {
    Dbta::contains_letter(&abc(), "b")
}

fn tdtt_from(src: &str) -> TopDownTT {
    parse_tdtt(src).expect("built-in definition parses")
}

fn mtt_from(src: &str) -> MacroTT {
    parse_mtt(src).expect("built-in definition parses")
}

pub fn conditional_swap() -> TopDownTT {
    tdtt_from(CONDITIONAL_SWAP)
}

pub fn b_replacement() -> TopDownTT {
    tdtt_from(&b_replacement_source())
}

pub fn postfix() -> TopDownTT {
    tdtt_from(POSTFIX)
}

pub fn quadratic() -> TopDownTT {
    tdtt_from(QUADRATIC)
}

/// `S^n(0)`
pub fn quadratic_input(n: usize) -> Tree {
    (0..n).fold(Tree::leaf("0"), |t, _| Tree::node("S", vec![t]))
}

pub fn identity_string() -> TopDownTT {
    tdtt_from(IDENTITY_STRING)
}

pub fn reverse_string() -> TopDownTT {
    tdtt_from(REVERSE_STRING)
}

pub fn suffixes() -> TopDownTT {
    tdtt_from(SUFFIXES)
}

pub fn double_before_b() -> TopDownTT {
    tdtt_from(DOUBLE_BEFORE_B)
}

pub fn context_mtt() -> MacroTT {
    mtt_from(CONTEXT_MTT)
}

pub fn reverse_mtt() -> MacroTT {
    mtt_from(REVERSE_MTT)
}

pub fn identity_mtt() -> MacroTT {
    mtt_from(IDENTITY_MTT)
}

pub fn identity_unary_mtt() -> MacroTT {
    mtt_from(IDENTITY_UNARY_MTT)
}

pub fn b_replacement_mtt() -> MacroTT {
    mtt_from(&b_replacement_mtt_source())
}

/// Names accepted by [`definition`].
pub const NAMES: &[&str] = &[
    "conditional_swap",
    "b_replacement",
    "postfix",
    "quadratic",
    "identity_string",
    "reverse_string",
    "suffixes",
    "double_before_b",
    "context_mtt",
    "reverse_mtt",
    "identity_mtt",
    "identity_unary_mtt",
    "b_replacement_mtt",
    "remark_example",
    "doubling",
    "reverse_sst",
    "identity_sst",
    "swap",
];

pub fn definition(name: &str) -> Option<Definition> {
    Some(match name {
        "conditional_swap" => Definition::TopDown(conditional_swap()),
        "b_replacement" => Definition::TopDown(b_replacement()),
        "postfix" => Definition::TopDown(postfix()),
        "quadratic" => Definition::TopDown(quadratic()),
        "identity_string" => Definition::TopDown(identity_string()),
        "reverse_string" => Definition::TopDown(reverse_string()),
        "suffixes" => Definition::TopDown(suffixes()),
        "double_before_b" => Definition::TopDown(double_before_b()),
        "context_mtt" => Definition::Macro(context_mtt()),
        "reverse_mtt" => Definition::Macro(reverse_mtt()),
        "identity_mtt" => Definition::Macro(identity_mtt()),
        "identity_unary_mtt" => Definition::Macro(identity_unary_mtt()),
        "b_replacement_mtt" => Definition::Macro(b_replacement_mtt()),
        "remark_example" => Definition::Sst(sst::remark_example()),
        "doubling" => Definition::Sst(sst::doubling()),
        "reverse_sst" => Definition::Sst(sst::reverse(&["a", "b", "c"])),
        "identity_sst" => Definition::Sst(sst::identity(&["a", "b", "c"])),
        "swap" => Definition::Sst(sst::swap()),
        _ => return None,
    })
}

/// All built-in top-down transducers.
pub fn all_tdtts() -> Vec<(&'static str, TopDownTT)> {
    NAMES
        .iter()
        .filter_map(|n| match definition(n)? {
            Definition::TopDown(t) => Some((*n, t)),
            _ => None,
        })
        .collect()
}

/// All built-in macro tree transducers.
pub fn all_mtts() -> Vec<(&'static str, MacroTT)> {
    NAMES
        .iter()
        .filter_map(|n| match definition(n)? {
            Definition::Macro(m) => Some((*n, m)),
            _ => None,
        })
        .collect()
}
