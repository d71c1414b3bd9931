use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context as _};
use clap::{Args, Parser, Subcommand, ValueEnum};

use treeduce::dot::{dag_to_dot, dbta_to_dot, trace_to_dot, tree_to_dot};
use treeduce::fuzz::{fuzz, FuzzConfig, ModelKind};
use treeduce::mtt::{eliminate_lookahead, mtt_unary_to_tdtts, tdtts_to_mtt_unary};
use treeduce::pipeline::Signature;
use treeduce::sharing::{dedup, growth_report, run_shared};
use treeduce::sst::tdtts_unary_to_sst;
use treeduce::tdtt::to_register_machine;
use treeduce::terms::{parse_term, Tree};
use treeduce::{builtins, check_equiv, parse_definition, Definition, Pipeline, Stage, Value, Word};

/// Exit code 1: a counterexample, a failed check or a transduction error.
/// Exit code 2: bad usage or unparsable input.
enum Failure {
    Usage(anyhow::Error),
    Failed(anyhow::Error),
}

type CliResult<T = ()> = Result<T, Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn failed(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Failed(e.into())
}

#[derive(Parser)]
#[command(name = "treeduce", version, about = "Run, convert and compare tree transducers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a definition on one input.
    Run(RunArgs),
    /// Convert a definition into an equivalent one of another kind.
    Convert(ConvertArgs),
    /// Compare two definitions on every input up to a size bound.
    CheckEquiv(EquivArgs),
    /// Check all conversions on randomly generated models.
    Fuzz(FuzzArgs),
    /// Output sizes with and without sharing for a family of inputs.
    Stats(StatsArgs),
    /// Graphviz output for a run.
    Dot(DotArgs),
    /// Print a built-in definition, or list them all.
    Builtin { name: Option<String> },
}

#[derive(Args)]
#[group(id = "input", required = true, multiple = false)]
struct InputArgs {
    /// Input tree, e.g. `a(b(c),c)`.
    #[arg(short = 'i', long = "input")]
    term: Option<String>,
    /// Input string; unary-tree models read it encoded.
    #[arg(short = 's', long = "string")]
    string: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    /// Definition file, `-` for stdin or `builtin:NAME`.
    #[arg(short = 't', long = "transducer")]
    file: String,
    #[command(flatten)]
    input: InputArgs,
    /// Evaluate with sharing and print the output dag.
    #[arg(long, conflicts_with = "bottom_up")]
    shared: bool,
    /// Print every register at the root instead of only the output.
    #[arg(long)]
    bottom_up: bool,
}

#[derive(Args)]
#[group(id = "conversion", required = true, multiple = false)]
struct Conversion {
    #[arg(long)]
    to_register_machine: bool,
    #[arg(long)]
    eliminate_lookahead: bool,
    #[arg(long)]
    tdtts_to_mtt: bool,
    #[arg(long)]
    mtt_to_tdtts: bool,
    #[arg(long)]
    tdtts_to_sst: bool,
}

#[derive(Args)]
struct ConvertArgs {
    /// Definition file, `-` for stdin or `builtin:NAME`.
    file: String,
    #[command(flatten)]
    conversion: Conversion,
    /// Write the result here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EquivArgs {
    left: String,
    right: String,
    /// Largest input: tree nodes, or string length.
    #[arg(long, default_value_t = 7)]
    max_size: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Tdtt,
    Mtt,
    Sst,
}

impl From<KindArg> for ModelKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Tdtt => ModelKind::Tdtt,
            KindArg::Mtt => ModelKind::Mtt,
            KindArg::Sst => ModelKind::Sst,
        }
    }
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 6)]
    max_size: usize,
    /// Extra random inputs per model.
    #[arg(long, default_value_t = 0)]
    random_inputs: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Quadratic,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long, value_enum)]
    example: Example,
    #[arg(long, default_value_t = 1)]
    n_from: usize,
    #[arg(long, default_value_t = 20)]
    n_to: usize,
    /// CSV destination; stdout if absent or `-`.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct DotArgs {
    /// Definition file, `-` for stdin or `builtin:NAME`.
    #[arg(short = 't', long = "transducer")]
    file: String,
    /// Input tree.
    #[arg(short = 'i', long = "input", required_unless_present = "lookahead")]
    term: Option<String>,
    /// Draw the output dag of a shared run.
    #[arg(long, conflicts_with_all = ["trace", "lookahead"])]
    shared: bool,
    /// Merge equal subgraphs of the shared output.
    #[arg(long, requires = "shared")]
    dedup: bool,
    /// Draw the register configuration after every input node.
    #[arg(long, conflicts_with = "lookahead")]
    trace: bool,
    /// Draw the lookahead automaton.
    #[arg(long)]
    lookahead: bool,
}

fn read_source(spec: &str) -> CliResult<String> {
    if spec == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(usage)?;
        return Ok(s);
    }
    fs::read_to_string(spec)
        .with_context(|| format!("cannot read {spec}"))
        .map_err(usage)
}

fn load(spec: &str) -> CliResult<Definition> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtins::definition(name).ok_or_else(|| {
            usage(anyhow!(
                "unknown built-in `{name}`; available: {}",
                builtins::NAMES.join(", ")
            ))
        });
    }
    let text = read_source(spec)?;
    parse_definition(&text)
        .with_context(|| format!("in {spec}"))
        .map_err(usage)
}

fn input_signature(d: &Definition) -> Signature {
    Stage::from(d.clone()).input()
}

fn parse_tree_input(d: &Definition, term: &str) -> CliResult<Tree> {
    match input_signature(d) {
        Signature::Trees(a) => parse_term(term, &a).map_err(usage),
        Signature::Strings(_) => Err(usage(anyhow!("this model reads strings; use -s"))),
    }
}

/// The model with codecs around it so that a string input reaches unary-tree models.
fn string_pipeline(d: &Definition) -> CliResult<Pipeline> {
    let p = Pipeline::single(d.clone());
    match input_signature(d) {
        Signature::Strings(_) => Ok(p),
        Signature::Trees(a) if a.string_end_marker().is_some() => {
            let p = p.before(Stage::Encode(a)).map_err(usage)?;
            match p.output() {
                Some(Signature::Trees(o)) if o.string_end_marker().is_some() => {
                    p.then(Stage::Decode(o)).map_err(usage)
                }
                _ => Ok(p),
            }
        }
        Signature::Trees(_) => Err(usage(anyhow!("this model reads trees; use -i"))),
    }
}

fn print_value(v: &Value) {
    match v {
        Value::Word(w) => println!("{w}"),
        Value::Tree(t) => println!("{t}"),
    }
}

fn show(v: &Option<Value>) -> String {
    v.as_ref().map_or("undefined".to_string(), Value::to_string)
}

fn run(args: RunArgs) -> CliResult {
    let d = load(&args.file)?;
    if let Some(s) = &args.input.string {
        let w = Word::parse(s);
        if args.shared {
            return Err(usage(anyhow!("--shared needs a tree input")));
        }
        if args.bottom_up {
            let Definition::Sst(sst) = &d else {
                return Err(usage(anyhow!("--bottom-up with -s needs a streaming transducer")));
            };
            let (state, regs) = sst.configuration(&w).map_err(failed)?;
            println!("state = {}", sst.states()[state]);
            for (r, v) in sst.registers().iter().zip(&regs) {
                println!("{r} = {}", v.as_ref().map_or("undefined".into(), |w| format!("\"{w}\"")));
            }
        }
        let out = string_pipeline(&d)?.run(&Value::Word(w)).map_err(failed)?;
        print_value(&out);
        return Ok(());
    }
    let term = args.input.term.as_deref().expect("clap requires an input");
    let t = parse_tree_input(&d, term)?;
    if args.shared {
        let Definition::TopDown(tt) = &d else {
            return Err(usage(anyhow!("--shared needs a top-down transducer")));
        };
        let dag = run_shared(tt, &t).map_err(failed)?;
        print!("{}", dag.to_text());
        let (n, e) = dag.stats();
        let (dn, de) = dedup(&dag).stats();
        eprintln!(
            "{n} nodes, {e} edges; {dn} nodes, {de} edges after merging; unfolded size {}",
            dag.unfolded_size()
        );
        return Ok(());
    }
    if args.bottom_up {
        match &d {
            Definition::TopDown(tt) => {
                let r = tt.run_bottomup(&t).map_err(failed)?;
                for (q, v) in tt.states().iter().zip(&r.registers) {
                    println!("{q} = {}", show(v));
                }
                println!("output = {}", show(&r.output));
                return r.output.map(|_| ()).ok_or_else(|| failed(anyhow!("output undefined")));
            }
            Definition::Machine(m) => {
                let r = m.run(&t).map_err(failed)?;
                println!("state = {}", m.states()[r.state]);
                for (q, v) in m.registers().iter().zip(&r.registers) {
                    println!("{q} = {}", show(v));
                }
                println!("output = {}", show(&r.output));
                return r.output.map(|_| ()).ok_or_else(|| failed(anyhow!("output undefined")));
            }
            Definition::Macro(m) => {
                let regs = m.run_bottomup(&t).map_err(failed)?;
                for (q, c) in m.states().iter().zip(&regs) {
                    match c {
                        Some(c) => println!("{q} = {c:?}"),
                        None => println!("{q} = undefined"),
                    }
                }
                return regs[m.initial()]
                    .as_ref()
                    .map(|_| ())
                    .ok_or_else(|| failed(anyhow!("output undefined")));
            }
            Definition::Sst(_) => unreachable!("streaming transducers read strings"),
        }
    }
    let out = Pipeline::single(d).run(&Value::Tree(t)).map_err(failed)?;
    print_value(&out);
    Ok(())
}

fn convert(args: ConvertArgs) -> CliResult {
    let d = load(&args.file)?;
    let c = &args.conversion;
    let wrong = |what: &str| usage(anyhow!("expected {what}, found {}", d.kind()));
    let out = if c.to_register_machine {
        let Definition::TopDown(tt) = &d else { return Err(wrong("a top-down transducer")) };
        Definition::Machine(to_register_machine(tt))
    } else if c.eliminate_lookahead {
        let Definition::Macro(m) = &d else { return Err(wrong("a macro tree transducer")) };
        Definition::Macro(eliminate_lookahead(m))
    } else if c.tdtts_to_mtt {
        let Definition::TopDown(tt) = &d else { return Err(wrong("a top-down transducer")) };
        Definition::Macro(tdtts_to_mtt_unary(tt).map_err(usage)?)
    } else if c.mtt_to_tdtts {
        let Definition::Macro(m) = &d else { return Err(wrong("a macro tree transducer")) };
        Definition::TopDown(mtt_unary_to_tdtts(m).map_err(usage)?)
    } else {
        let Definition::TopDown(tt) = &d else { return Err(wrong("a top-down transducer")) };
        Definition::Sst(tdtts_unary_to_sst(tt).map_err(usage)?)
    };
    let text = out.to_string();
    match &args.output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(failed),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check(args: EquivArgs) -> CliResult {
    let (left, right) = (load(&args.left)?, load(&args.right)?);
    let v = check_equiv(left, right, args.max_size).map_err(usage)?;
    println!("{v}");
    if v.pass {
        Ok(())
    } else {
        Err(failed(anyhow!("not equivalent")))
    }
}

fn fuzz_cmd(args: FuzzArgs) -> CliResult {
    let mut cfg = FuzzConfig::new(args.kind.into(), args.seed, args.count, args.max_size);
    cfg.random_inputs = args.random_inputs;
    let report = fuzz(&cfg);
    print!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(failed(anyhow!("{} failed checks", report.failures().count())))
    }
}

fn stats(args: StatsArgs) -> CliResult {
    if args.n_from > args.n_to {
        return Err(usage(anyhow!("--n-from must not exceed --n-to")));
    }
    let (tt, family) = match args.example {
        Example::Quadratic => (builtins::quadratic(), builtins::quadratic_input),
    };
    let report = growth_report(&tt, family, args.n_from..=args.n_to).map_err(failed)?;
    let csv = report.to_csv();
    match args.csv.as_deref() {
        Some(path) if path.as_os_str() != "-" => fs::write(path, csv)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(failed),
        _ => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn dot(args: DotArgs) -> CliResult {
    let d = load(&args.file)?;
    if args.lookahead {
        let la = match &d {
            Definition::TopDown(tt) => tt.lookahead(),
            Definition::Macro(m) => m.lookahead(),
            _ => None,
        };
        let la = la.ok_or_else(|| usage(anyhow!("{} without lookahead", d.kind())))?;
        print!("{}", dbta_to_dot(la));
        return Ok(());
    }
    let term = args.term.as_deref().expect("clap requires an input");
    let t = parse_tree_input(&d, term)?;
    let text = if args.shared {
        let Definition::TopDown(tt) = &d else {
            return Err(usage(anyhow!("--shared needs a top-down transducer")));
        };
        let dag = run_shared(tt, &t).map_err(failed)?;
        dag_to_dot(&if args.dedup { dedup(&dag) } else { dag })
    } else if args.trace {
        let m = match &d {
            Definition::TopDown(tt) => to_register_machine(tt),
            Definition::Machine(m) => m.clone(),
            _ => return Err(usage(anyhow!("--trace needs a top-down transducer or register machine"))),
        };
        let trace = m.run_trace(&t).map_err(failed)?;
        let states = (m.states().len() > 1).then(|| m.states());
        trace_to_dot(&trace, m.registers(), states)
    } else {
        match Pipeline::single(d).run(&Value::Tree(t)).map_err(failed)? {
            Value::Tree(out) => tree_to_dot(&out),
            Value::Word(_) => return Err(usage(anyhow!("the output is a string, not a tree"))),
        }
    };
    print!("{text}");
    Ok(())
}

fn builtin(name: Option<String>) -> CliResult {
    match name {
        None => {
            for n in builtins::NAMES {
                println!("{n}");
            }
            Ok(())
        }
        Some(n) => {
            print!("{}", load(&format!("builtin:{n}"))?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Convert(a) => convert(a),
        Command::CheckEquiv(a) => check(a),
        Command::Fuzz(a) => fuzz_cmd(a),
        Command::Stats(a) => stats(a),
        Command::Dot(a) => dot(a),
        Command::Builtin { name } => builtin(name),
    };
    let _ = io::stdout().flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
