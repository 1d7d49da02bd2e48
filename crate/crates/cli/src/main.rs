//! `hsigma`: decide, approximate, translate and classify modal formulas, and
//! inspect Kripke models.
//!
//! Exit codes: 0 provable or OK, 1 refuted (or model check failed), 2 usage
//! or parse error, 3 inconclusive. With several formulas the most severe code
//! wins, in the order 2, 3, 1, 0.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hsigma_core::approx::{dagger_traced, nnil_star_traced, tnnil_minus_traced, tnnil_plus_traced};
use hsigma_core::formula::{box_translate, leivant_translate};
use hsigma_core::kripke::{model_from_json, model_to_dot, model_to_json, ModelDocument};
use hsigma_core::{
    classify, complexity, decide_hsigma, decide_ipc, decide_ipc_box, decide_lc, force, parse,
    unravel_to_tree, validate_model, DecideOptions, Formula, KripkeModel, RewriteTrace, Status,
    Verdict,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hsigma", version, about = "Decision procedures for the Σ₁-provability logic of HA, LC and IPC")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide provability; prints a countermodel for refuted formulas.
    Decide(DecideArgs),
    /// Compute an approximation of each formula.
    Approx(ApproxArgs),
    /// Apply the Leivant or box translation.
    Translate(TranslateArgs),
    /// Print class membership and complexity measures.
    Classify(FormulaArgs),
    /// Check, unravel or evaluate a model file.
    Model {
        #[command(subcommand)]
        command: ModelCommand,
    },
}

#[derive(Args)]
struct FormulaArgs {
    /// Formulas; `-` reads one formula per line from stdin.
    #[arg(required = true)]
    formulas: Vec<String>,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Args)]
struct DecideArgs {
    #[arg(long, value_enum, default_value_t = Logic::Hsigma)]
    logic: Logic,
    /// Node cap for the fallback model enumeration.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    max_nodes: u32,
    /// Type derivations allowed before falling back to enumeration.
    #[arg(long, default_value_t = DecideOptions::default().saturation_budget)]
    saturation_budget: usize,
    #[command(flatten)]
    input: FormulaArgs,
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(long, value_enum, default_value_t = Approx::Plus)]
    which: Approx,
    /// Print the rewrite steps.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    input: FormulaArgs,
}

#[derive(Args)]
struct TranslateArgs {
    #[arg(long, value_enum)]
    which: Translation,
    #[command(flatten)]
    input: FormulaArgs,
}

#[derive(Subcommand)]
enum ModelCommand {
    /// List violated model conditions; exit 1 if there are any.
    Check {
        /// Model document, or `-` for stdin.
        file: PathBuf,
        /// Also require brilliance and `R ⊆ <`.
        #[arg(long)]
        perfect: bool,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
    /// Print the tree unravelling of the model.
    Unravel {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        output: Output,
    },
    /// Print, for every node, whether it forces the formula.
    Eval {
        file: PathBuf,
        formula: String,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Logic {
    Hsigma,
    Lc,
    Ipc,
    Ipcbox,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Approx {
    Star,
    Plus,
    Minus,
    Dagger,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Translation {
    Leivant,
    Box,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
    Dot,
}

/// Exit status, ordered by the precedence used to combine several results.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Code {
    Ok,
    Refuted,
    Inconclusive,
    Error,
}

impl Code {
    fn of(status: Status) -> Code {
        match status {
            Status::Provable => Code::Ok,
            Status::Refuted => Code::Refuted,
            Status::Inconclusive => Code::Inconclusive,
        }
    }

    fn exit(self) -> ExitCode {
        ExitCode::from(match self {
            Code::Ok => 0,
            Code::Refuted => 1,
            Code::Error => 2,
            Code::Inconclusive => 3,
        })
    }
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

/// The formula texts named on the command line, expanding `-` to the
/// non-blank lines of stdin.
fn formula_texts(args: &[String]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for arg in args {
        if arg == "-" {
            let text = read_input(&PathBuf::from("-"))?;
            out.extend(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from));
        } else {
            out.push(arg.clone());
        }
    }
    Ok(out)
}

/// Parse each formula and run `each` on it, reporting parse errors on stderr.
fn for_each_formula(args: &FormulaArgs, mut each: impl FnMut(&Formula) -> Result<Code>) -> Result<Code> {
    let mut code = Code::Ok;
    for text in formula_texts(&args.formulas)? {
        let result = match parse(&text) {
            Ok(f) => each(&f),
            Err(e) => {
                eprintln!("error: `{text}`: {e}");
                Ok(Code::Error)
            }
        };
        code = code.max(result?);
    }
    Ok(code)
}

fn countermodel_text(v: &Verdict) -> String {
    let mut out = String::new();
    let Some(cm) = &v.countermodel else { return out };
    let m = &cm.model;
    let _ = writeln!(out, "countermodel ({} nodes, fails at node {}):", m.len(), m.label(cm.node));
    let list = |nodes: Vec<usize>| {
        if nodes.is_empty() {
            "-".to_string()
        } else {
            nodes.iter().map(|&b| m.label(b).to_string()).collect::<Vec<_>>().join(",")
        }
    };
    for a in 0..m.len() {
        let atoms: Vec<&str> = m.valuation(a).iter().map(|p| &**p).collect();
        let above = list(m.up_set(a).ones().filter(|&b| b != a).collect());
        let sees = list(m.successors(a).ones().collect());
        let atoms = if atoms.is_empty() { "-".to_string() } else { atoms.join(",") };
        let _ = writeln!(out, "  node {}: atoms {atoms}; above {above}; sees {sees}", m.label(a));
    }
    out
}

fn verdict_json(input: &Formula, logic: &str, v: &Verdict) -> serde_json::Value {
    json!({
        "status": v.status,
        "logic": logic,
        "formula": input,
        "decided": v.formula,
        "approx": v.approx,
        "reduction": v.reduction,
        "certificate": v.certificate,
        "cap": v.search_cap,
        "bound": v.completeness_bound().and_then(|b| u64::try_from(b).ok()),
        "bound_exponent": v.bound_exponent,
        "countermodel": v.countermodel.as_ref().map(|cm| json!({
            "model": ModelDocument::from_model(&cm.model),
            "node": cm.model.label(cm.node),
        })),
    })
}

fn decide(args: &DecideArgs) -> Result<Code> {
    let options = DecideOptions {
        max_nodes: args.max_nodes as usize,
        saturation_budget: args.saturation_budget,
        ..DecideOptions::default()
    };
    let logic = match args.logic {
        Logic::Hsigma => "hsigma",
        Logic::Lc => "lc",
        Logic::Ipc => "ipc",
        Logic::Ipcbox => "ipcbox",
    };
    for_each_formula(&args.input, |f| {
        let v = match args.logic {
            Logic::Hsigma => decide_hsigma(f, &options),
            Logic::Lc => decide_lc(f, &options),
            Logic::Ipc => match decide_ipc(f, &options) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(Code::Error);
                }
            },
            Logic::Ipcbox => decide_ipc_box(f, &options),
        };
        match args.input.output {
            Output::Json => println!("{}", verdict_json(f, logic, &v)),
            Output::Dot => match &v.countermodel {
                Some(cm) => print!("{}", model_to_dot(&cm.model)),
                None => println!("// {}: {}", v.status, f),
            },
            Output::Text => {
                println!("{f}");
                if let Some(approx) = &v.approx {
                    println!("  A+: {approx}");
                }
                if let Some(reduction) = v.reduction {
                    println!("  reduction: {reduction}");
                }
                let certificate = v.certificate.map(|c| format!(" ({c})")).unwrap_or_default();
                println!("  {}{certificate}", v.status);
                println!("  search cap: {} nodes; completeness bound: 2^{}", v.search_cap, v.bound_exponent);
                for line in countermodel_text(&v).lines() {
                    println!("  {line}");
                }
            }
        }
        Ok(Code::of(v.status))
    })
}

fn approx(args: &ApproxArgs) -> Result<Code> {
    for_each_formula(&args.input, |f| {
        let (result, trace): (Formula, RewriteTrace) = match args.which {
            Approx::Star => nnil_star_traced(f),
            Approx::Plus => tnnil_plus_traced(f),
            Approx::Minus => tnnil_minus_traced(f),
            Approx::Dagger => dagger_traced(f),
        };
        match args.input.output {
            Output::Json => {
                let mut value = json!({ "formula": f, "result": result });
                if args.trace {
                    value["trace"] = json!(trace.steps);
                }
                println!("{value}");
            }
            _ => {
                println!("{result}");
                if args.trace {
                    print!("{trace}");
                }
            }
        }
        Ok(Code::Ok)
    })
}

fn translate(args: &TranslateArgs) -> Result<Code> {
    for_each_formula(&args.input, |f| {
        let result = match args.which {
            Translation::Leivant => leivant_translate(f),
            Translation::Box => box_translate(f),
        };
        match args.input.output {
            Output::Json => println!("{}", json!({ "formula": f, "result": result })),
            _ => println!("{result}"),
        }
        Ok(Code::Ok)
    })
}

fn classify_cmd(args: &FormulaArgs) -> Result<Code> {
    for_each_formula(args, |f| {
        let c = classify(f);
        let m = complexity(f);
        match args.output {
            Output::Json => println!(
                "{}",
                json!({
                    "formula": f,
                    "noi": c.is_noi,
                    "nnil": c.is_nnil,
                    "tnnil": c.is_tnnil,
                    "tnnil_minus": c.is_tnnil_minus,
                    "measure": m,
                })
            ),
            _ => {
                let mark = |b: bool| if b { "yes" } else { "no" };
                println!("{f}");
                println!(
                    "  noi: {}  nnil: {}  tnnil: {}  tnnil-: {}",
                    mark(c.is_noi),
                    mark(c.is_nnil),
                    mark(c.is_tnnil),
                    mark(c.is_tnnil_minus)
                );
                println!("  {m}");
            }
        }
        Ok(Code::Ok)
    })
}

fn load_model(file: &PathBuf) -> Result<std::result::Result<KripkeModel, String>> {
    let text = read_input(file)?;
    Ok(model_from_json(&text).map_err(|e| format!("{}: {e}", file.display())))
}

fn model(command: &ModelCommand) -> Result<Code> {
    let file = match command {
        ModelCommand::Check { file, .. } | ModelCommand::Unravel { file, .. } | ModelCommand::Eval { file, .. } => file,
    };
    let m = match load_model(file)? {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(Code::Error);
        }
    };
    match command {
        ModelCommand::Check { perfect, output, .. } => {
            let violations = validate_model(&m, *perfect);
            match output {
                Output::Json => println!("{}", json!({ "ok": violations.is_empty(), "violations": violations })),
                _ if violations.is_empty() => println!("ok"),
                _ => violations.iter().for_each(|v| println!("{v}")),
            }
            Ok(if violations.is_empty() { Code::Ok } else { Code::Refuted })
        }
        ModelCommand::Unravel { output, .. } => {
            let tree = unravel_to_tree(&m);
            match output {
                Output::Dot => print!("{}", model_to_dot(&tree.model)),
                _ => println!("{}", model_to_json(&tree.model)),
            }
            Ok(Code::Ok)
        }
        ModelCommand::Eval { formula, output, .. } => {
            let f = match parse(formula) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("error: `{formula}`: {e}");
                    return Ok(Code::Error);
                }
            };
            if let Some(v) = validate_model(&m, false).first() {
                eprintln!("warning: not a model: {v}");
            }
            let rows: Vec<(u32, bool)> = (0..m.len())
                .map(|x| Ok((m.label(x), force(&m, x, &f)?)))
                .collect::<Result<_, hsigma_core::ModelError>>()?;
            match output {
                Output::Json => {
                    let nodes: Vec<_> = rows.iter().map(|(n, b)| json!({ "node": n, "forces": b })).collect();
                    println!("{}", json!({ "formula": f, "nodes": nodes }));
                }
                _ => {
                    println!("node  forces {f}");
                    for (node, forced) in rows {
                        println!("{node:<5} {forced}");
                    }
                }
            }
            Ok(Code::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Decide(args) => decide(args),
        Command::Approx(args) => approx(args),
        Command::Translate(args) => translate(args),
        Command::Classify(args) => classify_cmd(args),
        Command::Model { command } => model(command),
    };
    match result {
        Ok(code) => code.exit(),
        Err(e) => {
            eprintln!("error: {e:#}");
            Code::Error.exit()
        }
    }
}
