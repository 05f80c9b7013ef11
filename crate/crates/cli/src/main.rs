//! Command-line front end: run queries under the tabling or SLD engine,
//! compile grammar files, and export lemma tables as Graphviz DOT.
//!
//! Exit codes: 0 on success (even with zero solutions), 1 for unreadable
//! files and parse errors, 2 for control-rule violations.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use lemtab::{
    encode_cfg_text, export_dot, parse_cfg, parse_program, parse_query, parse_rule_spec, pretty,
    sld_solve, AbstractionOp, ControlRule, Engine, EngineConfig, EngineStatus, Goal,
    SelectionRule, SldStatus, VarGen,
};

#[derive(Parser)]
#[command(name = "lemtab", version, about = "A tabling logic-programming engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a query against a program.
    Run(RunArgs),
    /// Compile a grammar file into a clause program.
    Encode(EncodeArgs),
    /// Run a query under the tabling engine and print the table as DOT.
    Dot(DotArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Program file (.lp).
    #[arg(long)]
    program: PathBuf,
    /// Query: a comma-separated literal sequence.
    #[arg(long)]
    query: String,
    #[arg(long, value_enum, default_value_t = EngineKind::Lemma)]
    engine: EngineKind,
    /// Control rule: a builtin name or a rule-file path (tabling engine).
    #[arg(long, default_value = "builtin:leftmost")]
    rule: String,
    /// Literal selection (SLD engine).
    #[arg(long, value_enum, default_value_t = Selection::Leftmost)]
    selection: Selection,
    /// Goal abstraction for new table entries: identity or depth:N.
    #[arg(long)]
    abstraction: Option<String>,
    /// Task budget for the tabling engine.
    #[arg(long, default_value_t = 100_000)]
    max_steps: usize,
    /// Per-branch resolution-step bound for the SLD engine.
    #[arg(long, default_value_t = 100)]
    max_depth: usize,
    /// Keep solutions an earlier solution subsumes.
    #[arg(long)]
    no_answer_subsumption: bool,
    /// Skip the occurs check in unification.
    #[arg(long)]
    no_occurs_check: bool,
    /// Emit machine-readable output.
    #[arg(long)]
    json: bool,
    /// Also write the lemma table as DOT to this path.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    /// Grammar file (.cfg).
    #[arg(long)]
    grammar: PathBuf,
    /// Output program file (.lp).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DotArgs {
    #[arg(long)]
    program: PathBuf,
    #[arg(long)]
    query: String,
    #[arg(long, default_value = "builtin:leftmost")]
    rule: String,
    #[arg(long)]
    abstraction: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    max_steps: usize,
    #[arg(long)]
    no_answer_subsumption: bool,
    #[arg(long)]
    no_occurs_check: bool,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineKind {
    Lemma,
    Sld,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Selection {
    Leftmost,
    Preference,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Encode(args) => cmd_encode(args),
        Command::Dot(args) => cmd_dot(args),
    };
    match code {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CmdError::Rule(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

enum CmdError {
    /// Unreadable files, malformed programs/queries/grammars/options.
    Input(String),
    /// The control rule broke the tagging contract.
    Rule(String),
}

fn input_err(e: impl std::fmt::Display) -> CmdError {
    CmdError::Input(e.to_string())
}

fn read(path: &PathBuf) -> Result<String, CmdError> {
    fs::read_to_string(path).map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))
}

fn load_rule(name_or_path: &str) -> Result<ControlRule, CmdError> {
    if let Some(rule) = ControlRule::from_name(name_or_path) {
        return Ok(rule);
    }
    if name_or_path.starts_with("builtin:") {
        return Err(CmdError::Input(format!(
            "unknown builtin rule '{name_or_path}'"
        )));
    }
    let src = read(&PathBuf::from(name_or_path))?;
    Ok(ControlRule::File(parse_rule_spec(&src).map_err(input_err)?))
}

fn parse_abstraction(spec: &Option<String>) -> Result<AbstractionOp, CmdError> {
    match spec.as_deref() {
        None | Some("identity") => Ok(AbstractionOp::Identity),
        Some(s) => match s.strip_prefix("depth:").map(str::parse::<u32>) {
            Some(Ok(d)) if d >= 1 => Ok(AbstractionOp::Depth(d)),
            _ => Err(CmdError::Input(format!(
                "abstraction must be 'identity' or 'depth:N', got '{s}'"
            ))),
        },
    }
}

struct Printed {
    solutions: Vec<(String, String)>,
    status: String,
    stats: Vec<(&'static str, usize)>,
}

impl Printed {
    fn emit(&self, as_json: bool) {
        if as_json {
            let stats: serde_json::Map<String, serde_json::Value> = self
                .stats
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            let doc = json!({
                "solutions": self
                    .solutions
                    .iter()
                    .map(|(h, b)| json!({"head": h, "body": b}))
                    .collect::<Vec<_>>(),
                "status": self.status,
                "stats": stats,
            });
            println!("{doc}");
        } else {
            for (head, body) in &self.solutions {
                if body.is_empty() {
                    println!("{head}.");
                } else {
                    println!("{head} :- {body}.");
                }
            }
            println!("{}", self.status);
            let stats: Vec<String> = self
                .stats
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            println!("{}", stats.join(" "));
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<(), CmdError> {
    if args.engine == EngineKind::Sld && args.abstraction.is_some() {
        return Err(CmdError::Input(
            "abstraction only applies to the tabling engine".to_string(),
        ));
    }
    let mut gen = VarGen::new();
    let program = parse_program(&read(&args.program)?, &mut gen).map_err(input_err)?;
    let query = parse_query(&args.query, &mut gen).map_err(input_err)?;
    match args.engine {
        EngineKind::Lemma => {
            let rule = load_rule(&args.rule)?;
            let alpha = parse_abstraction(&args.abstraction)?;
            let config = EngineConfig {
                answer_subsumption: !args.no_answer_subsumption,
                occurs_check: !args.no_occurs_check,
            };
            let mut engine = Engine::new(&program, rule, alpha, config, gen);
            engine
                .init(Goal::from_ordered(query))
                .map_err(|e| CmdError::Input(e.to_string()))?;
            let result = engine
                .run(args.max_steps)
                .map_err(|e| CmdError::Rule(e.to_string()))?;
            let printed = Printed {
                solutions: result
                    .solutions
                    .iter()
                    .map(|c| {
                        let mut namer = pretty::Namer::new();
                        (namer.goal(&c.head), namer.goal(&c.body))
                    })
                    .collect(),
                status: match result.status {
                    EngineStatus::Fixpoint => "fixpoint".to_string(),
                    EngineStatus::StepLimited => format!("step-limit {}", args.max_steps),
                },
                stats: vec![
                    ("entries", result.stats.entries),
                    ("nodes", result.stats.nodes),
                    ("predictions", result.stats.predictions),
                    ("completions", result.stats.completions),
                ],
            };
            printed.emit(args.json);
            if let Some(path) = &args.dot {
                fs::write(path, export_dot(&engine))
                    .map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))?;
            }
            Ok(())
        }
        EngineKind::Sld => {
            let rule = match args.selection {
                Selection::Leftmost => SelectionRule::Leftmost,
                Selection::Preference => SelectionRule::Preference,
            };
            let outcome = sld_solve(
                &program,
                &query,
                rule,
                args.max_depth,
                !args.no_occurs_check,
                &mut gen,
            );
            let printed = Printed {
                solutions: outcome
                    .answer_goals(&query)
                    .iter()
                    .map(|g| (pretty::literals(g), String::new()))
                    .collect(),
                status: match outcome.status {
                    SldStatus::Exhausted => "exhausted".to_string(),
                    SldStatus::DepthLimited => format!("depth-limit {}", args.max_depth),
                },
                stats: vec![("answers", outcome.answers.len())],
            };
            printed.emit(args.json);
            Ok(())
        }
    }
}

fn cmd_encode(args: EncodeArgs) -> Result<(), CmdError> {
    let cfg = parse_cfg(&read(&args.grammar)?).map_err(input_err)?;
    let text = encode_cfg_text(&cfg);
    // round-trip through the parser so malformed output is impossible
    let mut gen = VarGen::new();
    parse_program(&text, &mut gen).map_err(input_err)?;
    fs::write(&args.out, text)
        .map_err(|e| CmdError::Input(format!("{}: {e}", args.out.display())))?;
    Ok(())
}

fn cmd_dot(args: DotArgs) -> Result<(), CmdError> {
    let mut gen = VarGen::new();
    let program = parse_program(&read(&args.program)?, &mut gen).map_err(input_err)?;
    let query = parse_query(&args.query, &mut gen).map_err(input_err)?;
    let rule = load_rule(&args.rule)?;
    let alpha = parse_abstraction(&args.abstraction)?;
    let config = EngineConfig {
        answer_subsumption: !args.no_answer_subsumption,
        occurs_check: !args.no_occurs_check,
    };
    let mut engine = Engine::new(&program, rule, alpha, config, gen);
    engine
        .init(Goal::from_ordered(query))
        .map_err(|e| CmdError::Input(e.to_string()))?;
    engine
        .run(args.max_steps)
        .map_err(|e| CmdError::Rule(e.to_string()))?;
    let dot = export_dot(&engine);
    match &args.out {
        Some(path) => fs::write(path, dot)
            .map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))?,
        None => print!("{dot}"),
    }
    Ok(())
}
