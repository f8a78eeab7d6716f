use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use relop::demo::run_demo;
use relop::render::{merge_summary, parse_partitions, RenderInput};
use relop::verify::{run, Fault, RunConfig, Suite};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Law checking and diagrams for relative operads and their bar constructions.
#[derive(Debug, Parser)]
#[command(name = "relop", version)]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance for sampled numeric comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Largest set size in exhaustive enumerations.
    #[arg(long, global = true, default_value_t = 4)]
    bound: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run against a deliberately broken fixture.
    #[arg(long, global = true)]
    inject_fault: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite: sets, trees, partitions, operads, pairs, bar, geom or all.
    Verify { suite: String },
    /// Merge partitions given as files or literals like `1/6,2/3`.
    Merge {
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Render a tree, a tree with a partition or a realization point as DOT.
    Render { input: PathBuf },
    /// Reconstruct a worked instance: fig1, fig2, fig3 or fig4.
    Demo { name: String },
}

enum Failure {
    Usage(String),
    Property(String),
}

impl From<relop::Error> for Failure {
    fn from(e: relop::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn config(cli: &Cli) -> Result<RunConfig, Failure> {
    let fault = cli.inject_fault.as_deref().map(str::parse::<Fault>).transpose()?;
    let cfg = RunConfig { seed: cli.seed, tolerance: cli.tolerance, bound: cli.bound, fault };
    cfg.validate()?;
    Ok(cfg)
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let cfg = config(cli)?;
    match &cli.command {
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let report = run(suite, &cfg)?;
            let text = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => pretty(&serde_json::to_value(&report).expect("reports serialize")),
            };
            emit(cli, &text)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Property(format!("{} check(s) failed", report.failures().count())))
            }
        }
        Command::Merge { inputs } => {
            let mut family = Vec::new();
            for arg in inputs {
                let path = Path::new(arg);
                let text = if path.is_file() { read(path)? } else { arg.clone() };
                family.extend(parse_partitions(&text)?);
            }
            let summary = merge_summary(&family)?;
            let text = match cli.format {
                Format::Json => pretty(&summary),
                Format::Text => {
                    let merged: Vec<String> = serde_json::from_value(summary["merged"].clone()).unwrap_or_default();
                    let mut s = format!("merged <{}>\n", merged.join(","));
                    for (a, d) in summary["deltas"].as_array().into_iter().flatten().enumerate() {
                        s += &format!("delta{} {d}\n", a + 1);
                    }
                    s
                }
            };
            emit(cli, &text)
        }
        Command::Render { input } => {
            let dot = RenderInput::parse(&read(input)?)?.to_dot()?;
            let text = match cli.format {
                Format::Text => dot,
                Format::Json => pretty(&json!({ "dot": dot })),
            };
            emit(cli, &text)
        }
        Command::Demo { name } => {
            let demo = run_demo(name, cfg.tolerance)?;
            match cli.format {
                Format::Json => emit(
                    cli,
                    &pretty(&json!({ "name": demo.name, "report": demo.report, "facts": demo.facts, "dot": demo.dot })),
                )?,
                Format::Text => {
                    // the diagram goes to --out, the report to stdout
                    print!("{}", demo.report.to_text());
                    if cli.out.is_some() {
                        emit(cli, &demo.dot)?;
                    } else {
                        print!("{}", demo.dot);
                    }
                }
            }
            if demo.report.passed() {
                Ok(())
            } else {
                Err(Failure::Property(format!("demo {name} failed")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(msg)) => {
            eprintln!("relop: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("relop: {msg}");
            ExitCode::from(2)
        }
    }
}
