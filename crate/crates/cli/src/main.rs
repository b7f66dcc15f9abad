use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use elp_core::bench::{gen_elig, run_golden_corpus};
use elp_core::epistemic::emit_reduct_framework;
use elp_core::report::{format_json, format_text, ReportJson};
use elp_core::syntax::collect_epistemic_negations;
use elp_core::{prepare, solve, Error, Semantics, SolveOptions, SolveReport, Strategy};

const EXIT_FOUND: u8 = 0;
const EXIT_NONE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_ORACLE: u8 = 4;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "elp", version, about = "Compute the world views of an epistemic logic program")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Program file, or `-` for standard input.
    file: Option<String>,

    #[arg(long, default_value = "es2016", value_parser = parse_semantics)]
    semantics: Semantics,

    #[arg(long, default_value = "maximal-first", value_parser = parse_strategy)]
    strategy: Strategy,

    /// Stop after this many world views (0 = all).
    #[arg(long = "max-wv", default_value_t = 0)]
    max_wv: usize,

    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,

    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    group_size: u32,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    #[arg(long)]
    no_guess_filter: bool,

    #[arg(long)]
    no_consequence_pruning: bool,

    /// Re-solve with the unoptimized exhaustive pipeline and compare.
    #[arg(long)]
    oracle: bool,

    /// Write the epistemic reduct framework to PATH and exit without solving.
    #[arg(long, value_name = "PATH")]
    emit_framework: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every case in a golden corpus directory.
    Golden { dir: PathBuf },
    /// Print a scholarship eligibility instance.
    GenElig { n: usize, seed: u64 },
}

fn parse_semantics(s: &str) -> Result<Semantics, String> {
    s.parse()
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

fn read_input(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("elp: {e}");
    match e {
        Error::Solve(s) if s.is_resource_limit() => ExitCode::from(EXIT_CAP),
        _ => ExitCode::from(EXIT_INPUT),
    }
}

fn world_views(r: &SolveReport) -> Vec<elp_core::report::WorldViewJson> {
    ReportJson::from(r).world_views
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Some(Command::Golden { dir }) => {
            return match run_golden_corpus(&dir, &SolveOptions::default()) {
                Ok(results) => {
                    for r in &results {
                        println!("{r}");
                    }
                    let failed = results.iter().filter(|r| !r.passed).count();
                    println!("{} cases, {failed} failed", results.len());
                    ExitCode::from(if failed == 0 { EXIT_FOUND } else { EXIT_NONE })
                }
                Err(e) => {
                    eprintln!("elp: {e}");
                    ExitCode::from(EXIT_INPUT)
                }
            };
        }
        Some(Command::GenElig { n, seed }) => {
            return match gen_elig(n, seed) {
                Ok(text) => {
                    print!("{text}");
                    ExitCode::from(EXIT_FOUND)
                }
                Err(e) => {
                    eprintln!("elp: {e}");
                    ExitCode::from(EXIT_INPUT)
                }
            };
        }
        None => {}
    }

    let Some(path) = cli.file else {
        eprintln!("elp: no input file (use `-` for standard input)");
        return ExitCode::from(EXIT_INPUT);
    };
    let text = match read_input(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("elp: {path}: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let ground = match prepare(&text) {
        Ok(g) => g,
        Err(e) => return fail(&e),
    };

    if let Some(out) = cli.emit_framework {
        let ep = collect_epistemic_negations(&ground.rules);
        let framework = match emit_reduct_framework(&ground, &ep, cli.semantics) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("elp: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
        };
        if let Err(e) = std::fs::write(&out, framework) {
            eprintln!("elp: {}: {e}", out.display());
            return ExitCode::from(EXIT_INPUT);
        }
        return ExitCode::from(EXIT_FOUND);
    }

    let opts = SolveOptions {
        strategy: cli.strategy,
        max_world_views: cli.max_wv,
        workers: cli.workers as usize,
        group_size: cli.group_size as usize,
        guess_filter: !cli.no_guess_filter,
        consequence_pruning: !cli.no_consequence_pruning,
        ..SolveOptions::default()
    };
    let report = match solve(&ground, cli.semantics, &opts) {
        Ok(r) => r,
        Err(e) => return fail(&e.into()),
    };

    match cli.format {
        Format::Text => print!("{}", format_text(&report)),
        Format::Json => println!("{}", format_json(&report)),
    }

    if cli.oracle {
        let naive = SolveOptions { max_world_views: cli.max_wv, ..SolveOptions::naive() };
        match solve(&ground, cli.semantics, &naive) {
            Ok(check) if world_views(&check) == world_views(&report) => {}
            Ok(check) => {
                eprintln!(
                    "elp: oracle mismatch: optimized found {} world views, naive found {}",
                    report.world_views.len(),
                    check.world_views.len()
                );
                return ExitCode::from(EXIT_ORACLE);
            }
            Err(e) => return fail(&e.into()),
        }
    }

    ExitCode::from(if report.world_views.is_empty() { EXIT_NONE } else { EXIT_FOUND })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { EXIT_INPUT } else { EXIT_FOUND });
        }
    };
    run(cli)
}
