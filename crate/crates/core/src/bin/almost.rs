use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use almost::suite::{compute, run_suite, Config, SUITES};

#[derive(Parser)]
#[command(name = "almost", version, about = "Exact checks for almost ring theory over F_p[t^(1/p^∞)]")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// perfect, truncated or mixed
    #[arg(long, default_value = "perfect")]
    mode: String,
    #[arg(long, default_value_t = 2)]
    level: u32,
    /// Exponent c of V/t^c, e.g. 1 or 1/2
    #[arg(long, default_value = "1")]
    truncation: String,
    #[arg(long, default_value_t = 3)]
    depth: u32,
    #[arg(long, default_value_t = 8)]
    working_level: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 30)]
    corpus_size: usize,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    report: Option<PathBuf>,
    /// Record wall-clock time per check (reports stop being reproducible)
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite: quillen, complexes, k0, algebra, tilting, tower or all
    Run {
        suite: String,
        #[command(flatten)]
        args: SuiteArgs,
    },
    /// Run one operation on a JSON input (inline, or @path to read a file)
    Compute { op: String, input: String },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match cli.cmd {
        Cmd::Run { suite, args } => {
            if !SUITES.contains(&suite.as_str()) {
                return usage(format!("unknown suite {suite}; expected one of {}", SUITES.join(", ")));
            }
            let cfg = Config {
                p: args.p,
                mode: args.mode,
                level: args.level,
                truncation: args.truncation,
                depth: args.depth,
                working_level: args.working_level,
                seed: args.seed,
                corpus_size: args.corpus_size,
                timings: args.timings,
            };
            if let Err(e) = cfg.validate() {
                return usage(e);
            }
            let report = match run_suite(&suite, &cfg) {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            let text = report.to_pretty() + "\n";
            match &args.report {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        return usage(format!("cannot write {}: {e}", path.display()));
                    }
                }
                None => {
                    let _ = std::io::stdout().write_all(text.as_bytes());
                }
            }
            for c in &report.checks {
                eprintln!("{} {} ({})", if c.verdict { "PASS" } else { "FAIL" }, c.name, c.witness);
            }
            if report.overall {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Cmd::Compute { op, input } => {
            let text = match input.strip_prefix('@') {
                Some(path) => match std::fs::read_to_string(path) {
                    Ok(t) => t,
                    Err(e) => return usage(format!("cannot read {path}: {e}")),
                },
                None => input,
            };
            let value: Value = match serde_json::from_str(&text) {
                Ok(v) => v,
                Err(e) => return usage(format!("malformed JSON: {e}")),
            };
            match compute(&op, &value) {
                Ok(out) => {
                    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&out).expect("serializes"));
                    ExitCode::SUCCESS
                }
                Err(e) => usage(e),
            }
        }
    }
}
