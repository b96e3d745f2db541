//! `proofkit`: check, search and analyse abstract proof systems.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{Failure, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "proofkit", version, about = "Abstract rewriting, Hilbert and natural-deduction systems")]
pub struct Cli {
    /// Print structured JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Bounds {
    /// Largest formula size (node count) taking part in a derivation.
    #[arg(long, default_value_t = 8)]
    pub universe: usize,
    /// Largest derivation height explored by backward search.
    #[arg(long = "max-depth", default_value_t = 8)]
    pub max_depth: usize,
    /// Largest number of goal expansions or rule firings per query.
    #[arg(long, default_value_t = 2_000_000)]
    pub nodes: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a derivation against a system.
    Check { system: PathBuf, derivation: PathBuf },
    /// Search for a derivation of a goal from assumptions.
    Prove {
        system: PathBuf,
        #[arg(long)]
        goal: String,
        #[arg(long = "assume")]
        assume: Vec<String>,
        #[command(flatten)]
        bounds: Bounds,
        /// Fresh markers added to the pool of a natural-deduction system.
        #[arg(long, default_value_t = 1)]
        markers: usize,
    },
    /// List the theorems inside the universe.
    Theorems {
        system: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, default_value_t = 1)]
        markers: usize,
    },
    /// Decide derivability, correctness and admissibility of a rule.
    Classify {
        system: PathBuf,
        #[arg(long)]
        rule: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, default_value_t = 1)]
        markers: usize,
    },
    /// Remove every use of a derivable rule from a derivation.
    Eliminate {
        system: PathBuf,
        #[arg(long)]
        rule: String,
        #[arg(long)]
        derivation: PathBuf,
        #[arg(long)]
        mimicry: PathBuf,
        /// leftmost-innermost, leftmost-outermost or random:SEED.
        #[arg(long, default_value = "leftmost-innermost")]
        strategy: String,
    },
    /// Compare the theorems and consequence relations of two systems.
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Check the laws relating derivability and admissibility on random systems.
    Audit {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Most formulas in a sampled universe.
        #[arg(long, default_value_t = 8)]
        universe: usize,
    },
    /// Abstract rewriting systems.
    Ars {
        #[command(subcommand)]
        command: ArsCommand,
    },
    /// Natural-deduction systems and their sequent encoding.
    Nd {
        #[command(subcommand)]
        command: NdCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum ArsCommand {
    /// The reduction relation induced by the steps.
    Relation { file: PathBuf },
    /// The steps between two objects.
    Steps {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// The objects reachable from an object.
    Reach {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long = "max-steps", default_value_t = 16)]
        max_steps: usize,
    },
    /// The ARS of one rewrite rule on all terms up to a size bound.
    Expand {
        /// `lhs -> rhs`, e.g. `f(?x) -> ?x`.
        #[arg(long)]
        rule: String,
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        bound: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum NdCommand {
    /// Write the sequent encoding as an explicit Hilbert system.
    Encode {
        system: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        universe: usize,
        #[arg(long, default_value_t = 1)]
        markers: usize,
    },
    /// Decide derivability, correctness and admissibility of a rule.
    Classify {
        system: PathBuf,
        #[arg(long)]
        rule: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, default_value_t = 1)]
        markers: usize,
        /// Skip the rerun with a weakening rule added.
        #[arg(long = "no-weakening")]
        no_weakening: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    let mut stdout = std::io::stdout().lock();
    match commands::run(cli.command) {
        Ok(out) => {
            let printed = if json {
                serde_json::to_string_pretty(&out.json).expect("json values serialize") + "\n"
            } else {
                out.text
            };
            let _ = stdout.write_all(printed.as_bytes());
            ExitCode::from(out.code)
        }
        Err(f) => report_failure(&f, json, &mut stdout),
    }
}

fn report_failure(f: &Failure, json: bool, stdout: &mut impl Write) -> ExitCode {
    if json {
        let kind = match f {
            Failure::Usage(_) => "usage",
            Failure::Invalid(_) => "invalid",
        };
        let v = serde_json::json!({ "error": kind, "message": f.message() });
        let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&v).expect("json values serialize"));
    }
    eprintln!("error: {}", f.message());
    ExitCode::from(f.code())
}
