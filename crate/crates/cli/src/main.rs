//! `misere`: command-line access to the misère engine.

mod commands;
mod report;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use misere_core::universes::{DEFAULT_BUDGET, DEFAULT_END_BOUND};

use report::Confidence;

pub const EXIT_BOUNDED: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "misere", version, about = "Partizan misère game analysis")]
pub struct Cli {
    /// Largest birthday of Left ends examined by bounded tests.
    #[arg(long, global = true, default_value_t = DEFAULT_END_BOUND)]
    pub bound: u32,
    /// Work budget per top-level query.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Let simplification act on comparisons that are only bounded.
    #[arg(long, global = true)]
    pub assume_bounded: bool,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Directory for memo snapshots; safe to delete.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Misère outcome of a form.
    Outcome { expr: String },
    /// Compare two forms modulo a universe.
    Compare {
        universe: String,
        a: String,
        b: String,
    },
    /// Simplest form with its reduction trace.
    Simplify { universe: String, expr: String },
    /// Invertibility of a form.
    Invertible {
        universe: String,
        expr: String,
        /// Forms asserted to lie in the tombstone extension of the universe.
        #[arg(long = "assert-uhat", value_name = "EXPR")]
        present: Vec<String>,
        /// Forms asserted not to lie in it.
        #[arg(long = "assert-not-uhat", value_name = "EXPR")]
        absent: Vec<String>,
    },
    /// Disintegrator, starkiller and super starkiller tests.
    Predicates { expr: String },
    /// Day-1 augmented forms up to equivalence and conjugation.
    Census {
        #[arg(default_value = "M")]
        universe: String,
    },
    /// Weakness and reducedness report.
    Probe {
        universe: String,
        #[arg(long = "assert-uhat", value_name = "EXPR")]
        present: Vec<String>,
        #[arg(long = "assert-not-uhat", value_name = "EXPR")]
        absent: Vec<String>,
    },
    /// Compare by definition over an enumerated set of games.
    OracleCompare { set: String, a: String, b: String },
    /// Outcomes of n copies of ~1 plus m copies of {.|2}.
    Jtable {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        m: usize,
    },
    /// Sampled consistency checks.
    Selftest {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    match commands::run(&cli) {
        Ok(mut report) => {
            report.wall_ms = start.elapsed().as_millis() as u64;
            let body = if cli.json {
                report.render_json()
            } else {
                report.render_text()
            };
            let _ = writeln!(std::io::stdout(), "{body}");
            match report.confidence {
                Confidence::Definite => ExitCode::SUCCESS,
                Confidence::Bounded => ExitCode::from(EXIT_BOUNDED),
            }
        }
        Err(e) => {
            if cli.json {
                let body = serde_json::json!({ "error": e.message, "exit": e.code });
                let _ = writeln!(
                    std::io::stdout(),
                    "{}",
                    serde_json::to_string_pretty(&body).expect("error serializes")
                );
            }
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
