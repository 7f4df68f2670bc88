//! Command line driver: train track certification and lone-axis verdicts,
//! surveys of integral classes, cross sections and their monodromy, and
//! Brown's algorithm on two-generator presentations.
//!
//! Exit codes: 0 success or verdict yes, 1 definite no, 2 inconclusive,
//! 64 unparseable input, 65 violated precondition or invariant.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "loneaxis", version, about = "Lone axes of free-by-cyclic monodromies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Tikz,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Input file; the bundled example when omitted.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the output into this directory instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct NielsenArgs {
    /// Longest path tried by the periodic Nielsen path search.
    #[arg(long, default_value_t = loneaxis::traintrack::NIELSEN_DEFAULT_LEN)]
    pub nielsen_len: usize,
    /// Largest period tried by the periodic Nielsen path search.
    #[arg(long, default_value_t = loneaxis::traintrack::NIELSEN_DEFAULT_PERIOD)]
    pub nielsen_period: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify a train track map and decide whether it has a lone axis.
    Traintrack {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        nielsen: NielsenArgs,
    },
    /// Tabulate primitive integral classes up to a coordinate height.
    Survey {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        nielsen: NielsenArgs,
        /// Two-generator presentation for the BNS columns; bundled with the
        /// bundled example.
        #[arg(long)]
        presentation: Option<PathBuf>,
        /// Largest coordinate, in absolute value, of surveyed classes.
        #[arg(long, default_value_t = 8)]
        height_max: i64,
        /// Classes on the lone-axis line up to this index get full checks.
        #[arg(long, default_value_t = 5)]
        k_max: usize,
    },
    /// Build the cross section dual to a class and its first return map.
    Section {
        #[command(flatten)]
        common: Common,
        /// Class coordinates in the cohomology basis, e.g. `1,2`.
        #[arg(long)]
        class: String,
        /// Phase of the level set, e.g. `1/2`.
        #[arg(long)]
        phase: Option<String>,
    },
    /// The monodromy automorphism of the section dual to a class.
    Monodromy {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        class: String,
        #[arg(long)]
        phase: Option<String>,
    },
    /// Brown's algorithm on a two-generator one-relator presentation.
    Bns {
        #[command(flatten)]
        common: Common,
        /// Covector whose cone component is reported, e.g. `0,1`.
        #[arg(long, default_value = "0,1")]
        class: String,
        /// Coordinates of a loop class for the lone-axis line, e.g. `-1,1`.
        #[arg(long)]
        loop_class: Option<String>,
        #[arg(long, default_value_t = 8)]
        height_max: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Traintrack { common, nielsen } => commands::traintrack(&common, &nielsen),
        Command::Survey { common, nielsen, presentation, height_max, k_max } => {
            commands::survey(&common, &nielsen, presentation.as_deref(), height_max, k_max)
        }
        Command::Section { common, class, phase } => commands::section(&common, &class, phase.as_deref()),
        Command::Monodromy { common, class, phase } => commands::monodromy(&common, &class, phase.as_deref()),
        Command::Bns { common, class, loop_class, height_max } => {
            commands::bns(&common, &class, loop_class.as_deref(), height_max)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
