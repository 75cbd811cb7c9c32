use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::{Inputs, Status};

/// Verify, check and run STRIPS plans with machine-checkable proofs.
#[derive(Parser, Debug)]
#[command(name = "pcp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// PDDL domain file
    #[arg(long)]
    domain: PathBuf,
    /// Complete the initial state with `-` maps for every absent ground atom
    #[arg(long)]
    closed_world: bool,
    /// Translate action effects verbatim (testing only)
    #[arg(long, hide = true)]
    no_augment: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a proof for each plan and re-check it independently
    Verify {
        #[command(flatten)]
        common: Common,
        /// PDDL problem file
        #[arg(long)]
        problem: PathBuf,
        /// Plan file; repeat to verify several plans
        #[arg(long, required = true)]
        plan: Vec<PathBuf>,
        /// Write the derivation as JSON (single plan only)
        #[arg(long)]
        emit_proof: Option<PathBuf>,
        /// Write the per-action generation trace as JSON (single plan only)
        #[arg(long)]
        emit_trace: Option<PathBuf>,
        /// Verify up to N plans at once
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: u16,
    },
    /// Check a derivation JSON file against a problem
    CheckProof {
        #[command(flatten)]
        common: Common,
        /// PDDL problem file
        #[arg(long)]
        problem: PathBuf,
        /// Derivation JSON, as written by `verify --emit-proof`
        #[arg(long)]
        proof: PathBuf,
    },
    /// Run a plan on the initial world and print the final world
    Execute {
        #[command(flatten)]
        common: Common,
        /// PDDL problem file
        #[arg(long)]
        problem: PathBuf,
        /// Plan file
        #[arg(long)]
        plan: PathBuf,
        /// Stop with an error after N actions
        #[arg(long)]
        energy: Option<usize>,
    },
    /// Print the translated context, and the initial and goal states if a
    /// problem is given
    Translate {
        #[command(flatten)]
        common: Common,
        /// PDDL problem file
        #[arg(long)]
        problem: Option<PathBuf>,
    },
}

// Proof trees nest as deep as their frame chains, and encoding, decoding
// and dropping them recurse.
const STACK_SIZE: usize = 1 << 30;

fn main() -> ExitCode {
    let cli = Cli::parse();
    std::thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(move || run(cli))
        .expect("spawn worker thread")
        .join()
        .unwrap_or(ExitCode::from(2))
}

fn run(cli: Cli) -> ExitCode {
    let verdict = match cli.command {
        Command::Verify {
            common,
            problem,
            plan,
            emit_proof,
            emit_trace,
            jobs,
        } => commands::verify(&Inputs::new(common, Some(problem)), &plan, emit_proof, emit_trace, jobs.into()),
        Command::CheckProof { common, problem, proof } => commands::check_proof(&Inputs::new(common, Some(problem)), &proof),
        Command::Execute {
            common,
            problem,
            plan,
            energy,
        } => commands::execute(&Inputs::new(common, Some(problem)), &plan, energy),
        Command::Translate { common, problem } => commands::translate(&Inputs::new(common, problem)),
    };
    for d in &verdict.diagnostics {
        eprintln!("{d}");
    }
    ExitCode::from(match verdict.status {
        Status::Valid => 0,
        Status::Invalid => 1,
        Status::Error => 2,
    })
}
