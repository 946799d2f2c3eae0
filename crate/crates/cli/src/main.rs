mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Analysis and NOT/CNOT/Toffoli synthesis of Boolean mappings.
#[derive(Debug, Parser)]
#[command(name = "revsynth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Preimage census, minimal ancilla count and realizability per q.
    Analyze {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Embed, synthesize and verify a circuit for a truth table.
    Synth(SynthArgs),
    /// Exhaustively check a circuit against a truth table.
    Verify { mapping: PathBuf, circuit: PathBuf },
    /// Tabulate the complexity bound formulas.
    Bounds {
        /// `A` or inclusive range `A..B`.
        #[arg(long)]
        n: String,
        #[arg(long, default_value = "0")]
        q: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Exact search over small circuits.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Write a random truth table.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize a seeded batch of random mappings and report gate counts
    /// next to the bound formulas.
    Batch {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    input: PathBuf,
    /// Ancilla count; defaults to the minimum.
    #[arg(long)]
    q: Option<usize>,
    /// Circuit output path; the circuit goes to stdout and the report to
    /// stderr when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the completed permutation table.
    #[arg(long)]
    embedding: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Breadth-first closure on m lines (complete for m <= 3).
    Build {
        #[arg(long)]
        m: usize,
        /// Gate budget for m = 4.
        #[arg(long, default_value_t = revsynth_core::oracle::DEFAULT_MAX_GATES)]
        max_gates: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimal gate count of the permutation realized by a circuit file.
    Query {
        circuit: PathBuf,
        /// Previously built atlas; built on the fly when omitted.
        #[arg(long)]
        atlas: Option<PathBuf>,
        #[arg(long, default_value_t = revsynth_core::oracle::DEFAULT_MAX_GATES)]
        max_gates: u32,
    },
    /// Independent impossibility check for a mapping with q ancillas.
    CheckA1 {
        input: PathBuf,
        #[arg(long)]
        q: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { input, format } => commands::analyze(&input, format),
        Command::Synth(args) => commands::synth(&args),
        Command::Verify { mapping, circuit } => commands::verify(&mapping, &circuit),
        Command::Bounds { n, q, format } => commands::bounds(&n, &q, format),
        Command::Oracle(OracleCommand::Build { m, max_gates, out }) => {
            commands::oracle_build(m, max_gates, out.as_deref())
        }
        Command::Oracle(OracleCommand::Query {
            circuit,
            atlas,
            max_gates,
        }) => commands::oracle_query(&circuit, atlas.as_deref(), max_gates),
        Command::Oracle(OracleCommand::CheckA1 { input, q }) => commands::check_a1(&input, q),
        Command::Random { n, seed, out } => commands::random(n, seed, out.as_deref()),
        Command::Batch {
            n,
            count,
            seed,
            format,
        } => commands::batch(n, count, seed, format),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code.into()
        }
    }
}
