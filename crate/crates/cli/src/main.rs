use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod record;

use commands::Failure;

/// Colored bin packing: pack, verify and benchmark.
#[derive(Debug, Parser)]
#[command(name = "chromapack", version)]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Output format for `pack` and `verify`; `compare` and `bench` always write CSV.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Zero-weight for unbounded instances, unit-weight otherwise.
    Auto,
    Zero,
    Unit,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pack one instance, e.g. `pack "L=3;W:4,B:3,Y:2"`.
    Pack(commands::PackArgs),
    /// Check a packing file (JSON, or bins separated by spaces or `/`).
    Verify(commands::VerifyArgs),
    /// Run the solver over a corpus or an exhaustive range, optionally against the exact optimum.
    Compare(commands::CompareArgs),
    /// Write a random corpus, one instance per line.
    Gen(commands::GenArgs),
    /// Time the solver on random instances of the given sizes.
    Bench(commands::BenchArgs),
}

fn open_output(shared: &Shared) -> io::Result<Box<dyn Write>> {
    Ok(match &shared.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = match open_output(&cli.shared) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: cannot open output: {e}");
            return ExitCode::from(1);
        }
    };
    let result = match &cli.command {
        Command::Pack(args) => commands::pack(&cli.shared, args, &mut out),
        Command::Verify(args) => commands::verify(&cli.shared, args, &mut out),
        Command::Compare(args) => commands::compare(args, &mut out),
        Command::Gen(args) => commands::gen(&cli.shared, args, &mut out),
        Command::Bench(args) => commands::bench(&cli.shared, args, &mut out),
    };
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Err(failure), _) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
        (Ok(()), Err(e)) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::from(Failure::Input(e.into()).exit_code())
        }
    }
}
