use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use holodual_cli::{render, run, CliError, Command, Format};

/// Duality and reflexivity checks for towers of finite groups and their Hopf algebras.
#[derive(Parser)]
#[command(name = "holodual", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dual object of the input, with class checks on its transitions.
    Dual(Opts),
    /// Level-wise reflexivity checks (groups, towers, Hopf algebras and Hopf towers).
    Reflexivity(Opts),
    /// Exact Hopf axiom checks.
    HopfAxioms(Opts),
    /// Character decomposition of a locally constant function.
    Decompose(Opts),
    /// Spectrum of a group algebra, or spectrum consistency along an ind-tower.
    Spectrum(Opts),
    /// Every applicable check plus a seeded random suite.
    Report(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Args)]
struct Opts {
    /// Input document (`-` for standard input).
    #[arg(long)]
    input: PathBuf,
    /// Truncation depth override.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_enum, env = "HOLODUAL_FORMAT", default_value = "json")]
    format: FormatArg,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match cli.command {
        Cmd::Dual(o) => (Command::Dual, o),
        Cmd::Reflexivity(o) => (Command::Reflexivity, o),
        Cmd::HopfAxioms(o) => (Command::HopfAxioms, o),
        Cmd::Decompose(o) => (Command::Decompose, o),
        Cmd::Spectrum(o) => (Command::Spectrum, o),
        Cmd::Report(o) => (Command::Report, o),
    };
    let format = match opts.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    let outcome = read_input(&opts.input).and_then(|text| run(command, &text, opts.depth, opts.seed));
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let rendered = render(&outcome, format);
    match &opts.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
