use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use diracwb::commands::{self, Outcome, RunOptions};
use diracwb::{parse_bytes, DefinitionFile, Invocation, UsageError};
use diracwb_core::relations::SamplingOptions;

/// Verify Lie algebroid structures, Dirac pairs and their relatives.
#[derive(Parser)]
#[command(name = "diracwb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Definition file; standard input when absent.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    /// Seed for the sampled polynomial regime.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Human-readable table instead of JSON lines.
    #[arg(long, global = true)]
    pretty: bool,
    /// Degree bound of random polynomial multiples.
    #[arg(long, global = true, default_value_t = 2)]
    max_degree: u32,
    /// Number of random samples per check.
    #[arg(long, global = true, default_value_t = 8)]
    samples: usize,
    /// Include wall-clock timing in each report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every `check` line of the file.
    Run,
    /// Print the canonical form of the file.
    Parse,
    /// Run one check from the catalog.
    Check {
        name: String,
        #[arg(long)]
        first: Option<String>,
        #[arg(long)]
        second: Option<String>,
        #[arg(long)]
        endo: Option<String>,
        #[arg(long)]
        span: Option<String>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Nijenhuis torsion of a declared endomorphism.
    Torsion {
        #[arg(long)]
        endo: String,
    },
    /// List the available checks.
    Checks,
}

fn load(path: Option<&PathBuf>) -> Result<DefinitionFile, UsageError> {
    let mut bytes = Vec::new();
    let label = match path {
        Some(p) => {
            bytes = std::fs::read(p).map_err(|source| UsageError::Io {
                path: p.display().to_string(),
                source,
            })?;
            p.display().to_string()
        }
        None => {
            std::io::stdin().read_to_end(&mut bytes).map_err(|source| UsageError::Io {
                path: "<stdin>".into(),
                source,
            })?;
            "<stdin>".into()
        }
    };
    parse_bytes(&bytes).map_err(|e| UsageError::Invalid(format!("{label}:{e}")))
}

fn dispatch(cli: Cli) -> Result<Outcome, UsageError> {
    let g = &cli.global;
    let opts = RunOptions {
        sampling: SamplingOptions {
            seed: g.seed,
            samples: g.samples,
            max_degree: g.max_degree,
        },
        pretty: g.pretty,
        timing: g.timing,
    };
    if let Command::Checks = cli.command {
        return Ok(Outcome {
            stdout: commands::list_checks(),
            code: 0,
        });
    }
    let file = load(g.file.as_ref())?;
    match cli.command {
        Command::Run => Ok(commands::run_file(&file, &opts)),
        Command::Parse => Ok(Outcome {
            stdout: file.render(),
            code: 0,
        }),
        Command::Check {
            name,
            first,
            second,
            endo,
            span,
            k,
        } => {
            let mut inv = Invocation::new(name);
            for (key, value) in [("first", first), ("second", second), ("endo", endo), ("span", span)] {
                if let Some(v) = value {
                    inv = inv.with(key, v);
                }
            }
            if let Some(k) = k {
                inv = inv.with("k", k.to_string());
            }
            commands::run_one(&file, inv, &opts)
        }
        Command::Torsion { endo } => commands::run_one(&file, Invocation::new("nijenhuis").with("endo", endo), &opts),
        Command::Checks => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("diracwb: {e}");
            ExitCode::from(2)
        }
    }
}
