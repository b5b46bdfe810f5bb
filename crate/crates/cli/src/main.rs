//! `ntramp`: command-line front end for the ramp secret sharing library.
//!
//! Exit codes: 0 success, 1 unreadable or malformed input, 2 validation
//! error, 3 infeasible request, 4 enumeration budget exceeded.

mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ntramp::rghw::OracleOptions;
use ntramp::ErrorKind;

use crate::commands::Output;
use crate::config::{read_json, SchemeConfig, ShareFile};

#[derive(Debug)]
pub enum CliError {
    File(String),
    Parse(String),
    Domain(ntramp::Error),
}

impl From<ntramp::Error> for CliError {
    fn from(e: ntramp::Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::File(_) | CliError::Parse(_) => 1,
            CliError::Domain(e) => match e.kind() {
                ErrorKind::Validation => 2,
                ErrorKind::Infeasible => 3,
                ErrorKind::Budget => 4,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::File(m) => write!(f, "cannot read {m}"),
            CliError::Parse(m) => write!(f, "cannot parse {m}"),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "ntramp", version, about = "Ramp secret sharing on extended norm-trace curves")]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ConfigArgs {
    /// Scheme config JSON: {q, s, u, lambda1, lambda2, gamma_pool?, seed?}.
    #[arg(long)]
    config: PathBuf,

    /// Override the gamma pool, e.g. `--pool 90,91,92`.
    #[arg(long, value_delimiter = ',')]
    pool: Option<Vec<u64>>,
}

impl ConfigArgs {
    fn load(&self) -> Result<SchemeConfig, CliError> {
        let mut config: SchemeConfig = read_json(&self.config)?;
        if let Some(pool) = &self.pool {
            config.gamma_pool = Some(pool.clone());
        }
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions, RGHW tables and privacy/reconstruction numbers.
    Params(ConfigArgs),
    /// The curve points and their departments.
    Curve(ConfigArgs),
    /// Share a secret; writes a share file.
    Deal {
        #[command(flatten)]
        config: ConfigArgs,
        /// JSON file holding the secret as an array of field element indices.
        #[arg(long, conflicts_with = "values")]
        secret: Option<PathBuf>,
        /// The secret inline, e.g. `--values 3,1,0`.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<u64>>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Recover what a subset of participants learns from a share file.
    Reconstruct {
        #[arg(long)]
        shares: PathBuf,
        /// 0-based participant indices, e.g. `--subset 0,4,7`.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        subset: Vec<usize>,
    },
    /// Exact leakage of a coalition, with recovered values if shares are given.
    Coalition {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        subset: Vec<usize>,
        #[arg(long)]
        shares: Option<PathBuf>,
    },
    /// Maximum non-qualifying coalitions for a minimizing gamma set.
    Nonqual {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        w: usize,
        /// Use these gammas instead of the minimizer found in the pool.
        #[arg(long, value_delimiter = ',')]
        gammas: Option<Vec<u64>>,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Exact relative generalized Hamming weights by subspace enumeration.
    Oracle {
        #[command(flatten)]
        config: ConfigArgs,
        /// Only this dimension; all of `1..=ell` by default.
        #[arg(long)]
        t: Option<usize>,
        /// Maximum number of subspaces to visit.
        #[arg(long, default_value_t = 1 << 24)]
        budget: u128,
        #[arg(long)]
        parallel: bool,
    },
}

fn run(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Params(c) => commands::params(&c.load()?),
        Command::Curve(c) => commands::curve(&c.load()?),
        Command::Deal {
            config,
            secret,
            values,
            seed,
        } => {
            let config = config.load()?;
            let secret = match (secret, values) {
                (Some(path), _) => read_json::<Vec<u64>>(&path)?,
                (None, Some(v)) => v,
                (None, None) => return Err(CliError::Parse("no secret given (--secret or --values)".into())),
            };
            let seed = seed.or(config.seed).unwrap_or(0);
            commands::deal(&config, &secret, seed)
        }
        Command::Reconstruct { shares, subset } => {
            let file: ShareFile = read_json(&shares)?;
            commands::reconstruct_cmd(&file, &subset)
        }
        Command::Coalition {
            config,
            subset,
            shares,
        } => {
            let shares: Option<ShareFile> = shares.map(|p| read_json(&p)).transpose()?;
            commands::coalition(&config.load()?, &subset, shares.as_ref())
        }
        Command::Nonqual {
            config,
            w,
            gammas,
            limit,
        } => commands::nonqual(&config.load()?, w, gammas.as_deref(), limit),
        Command::Oracle {
            config,
            t,
            budget,
            parallel,
        } => commands::oracle(&config.load()?, t, OracleOptions { budget, parallel }),
    }
}

fn render(output: &Output, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut text = serde_json::to_vec_pretty(&output.json).expect("valid JSON value");
            text.push(b'\n');
            Ok(text)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let write = |w: &mut csv::Writer<Vec<u8>>| -> csv::Result<()> {
                w.write_record(&output.header)?;
                for row in &output.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
                Ok(())
            };
            write(&mut w).map_err(|e| CliError::File(format!("csv output: {e}")))?;
            w.into_inner()
                .map_err(|e| CliError::File(format!("csv output: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(cli.command).and_then(|out| render(&out, cli.format));
    match result {
        Ok(bytes) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &bytes)
                    .map_err(|e| CliError::File(format!("{}: {e}", path.display()))),
                None => std::io::stdout()
                    .write_all(&bytes)
                    .map_err(|e| CliError::File(format!("stdout: {e}"))),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code())
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
