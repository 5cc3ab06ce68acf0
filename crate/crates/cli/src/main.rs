//! `rigidkit` command-line front end.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "rigidkit", version, about = "Matrix constructions and relation checks for SO+(m,n) and SU(m,n)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct SpecArgs {
    /// `so` or `su`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Relative tolerance; defaults to `RIGIDKIT_TOL` or 1e-9.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Restricted roots with multiplicities.
    Roots {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Chain element for one root, with its certificate.
    Chain {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        root: String,
        /// Parameter JSON such as `{"t": 1.5}`; drawn from the seed when omitted.
        #[arg(long)]
        param: Option<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run one relation suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run every suite whose side conditions hold.
    VerifyAll {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Exponent table, and the splitting at `--t` when given.
    Lyapunov {
        #[command(flatten)]
        spec: SpecArgs,
        /// Cartan vector, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Also run the bracket-generation rank check.
        #[arg(long)]
        brackets: bool,
    },
    /// Strict feasibility of a stable cycle.
    StableCycle {
        /// Comma-separated roots, e.g. `L1-L2,L2-L3,L1`.
        #[arg(long, allow_hyphen_values = true)]
        roots: String,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Genericity of the plane spanned by two Cartan vectors.
    Genplane {
        #[arg(long, allow_hyphen_values = true)]
        v1: String,
        #[arg(long, allow_hyphen_values = true)]
        v2: String,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Staircase normal form of a k×k special orthogonal or unitary matrix.
    Normalform {
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: usize,
        /// Matrix JSON file.
        #[arg(long)]
        matrix: std::path::PathBuf,
    },
    /// Free reduction of a word.
    Reduce {
        /// Word JSON file.
        #[arg(long)]
        word: std::path::PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Trace pairing identity for two unit vectors.
    TracePairing {
        #[command(flatten)]
        spec: SpecArgs,
        /// Unit vector as JSON `[[re, im], ...]`; drawn from the seed when omitted.
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.json { Format::Json } else { cli.format };
    match commands::dispatch(&cli.command) {
        Ok(out) => {
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
                Format::Text => out.text,
            };
            // A closed pipe downstream is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
