use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod error;
mod instance;
mod render;
mod sweep;

use commands::Options;
use error::CliError;
use instance::Mode;
use sweep::SweepCommand;

/// Exact and numeric verification of apparent-singularity Heun instances.
#[derive(Debug, Parser)]
#[command(name = "heunfactor", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Override the instance's mode.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    /// Working precision of numeric mode (default 300).
    #[arg(long, global = true)]
    precision_bits: Option<usize>,
    /// Numeric tolerance (factorization defect or ODE step tolerance).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Random seed for numeric starts.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit `key: value` lines.
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apparency polynomial of a heun instance, or the system of an apparent_fuchsian one.
    Apparency { file: PathBuf },
    /// Solve for the symmetric functions and verify the factorization.
    Factorize {
        file: PathBuf,
        /// Attempt profiles outside the supported cases.
        #[arg(long)]
        deep: bool,
        /// Alias of --precision-bits.
        #[arg(long)]
        numeric_bits: Option<usize>,
    },
    /// X1-Jacobi checks for degree index K and parameters G, H.
    X1 {
        #[arg(allow_hyphen_values = true, required_unless_present = "file")]
        k: Option<u32>,
        #[arg(allow_hyphen_values = true, required_unless_present = "file")]
        g: Option<String>,
        #[arg(allow_hyphen_values = true, required_unless_present = "file")]
        h: Option<String>,
        /// Read (k, g, h) from an xjacobi instance instead.
        #[arg(long, conflicts_with_all = ["k", "g", "h"])]
        file: Option<PathBuf>,
        /// Largest degree index in the orthogonality sweep.
        #[arg(long, default_value_t = 6)]
        ortho_max: u32,
    },
    /// Numeric monodromy about z = t compared with the exact apparency condition.
    Monodromy { file: PathBuf },
    /// Run a command over every *.json instance in a directory.
    Sweep {
        dir: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        command: SweepCommand,
        #[arg(long)]
        deep: bool,
        #[arg(long, default_value_t = 6)]
        ortho_max: u32,
    },
}

const EXIT_FAIL: u8 = 2;
const EXIT_ERROR: u8 = 1;

fn options(g: &Global) -> Options {
    Options { mode: g.mode, precision_bits: g.precision_bits, tol: g.tol, seed: g.seed, deep: false, ortho_max: 6 }
}

/// Report and exit code.
fn run(cli: Cli) -> Result<(serde_json::Value, u8), CliError> {
    let mut opts = options(&cli.global);
    let (report, pass) = match cli.command {
        Command::Apparency { file } => {
            let o = commands::apparency(&instance::load(&file)?, &opts)?;
            (o.report, o.pass)
        }
        Command::Factorize { file, deep, numeric_bits } => {
            opts.deep = deep;
            opts.precision_bits = numeric_bits.or(opts.precision_bits);
            let o = commands::factorize(&instance::load(&file)?, &opts)?;
            (o.report, o.pass)
        }
        Command::X1 { k, g, h, file, ortho_max } => {
            opts.ortho_max = ortho_max;
            let o = match (file, k, g, h) {
                (Some(f), ..) => commands::x1_from_instance(&instance::load(&f)?, &opts)?,
                (None, Some(k), Some(g), Some(h)) => commands::x1_from_args(k, &g, &h, &opts)?,
                _ => return Err(CliError::Usage("x1 needs K G H or --file".into())),
            };
            (o.report, o.pass)
        }
        Command::Monodromy { file } => {
            let o = commands::monodromy(&instance::load(&file)?, &opts)?;
            (o.report, o.pass)
        }
        Command::Sweep { dir, command, deep, ortho_max } => {
            opts.deep = deep;
            opts.ortho_max = ortho_max;
            let s = sweep::sweep(&dir, command, &opts)?;
            let code = if s.errors > 0 {
                EXIT_ERROR
            } else if s.failed > 0 {
                EXIT_FAIL
            } else {
                0
            };
            return Ok((s.report, code));
        }
    };
    Ok((report, if pass { 0 } else { EXIT_FAIL }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    let text = cli.global.text;
    match run(cli) {
        Ok((report, code)) => {
            let s = if text { render::text(&report) } else { render::json(&report) };
            let _ = std::io::stdout().lock().write_all(s.as_bytes());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
