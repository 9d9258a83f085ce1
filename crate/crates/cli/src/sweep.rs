//! Directory sweeps: every `*.json` file in name order, run on a worker pool.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::commands::{self, Options, Outcome};
use crate::error::CliError;
use crate::instance::{self, Instance, Loaded};

pub const THREADS_ENV: &str = "HEUNFACTOR_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepCommand {
    /// apparency for heun, factorize for apparent_fuchsian, x1 for xjacobi.
    Auto,
    Apparency,
    Factorize,
    Monodromy,
    X1,
}

/// Outcome of a sweep; `errors` and `failed` drive the exit code.
pub struct SweepOutcome {
    pub report: Value,
    pub errors: usize,
    pub failed: usize,
}

fn run_one(loaded: &Loaded, command: SweepCommand, opts: &Options) -> Result<Outcome, CliError> {
    let command = match (command, &loaded.instance) {
        (SweepCommand::Auto, Instance::Heun(_)) => SweepCommand::Apparency,
        (SweepCommand::Auto, Instance::Fuchsian(_)) => SweepCommand::Factorize,
        (SweepCommand::Auto, Instance::XJacobi(_)) => SweepCommand::X1,
        (c, _) => c,
    };
    match command {
        SweepCommand::Apparency => commands::apparency(loaded, opts),
        SweepCommand::Factorize => commands::factorize(loaded, opts),
        SweepCommand::Monodromy => commands::monodromy(loaded, opts),
        SweepCommand::X1 | SweepCommand::Auto => commands::x1_from_instance(loaded, opts),
    }
}

pub fn list_instances(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let rd = std::fs::read_dir(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for entry in rd {
        let path = entry.map_err(|e| CliError::Io(e.to_string()))?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Worker count from `HEUNFACTOR_THREADS`, or rayon's default when unset.
pub fn thread_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
        Err(_) => Ok(0),
    }
}

pub fn sweep(dir: &Path, command: SweepCommand, opts: &Options) -> Result<SweepOutcome, CliError> {
    let files = list_instances(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count()?)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let results: Vec<Result<Outcome, CliError>> =
        pool.install(|| files.par_iter().map(|f| instance::load(f).and_then(|l| run_one(&l, command, opts))).collect());
    let (mut passed, mut failed, mut errors) = (0, 0, 0);
    let rows: Vec<Value> = files
        .iter()
        .zip(results)
        .map(|(f, r)| {
            let file = f.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            match r {
                Ok(o) if o.pass => {
                    passed += 1;
                    json!({ "file": file, "status": "pass", "report": o.report })
                }
                Ok(o) => {
                    failed += 1;
                    json!({ "file": file, "status": "fail", "report": o.report })
                }
                Err(e) => {
                    errors += 1;
                    json!({ "file": file, "status": "error", "error": e.to_string() })
                }
            }
        })
        .collect();
    let report = json!({
        "command": "sweep",
        "instances": rows,
        "summary": { "total": files.len(), "passed": passed, "failed": failed, "errors": errors },
        "pass": failed == 0 && errors == 0,
    });
    Ok(SweepOutcome { report, errors, failed })
}
