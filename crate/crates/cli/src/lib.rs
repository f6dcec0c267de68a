//! Command-line front end: one subcommand per table or figure dataset.

pub mod args;
pub mod commands;
pub mod table;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use microswim::quantities::scenario_by_name;
use microswim::{Error, Scenario};
use thiserror::Error as ThisError;

use args::{Cli, Command, Format};
use table::Table;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Model(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::Model(_) | CliError::Usage(_) => EXIT_CONFIG,
            CliError::Io { .. } => 1,
        }
    }
}

/// `low`, `high` or `file:<path>`.
pub fn load_scenario(spec: &str) -> Result<Scenario, CliError> {
    match spec.strip_prefix("file:") {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
            Scenario::from_config_str(&text).map_err(|e| match e {
                Error::Config { line, reason } => Error::Config { line, reason: format!("{path}: {reason}") },
                other => other,
            })
            .map_err(CliError::from)
        }
        None => Ok(scenario_by_name(spec)?),
    }
}

pub fn build(cli: &Cli) -> Result<Table, CliError> {
    let s = load_scenario(&cli.common.scenario)?;
    let t = match &cli.command {
        Command::Table1 => commands::table1(&s),
        Command::Table2(a) => commands::table2(&s, a),
        Command::Table3(a) => commands::table3(&s, a),
        Command::Table4(a) => commands::table4(&s, a),
        Command::Table4Osc(a) => commands::table4_osc(&s, a),
        Command::Table5(a) => commands::table5(&s, a),
        Command::Table6(a) => commands::table6(&s, a),
        Command::Tangential(a) => commands::tangential(&s, a),
        Command::Oscillation(a) => commands::oscillation(&s, a),
        Command::Fieldscan(a) => commands::fieldscan(&s, a),
        Command::ShapeSweep(a) => commands::shape_sweep_table(&s, a),
        Command::BrownianSweep(a) => commands::brownian_sweep_table(&s, a),
        Command::Tradeoff(a) => commands::tradeoff(&s, a),
    }?;
    Ok(t)
}

/// Write through a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path.file_name().ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = fs::write(&tmp, contents).and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    if cli.common.threads > 0 {
        // a second initialisation in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.common.threads).build_global();
    }
    let table = build(cli)?;
    let text = match cli.common.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match &cli.common.out {
        Some(path) => {
            let io_err = |p: PathBuf| move |source| CliError::Io { path: p, source };
            write_atomic(path, &text).map_err(io_err(path.clone()))?;
            if let (Format::Csv, Some(summary)) = (cli.common.format, &table.summary) {
                let side = path.with_extension("summary.json");
                let body = serde_json::to_string_pretty(summary).expect("summary is valid JSON") + "\n";
                write_atomic(&side, &body).map_err(io_err(side.clone()))?;
            }
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
    }
    Ok(())
}
