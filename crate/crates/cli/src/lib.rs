//! Configuration, dispatch and reporting for the `setlab` command.

pub mod commands;
pub mod config;
pub mod report;

pub use config::{Command, Format, Model, Output, RunConfig};
pub use report::{Check, Report, Verdict};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub fn run(config: &RunConfig) -> Result<Report, RunError> {
    let checks = commands::dispatch(config)?;
    Ok(Report::new(config.clone(), checks))
}

/// Runs, writes the rendered report to the configured path or stdout, and
/// returns the exit status.
pub fn run_and_write(config: &RunConfig) -> Result<i32, RunError> {
    let report = run(config)?;
    let text = report.render(config.output.format);
    match &config.output.path {
        Some(path) => report::write_atomic(path, &text)?,
        None => write_stdout(&text)?,
    }
    Ok(report.exit_code())
}

/// Writes to stdout, treating a closed reader as success.
pub fn write_stdout(text: &str) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => other,
    }
}
