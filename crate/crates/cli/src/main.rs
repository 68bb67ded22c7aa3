mod args;
mod commands;
mod error;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, GlobalOpts};
use error::CliError;
use output::Report;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("mertens-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let opts = &cli.global;
    if opts.threads == 0 {
        return Err(error::usage("--threads must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let report = pool.install(|| commands::run(&cli.command, opts))?;
    emit(&report, opts)?;
    Ok(report.ok)
}

fn destination(report: &Report, opts: &GlobalOpts) -> Option<PathBuf> {
    match (&opts.output, &opts.out_dir) {
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => Some(dir.join(format!("{}.{}", report.command, opts.format.extension()))),
        (None, None) => None,
    }
}

fn emit(report: &Report, opts: &GlobalOpts) -> Result<(), CliError> {
    let text = report.render(opts.format)?;
    match destination(report, opts) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&path, text)?;
            eprintln!("wrote {}", path.display());
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
