//! `kneadlab` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage, domain or validation errors, 2 when
//! a verification (monotonicity, census, positivity, solve-all) fails.

mod args;
mod commands;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

pub const EXIT_ERROR: u8 = 1;
pub const EXIT_VERIFY: u8 = 2;

/// A command's outcome: its output, and whether its verification passed.
pub struct Outcome {
    pub text: String,
    pub verified: bool,
    pub note: Option<String>,
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(value) = std::env::var("KNEADLAB_THREADS") {
        let n: usize = value.parse().map_err(|_| {
            anyhow::anyhow!("KNEADLAB_THREADS must be a positive integer, got {value:?}")
        })?;
        if n == 0 {
            anyhow::bail!("KNEADLAB_THREADS must be a positive integer, got 0");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    let mut sink: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    sink.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        sink.write_all(b"\n")?;
    }
    sink.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_ERROR),
            };
        }
    };
    let result = configure_threads().and_then(|()| commands::run(&cli));
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome.text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_ERROR);
            }
            if let Some(note) = outcome.note {
                eprintln!("{note}");
            }
            if outcome.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
