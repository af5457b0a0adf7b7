//! `nlmotion`: integrate, verify, fit and draw geodesics of the Poincaré
//! half-plane.
//!
//! Exit codes: 0 success, 1 verification failure, 2 runtime or domain error,
//! 64 usage error.

mod args;
mod commands;
mod svg;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, RunArgs, RunSpec};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_USAGE: u8 = 64;

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn spec_of(args: &RunArgs) -> Result<RunSpec, Failure> {
    RunSpec::new(args.q, args.v, &args.window).map_err(Failure::Usage)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Integrate(a) => {
            commands::integrate(&spec_of(&a)?, &mut out)?;
        }
        Command::Verify(a) => {
            let passed = commands::verify(&spec_of(&a)?, &mut out)?;
            out.flush()?;
            if !passed {
                return Ok(ExitCode::from(EXIT_VERIFY_FAILED));
            }
        }
        Command::Geodesic(a) => {
            commands::geodesic(&spec_of(&a)?, &mut out)?;
        }
        Command::Plot(a) => {
            if a.specs.is_empty() {
                return Err(Failure::Usage(
                    "plot needs at least one --spec q1,q2,v1,v2".into(),
                ));
            }
            let window = RunSpec::new([0.0, 1.0], [0.0, 0.0], &a.window).map_err(Failure::Usage)?;
            let curves = a
                .specs
                .iter()
                .map(|&[q1, q2, v1, v2]| {
                    let s0 = nonlocal_motion::State::new(window.t0, [q1, q2], [v1, v2])?;
                    svg::sample_geodesic(&s0, window.t0, window.t1)
                })
                .collect::<nonlocal_motion::Result<Vec<_>>>()
                .map_err(anyhow::Error::from)?;
            std::fs::write(&a.out, svg::render(&curves))
                .with_context(|| format!("writing {}", a.out.display()))?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
