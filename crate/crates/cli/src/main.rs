//! `chowfiber`: validate special-fiber models, compute `B(X)` and `B(X)_0`,
//! and run the integer Smith-form utilities.
//!
//! Exit codes: 0 success, 1 validation errors (strict) or route disagreement
//! surfaced as a failed check, 2 unreadable or malformed input, 3 internal
//! invariant violation.

mod render;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chowfiber::chow::{report, ChowError, Mode};
use chowfiber::linalg::{
    determinantal_divisors, invariant_factors_from_divisors, snf, IntMatrix, LinalgError,
};
use chowfiber::model::{has_errors, parse_model, validate, FiberModel};
use clap::{Args, Parser, Subcommand};

use render::Style;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "chowfiber", version)]
#[command(about = "Chow groups of 0-cycles from special-fiber intersection data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a model document and print its diagnostics
    Validate {
        /// Model document (JSON)
        model: PathBuf,
    },
    /// Compute B(X), B(X)_0 and the index for a model
    Compute {
        /// Model document (JSON)
        model: PathBuf,
        #[command(flatten)]
        mode: ModeFlags,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Smith normal form of a matrix file: rank and invariant factors
    Snf {
        /// Matrix in text format ("R C" header, then R rows)
        matrix: PathBuf,
        /// Cross-check against the determinantal divisors
        #[arg(long)]
        check: bool,
    },
    /// Determinantal divisors (gcd of k x k minors) of a matrix file
    Oracle {
        /// Matrix in text format ("R C" header, then R rows)
        matrix: PathBuf,
    },
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct ModeFlags {
    /// Refuse models with validation errors (default)
    #[arg(long)]
    strict: bool,
    /// Report the formal cokernel of models that fail validation
    #[arg(long)]
    permissive: bool,
}

impl ModeFlags {
    fn mode(&self) -> Mode {
        if self.permissive {
            Mode::Permissive
        } else {
            Mode::Strict
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style::from_env();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match cli.command {
        Command::Validate { model } => cmd_validate(&model, style, &mut out),
        Command::Compute { model, mode, json } => {
            cmd_compute(&model, mode.mode(), json, style, &mut out)
        }
        Command::Snf { matrix, check } => cmd_snf(&matrix, check, &mut out),
        Command::Oracle { matrix } => cmd_oracle(&matrix, &mut out),
    };
    let _ = out.flush();
    ExitCode::from(code)
}

fn load_model(path: &Path) -> Result<FiberModel, u8> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_INPUT
    })?;
    parse_model(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_INPUT
    })
}

fn load_matrix(path: &Path) -> Result<IntMatrix, u8> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_INPUT
    })?;
    IntMatrix::parse_text(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_INPUT
    })
}

fn cmd_validate(path: &Path, style: Style, out: &mut impl Write) -> u8 {
    let model = match load_model(path) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let diagnostics = validate(&model);
    for d in &diagnostics {
        let _ = writeln!(out, "{}", style.diagnostic(d));
    }
    if has_errors(&diagnostics) {
        EXIT_INVALID
    } else {
        EXIT_OK
    }
}

fn cmd_compute(path: &Path, mode: Mode, json: bool, style: Style, out: &mut impl Write) -> u8 {
    let model = match load_model(path) {
        Ok(m) => m,
        Err(code) => return code,
    };
    match report(&model, mode) {
        Ok(r) => {
            let text = if json {
                render::report_json(&r)
            } else {
                render::report_human(&r, style)
            };
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(ChowError::InvalidModel { diagnostics }) => {
            for d in &diagnostics {
                let _ = writeln!(out, "{}", style.diagnostic(d));
            }
            eprintln!("error: model fails validation (use --permissive for the formal cokernel)");
            EXIT_INVALID
        }
        Err(e @ (ChowError::RouteDisagreement { .. } | ChowError::Internal(_))) => {
            eprintln!("internal error: {e}");
            EXIT_INTERNAL
        }
        Err(e @ ChowError::XiNotDescending { .. }) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn join_ints(xs: &[num_bigint::BigInt]) -> String {
    if xs.is_empty() {
        "(none)".to_string()
    } else {
        xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }
}

fn cmd_snf(path: &Path, check: bool, out: &mut impl Write) -> u8 {
    let a = match load_matrix(path) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let d = snf(&a);
    let factors: Vec<_> = d.diagonal().into_iter().filter(|x| x != &0.into()).collect();
    let _ = writeln!(out, "rank {}; invariant factors: {}", factors.len(), join_ints(&factors));
    if !check {
        return EXIT_OK;
    }
    if !d.verify(&a) {
        let _ = writeln!(out, "check: FAILED (u·a·v = s or unimodularity or divisibility)");
        return EXIT_INTERNAL;
    }
    match determinantal_divisors(&a) {
        Ok(divs) => {
            let from_oracle = invariant_factors_from_divisors(&divs);
            if from_oracle == d.diagonal() {
                let _ = writeln!(out, "check: ok (determinantal divisors {})", join_ints(&divs));
                EXIT_OK
            } else {
                let _ = writeln!(
                    out,
                    "check: FAILED (oracle factors {} differ from Smith diagonal {})",
                    join_ints(&from_oracle),
                    join_ints(&d.diagonal())
                );
                EXIT_INTERNAL
            }
        }
        Err(e @ LinalgError::OracleSizeLimit { .. }) => {
            let _ = writeln!(out, "check: transforms ok; oracle skipped ({e})");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("internal error: {e}");
            EXIT_INTERNAL
        }
    }
}

fn cmd_oracle(path: &Path, out: &mut impl Write) -> u8 {
    let a = match load_matrix(path) {
        Ok(a) => a,
        Err(code) => return code,
    };
    match determinantal_divisors(&a) {
        Ok(divs) => {
            let _ = writeln!(out, "determinantal divisors: {}", join_ints(&divs));
            let _ = writeln!(
                out,
                "invariant factors: {}",
                join_ints(&invariant_factors_from_divisors(&divs))
            );
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            EXIT_INPUT
        }
    }
}
