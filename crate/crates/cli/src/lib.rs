//! The `disentangle` command line: check instance files, print the gallery,
//! run the theorem suites and decompose magmas.
//!
//! Exit codes: 0 when everything ran and every expectation held, 1 when a
//! check failed or a suite found a counterexample, 2 for usage and input
//! errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use disentangle_core::algact::{self, MAX_DECOMPOSITION_SIZE};
use disentangle_core::checker::theorems::{theorem_suite, TheoremConfig};
use disentangle_core::checker::{evaluate, gallery, normalize_selection, EvalConfig, Verdict};
use disentangle_core::search::DEFAULT_BUDGET;
use disentangle_core::Error;
use serde_json::json;

pub mod render;
pub mod schema;

use schema::{Arithmetic, SchemaError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Overrides the default search budget.
pub const BUDGET_ENV: &str = "DISENTANGLE_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "disentangle", version, about = "Check disentanglement definitions on finite instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the definitions of an instance file.
    Check {
        file: PathBuf,
        /// Comma-separated definition ids, e.g. `D1.a,D1.e(1,2)`.
        #[arg(long)]
        definitions: Option<String>,
        /// Read stochastic weights as floats compared within EPS.
        #[arg(long, value_name = "EPS")]
        tolerance: Option<f64>,
        /// Candidate limit for exhaustive searches.
        #[arg(long, value_name = "N")]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
    },
    /// Evaluate the worked examples against their expected verdicts.
    Gallery {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
    },
    /// Run the theorem property suites.
    Theorems {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest factor size in random families.
        #[arg(long, value_name = "K")]
        max_size: Option<usize>,
        /// Largest number of factors in random families.
        #[arg(long, value_name = "N")]
        max_factors: Option<usize>,
        /// Random draws per family.
        #[arg(long, value_name = "T")]
        trials: Option<usize>,
        #[arg(long, value_name = "N")]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
    },
    /// List the direct-product decompositions of a unital magma.
    Decompose {
        file: PathBuf,
        #[arg(long, value_name = "K", default_value_t = MAX_DECOMPOSITION_SIZE)]
        max_size: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
    },
}

/// An error that ends the run with a message and an exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Consistency(_)) { EXIT_FAILED } else { EXIT_INPUT };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let to_out = !e.use_stderr();
            let text = e.render().to_string();
            let _ = if to_out { write!(out, "{text}") } else { write!(err, "{text}") };
            return if to_out { EXIT_OK } else { EXIT_INPUT };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Check {
            file,
            definitions,
            tolerance,
            budget,
            report,
        } => check(&file, definitions.as_deref(), tolerance, budget, report, out),
        Command::Gallery { report } => show_gallery(report, out),
        Command::Theorems {
            seed,
            max_size,
            max_factors,
            trials,
            budget,
            report,
        } => {
            let mut cfg = TheoremConfig {
                seed,
                budget: resolve_budget(budget)?,
                ..TheoremConfig::default()
            };
            if let Some(t) = trials {
                cfg = cfg.with_trials(t);
            }
            if let Some(k) = max_size {
                cfg.max_factor_size = k;
            }
            if let Some(n) = max_factors {
                cfg.max_factors = n;
            }
            if cfg.max_factor_size == 0 || cfg.max_factors == 0 {
                return Err(Failure::input("--max-size and --max-factors must be positive"));
            }
            let t = theorem_suite(&cfg);
            emit(out, report, &t, || render::theorems(&t))?;
            Ok(if t.all_passed() { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Decompose { file, max_size, report } => {
            let magma = schema::parse_magma(&read(&file)?)?;
            let pairs = algact::find_decompositions(&magma, max_size)?;
            let names = |s: &[usize]| s.iter().map(|&i| magma.elements()[i].clone()).collect::<Vec<_>>();
            let listed: Vec<[Vec<String>; 2]> = pairs.iter().map(|(a, b)| [names(a), names(b)]).collect();
            emit(out, report, &listed, || render::decompositions(magma.elements(), &pairs))?;
            Ok(EXIT_OK)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn resolve_budget(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::input(format!("{BUDGET_ENV}={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn emit<T: serde::Serialize>(
    out: &mut dyn Write,
    format: Format,
    value: &T,
    text: impl FnOnce() -> String,
) -> Result<(), Failure> {
    let body = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::input(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Text => text(),
    };
    out.write_all(body.as_bytes())
        .map_err(|e| Failure::input(format!("cannot write output: {e}")))
}

/// Splits on commas outside parentheses, so `D1.e(1,2)` stays whole.
pub fn split_definitions(list: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in list.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    parts.push(cur);
    parts
        .into_iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn check(
    file: &Path,
    definitions: Option<&str>,
    tolerance: Option<f64>,
    budget: Option<u64>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let arithmetic = match tolerance {
        Some(eps) if eps.is_finite() && eps >= 0.0 => Arithmetic::Float { eps },
        Some(eps) => return Err(Failure::input(format!("--tolerance {eps} must be a nonnegative number"))),
        None => Arithmetic::Exact,
    };
    let parsed = schema::parse_instance(&read(file)?, arithmetic)?;
    let selection = definitions
        .map(|d| normalize_selection(&split_definitions(d)))
        .transpose()?;
    let config = EvalConfig {
        budget: resolve_budget(budget)?,
    };
    let report = evaluate(&parsed.instance, selection.as_ref(), &config)?;
    emit(out, format, &report, || render::report(&report))?;
    // with a selection, expectations on unselected definitions are skipped
    let expect: Vec<_> = parsed
        .expect
        .iter()
        .filter(|(id, _)| selection.is_none() || report.verdict(id).is_some())
        .collect();
    if parsed.expect.is_empty() {
        let failed = report.verdicts.values().any(|v| *v == Verdict::Fails);
        return Ok(if failed { EXIT_FAILED } else { EXIT_OK });
    }
    let missed: Vec<&str> = expect
        .iter()
        .filter(|(id, want)| !report.verdict(id).is_some_and(|v| want.matches(v)))
        .map(|(id, _)| id.as_str())
        .collect();
    if missed.is_empty() {
        return Ok(EXIT_OK);
    }
    if format == Format::Text {
        let _ = writeln!(out, "unmet expectations: {}", missed.join(", "));
    }
    Ok(EXIT_FAILED)
}

fn show_gallery(format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    let config = EvalConfig::default();
    let mut rows = Vec::new();
    for e in gallery::gallery() {
        let r = evaluate(&e.instance, None, &config)?;
        rows.push((e, r));
    }
    let all_match = rows.iter().all(|(e, r)| r.verdicts == e.expected);
    let listed: Vec<serde_json::Value> = rows
        .iter()
        .map(|(e, r)| {
            json!({
                "name": e.name,
                "description": e.description,
                "matches": r.verdicts == e.expected,
                "expected": e.expected,
                "report": r,
            })
        })
        .collect();
    emit(out, format, &listed, || render::gallery(&rows))?;
    Ok(if all_match { EXIT_OK } else { EXIT_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn definition_lists_keep_parenthesised_commas() {
        assert_eq!(split_definitions("D1.a, D1.e(1,2),epi,"), ["D1.a", "D1.e(1,2)", "epi"]);
        assert!(split_definitions("").is_empty());
    }
}
