//! `exherm`: run verification suites and render states, diagrams and series.

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use exherm::chain::Ladder;
use exherm::emit::{emit_diagram, emit_series, emit_state, Format, SeriesKind};
use exherm::states::{Family, Normalization};
use exherm::verify::{run_suite_cached, Suite, SuiteConfig};
use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "exherm", version, about = "Exact verification of the X2 exceptional-Hermite ladder algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and report every check.
    Verify {
        /// Suite to run; repeatable. `none` selects no suite. Default: all.
        #[arg(long = "suite", value_name = "S")]
        suites: Vec<String>,
        /// Inclusive index range.
        #[arg(long, default_value = "-8..8", allow_hyphen_values = true, value_parser = parse_range)]
        range: (i64, i64),
        /// Series truncation order (at least 12).
        #[arg(long, default_value_t = 24)]
        order: usize,
        /// Largest power in the commutator identities.
        #[arg(long, default_value_t = 5)]
        max_power: u32,
        /// Treat coefficient soft mismatches as failures.
        #[arg(long)]
        strict: bool,
        /// Directory for per-suite cached records.
        #[arg(long, env = "EXHERM_CACHE_DIR", value_name = "DIR")]
        cache: Option<PathBuf>,
        /// Also write the JSON report to this path.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Format of the report on stdout.
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Render one state.
    State {
        #[arg(long)]
        family: String,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value = "darboux")]
        normalization: String,
        #[arg(long, default_value = "canonical")]
        format: String,
    },
    /// Render a chain diagram as dot or json.
    Diagram {
        #[arg(long)]
        ladder: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        range: (i64, i64),
        #[arg(long, default_value = "dot")]
        format: String,
    },
    /// Print the coefficients of a series solution.
    Series {
        #[arg(long)]
        kind: String,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value_t = 24)]
        order: usize,
    },
}

/// `A..B`, inclusive; `A..B` with A > B is an empty range.
fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got `{s}`"))?;
    let a = a.trim().parse().map_err(|e| format!("bad range start `{a}`: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("bad range end `{b}`: {e}"))?;
    Ok((a, b))
}

fn parse_suites(names: &[String]) -> anyhow::Result<BTreeSet<Suite>> {
    if names.is_empty() {
        return Ok(Suite::ALL.into_iter().collect());
    }
    let mut out = BTreeSet::new();
    for name in names {
        if name != "none" {
            out.insert(Suite::parse(name)?);
        }
    }
    Ok(out)
}

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn print(text: &str) -> Result<(), Failure> {
    std::io::stdout().write_all(text.as_bytes()).context("writing stdout").map_err(Failure::Runtime)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Verify { suites, range, order, max_power, strict, cache, json, output } => {
            let config = SuiteConfig { suites: parse_suites(&suites).map_err(usage)?, range, order, max_power, strict };
            config.validate().map_err(usage)?;
            let report = run_suite_cached(&config, cache.as_deref()).map_err(|e| Failure::Runtime(e.into()))?;
            if let Some(path) = json {
                std::fs::write(&path, report.to_json())
                    .with_context(|| format!("writing {}", path.display()))
                    .map_err(Failure::Runtime)?;
            }
            print(&match output {
                Output::Text => report.to_text(),
                Output::Json => report.to_json(),
            })?;
            Ok(report.exit_code() as u8)
        }
        Command::State { family, n, normalization, format } => {
            let family = Family::parse(&family).map_err(usage)?;
            let norm = Normalization::parse(&normalization).map_err(usage)?;
            let format = Format::parse(&format).map_err(usage)?;
            print(&emit_state(family, n, norm, format).map_err(usage)?)?;
            Ok(0)
        }
        Command::Diagram { ladder, range, format } => {
            let ladder = Ladder::parse(&ladder).map_err(usage)?;
            print(&emit_diagram(ladder, range.0, range.1, &format).map_err(usage)?)?;
            Ok(0)
        }
        Command::Series { kind, n, order } => {
            let kind = SeriesKind::parse(&kind).map_err(usage)?;
            if order == 0 {
                return Err(usage(anyhow!("series order must be positive")));
            }
            print(&emit_series(kind, n, order).map_err(usage)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE_ERROR)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
