//! `critcoh` command-line front end.
//!
//! Exit codes: 0 all checks pass, 1 verification mismatch, 2 configuration
//! or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use critcoh_core::algebra::{AlgebraName, SimpleLieAlgebra};
use critcoh_core::error::Error;
use critcoh_core::harness::{emit_report, run_suite, summary_table, write_report, Format, LevelSpec, Suite, SuiteConfig};
use critcoh_core::opers::{
    canonical_form, expected_dimensions, generator_energies, normalized_residue, rs_to_punctured, OperRep, SeriesLabel,
    Singularity,
};
use critcoh_core::rational::fmt_q;
use serde_json::json;

#[derive(Parser)]
#[command(name = "critcoh", version, about = "Exact cohomology and oper verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite.
    Verify {
        suite: String,
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        max_energy: u32,
        #[arg(long, default_value_t = 1)]
        max_degree: usize,
        /// critical | generic:H | family
        #[arg(long)]
        level: Option<String>,
        /// Verma weight, comma-separated integers.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        /// Oper precision K.
        #[arg(long, default_value_t = 4)]
        precision: u32,
        /// Random instances per oper check.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Oper utilities.
    Oper {
        #[command(subcommand)]
        command: OperCommand,
    },
    /// Graded dimensions of an oracle series.
    Dims {
        #[arg(long)]
        series: String,
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        max_energy: u32,
    },
}

#[derive(Subcommand)]
enum OperCommand {
    /// Reduce an oper read from a JSON file to its canonical form.
    Canonicalize {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        precision: u32,
        #[arg(long)]
        input: PathBuf,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Mismatch,
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn parse_weight(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Failure::Config(format!("weight must be integral, got `{x}`"))))
        .collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Verify { suite, algebra, max_energy, max_degree, level, weight, precision, samples, report, format } => {
            let suite: Suite = suite.parse()?;
            let algebra: AlgebraName = algebra.parse()?;
            let mut cfg = SuiteConfig::new(algebra, suite, max_energy, max_degree);
            cfg.level = level.map(|l| l.parse::<LevelSpec>()).transpose()?;
            cfg.weight = weight.map(|w| parse_weight(&w)).transpose()?.unwrap_or_default();
            cfg.precision = precision;
            cfg.samples = samples;
            cfg.format = format.parse::<Format>()?;
            cfg.output = report;
            let rep = run_suite(&cfg)?;
            match &cfg.output {
                Some(path) => {
                    write_report(&rep, cfg.format, path)?;
                    eprint!("{}", summary_table(&rep));
                }
                None => print!("{}", emit_report(&rep, cfg.format)?),
            }
            if rep.passed() {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
        Command::Oper { command: OperCommand::Canonicalize { algebra, precision, input } } => {
            let algebra: AlgebraName = algebra.parse()?;
            let text = std::fs::read_to_string(&input).map_err(Error::from)?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
            let op = OperRep::from_json(&value)?;
            if op.alg.name != algebra {
                return Err(Failure::Config(format!("input is an oper for {}, not {algebra}", op.alg.name)));
            }
            if op.precision != precision {
                return Err(Failure::Config(format!("input has precision {}, not {precision}", op.precision)));
            }
            let out = if op.singularity == Singularity::Rs {
                let (c, _) = canonical_form(&rs_to_punctured(&op)?)?;
                let residue: Vec<String> = normalized_residue(&c).iter().map(fmt_q).collect();
                json!({"canonical": c.to_json(), "residue": residue})
            } else {
                let (c, _) = canonical_form(&op)?;
                json!({"canonical": c.to_json()})
            };
            println!("{}", serde_json::to_string_pretty(&out).map_err(Error::from)?);
            Ok(())
        }
        Command::Dims { series, algebra, max_energy } => {
            let label: SeriesLabel = series.parse()?;
            let alg = SimpleLieAlgebra::new(algebra.parse()?);
            let odd = matches!(
                label,
                SeriesLabel::OmegaC | SeriesLabel::OmegaCRS | SeriesLabel::OmegaOp | SeriesLabel::OmegaOpRS
            );
            let p_max = if odd { generator_energies(label, &alg, max_energy).len() } else { 0 };
            let dims: Vec<Vec<u64>> = (0..=p_max).map(|p| expected_dimensions(label, &alg, max_energy, p)).collect();
            let out = json!({"series": label.to_string(), "algebra": alg.name.to_string(), "dims": dims});
            println!("{}", serde_json::to_string_pretty(&out).map_err(Error::from)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
