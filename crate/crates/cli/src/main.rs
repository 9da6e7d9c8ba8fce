//! `collapsekit` command-line front end.
//!
//! Exit codes: 0 success, 1 bad input or usage, 2 a mathematically undefined
//! top-level result (zero denominator, no weights for the measure).

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use collapsekit_core::EffectMeasureKind;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "collapsekit", version, about = "Exact collapsibility analysis for stratified binary outcomes")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "COLLAPSEKIT_FORMAT", default_value = "text")]
    pub format: Format,
    /// Decimal places in rendered values.
    #[arg(long, global = true, default_value_t = 6)]
    pub decimals: usize,
    /// Seed for `simulate`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// JSON or CSV input file; `-` or omitted reads standard input.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KindArg {
    /// Effect measure: rd, rr-minus, rr-plus, inv-rr-minus, inv-rr-plus, or.
    #[arg(long, value_parser = parse_kind)]
    pub kind: EffectMeasureKind,
}

fn parse_kind(s: &str) -> Result<EffectMeasureKind, String> {
    s.parse().map_err(|e: collapsekit_core::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    /// Weights that collapse the causal measure over any covariate.
    Causal,
    /// Classical associational weights with their sufficient conditions.
    Newman,
    /// `Pr(V=v | Y^{a=0}=1)` identified from the observed table.
    Identify,
    /// `Pr(V=v)·Pr(Y=1|A=0,V=v)`.
    Miettinen,
    /// `Pr(V=v | Y=1)` in a fully unexposed target population.
    UnexposedTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DefinitionArg {
    Causal,
    Associational,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stratum and marginal values of every effect measure.
    Measures(InputArg),
    /// Compute a weight scheme.
    Weights {
        #[arg(long, value_enum, default_value = "causal")]
        scheme: Scheme,
        /// Required for the causal and newman schemes.
        #[arg(long, value_parser = parse_kind)]
        kind: Option<EffectMeasureKind>,
        #[command(flatten)]
        input: InputArg,
    },
    /// Check whether a measure's weighted stratum average equals its margin.
    CollapseCheck {
        #[command(flatten)]
        kind: KindArg,
        /// Defaults to causal for populations and associational for tables.
        #[arg(long, value_enum)]
        definition: Option<DefinitionArg>,
        /// Comma-separated weights in stratum order, e.g. `1/4,3/4`.
        #[arg(long)]
        weights: Option<String>,
        #[command(flatten)]
        input: InputArg,
    },
    /// Decide whether any weights collapse the measure.
    Feasibility {
        #[command(flatten)]
        kind: KindArg,
        #[command(flatten)]
        input: InputArg,
    },
    /// Effect measure of the standardized risks.
    Standardize {
        #[command(flatten)]
        kind: KindArg,
        #[command(flatten)]
        input: InputArg,
    },
    /// Print a built-in scenario: table1, no-effect-modification, confounded-demo.
    Scenario { name: String },
    /// Generate seeded populations and run the collapsibility pipeline.
    Simulate {
        #[arg(long, default_value_t = 3)]
        strata: usize,
        #[arg(long, default_value_t = 1000)]
        denominator_bound: u64,
        #[arg(long, value_parser = parse_kind, default_value = "rd")]
        kind: EffectMeasureKind,
        #[arg(long)]
        confounded: bool,
        /// Number of consecutive seeds, starting at `--seed`.
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Validate an input document.
    Validate(InputArg),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
