//! `toricq`: quantization of toric momentum polytopes and model index runs.
//!
//! Exit codes: 0 success, 1 domain error (irregular level, unresolved index,
//! failed check), 2 usage or input parse error.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toricq::dirac1d::{Deformation, ModelKind};
use toricq::Weight;

#[derive(Parser, Debug)]
#[command(name = "toricq", version, about = "Lattice-point quantization and 1D Dirac index models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate or enumerate the quantization of a polytope.
    Quantize(QuantizeArgs),
    /// Reduced polytope at a regular level.
    Reduce(ReduceArgs),
    /// Compare multiplicities with reduced Riemann-Roch numbers.
    VerifyQr(VerifyArgs),
    /// Index of one model operator.
    ModelIndex(ModelArgs),
    /// Index table over weights and deformations.
    Sweep(SweepArgs),
    /// Localization bookkeeping at a weight.
    Localize(LocalizeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct QuantizeArgs {
    #[arg(long)]
    pub polytope: std::path::PathBuf,
    /// Weight to evaluate at; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub eval: Vec<Weight>,
    /// Bounding box `LO..HI` in every coordinate, for unbounded polyhedra.
    #[arg(long = "box", allow_hyphen_values = true, value_parser = commands::parse_range)]
    pub bbox: Option<(i64, i64)>,
    /// Accept polytopes that fail the Delzant condition, with a warning.
    #[arg(long)]
    pub allow_non_delzant: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long)]
    pub polytope: std::path::PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Weight,
    #[arg(long, allow_hyphen_values = true)]
    pub level: i64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub polytope: std::path::PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Weight,
    /// Level to check; all levels across the polytope when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub level: Option<i64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct GridArgs {
    /// Grid points per chirality (default: $TORICQ_GRID_N, else 2001).
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Truncation radius.
    #[arg(long)]
    pub r_max: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Model document; flags below override its fields.
    #[arg(long, conflicts_with = "kind")]
    pub spec: Option<std::path::PathBuf>,
    #[arg(long, value_parser = parse_kind, required_unless_present = "spec")]
    pub kind: Option<ModelKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<i64>,
    /// `t=<real>`, `proper` or `epsilon=<real>`.
    #[arg(long, value_parser = parse_deformation)]
    pub deformation: Option<Deformation>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, conflicts_with = "kind")]
    pub spec: Option<std::path::PathBuf>,
    #[arg(long, value_parser = parse_kind, required_unless_present = "spec")]
    pub kind: Option<ModelKind>,
    /// Values of rho: `a..b` or a comma list.
    #[arg(long, allow_hyphen_values = true, value_parser = commands::parse_int_list)]
    pub rho: Option<commands::IntList>,
    /// Values of tau: `a..b` or a comma list.
    #[arg(long, allow_hyphen_values = true, value_parser = commands::parse_int_list)]
    pub tau: Option<commands::IntList>,
    /// Deformation setting; repeatable.
    #[arg(long, value_parser = parse_deformation)]
    pub deformation: Vec<Deformation>,
    /// Comma list of constant deformation parameters.
    #[arg(long, value_parser = commands::parse_real_list)]
    pub t: Option<commands::RealList>,
    /// Comma list of interpolation parameters in [0, 1].
    #[arg(long, value_parser = commands::parse_real_list)]
    pub epsilon: Option<commands::RealList>,
    /// Include the proper-function deformation.
    #[arg(long)]
    pub proper: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct LocalizeArgs {
    #[arg(long)]
    pub polytope: std::path::PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Weight,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn parse_kind(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: toricq::Error| e.to_string())
}

fn parse_deformation(s: &str) -> Result<Deformation, String> {
    s.parse().map_err(|e: toricq::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("{}", e.render(commands::format_of(&cli.command)));
            ExitCode::from(e.code)
        }
    }
}
