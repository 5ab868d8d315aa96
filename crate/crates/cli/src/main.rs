use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::{Context, Report, Status};

#[derive(Parser, Debug)]
#[command(
    name = "bsloc",
    version,
    about = "Equivariant oriented cohomology of Bott-Samelson varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Roots, Weyl group order and, with --seq, the fixed-point data.
    Roots,
    /// Restrictions of the η-basis to the fixed points.
    Restrict,
    /// The quadratic relations η_j² in the η-basis.
    Relations,
    /// Push-forward of η_L to the flag variety.
    Pushforward,
    /// GKM check and η-expansion of a fixed-point function read from --input.
    Gkm,
    /// The Chevalley formula for u = x_{ω_i}, checked pointwise on W.
    Chevalley,
    /// Runs the seeded property suite.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FglChoice {
    Additive,
    Multiplicative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct Options {
    /// Named root datum (A1..A8, B2, C2, G2).
    #[arg(long = "type", global = true, conflicts_with = "cartan_file")]
    datum: Option<String>,
    /// Cartan matrix file (JSON or TOML).
    #[arg(long, global = true)]
    cartan_file: Option<PathBuf>,
    #[arg(long, value_enum, global = true, conflicts_with = "fgl_file")]
    fgl: Option<FglChoice>,
    /// Formal group law file (JSON).
    #[arg(long, global = true)]
    fgl_file: Option<PathBuf>,
    /// Truncation precision N: terms of total degree ≤ N are kept.
    #[arg(long, global = true, default_value_t = bsloc_core::fga::DEFAULT_PRECISION,
          value_parser = clap::value_parser!(u32).range(2..=bsloc_core::series::MAX_PRECISION as i64))]
    trunc: u32,
    /// Sequence of simple indices, e.g. 1,2,1 (empty string for the empty word).
    #[arg(long, global = true, allow_hyphen_values = true)]
    seq: Option<String>,
    /// Subset of positions: comma list, "" or "full".
    #[arg(long, global = true)]
    subset: Option<String>,
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random samples per property in the verify suite.
    #[arg(long, global = true, default_value_t = 10)]
    samples: usize,
    /// Input file for gkm.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also run the three-way agreement for pushforward.
    #[arg(long, global = true)]
    verify: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = match Context::build(&cli.opts) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Roots => commands::roots(&ctx),
        Command::Restrict => commands::restrict(&ctx),
        Command::Relations => commands::relations(&ctx),
        Command::Pushforward => commands::pushforward(&ctx, cli.opts.verify),
        Command::Gkm => commands::gkm(&ctx),
        Command::Chevalley => commands::chevalley(&ctx),
        Command::Verify => commands::verify(&ctx),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(commands::exit_code(&e));
        }
    };
    if let Err(e) = emit(&report, cli.opts.format, cli.opts.out.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match report.status {
        Status::Ok => ExitCode::SUCCESS,
        Status::MathFailure => ExitCode::from(2),
        Status::PrecisionExhausted => ExitCode::from(3),
    }
}

fn emit(report: &Report, format: Format, out: Option<&std::path::Path>) -> std::io::Result<()> {
    let mut text = match format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("report serializes"),
        Format::Text => report.text.trim_end().to_string(),
    };
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
