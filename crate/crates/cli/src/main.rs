mod commands;
mod manifest;
mod parse;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

/// Numerical laboratory for the tangent family lambda * tan(z).
#[derive(Parser)]
#[command(name = "tanlab", version, about)]
struct Cli {
    /// Worker threads for grid scans (0 = auto).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Output directory for file-producing subcommands.
    #[arg(long, global = true, default_value = ".")]
    out: std::path::PathBuf,

    /// Significant digits for extended-precision series work.
    #[arg(long, global = true, default_value_t = 50)]
    precision: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f, f', and the asymptotic values at a point.
    Eval(commands::EvalArgs),
    /// Linearize the Siegel disk and run the unboundedness indicators.
    Siegel(commands::SiegelArgs),
    /// Classify a dynamical-plane grid and render it.
    Scan(commands::ScanArgs),
    /// Sweep rotation numbers along the unit circle.
    ParamScan(commands::ParamScanArgs),
    /// Continued fraction, convergents, and Brjuno partial sums.
    Cf(commands::CfArgs),
    /// Lift a curve through an inverse branch of f.
    Lift(commands::LiftArgs),
    /// Rank rotation-number candidates by boundedness heuristics.
    BoundedScan(commands::BoundedScanArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    let ctx = commands::Context {
        out_dir: cli.out.clone(),
        precision: cli.precision,
    };
    let result = match cli.command {
        Command::Eval(args) => commands::cmd_eval(&ctx, &args),
        Command::Siegel(args) => commands::cmd_siegel(&ctx, &args),
        Command::Scan(args) => commands::cmd_scan(&ctx, &args),
        Command::ParamScan(args) => commands::cmd_param_scan(&ctx, &args),
        Command::Cf(args) => commands::cmd_cf(&ctx, &args),
        Command::Lift(args) => commands::cmd_lift(&ctx, &args),
        Command::BoundedScan(args) => commands::cmd_bounded_scan(&ctx, &args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message);
            ExitCode::from(e.code)
        }
    }
}
