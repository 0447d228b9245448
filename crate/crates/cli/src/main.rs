//! `tscale`: runs one command from a TOML config and writes its artifacts.

mod catalog;
mod commands;
mod config;
mod error;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use sha2::{Digest, Sha256};

use commands::{Context, Outcome};
use config::{Command, RunConfig};
use error::CliError;
use output::Report;

#[derive(Debug, Parser)]
#[command(name = "tscale", version, about = "Dynamic equations on time scales")]
struct Args {
    /// Problem definition (TOML).
    #[arg(long)]
    config: PathBuf,

    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Seed for sampled diagnostics; overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,

    /// Suppress the summary line on stdout.
    #[arg(long)]
    quiet: bool,
}

fn dispatch(ctx: &Context<'_>) -> Result<Outcome, CliError> {
    commands::check_sections(ctx.cfg)?;
    match ctx.cfg.command {
        Command::Classify => commands::classify(ctx),
        Command::Integrate => commands::integrate(ctx),
        Command::Rdcheck => commands::rdcheck(ctx),
        Command::Solve => commands::solve(ctx),
        Command::Picard => commands::picard(ctx),
        Command::Mnc => commands::mnc(ctx),
        Command::Kamke => commands::kamke(ctx),
        Command::Parabolic => commands::parabolic(ctx),
        Command::Study => commands::study(ctx),
    }
}

fn run(args: &Args) -> Result<String, CliError> {
    let start = Instant::now();
    let raw = std::fs::read(&args.config)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", args.config.display())))?;
    let text = String::from_utf8(raw.clone()).map_err(|_| CliError::Validation("config is not UTF-8".into()))?;
    let cfg: RunConfig = toml::from_str(&text).map_err(|e| CliError::Validation(e.message().to_string()))?;
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let base = args.config.parent().unwrap_or(Path::new("."));
    let ctx = Context { cfg: &cfg, base, seed };
    let outcome = dispatch(&ctx)?;

    let mut meta = Report::default();
    meta.set("version", tscale_core::VERSION)
        .set("command", cfg.command.name())
        .set("config_sha256", format!("{:x}", Sha256::digest(&raw)))
        .set("seed", seed)
        .set("wall_clock_s", start.elapsed().as_secs_f64());
    let mut files = outcome.files;
    files.push(("run.meta".into(), meta.render()));
    output::write_all(&args.out, &files)?;
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(outcome.summary),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(summary) => {
            if !args.quiet {
                println!("{summary}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
