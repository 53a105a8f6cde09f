//! `kz`: generate, verify and study KZ solutions modulo p^s from the shell.
//!
//! Every command writes one JSON document tagged with the artifact schema and
//! exits 0 when all checks in it pass, 1 when one fails and 2 on bad input.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::config::RunFile;

#[derive(Parser, Debug)]
#[command(name = "kz", version, about = "p^s-hypergeometric solutions of the KZ system")]
pub struct Cli {
    /// Run file of `key = value` lines; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Rayon worker threads (defaults to KZ_PADIC_WORKERS, then all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write the JSON artifact here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Extract a solution vector and verify it.
    Gen(GenArgs),
    /// Re-verify a solution read from a JSON file.
    Verify(VerifyArgs),
    /// Cartier-Manin matrix, optionally with the level relations.
    Cartier(CartierArgs),
    /// Asymptotic-zone factorization or the p-adic series.
    Asympt(AsymptArgs),
    /// Seeded p-adic convergence run.
    Converge(ConvergeArgs),
    /// The elliptic-integral example, coefficient by coefficient.
    Classic(ClassicArgs),
}

#[derive(Args, Debug, Default)]
pub struct Instance {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub inst: Instance,
    #[arg(long)]
    pub l: Option<u64>,
    /// Level r of the extracted coefficient (default s).
    #[arg(long)]
    pub r: Option<u32>,
    /// Exponent vector, comma separated (default: minimal at level r).
    #[arg(long)]
    pub mvec: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct CartierArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Top level for the relation checks (default 2).
    #[arg(long)]
    pub t: Option<u32>,
    /// Check the level relations and the iterated products.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug)]
pub struct AsymptArgs {
    #[command(flatten)]
    pub inst: Instance,
    #[arg(long)]
    pub l: Option<u64>,
    /// Emit the p-adic series T^l instead of the level-s factorization.
    #[arg(long)]
    pub series: bool,
    /// Series cutoff on the exponent degree (default (p^s - 1)/2).
    #[arg(long)]
    pub cutoff: Option<u64>,
    /// p-adic digits kept in series coefficients (default s + 8).
    #[arg(long)]
    pub prec: Option<u32>,
    /// Also check the translated form of the shifted solution.
    #[arg(long)]
    pub translation: bool,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub l: Option<u64>,
    #[arg(long)]
    pub smax: Option<u32>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub prec: Option<u32>,
    /// Square root branch; x_1 is sampled near beta^2.
    #[arg(long)]
    pub beta: Option<u64>,
    /// n = 3 only: compare in the u-coordinates.
    #[arg(long)]
    pub u_form: bool,
    /// Run the elliptic example instead.
    #[arg(long)]
    pub classic: bool,
}

#[derive(Args, Debug)]
pub struct ClassicArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub smax: Option<u32>,
}

fn workers(cli: &Cli, file: &RunFile) -> Result<Option<usize>> {
    if let Some(w) = file.pick(cli.workers, "workers")? {
        return Ok(Some(w));
    }
    match std::env::var("KZ_PADIC_WORKERS") {
        Ok(v) => v.trim().parse().map(Some).with_context(|| format!("KZ_PADIC_WORKERS = {v:?}")),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let file = match &cli.config {
        Some(path) => RunFile::load(path)?,
        None => RunFile::default(),
    };
    if let Some(w) = workers(&cli, &file)? {
        anyhow::ensure!(w > 0, "worker count must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().context("configuring the worker pool")?;
    }
    let artifact = commands::dispatch(&cli.command, &file)?;
    let output = file.pick(cli.output.clone(), "output")?;
    artifact.write(output.as_deref())?;
    Ok(artifact.pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
