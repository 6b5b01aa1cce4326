//! `lpbridge`: experiments on zero-one measurement matrices.
//!
//! Every command reads an optional JSON config (`"schema": 1`) and lets
//! flags override it. Output is CSV on stdout or `--out`.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use lpbridge::lp::Mode;

use crate::commands::Ctx;
use crate::config::{ChannelSweep, Config, MatrixSource};

#[derive(Parser)]
#[command(name = "lpbridge", version, about = "Basis pursuit and LP decoding experiments on zero-one matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output path (default stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; falls back to LDPC_SENSE_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// corpus:NAME, alist:PATH, FILE.alist or KIND:DV:DC:N[:SEED]
    /// (KIND = gallager, peg, random, dense).
    #[arg(long, global = true)]
    matrix: Option<String>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Sparsity grid, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    k: Vec<usize>,
    /// Sparsity fractions, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    alpha: Vec<f64>,
    /// Append a wall_time column to Monte Carlo rows.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Float,
    Rational,
}

#[derive(Subcommand)]
enum Command {
    /// Write the matrix as alist.
    Construct,
    /// Tanner-graph girth.
    Girth,
    /// Exhaustive expansion test.
    ExpandCheck {
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Weights of --omega, or minimum weights of the matrix.
    Pseudoweight {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        omega: Vec<f64>,
    },
    /// Nullspace property for every k in the grid.
    NspCheck {
        #[arg(long)]
        c: Option<f64>,
        /// Check the non-strict property.
        #[arg(long)]
        non_strict: bool,
    },
    /// LP decoding over a channel grid.
    DecodeCc {
        #[command(flatten)]
        channel: ChannelArgs,
    },
    /// Basis pursuit over the sparsity grid.
    RecoverCs,
    /// Bridge map on random nullspace vectors.
    BridgeCheck,
    /// Graph-cover reformulation checks.
    CoverCheck {
        #[arg(long, value_delimiter = ',')]
        m_set: Vec<usize>,
    },
    /// Recovery and decoding sweeps in one table.
    Experiment {
        #[command(flatten)]
        channel: ChannelArgs,
    },
}

#[derive(clap::Args)]
struct ChannelArgs {
    /// bsc, awgn or bec.
    #[arg(long, requires = "params")]
    channel: Option<String>,
    /// Crossover probabilities, SNRs or erasure probabilities.
    #[arg(long, value_delimiter = ',')]
    params: Vec<f64>,
}

impl ChannelArgs {
    fn apply(self, cfg: &mut Config) -> Result<()> {
        if let Some(family) = self.channel {
            cfg.channel = Some(ChannelSweep::parse(&family, self.params)?);
        }
        Ok(())
    }
}

fn threads(flag: Option<usize>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("LDPC_SENSE_THREADS") {
        Ok(v) => Ok(Some(v.trim().parse().with_context(|| format!("LDPC_SENSE_THREADS = {v:?}"))?)),
        Err(_) => Ok(None),
    }
}

fn build_config(cli: &Cli) -> Result<Config> {
    let flag_matrix = cli.matrix.as_deref().map(str::parse::<MatrixSource>).transpose()?;
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::new(None),
    };
    if flag_matrix.is_some() {
        cfg.matrix = flag_matrix;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    if let Some(m) = cli.mode {
        cfg.mode = match m {
            ModeArg::Float => Mode::Float,
            ModeArg::Rational => Mode::Rational,
        };
    }
    if let Some(t) = cli.trials {
        cfg.trials = t;
    }
    if !cli.k.is_empty() {
        cfg.k = cli.k.clone();
    }
    if !cli.alpha.is_empty() {
        cfg.alpha = cli.alpha.clone();
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = threads(cli.threads)? {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let mut cfg = build_config(&cli)?;
    let timing = cli.timing;
    let command: fn(&Ctx) -> Result<()> = match cli.command {
        Command::Construct => commands::construct,
        Command::Girth => commands::girth_cmd,
        Command::ExpandCheck { gamma, delta } => {
            cfg.gamma = gamma.or(cfg.gamma);
            cfg.delta = delta.or(cfg.delta);
            commands::expand_check
        }
        Command::Pseudoweight { omega } => {
            if !omega.is_empty() {
                cfg.omega = Some(omega);
            }
            commands::pseudoweight
        }
        Command::NspCheck { c, non_strict } => {
            cfg.c = c.unwrap_or(cfg.c);
            cfg.strict &= !non_strict;
            commands::nsp_check
        }
        Command::DecodeCc { channel } => {
            channel.apply(&mut cfg)?;
            commands::decode_cc
        }
        Command::RecoverCs => commands::recover_cs,
        Command::BridgeCheck => commands::bridge_check,
        Command::CoverCheck { m_set } => {
            if !m_set.is_empty() {
                cfg.m_set = m_set;
            }
            commands::cover_check
        }
        Command::Experiment { channel } => {
            channel.apply(&mut cfg)?;
            commands::experiment
        }
    };
    cfg.validate()?;
    command(&Ctx { cfg, timing })
}
