//! Command-line front end for the `nontwist` library.
//!
//! Every command resolves a [`config::RunConfig`], computes its results in memory and
//! hands back an [`commands::Output`] that is written in one go.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod svg;

use clap::{Parser, Subcommand};

use crate::commands::Output;
use crate::config::{CommandKind, Flags, RunConfig};
use crate::error::Result;

#[derive(Parser, Debug)]
#[command(name = "nontwist", version, about = "Reconnection thresholds and phase portraits of the cubic nontwist map")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reconnection thresholds in b (and the triple point with --triple). JSON on stdout.
    Thresholds(Flags),
    /// Phase portrait of the interpolating Hamiltonian: traces.csv, equilibria.json, optional SVG.
    Portrait(Flags),
    /// Equilibrium census, residuals and regimes over a range of b: scan.csv.
    Scan(Flags),
    /// Rotation-number profile F(y) and its twistless circles: rotation.csv, rotation.json.
    Rotation(Flags),
}

impl Command {
    fn split(&self) -> (CommandKind, &Flags) {
        match self {
            Command::Thresholds(f) => (CommandKind::Thresholds, f),
            Command::Portrait(f) => (CommandKind::Portrait, f),
            Command::Scan(f) => (CommandKind::Scan, f),
            Command::Rotation(f) => (CommandKind::Rotation, f),
        }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Output> {
    match cfg.command {
        CommandKind::Thresholds => commands::cmd_thresholds(cfg),
        CommandKind::Portrait => commands::cmd_portrait(cfg),
        CommandKind::Scan => commands::cmd_scan(cfg),
        CommandKind::Rotation => commands::cmd_rotation(cfg),
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let (kind, flags) = cli.command.split();
    let cfg = RunConfig::resolve(kind, flags)?;
    execute(&cfg)
}
