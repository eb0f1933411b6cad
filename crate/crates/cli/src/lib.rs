// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for `infoengine`.
//!
//! Every command writes `report.json` to `--out`; `build-dd` adds
//! `trace.csv`, `dd.dot` and, with `--oracle`, `orderings.csv`. Exit codes:
//! 0 success, 2 parse error, 3 configuration or I/O error, 4 semantic error
//! in a netlist or candidate set, 5 vitality undefined.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use infoengine::dd::DdMode;
use thiserror::Error;

mod commands;
mod inputs;
pub mod report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("{0}")]
    Vitality(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Config(_) => 3,
            CliError::Semantic(_) => 4,
            CliError::Vitality(_) => 5,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "infoengine",
    version,
    about = "Information measures for logic functions, gates and netlists"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Input distribution: `uniform`, `biases <p1,p2,...>` or `weights <file>`
    #[arg(long, num_args = 1..=2, value_names = ["KIND", "VALUE"], default_values = ["uniform"])]
    pub dist: Vec<String>,
    /// Gate library JSON (default: NOT, AND, OR, XOR)
    #[arg(long)]
    pub lib: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Seed for `--random` corpus generation
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Geometry multiplier override, e.g. `4=8.5`; repeatable
    #[arg(long = "multiplier", value_name = "K=VALUE")]
    pub multipliers: Vec<String>,
    /// Largest accepted primary-input count
    #[arg(long, default_value_t = infoengine::truth_table::DEFAULT_MAX_INPUTS)]
    pub max_inputs: usize,
}

#[derive(Debug, Clone, Args)]
pub struct FunctionSource {
    /// PLA file holding the function
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    pub function: Option<PathBuf>,
    /// Use a seeded random function of this many inputs instead of a file
    #[arg(long)]
    pub random: Option<usize>,
    /// Output to keep from a multi-output function
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-gate information report for a library
    GateInfo {
        #[command(flatten)]
        common: Common,
    },
    /// Information capacity of a k-by-k geometry
    Geometry {
        /// Grid side length k
        #[arg(long)]
        side: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Information flow through a gate-level netlist
    Analyze {
        /// BLIF netlist
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        netlist: Option<PathBuf>,
        /// Use a seeded random fanout-free netlist with at most this many inputs
        #[arg(long)]
        random: Option<usize>,
        /// PLA reference function; sets the isentropic flag
        #[arg(long)]
        function: Option<PathBuf>,
        /// Alternative BLIF implementations competing for the information potential
        #[arg(long)]
        candidates: Vec<PathBuf>,
        /// Report vitality; exits with 5 when the output has zero entropy
        #[arg(long)]
        vitality: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Build a decision diagram by conditional-entropy minimization
    BuildDd {
        #[command(flatten)]
        source: FunctionSource,
        /// `ordered` (one variable per level) or `free` (per node)
        #[arg(long, default_value = "ordered")]
        mode: DdMode,
        /// Also sweep every variable ordering and compare sizes
        #[arg(long)]
        oracle: bool,
        /// Most variables the ordering sweep accepts
        #[arg(long, default_value_t = infoengine::ordering::DEFAULT_ORDERING_CEILING)]
        ordering_ceiling: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Minimum logical work over enumerated or supplied networks
    Potential {
        #[command(flatten)]
        source: FunctionSource,
        /// Candidate BLIF networks; replaces enumeration
        #[arg(long)]
        candidates: Vec<PathBuf>,
        /// Enumeration bound on gate count
        #[arg(long, default_value_t = infoengine::enumerate::DEFAULT_MAX_ENUM_GATES)]
        max_gates: usize,
        /// Enumeration bound on input count
        #[arg(long, default_value_t = infoengine::enumerate::DEFAULT_MAX_ENUM_INPUTS)]
        max_enum_inputs: usize,
        /// Report vitality; exits with 5 when the function is constant
        #[arg(long)]
        vitality: bool,
        #[command(flatten)]
        common: Common,
    },
}

/// Text for stdout plus warnings for stderr.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::GateInfo { common } => commands::gate_info(&common),
        Command::Geometry { side, common } => commands::geometry(side, &common),
        Command::Analyze {
            netlist,
            random,
            function,
            candidates,
            vitality,
            common,
        } => commands::analyze(
            &commands::AnalyzeArgs {
                netlist,
                random,
                function,
                candidates,
                vitality,
            },
            &common,
        ),
        Command::BuildDd {
            source,
            mode,
            oracle,
            ordering_ceiling,
            common,
        } => commands::build_dd(&source, mode, oracle.then_some(ordering_ceiling), &common),
        Command::Potential {
            source,
            candidates,
            max_gates,
            max_enum_inputs,
            vitality,
            common,
        } => commands::potential(&source, &candidates, max_gates, max_enum_inputs, vitality, &common),
    }
}
