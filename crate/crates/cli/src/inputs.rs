// SPDX-License-Identifier: Apache-2.0

//! Loading and validating command inputs.

use std::fs;
use std::path::Path;

use infoengine::corpus::{random_function, rng_from_seed};
use infoengine::flow::FlowError;
use infoengine::gates::LibraryError;
use infoengine::info::{InputDistribution, MetricError};
use infoengine::netlist::NetlistError;
use infoengine::pla::PlaError;
use infoengine::{parse_blif, GateLibrary, Netlist, TruthTable};

use crate::{CliError, Common, FunctionSource};

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

pub fn write(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

pub fn library(common: &Common) -> Result<GateLibrary, CliError> {
    match &common.lib {
        None => Ok(GateLibrary::standard()),
        Some(path) => GateLibrary::from_json(&read(path)?).map_err(|e| match e {
            LibraryError::Metric(m) => CliError::Config(m.to_string()),
            other => CliError::Parse(format!("{}: {other}", path.display())),
        }),
    }
}

pub fn library_echo(common: &Common) -> String {
    common
        .lib
        .as_ref()
        .map_or_else(|| "builtin".to_string(), |p| p.display().to_string())
}

pub fn distribution(tokens: &[String]) -> Result<InputDistribution, CliError> {
    let bad = |msg: String| CliError::Config(format!("--dist: {msg}"));
    match tokens {
        [kind] if kind == "uniform" => Ok(InputDistribution::Uniform),
        [kind, csv] if kind == "biases" => {
            let biases = csv
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| bad(format!("bias `{s}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            InputDistribution::independent(biases).map_err(|e| bad(e.to_string()))
        }
        [kind, file] if kind == "weights" => {
            let text = read(Path::new(file))?;
            let weights = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or(""))
                .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<f64>().map_err(|e| bad(format!("weight `{s}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            InputDistribution::explicit(weights).map_err(|e| bad(e.to_string()))
        }
        _ => Err(bad(format!(
            "expected `uniform`, `biases <csv>` or `weights <file>`, got `{}`",
            tokens.join(" ")
        ))),
    }
}

pub fn check_arity(dist: &InputDistribution, n: usize) -> Result<(), CliError> {
    dist.check_arity(n).map_err(metric)
}

pub fn metric(e: MetricError) -> CliError {
    CliError::Config(e.to_string())
}

pub fn pla_error(path: &Path, e: PlaError) -> CliError {
    match e {
        PlaError::TooManyInputs { .. } => CliError::Config(format!("{}: {e}", path.display())),
        other => CliError::Parse(format!("{}: {other}", path.display())),
    }
}

pub fn netlist_error(path: &Path, e: NetlistError) -> CliError {
    let msg = format!("{}: {e}", path.display());
    if e.is_semantic() {
        CliError::Semantic(msg)
    } else {
        CliError::Parse(msg)
    }
}

pub fn flow_error(e: FlowError) -> CliError {
    match e {
        FlowError::VitalityUndefined => CliError::Vitality(e.to_string()),
        FlowError::NoCandidates | FlowError::NotImplementing { .. } => CliError::Semantic(e.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

pub fn netlist(path: &Path, lib: &GateLibrary) -> Result<Netlist, CliError> {
    parse_blif(&read(path)?, lib).map_err(|e| netlist_error(path, e))
}

pub fn pla(path: &Path, max_inputs: usize) -> Result<TruthTable, CliError> {
    infoengine::pla::parse_pla_with_limit(&read(path)?, max_inputs).map_err(|e| pla_error(path, e))
}

/// Single-output function from a PLA file or the seeded generator.
pub fn function(source: &FunctionSource, common: &Common) -> Result<TruthTable, CliError> {
    let f = match (&source.function, source.random) {
        (Some(path), _) => pla(path, common.max_inputs)?,
        (None, Some(n)) => {
            if n == 0 || n > common.max_inputs {
                return Err(CliError::Config(format!(
                    "--random {n}: expected 1..={} inputs",
                    common.max_inputs
                )));
            }
            random_function(n, &mut rng_from_seed(common.seed))
        }
        (None, None) => return Err(CliError::Config("no function given".into())),
    };
    match (&source.output, f.num_outputs()) {
        (Some(name), _) => match f.output_names().iter().position(|o| o == name) {
            Some(i) => Ok(f.select_outputs(&[i])),
            None => Err(CliError::Config(format!(
                "--output {name}: no such output ({})",
                f.output_names().join(", ")
            ))),
        },
        (None, 1) => Ok(f),
        (None, m) => Err(CliError::Config(format!(
            "function has {m} outputs; choose one with --output ({})",
            f.output_names().join(", ")
        ))),
    }
}

pub fn source_echo(source: &FunctionSource) -> String {
    match (&source.function, source.random) {
        (Some(p), _) => p.display().to_string(),
        (None, Some(n)) => format!("random:{n}"),
        (None, None) => String::new(),
    }
}
