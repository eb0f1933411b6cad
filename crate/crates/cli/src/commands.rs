// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::path::PathBuf;

use infoengine::corpus::{random_tree_netlist, rng_from_seed};
use infoengine::dd::{DdError, DdMode};
use infoengine::enumerate::{enumerate_implementations, EnumBounds, EnumError};
use infoengine::flow::{implements, netlist_function};
use infoengine::gates::reference_warnings;
use infoengine::info::InputDistribution;
use infoengine::ordering::{exhaustive_best_ordering_with_ceiling, HARD_ORDERING_CEILING};
use infoengine::truth_table::bit_string;
use infoengine::{
    build_entropy_dd, flow_report, gate_report, geometry_capacity, information_potential, vitality, Bits, CandidateSet,
    FlowReport, GateReport, GeometryCapacity, GeometrySpec, Multipliers, PotentialResult, TruthTable,
};
use serde::Serialize;
use serde_json::json;

use crate::inputs::{self, check_arity, flow_error};
use crate::report::ReportEnvelope;
use crate::{CliError, Common, FunctionSource, Outcome};

/// Functions up to this many inputs carry their full column in the report.
const INLINE_BITS_MAX_INPUTS: usize = 10;

fn d2(b: Bits) -> String {
    format!("{b:.2}")
}

fn dist_echo(common: &Common) -> String {
    common.dist.join(" ")
}

fn finish<C: Serialize, P: Serialize>(
    common: &Common,
    envelope: ReportEnvelope<C, P>,
    stdout: String,
) -> Result<Outcome, CliError> {
    inputs::write(&common.out, "report.json", &envelope.to_json())?;
    Ok(Outcome {
        stdout,
        warnings: envelope.warnings,
    })
}

#[derive(Serialize)]
struct GateInfoPayload {
    gates: Vec<GateReport>,
}

pub fn gate_info(common: &Common) -> Result<Outcome, CliError> {
    let lib = inputs::library(common)?;
    let dist = inputs::distribution(&common.dist)?;
    let mut reports = Vec::new();
    let mut warnings = Vec::new();
    for gate in lib.gates() {
        // Pins take the leading biases in order, so one list serves every arity.
        let gate_dist = match &dist {
            InputDistribution::Independent { biases } if biases.len() > gate.arity() => {
                InputDistribution::independent(biases[..gate.arity()].to_vec()).map_err(inputs::metric)?
            }
            other => other.clone(),
        };
        gate_dist
            .check_arity(gate.arity())
            .map_err(|e| CliError::Config(format!("gate {}: {e}", gate.name())))?;
        let r = gate_report(gate, &gate_dist).map_err(|e| CliError::Config(e.to_string()))?;
        warnings.extend(reference_warnings(&r));
        reports.push(r);
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<8} {:<18} {:>6} {:>6} {:>7}  {:<22} I(f;x)",
        "gate", "function", "H(X)", "H(f)", "I_gate", "H(f|x)"
    );
    for r in &reports {
        let cells = |pick: fn(&infoengine::gates::Transmission) -> Bits| {
            r.transmission
                .iter()
                .map(|t| format!("{}={}", t.input, d2(pick(t))))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(
            out,
            "{:<8} {:<18} {:>6} {:>6} {:>7}  {:<22} {}",
            r.gate,
            r.function,
            d2(r.h_x),
            d2(r.h_f),
            d2(r.i_gate),
            cells(|t| t.h_f_given_x),
            cells(|t| t.i_f_x),
        );
    }
    let config = json!({
        "lib": inputs::library_echo(common),
        "dist": dist_echo(common),
        "out": common.out.display().to_string(),
    });
    let envelope = ReportEnvelope::new("gate-info", config, GateInfoPayload { gates: reports }, warnings);
    finish(common, envelope, out)
}

#[derive(Serialize)]
struct GeometryPayload {
    library: Vec<String>,
    #[serde(flatten)]
    capacity: GeometryCapacity,
}

pub fn geometry(side: usize, common: &Common) -> Result<Outcome, CliError> {
    let lib = inputs::library(common)?;
    let mut multipliers = Multipliers::default();
    for spec in &common.multipliers {
        let parsed = spec
            .split_once('=')
            .and_then(|(k, v)| Some((k.trim().parse::<usize>().ok()?, v.trim().parse::<f64>().ok()?)));
        let Some((k, v)) = parsed else {
            return Err(CliError::Config(format!("--multiplier `{spec}`: expected K=VALUE")));
        };
        multipliers.set(k, v).map_err(|e| CliError::Config(e.to_string()))?;
    }
    let spec = GeometrySpec::new(lib.clone(), side, &multipliers).map_err(|e| CliError::Config(e.to_string()))?;
    let capacity = geometry_capacity(&spec);
    let names: Vec<String> = lib.gates().iter().map(|g| g.name().to_string()).collect();
    let out = format!(
        "library {{{}}}, {side}x{side}: capacity {:.4} (M={}, max I_gate {:.2}; unrounded {:.4})\n",
        names.join(","),
        capacity.capacity,
        capacity.multiplier,
        capacity.max_measure_rounded,
        capacity.capacity_unrounded,
    );
    let config = json!({
        "lib": inputs::library_echo(common),
        "side": side,
        "multipliers": common.multipliers,
        "out": common.out.display().to_string(),
    });
    let payload = GeometryPayload {
        library: names,
        capacity,
    };
    finish(
        common,
        ReportEnvelope::new("geometry", config, payload, Vec::new()),
        out,
    )
}

pub struct AnalyzeArgs {
    pub netlist: Option<PathBuf>,
    pub random: Option<usize>,
    pub function: Option<PathBuf>,
    pub candidates: Vec<PathBuf>,
    pub vitality: bool,
}

#[derive(Serialize)]
struct PotentialSummary {
    q: Bits,
    witness_index: usize,
    witness_model: String,
    witness_blif: String,
    candidates_examined: usize,
    exhaustive: bool,
    work: Vec<Bits>,
}

impl PotentialSummary {
    fn new(p: &PotentialResult) -> Self {
        PotentialSummary {
            q: p.q,
            witness_index: p.witness_index,
            witness_model: p.witness.name().to_string(),
            witness_blif: p.witness.to_blif(),
            candidates_examined: p.candidates_examined,
            exhaustive: p.exhaustive,
            work: p.work.clone(),
        }
    }
}

#[derive(Serialize)]
struct AnalyzePayload {
    #[serde(flatten)]
    flow: FlowReport,
    potential: Option<PotentialSummary>,
    vitality: Option<f64>,
}

pub fn analyze(args: &AnalyzeArgs, common: &Common) -> Result<Outcome, CliError> {
    let lib = inputs::library(common)?;
    let dist = inputs::distribution(&common.dist)?;
    let nw = match (&args.netlist, args.random) {
        (Some(path), _) => inputs::netlist(path, &lib)?,
        (None, Some(n)) => {
            if n == 0 || n > common.max_inputs {
                return Err(CliError::Config(format!(
                    "--random {n}: expected 1..={} inputs",
                    common.max_inputs
                )));
            }
            random_tree_netlist(&lib, n, 4, &mut rng_from_seed(common.seed))
        }
        (None, None) => return Err(CliError::Config("no netlist given".into())),
    };
    if nw.num_inputs() > common.max_inputs {
        return Err(CliError::Config(format!(
            "{} primary inputs exceed --max-inputs {}",
            nw.num_inputs(),
            common.max_inputs
        )));
    }
    check_arity(&dist, nw.num_inputs())?;
    let mut flow = flow_report(&nw, &dist).map_err(flow_error)?;
    let mut warnings = Vec::new();
    if let Some(path) = &args.function {
        let f = inputs::pla(path, common.max_inputs)?;
        let same = implements(&nw, &f).map_err(flow_error)?;
        if !same {
            warnings.push(format!("netlist does not implement {}", path.display()));
        }
        flow.isentropic = Some(same);
    }

    let mut potential = None;
    let mut vitality_value = None;
    if args.vitality || !args.candidates.is_empty() {
        let f = netlist_function(&nw).map_err(flow_error)?;
        let mut networks = vec![nw.clone()];
        for path in &args.candidates {
            networks.push(inputs::netlist(path, &lib)?);
        }
        let result = information_potential(&f, &CandidateSet::supplied(networks), &dist).map_err(flow_error)?;
        if args.vitality {
            vitality_value = Some(vitality(&f, &result, &dist).map_err(flow_error)?);
        }
        potential = Some(PotentialSummary::new(&result));
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        "model {}: {} inputs, {} gates",
        nw.name(),
        nw.num_inputs(),
        nw.instances().len()
    );
    let _ = writeln!(
        out,
        "{:<10} {:<20} {:<10} {:>7} {:>7} {:>7}",
        "gate", "inputs", "output", "H(in)", "H(out)", "I_gate"
    );
    for i in &flow.instances {
        let _ = writeln!(
            out,
            "{:<10} {:<20} {:<10} {:>7} {:>7} {:>7}",
            i.gate,
            i.inputs.join(","),
            i.output,
            d2(i.input_entropy),
            d2(i.output_entropy),
            d2(i.i_gate),
        );
    }
    let _ = writeln!(
        out,
        "H(X) {}  H(f) {}  I_NW {}  q {}  conserved {}  non-increase {}",
        d2(flow.h_x),
        d2(flow.h_f),
        d2(flow.network_loss),
        d2(flow.logical_work),
        flow.conserved,
        flow.non_increase_holds,
    );
    if let Some(p) = &potential {
        let _ = writeln!(
            out,
            "Q {} over {} candidates (witness #{})",
            d2(p.q),
            p.candidates_examined,
            p.witness_index
        );
    }
    if let Some(t) = vitality_value {
        let _ = writeln!(out, "vitality {t:.2}");
    }

    let config = json!({
        "netlist": args.netlist.as_ref().map(|p| p.display().to_string()),
        "random": args.random,
        "seed": common.seed,
        "lib": inputs::library_echo(common),
        "dist": dist_echo(common),
        "function": args.function.as_ref().map(|p| p.display().to_string()),
        "candidates": args.candidates.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "vitality": args.vitality,
        "max_inputs": common.max_inputs,
        "out": common.out.display().to_string(),
    });
    let payload = AnalyzePayload {
        flow,
        potential,
        vitality: vitality_value,
    };
    finish(common, ReportEnvelope::new("analyze", config, payload, warnings), out)
}

#[derive(Serialize)]
struct FunctionSummary {
    inputs: Vec<String>,
    output: String,
    bits: Option<String>,
}

impl FunctionSummary {
    fn new(f: &TruthTable) -> Self {
        FunctionSummary {
            inputs: f.input_names().to_vec(),
            output: f.output_names()[0].clone(),
            bits: (f.num_inputs() <= INLINE_BITS_MAX_INPUTS).then(|| bit_string(f.column(0))),
        }
    }
}

#[derive(Serialize)]
struct OracleSummary {
    orderings: usize,
    optimal_size: usize,
    optimal_order: Vec<String>,
    optimal_ties: usize,
    greedy_size: usize,
    /// Only meaningful for ordered diagrams; free diagrams may beat every ordering.
    greedy_not_below_optimum: Option<bool>,
    orderings_file: &'static str,
}

#[derive(Serialize)]
struct BuildDdPayload {
    function: FunctionSummary,
    mode: DdMode,
    size: usize,
    order: Option<Vec<String>>,
    h_f: Bits,
    final_h_f_given_dd: f64,
    trace_steps: usize,
    trace_file: &'static str,
    dot_file: &'static str,
    oracle: Option<OracleSummary>,
}

fn dd_error(e: DdError) -> CliError {
    match e {
        DdError::Metric(m) => CliError::Config(m.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

pub fn build_dd(
    source: &FunctionSource,
    mode: DdMode,
    oracle: Option<usize>,
    common: &Common,
) -> Result<Outcome, CliError> {
    let f = inputs::function(source, common)?;
    let dist = inputs::distribution(&common.dist)?;
    check_arity(&dist, f.num_inputs())?;
    if let Some(ceiling) = oracle {
        if ceiling > HARD_ORDERING_CEILING {
            return Err(CliError::Config(format!(
                "--ordering-ceiling {ceiling} exceeds the hard limit {HARD_ORDERING_CEILING}"
            )));
        }
        if f.num_inputs() > ceiling {
            return Err(CliError::Config(format!(
                "--oracle: {} inputs exceed the ordering ceiling {ceiling}",
                f.num_inputs()
            )));
        }
    }
    let (dd, trace) = build_entropy_dd(&f, &dist, mode).map_err(dd_error)?;
    let mut warnings = Vec::new();

    let oracle_summary = match oracle {
        None => None,
        Some(ceiling) => {
            let sweep = exhaustive_best_ordering_with_ceiling(&f, ceiling).map_err(dd_error)?;
            inputs::write(&common.out, "orderings.csv", &sweep.to_csv())?;
            let dominance = (mode == DdMode::Ordered).then(|| dd.size() >= sweep.best_size);
            if dominance == Some(false) {
                warnings.push(format!(
                    "greedy size {} is below the exhaustive optimum {}",
                    dd.size(),
                    sweep.best_size
                ));
            }
            Some(OracleSummary {
                orderings: sweep.sizes.len(),
                optimal_size: sweep.best_size,
                optimal_order: sweep.best_order.clone(),
                optimal_ties: sweep.ties(),
                greedy_size: dd.size(),
                greedy_not_below_optimum: dominance,
                orderings_file: "orderings.csv",
            })
        }
    };
    inputs::write(&common.out, "trace.csv", &trace.to_csv())?;
    inputs::write(&common.out, "dd.dot", &dd.to_dot())?;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} diagram over {} inputs: {} nodes{}",
        mode,
        f.num_inputs(),
        dd.size(),
        dd.order_names()
            .map_or(String::new(), |o| format!(", order {}", o.join(" ")))
    );
    let _ = writeln!(
        out,
        "H(f) {} -> H(f|DD) {:.2} in {} steps",
        d2(trace.h_f),
        trace.final_entropy(),
        trace.steps.len() - 1
    );
    if let Some(o) = &oracle_summary {
        let _ = writeln!(
            out,
            "oracle: best {} nodes over {} orderings ({} ties), greedy {}",
            o.optimal_size, o.orderings, o.optimal_ties, o.greedy_size
        );
    }

    let config = json!({
        "function": inputs::source_echo(source),
        "output": source.output,
        "seed": common.seed,
        "dist": dist_echo(common),
        "mode": mode,
        "oracle": oracle.is_some(),
        "ordering_ceiling": oracle,
        "max_inputs": common.max_inputs,
        "out": common.out.display().to_string(),
    });
    let payload = BuildDdPayload {
        function: FunctionSummary::new(&f),
        mode,
        size: dd.size(),
        order: dd.order_names(),
        h_f: trace.h_f,
        final_h_f_given_dd: trace.final_entropy(),
        trace_steps: trace.steps.len(),
        trace_file: "trace.csv",
        dot_file: "dd.dot",
        oracle: oracle_summary,
    };
    finish(common, ReportEnvelope::new("build-dd", config, payload, warnings), out)
}

#[derive(Serialize)]
struct PotentialPayload {
    function: FunctionSummary,
    h_f: Bits,
    #[serde(flatten)]
    potential: PotentialSummary,
    vitality: Option<f64>,
}

pub fn potential(
    source: &FunctionSource,
    candidates: &[PathBuf],
    max_gates: usize,
    max_enum_inputs: usize,
    want_vitality: bool,
    common: &Common,
) -> Result<Outcome, CliError> {
    let lib = inputs::library(common)?;
    let f = inputs::function(source, common)?;
    let dist = inputs::distribution(&common.dist)?;
    check_arity(&dist, f.num_inputs())?;
    let mut warnings = Vec::new();
    let set = if candidates.is_empty() {
        let bounds = EnumBounds {
            max_inputs: max_enum_inputs,
            max_gates,
            ..EnumBounds::default()
        };
        let set = enumerate_implementations(&f, &lib, &bounds).map_err(|e| match e {
            EnumError::Netlist(n) => CliError::Semantic(n.to_string()),
            other => CliError::Config(other.to_string()),
        })?;
        if set.networks.is_empty() {
            return Err(CliError::Semantic(format!(
                "no network of at most {max_gates} gates implements the function"
            )));
        }
        if !set.exhaustive {
            warnings.push("enumeration hit its visit limit; Q is an upper bound".to_string());
        }
        set
    } else {
        let mut networks = Vec::new();
        for path in candidates {
            networks.push(inputs::netlist(path, &lib)?);
        }
        CandidateSet::supplied(networks)
    };
    let result = information_potential(&f, &set, &dist).map_err(flow_error)?;
    let h_f = infoengine::function_entropy(&f, &dist).map_err(inputs::metric)?;
    let vitality_value = if want_vitality {
        Some(vitality(&f, &result, &dist).map_err(flow_error)?)
    } else {
        None
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "Q {} over {} candidates ({}), witness #{} with {} gates",
        d2(result.q),
        result.candidates_examined,
        if result.exhaustive { "exhaustive" } else { "upper bound" },
        result.witness_index,
        result.witness.instances().len()
    );
    if let Some(t) = vitality_value {
        let _ = writeln!(out, "H(f) {}  vitality {t:.2}", d2(h_f));
    }

    let config = json!({
        "function": inputs::source_echo(source),
        "output": source.output,
        "seed": common.seed,
        "lib": inputs::library_echo(common),
        "dist": dist_echo(common),
        "candidates": candidates.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "max_gates": max_gates,
        "max_enum_inputs": max_enum_inputs,
        "vitality": want_vitality,
        "out": common.out.display().to_string(),
    });
    let payload = PotentialPayload {
        function: FunctionSummary::new(&f),
        h_f,
        potential: PotentialSummary::new(&result),
        vitality: vitality_value,
    };
    finish(common, ReportEnvelope::new("potential", config, payload, warnings), out)
}
