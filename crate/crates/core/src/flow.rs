// SPDX-License-Identifier: Apache-2.0

//! Exact information flow through a netlist.
//!
//! Every net is simulated on all `2^n` primary-input assignments, so each
//! measure below is an exact function of the induced joint distributions.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::info::{self, Bits, InputDistribution, MetricError};
use crate::netlist::Netlist;
use crate::truth_table::{bit_string, row_bit, TableError, TruthTable, DEFAULT_MAX_INPUTS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("netlist has {got} primary inputs, limit is {limit}")]
    TooManyInputs { got: usize, limit: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("candidate set is empty")]
    NoCandidates,
    #[error("candidate {index} (`{name}`) does not implement the target function")]
    NotImplementing { index: usize, name: String },
    #[error("vitality undefined for zero-entropy function")]
    VitalityUndefined,
}

/// Value of every net on every primary-input assignment, plus the row weights.
#[derive(Debug, Clone)]
pub struct NetValues {
    values: Vec<Vec<bool>>,
    weights: Vec<f64>,
}

impl NetValues {
    pub fn net(&self, id: usize) -> &[bool] {
        &self.values[id]
    }

    pub fn all(&self) -> &[Vec<bool>] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn entropy_of(&self, nets: &[usize]) -> Bits {
        let cols: Vec<&[bool]> = nets.iter().map(|&n| self.values[n].as_slice()).collect();
        info::joint_entropy(&cols, &self.weights)
    }
}

pub fn simulate_exact(nw: &Netlist, dist: &InputDistribution) -> Result<NetValues, FlowError> {
    simulate_with_limit(nw, dist, DEFAULT_MAX_INPUTS)
}

pub fn simulate_with_limit(nw: &Netlist, dist: &InputDistribution, max_inputs: usize) -> Result<NetValues, FlowError> {
    let n = nw.num_inputs();
    if n > max_inputs {
        return Err(FlowError::TooManyInputs {
            got: n,
            limit: max_inputs,
        });
    }
    let weights = dist.weights(n)?;
    let rows = 1usize << n;
    let mut values = vec![Vec::new(); nw.nets().len()];
    for (i, slot) in values.iter_mut().enumerate().take(n) {
        *slot = (0..rows).map(|r| row_bit(r, i, n)).collect();
    }
    let mut pins = Vec::new();
    for inst in nw.instances() {
        let column: Vec<bool> = (0..rows)
            .map(|r| {
                pins.clear();
                pins.extend(inst.inputs.iter().map(|&net| values[net][r]));
                inst.gate.eval(&pins)
            })
            .collect();
        values[inst.output] = column;
    }
    Ok(NetValues { values, weights })
}

/// The function a netlist computes, over its primary inputs and outputs.
pub fn netlist_function(nw: &Netlist) -> Result<TruthTable, FlowError> {
    let sim = simulate_exact(nw, &InputDistribution::Uniform)?;
    let columns = nw.primary_outputs().iter().map(|&o| sim.values[o].clone()).collect();
    Ok(TruthTable::new(
        nw.primary_inputs().to_vec(),
        dedup_output_names(nw),
        columns,
    )?)
}

fn dedup_output_names(nw: &Netlist) -> Vec<String> {
    let inputs = nw.primary_inputs();
    let mut names: Vec<String> = Vec::new();
    for (k, name) in nw.output_names().into_iter().enumerate() {
        if inputs.contains(&name) || names.contains(&name) {
            names.push(format!("{name}_out{k}"));
        } else {
            names.push(name);
        }
    }
    names
}

fn loss_from(nw: &Netlist, sim: &NetValues, h_x: Bits) -> Bits {
    let h_f = sim.entropy_of(nw.primary_outputs());
    Bits::new((h_x.value() - h_f.value()).max(0.0))
}

/// Per-instance `(joint input entropy, output entropy)`.
fn instance_terms(nw: &Netlist, sim: &NetValues) -> Vec<(Bits, Bits)> {
    nw.instances()
        .iter()
        .map(|inst| (sim.entropy_of(&inst.inputs), sim.entropy_of(&[inst.output])))
        .collect()
}

fn work_from(terms: &[(Bits, Bits)]) -> Bits {
    Bits::new(terms.iter().map(|(i, o)| (i.value() - o.value()).max(0.0)).sum())
}

/// `I_NW = H(X) - H(outputs)`.
pub fn network_loss(nw: &Netlist, dist: &InputDistribution) -> Result<Bits, FlowError> {
    let sim = simulate_exact(nw, dist)?;
    Ok(loss_from(nw, &sim, info::input_entropy(dist, nw.num_inputs())))
}

/// Sum over instances of joint input entropy minus output entropy.
pub fn logical_work(nw: &Netlist, dist: &InputDistribution) -> Result<Bits, FlowError> {
    let sim = simulate_exact(nw, dist)?;
    Ok(work_from(&instance_terms(nw, &sim)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetFlow {
    pub name: String,
    pub entropy: Bits,
    /// Net value for every primary-input assignment, in row order.
    pub values: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceFlow {
    pub gate: String,
    pub inputs: Vec<String>,
    pub output: String,
    pub input_entropy: Bits,
    pub output_entropy: Bits,
    pub i_gate: Bits,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowReport {
    pub model: String,
    pub primary_inputs: Vec<String>,
    pub primary_outputs: Vec<String>,
    pub h_x: Bits,
    pub h_f: Bits,
    pub nets: Vec<NetFlow>,
    pub instances: Vec<InstanceFlow>,
    pub network_loss: Bits,
    pub logical_work: Bits,
    /// Logical work equals network loss to within 1e-9.
    pub conserved: bool,
    pub fanout_free: bool,
    /// Largest single-net entropy; never above `h_x`.
    pub max_net_entropy: Bits,
    pub non_increase_holds: bool,
    /// Set when checked against a reference function: whether the network
    /// reproduces it exactly.
    pub isentropic: Option<bool>,
}

pub fn flow_report(nw: &Netlist, dist: &InputDistribution) -> Result<FlowReport, FlowError> {
    let sim = simulate_exact(nw, dist)?;
    let h_x = info::input_entropy(dist, nw.num_inputs());
    let nets: Vec<NetFlow> = nw
        .nets()
        .iter()
        .enumerate()
        .map(|(id, name)| NetFlow {
            name: name.clone(),
            entropy: sim.entropy_of(&[id]),
            values: bit_string(sim.net(id)),
        })
        .collect();
    let terms = instance_terms(nw, &sim);
    let instances = nw
        .instances()
        .iter()
        .zip(&terms)
        .map(|(inst, &(i, o))| InstanceFlow {
            gate: inst.gate.name().to_string(),
            inputs: inst.inputs.iter().map(|&n| nw.net_name(n).to_string()).collect(),
            output: nw.net_name(inst.output).to_string(),
            input_entropy: i,
            output_entropy: o,
            i_gate: Bits::new((i.value() - o.value()).max(0.0)),
        })
        .collect();
    let network_loss = loss_from(nw, &sim, h_x);
    let logical_work = work_from(&terms);
    let max_net_entropy = nets
        .iter()
        .map(|n| n.entropy)
        .fold(Bits::ZERO, |a, b| if b.value() > a.value() { b } else { a });
    Ok(FlowReport {
        model: nw.name().to_string(),
        primary_inputs: nw.primary_inputs().to_vec(),
        primary_outputs: nw.output_names(),
        h_x,
        h_f: sim.entropy_of(nw.primary_outputs()),
        nets,
        instances,
        network_loss,
        logical_work,
        conserved: (logical_work.value() - network_loss.value()).abs() <= 1e-9,
        fanout_free: nw.is_tree(),
        max_net_entropy,
        non_increase_holds: max_net_entropy.value() <= h_x.value() + info::NOISE,
        isentropic: None,
    })
}

/// True when `nw` has the same ordered inputs as `f` and reproduces every
/// output column.
pub fn implements(nw: &Netlist, f: &TruthTable) -> Result<bool, FlowError> {
    if nw.primary_inputs() != f.input_names() || nw.primary_outputs().len() != f.num_outputs() {
        return Ok(false);
    }
    let sim = simulate_exact(nw, &InputDistribution::Uniform)?;
    Ok(nw
        .primary_outputs()
        .iter()
        .zip(f.columns())
        .all(|(&o, col)| sim.net(o) == col.as_slice()))
}

/// Networks competing for the minimum logical work.
#[derive(Debug, Clone, Default)]
pub struct CandidateSet {
    pub networks: Vec<Netlist>,
    /// True only if the set provably covers every network within the
    /// enumeration bounds.
    pub exhaustive: bool,
}

impl CandidateSet {
    pub fn supplied(networks: Vec<Netlist>) -> Self {
        CandidateSet {
            networks,
            exhaustive: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PotentialResult {
    pub q: Bits,
    pub witness: Netlist,
    pub witness_index: usize,
    pub candidates_examined: usize,
    pub exhaustive: bool,
    /// Logical work of every candidate, in candidate order.
    pub work: Vec<Bits>,
}

/// Minimum logical work over the candidates. Ties keep the earliest
/// candidate; evaluation runs in parallel but the result matches a
/// sequential scan.
pub fn information_potential(
    f: &TruthTable,
    candidates: &CandidateSet,
    dist: &InputDistribution,
) -> Result<PotentialResult, FlowError> {
    if candidates.networks.is_empty() {
        return Err(FlowError::NoCandidates);
    }
    dist.check_arity(f.num_inputs())?;
    let work: Vec<Bits> = candidates
        .networks
        .par_iter()
        .enumerate()
        .map(|(index, nw)| {
            if !implements(nw, f)? {
                return Err(FlowError::NotImplementing {
                    index,
                    name: nw.name().to_string(),
                });
            }
            logical_work(nw, dist)
        })
        .collect::<Result<_, _>>()?;
    let mut best = 0;
    for (i, q) in work.iter().enumerate() {
        if q.value() < work[best].value() {
            best = i;
        }
    }
    Ok(PotentialResult {
        q: work[best],
        witness: candidates.networks[best].clone(),
        witness_index: best,
        candidates_examined: work.len(),
        exhaustive: candidates.exhaustive,
        work,
    })
}

/// `T = Q / H(f)`.
pub fn vitality(f: &TruthTable, potential: &PotentialResult, dist: &InputDistribution) -> Result<f64, FlowError> {
    let h = info::function_entropy(f, dist)?.value();
    if h <= info::NOISE {
        return Err(FlowError::VitalityUndefined);
    }
    Ok(potential.q.value() / h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::GateLibrary;
    use crate::netlist::{parse_blif, NetlistBuilder};

    fn u() -> InputDistribution {
        InputDistribution::Uniform
    }

    fn blif(text: &str) -> Netlist {
        parse_blif(text, &GateLibrary::standard()).unwrap()
    }

    fn single(gate: &str) -> Netlist {
        let lib = GateLibrary::standard();
        let g = lib.get(gate).unwrap();
        let mut b = NetlistBuilder::new(gate);
        let pins: Vec<String> = (1..=g.arity()).map(|i| format!("x{i}")).collect();
        for p in &pins {
            b.input(p);
        }
        let refs: Vec<&str> = pins.iter().map(String::as_str).collect();
        b.gate(g, &refs, "f").output("f");
        b.build().unwrap()
    }

    fn chain() -> Netlist {
        blif(".inputs x1 x2 x3\n.outputs f\n.gate AND A=x1 B=x2 O=t\n.gate AND A=t B=x3 O=f\n")
    }

    fn wire() -> Netlist {
        blif(".inputs x1\n.outputs x1\n")
    }

    #[test]
    fn simulation_examples() {
        let nw = single("AND");
        let sim = simulate_exact(&nw, &u()).unwrap();
        assert_eq!(sim.net(nw.net_id("f").unwrap()), [false, false, false, true]);

        let nw = chain();
        let sim = simulate_exact(&nw, &u()).unwrap();
        let f = sim.net(nw.net_id("f").unwrap());
        assert_eq!(f.iter().filter(|&&b| b).count(), 1);
        assert!(f[7]);

        let nw = wire();
        let sim = simulate_exact(&nw, &u()).unwrap();
        assert_eq!(sim.net(nw.primary_outputs()[0]), [false, true]);
    }

    #[test]
    fn loss_examples() {
        let l = network_loss(&single("AND"), &u()).unwrap().value();
        assert!((l - 1.188_721_875_540_867).abs() < 1e-12);
        assert_eq!(network_loss(&single("XOR"), &u()).unwrap().value(), 1.0);
        assert_eq!(network_loss(&wire(), &u()).unwrap().value(), 0.0);
    }

    #[test]
    fn work_examples() {
        let q = logical_work(&single("AND"), &u()).unwrap().value();
        assert!((q - 1.188_721_875_540_867).abs() < 1e-12);
        // 3 - H(1/8, 7/8)
        let expected = 3.0 - (-(0.125f64) * 0.125f64.log2() - 0.875 * 0.875f64.log2());
        let q = logical_work(&chain(), &u()).unwrap().value();
        assert!((q - expected).abs() < 1e-12);
        assert_eq!(format!("{q:.4}"), "2.4564");
        assert_eq!(logical_work(&single("NOT"), &u()).unwrap().value(), 0.0);
    }

    #[test]
    fn reconvergent_input_entropy_is_joint() {
        // t = x1 AND x2, f = t XOR x1: inputs of the XOR are correlated.
        let nw = blif(".inputs x1 x2\n.outputs f\n.gate AND A=x1 B=x2 O=t\n.gate XOR A=t B=x1 O=f\n");
        let r = flow_report(&nw, &u()).unwrap();
        // joint (t, x1) takes 3 values with probabilities 1/4, 1/4, 1/2
        assert!((r.instances[1].input_entropy.value() - 1.5).abs() < 1e-12);
        assert!(!r.fanout_free);
        assert!(r.non_increase_holds);
    }

    #[test]
    fn report_flags() {
        let r = flow_report(&chain(), &u()).unwrap();
        assert!(r.conserved);
        assert!(r.fanout_free);
        assert_eq!(r.nets.len(), 5);
        assert_eq!(r.nets[4].values, "00000001");
    }

    #[test]
    fn potential_examples() {
        let and = TruthTable::from_bit_str("0001").unwrap();
        let res = information_potential(&and, &CandidateSet::supplied(vec![single("AND")]), &u()).unwrap();
        assert!((res.q.value() - 1.188_721_875_540_867).abs() < 1e-12);

        let x1 = TruthTable::from_bit_str("01").unwrap();
        let double_not = blif(".inputs x1\n.outputs f\n.gate NOT A=x1 O=t\n.gate NOT A=t O=f\n");
        let res = information_potential(&x1, &CandidateSet::supplied(vec![wire(), double_not]), &u()).unwrap();
        assert_eq!(res.q.value(), 0.0);
        assert_eq!(res.witness_index, 0);

        let f3 = netlist_function(&chain()).unwrap();
        let other = blif(".inputs x1 x2 x3\n.outputs f\n.gate AND A=x2 B=x3 O=t\n.gate AND A=x1 B=t O=f\n");
        let res = information_potential(&f3, &CandidateSet::supplied(vec![chain(), other]), &u()).unwrap();
        assert!((res.work[0].value() - res.work[1].value()).abs() < 1e-12);
        assert_eq!(format!("{:.4}", res.q.value()), "2.4564");
    }

    #[test]
    fn potential_errors() {
        let and = TruthTable::from_bit_str("0001").unwrap();
        assert_eq!(
            information_potential(&and, &CandidateSet::default(), &u()).unwrap_err(),
            FlowError::NoCandidates
        );
        assert!(matches!(
            information_potential(&and, &CandidateSet::supplied(vec![single("OR")]), &u()),
            Err(FlowError::NotImplementing { index: 0, .. })
        ));
    }

    #[test]
    fn vitality_examples() {
        let and = TruthTable::from_bit_str("0001").unwrap();
        let res = information_potential(&and, &CandidateSet::supplied(vec![single("AND")]), &u()).unwrap();
        let t = vitality(&and, &res, &u()).unwrap();
        assert!((t - 1.188_721_875_540_867 / 0.811_278_124_459_133).abs() < 1e-12);
        assert_eq!(format!("{t:.4}"), "1.4652");

        let xor = TruthTable::from_bit_str("0110").unwrap();
        let res = information_potential(&xor, &CandidateSet::supplied(vec![single("XOR")]), &u()).unwrap();
        assert_eq!(vitality(&xor, &res, &u()).unwrap(), 1.0);

        let zero = blif(".inputs x1\n.outputs f\n.gate NOT A=x1 O=t\n.gate AND A=x1 B=t O=f\n");
        let f = netlist_function(&zero).unwrap();
        let res = information_potential(&f, &CandidateSet::supplied(vec![zero]), &u()).unwrap();
        assert_eq!(vitality(&f, &res, &u()).unwrap_err(), FlowError::VitalityUndefined);
    }
}
