// SPDX-License-Identifier: Apache-2.0

//! Acyclic gate-level netlists and a `.gate`-only BLIF subset.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::gates::{Gate, GateLibrary, OUTPUT_PIN};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown gate `{name}`")]
    UnknownGate { line: usize, name: String },
    #[error("line {line}: gate `{gate}` has no pin `{pin}`")]
    UnknownPin { line: usize, gate: String, pin: String },
    #[error("line {line}: gate `{gate}` is missing pin `{pin}`")]
    MissingPin { line: usize, gate: String, pin: String },
    #[error("net `{0}` has more than one driver")]
    MultipleDrivers(String),
    #[error("combinational cycle through net `{0}`")]
    Cycle(String),
    #[error("net `{0}` is used but never driven")]
    Undriven(String),
    #[error("primary output `{0}` does not name an existing net")]
    UnknownOutput(String),
    #[error("duplicate primary input `{0}`")]
    DuplicateInput(String),
    #[error("netlist has no primary outputs")]
    NoOutputs,
    #[error("gate `{gate}` takes {expected} inputs, got {got}")]
    PinCount { gate: String, got: usize, expected: usize },
}

impl NetlistError {
    /// True for structural violations of a syntactically valid description.
    pub fn is_semantic(&self) -> bool {
        matches!(
            self,
            NetlistError::MultipleDrivers(_)
                | NetlistError::Cycle(_)
                | NetlistError::Undriven(_)
                | NetlistError::UnknownOutput(_)
                | NetlistError::DuplicateInput(_)
                | NetlistError::NoOutputs
        )
    }
}

pub type NetId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub gate: Gate,
    /// Input nets in gate pin order.
    pub inputs: Vec<NetId>,
    pub output: NetId,
}

/// A validated combinational network. Instances are stored in topological
/// order; nets `0..primary_inputs` are the primary inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    name: String,
    nets: Vec<String>,
    num_inputs: usize,
    instances: Vec<Instance>,
    outputs: Vec<NetId>,
}

impl Netlist {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nets(&self) -> &[String] {
        &self.nets
    }

    pub fn net_name(&self, id: NetId) -> &str {
        &self.nets[id]
    }

    pub fn net_id(&self, name: &str) -> Option<NetId> {
        self.nets.iter().position(|n| n == name)
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn primary_inputs(&self) -> &[String] {
        &self.nets[..self.num_inputs]
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn primary_outputs(&self) -> &[NetId] {
        &self.outputs
    }

    pub fn output_names(&self) -> Vec<String> {
        self.outputs.iter().map(|&o| self.nets[o].clone()).collect()
    }

    /// Number of consumers of every net, counting primary outputs.
    pub fn fanout(&self) -> Vec<usize> {
        let mut count = vec![0; self.nets.len()];
        for inst in &self.instances {
            for &i in &inst.inputs {
                count[i] += 1;
            }
        }
        for &o in &self.outputs {
            count[o] += 1;
        }
        count
    }

    /// Fanout-free: every primary input and instance output feeds exactly one
    /// consumer.
    pub fn is_tree(&self) -> bool {
        self.fanout().iter().all(|&c| c == 1)
    }

    pub fn to_blif(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, ".model {}", self.name);
        let _ = writeln!(out, ".inputs {}", self.primary_inputs().join(" "));
        let _ = writeln!(out, ".outputs {}", self.output_names().join(" "));
        for inst in &self.instances {
            let _ = write!(out, ".gate {}", inst.gate.name());
            for (pin, &net) in inst.gate.pins().iter().zip(&inst.inputs) {
                let _ = write!(out, " {}={}", pin, self.nets[net]);
            }
            let _ = writeln!(out, " {}={}", OUTPUT_PIN, self.nets[inst.output]);
        }
        out.push_str(".end\n");
        out
    }
}

/// Incremental construction by net name; `build` validates and orders.
#[derive(Debug, Clone, Default)]
pub struct NetlistBuilder {
    name: String,
    inputs: Vec<String>,
    gates: Vec<(Gate, Vec<String>, String)>,
    outputs: Vec<String>,
}

impl NetlistBuilder {
    pub fn new(name: &str) -> Self {
        NetlistBuilder {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn input(&mut self, name: &str) -> &mut Self {
        self.inputs.push(name.to_string());
        self
    }

    pub fn gate(&mut self, gate: &Gate, inputs: &[&str], output: &str) -> &mut Self {
        self.gates.push((
            gate.clone(),
            inputs.iter().map(|s| s.to_string()).collect(),
            output.to_string(),
        ));
        self
    }

    pub fn output(&mut self, name: &str) -> &mut Self {
        self.outputs.push(name.to_string());
        self
    }

    pub fn build(&self) -> Result<Netlist, NetlistError> {
        let mut nets: Vec<String> = Vec::new();
        let mut ids: HashMap<String, NetId> = HashMap::new();
        let mut driver: Vec<Option<usize>> = Vec::new();
        for name in &self.inputs {
            if ids.contains_key(name) {
                return Err(NetlistError::DuplicateInput(name.clone()));
            }
            ids.insert(name.clone(), nets.len());
            nets.push(name.clone());
            driver.push(None);
        }
        let num_inputs = nets.len();
        // First pass: register every driven net.
        for (g, (_, _, out)) in self.gates.iter().enumerate() {
            match ids.get(out) {
                Some(_) => return Err(NetlistError::MultipleDrivers(out.clone())),
                None => {
                    ids.insert(out.clone(), nets.len());
                    nets.push(out.clone());
                    driver.push(Some(g));
                }
            }
        }
        let mut resolved = Vec::with_capacity(self.gates.len());
        for (gate, ins, out) in &self.gates {
            if ins.len() != gate.arity() {
                return Err(NetlistError::PinCount {
                    gate: gate.name().to_string(),
                    got: ins.len(),
                    expected: gate.arity(),
                });
            }
            let inputs = ins
                .iter()
                .map(|n| ids.get(n).copied().ok_or_else(|| NetlistError::Undriven(n.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            resolved.push(Instance {
                gate: gate.clone(),
                inputs,
                output: ids[out],
            });
        }
        if self.outputs.is_empty() {
            return Err(NetlistError::NoOutputs);
        }
        let outputs = self
            .outputs
            .iter()
            .map(|n| {
                ids.get(n)
                    .copied()
                    .ok_or_else(|| NetlistError::UnknownOutput(n.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;

        // Depth-first topological sort over instances.
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let mut mark = vec![Mark::New; resolved.len()];
        let mut order = Vec::with_capacity(resolved.len());
        for start in 0..resolved.len() {
            if mark[start] != Mark::New {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            mark[start] = Mark::Active;
            while let Some(&mut (g, ref mut pin)) = stack.last_mut() {
                if *pin < resolved[g].inputs.len() {
                    let net = resolved[g].inputs[*pin];
                    *pin += 1;
                    if let Some(d) = driver[net] {
                        match mark[d] {
                            Mark::New => {
                                mark[d] = Mark::Active;
                                stack.push((d, 0));
                            }
                            Mark::Active => return Err(NetlistError::Cycle(nets[net].clone())),
                            Mark::Done => {}
                        }
                    }
                } else {
                    mark[g] = Mark::Done;
                    order.push(g);
                    stack.pop();
                }
            }
        }
        let mut slots: Vec<Option<Instance>> = resolved.into_iter().map(Some).collect();
        let instances = order.into_iter().map(|g| slots[g].take().unwrap()).collect();
        Ok(Netlist {
            name: self.name.clone(),
            nets,
            num_inputs,
            instances,
            outputs,
        })
    }
}

fn syntax(line: usize, message: impl Into<String>) -> NetlistError {
    NetlistError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses `.model`, `.inputs`, `.outputs`, `.gate` and `.end`.
pub fn parse_blif(text: &str, lib: &GateLibrary) -> Result<Netlist, NetlistError> {
    let mut builder = NetlistBuilder::new("top");
    let mut seen_model = false;
    let mut ended = false;
    let mut pending = String::new();
    let mut pending_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim_end();
        if pending.is_empty() {
            pending_line = idx + 1;
        }
        if let Some(stripped) = line.strip_suffix('\\') {
            pending.push_str(stripped);
            pending.push(' ');
            continue;
        }
        pending.push_str(line);
        let stmt = std::mem::take(&mut pending);
        let line_no = pending_line;
        let mut fields = stmt.split_whitespace();
        let Some(head) = fields.next() else {
            continue;
        };
        if ended {
            return Err(syntax(line_no, "content after .end"));
        }
        let args: Vec<&str> = fields.collect();
        match head {
            ".model" => {
                if seen_model {
                    return Err(syntax(line_no, "only one .model is supported"));
                }
                seen_model = true;
                if let Some(name) = args.first() {
                    builder.name = name.to_string();
                }
            }
            ".inputs" => {
                for a in args {
                    builder.input(a);
                }
            }
            ".outputs" => {
                for a in args {
                    builder.output(a);
                }
            }
            ".gate" => {
                let Some((&gate_name, bindings)) = args.split_first() else {
                    return Err(syntax(line_no, ".gate needs a gate name"));
                };
                let gate = lib.get(gate_name).ok_or_else(|| NetlistError::UnknownGate {
                    line: line_no,
                    name: gate_name.to_string(),
                })?;
                let mut pins: BTreeMap<&str, &str> = BTreeMap::new();
                for b in bindings {
                    let Some((pin, net)) = b.split_once('=') else {
                        return Err(syntax(line_no, format!("expected <pin>=<net>, got `{b}`")));
                    };
                    if pin.is_empty() || net.is_empty() {
                        return Err(syntax(line_no, format!("expected <pin>=<net>, got `{b}`")));
                    }
                    if pin != OUTPUT_PIN && !gate.pins().iter().any(|p| p == pin) {
                        return Err(NetlistError::UnknownPin {
                            line: line_no,
                            gate: gate_name.to_string(),
                            pin: pin.to_string(),
                        });
                    }
                    if pins.insert(pin, net).is_some() {
                        return Err(syntax(line_no, format!("pin `{pin}` bound twice")));
                    }
                }
                let missing = |pin: &str| NetlistError::MissingPin {
                    line: line_no,
                    gate: gate_name.to_string(),
                    pin: pin.to_string(),
                };
                let inputs = gate
                    .pins()
                    .iter()
                    .map(|p| pins.get(p.as_str()).copied().ok_or_else(|| missing(p)))
                    .collect::<Result<Vec<&str>, _>>()?;
                let output = *pins.get(OUTPUT_PIN).ok_or_else(|| missing(OUTPUT_PIN))?;
                builder.gate(gate, &inputs, output);
            }
            ".end" => ended = true,
            other if other.starts_with('.') => return Err(syntax(line_no, format!("unsupported directive {other}"))),
            other => return Err(syntax(line_no, format!("unexpected token `{other}`"))),
        }
    }
    if !pending.is_empty() {
        return Err(syntax(pending_line, "dangling line continuation"));
    }
    builder.build()
}
