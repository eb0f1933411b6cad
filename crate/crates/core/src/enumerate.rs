// SPDX-License-Identifier: Apache-2.0

//! Bounded enumeration of gate networks implementing a small function.
//!
//! Networks are grown one gate at a time over the primary inputs and earlier
//! gate outputs, smallest networks first. Three classes of network are
//! skipped because a strictly smaller network with no more logical work
//! always precedes them:
//!
//! * a gate whose output column equals an existing net (its consumers can
//!   read that net instead);
//! * a gate outside the cone of the output;
//! * pin permutations of a symmetric gate (inputs are taken in
//!   non-decreasing net order).
//!
//! Within the bounds, the minimum logical work over the enumerated set is
//! therefore the minimum over all networks.

use thiserror::Error;

use crate::flow::CandidateSet;
use crate::gates::GateLibrary;
use crate::netlist::{NetlistBuilder, NetlistError};
use crate::truth_table::{row_bit, TruthTable};

pub const DEFAULT_MAX_ENUM_INPUTS: usize = 3;
pub const DEFAULT_MAX_ENUM_GATES: usize = 4;
/// Columns are packed in a `u64`, so at most 6 inputs.
pub const HARD_MAX_ENUM_INPUTS: usize = 6;
pub const HARD_MAX_ENUM_GATES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("enumeration needs a single-output function, got {0} outputs")]
    MultiOutput(usize),
    #[error("{got} inputs exceed the enumeration bound of {limit}")]
    TooManyInputs { got: usize, limit: usize },
    #[error("{got} gates exceed the enumeration bound of {limit}")]
    TooManyGates { got: usize, limit: usize },
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBounds {
    pub max_inputs: usize,
    pub max_gates: usize,
    /// Stop after visiting this many partial networks; the result is then
    /// marked non-exhaustive.
    pub max_visits: u64,
}

impl Default for EnumBounds {
    fn default() -> Self {
        EnumBounds {
            max_inputs: DEFAULT_MAX_ENUM_INPUTS,
            max_gates: DEFAULT_MAX_ENUM_GATES,
            max_visits: 50_000_000,
        }
    }
}

struct Search<'a> {
    lib: &'a GateLibrary,
    rows: usize,
    target: u64,
    /// Net columns, primary inputs first.
    nets: Vec<u64>,
    /// `(gate index, input nets)` for each placed gate.
    placed: Vec<(usize, Vec<usize>)>,
    found: Vec<Vec<(usize, Vec<usize>)>>,
    /// Output net of each zero-gate solution.
    wires: Vec<usize>,
    visits: u64,
    max_visits: u64,
    truncated: bool,
}

impl Search<'_> {
    fn eval(&self, gate: usize, inputs: &[usize]) -> u64 {
        let g = &self.lib.gates()[gate];
        let mut col = 0u64;
        let mut pins = vec![false; inputs.len()];
        for r in 0..self.rows {
            for (p, &net) in pins.iter_mut().zip(inputs) {
                *p = self.nets[net] >> r & 1 == 1;
            }
            if g.eval(&pins) {
                col |= 1 << r;
            }
        }
        col
    }

    /// Every gate lies in the fan-in cone of the last one.
    fn all_in_cone(&self, num_inputs: usize) -> bool {
        let k = self.placed.len();
        let mut live = vec![false; k];
        live[k - 1] = true;
        for g in (0..k).rev() {
            if !live[g] {
                return false;
            }
            for &net in &self.placed[g].1 {
                if net >= num_inputs {
                    live[net - num_inputs] = true;
                }
            }
        }
        true
    }

    fn dfs(&mut self, depth: usize, num_inputs: usize) {
        if self.truncated {
            return;
        }
        self.visits += 1;
        if self.visits > self.max_visits {
            self.truncated = true;
            return;
        }
        if self.placed.len() == depth {
            if depth > 0 && *self.nets.last().unwrap() == self.target && self.all_in_cone(num_inputs) {
                self.found.push(self.placed.clone());
            }
            return;
        }
        for gate in 0..self.lib.gates().len() {
            let g = &self.lib.gates()[gate];
            let arity = g.arity();
            let symmetric = g.is_symmetric();
            let available = self.nets.len();
            let mut tuple = vec![0usize; arity];
            loop {
                let valid = !symmetric || tuple.windows(2).all(|w| w[0] <= w[1]);
                if valid {
                    let col = self.eval(gate, &tuple);
                    // The target may only appear as the final gate's output.
                    let last = self.placed.len() + 1 == depth;
                    if !self.nets.contains(&col) && (col == self.target) == last {
                        self.nets.push(col);
                        self.placed.push((gate, tuple.clone()));
                        self.dfs(depth, num_inputs);
                        self.placed.pop();
                        self.nets.pop();
                    }
                }
                // Odometer over input tuples.
                let mut exhausted = true;
                for i in (0..arity).rev() {
                    tuple[i] += 1;
                    if tuple[i] < available {
                        exhausted = false;
                        break;
                    }
                    tuple[i] = 0;
                }
                if exhausted {
                    break;
                }
            }
        }
    }
}

/// All networks over `lib` with at most `bounds.max_gates` gates that compute
/// `f`, smallest first, excluding the dominated classes listed in the module
/// docs.
pub fn enumerate_implementations(
    f: &TruthTable,
    lib: &GateLibrary,
    bounds: &EnumBounds,
) -> Result<CandidateSet, EnumError> {
    if f.num_outputs() != 1 {
        return Err(EnumError::MultiOutput(f.num_outputs()));
    }
    let n = f.num_inputs();
    let input_limit = bounds.max_inputs.min(HARD_MAX_ENUM_INPUTS);
    if n > input_limit {
        return Err(EnumError::TooManyInputs {
            got: n,
            limit: input_limit,
        });
    }
    if bounds.max_gates > HARD_MAX_ENUM_GATES {
        return Err(EnumError::TooManyGates {
            got: bounds.max_gates,
            limit: HARD_MAX_ENUM_GATES,
        });
    }
    let rows = 1usize << n;
    let pack = |bits: &dyn Fn(usize) -> bool| (0..rows).fold(0u64, |acc, r| if bits(r) { acc | 1 << r } else { acc });
    let target = pack(&|r| f.column(0)[r]);
    let nets: Vec<u64> = (0..n).map(|i| pack(&|r| row_bit(r, i, n))).collect();
    let mut search = Search {
        lib,
        rows,
        target,
        nets,
        placed: Vec::new(),
        found: Vec::new(),
        wires: Vec::new(),
        visits: 0,
        max_visits: bounds.max_visits,
        truncated: false,
    };
    search.wires = (0..n).filter(|&i| search.nets[i] == target).collect();
    for depth in 1..=bounds.max_gates {
        search.dfs(depth, n);
    }

    let inputs = f.input_names();
    let out_name = &f.output_names()[0];
    let internal = |k: usize| {
        let mut name = format!("t{k}");
        while inputs.contains(&name) || &name == out_name {
            name.push('_');
        }
        name
    };
    let mut networks = Vec::new();
    for &w in &search.wires {
        let mut b = NetlistBuilder::new("wire");
        for i in inputs {
            b.input(i);
        }
        b.output(&inputs[w]);
        networks.push(b.build()?);
    }
    for (idx, placed) in search.found.iter().enumerate() {
        let mut b = NetlistBuilder::new(&format!("candidate{idx}"));
        for i in inputs {
            b.input(i);
        }
        let net_name = |net: usize| -> String {
            if net < n {
                inputs[net].clone()
            } else if net - n + 1 == placed.len() {
                out_name.clone()
            } else {
                internal(net - n + 1)
            }
        };
        for (k, (gate, ins)) in placed.iter().enumerate() {
            let names: Vec<String> = ins.iter().map(|&i| net_name(i)).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            b.gate(&lib.gates()[*gate], &refs, &net_name(n + k));
        }
        b.output(out_name);
        networks.push(b.build()?);
    }
    Ok(CandidateSet {
        networks,
        exhaustive: !search.truncated,
    })
}
