// SPDX-License-Identifier: Apache-2.0

//! Top-down decision diagram construction by greedy conditional-entropy
//! minimization.
//!
//! The builder keeps a frontier of unexpanded paths. Each expansion attaches
//! one node and lowers `H(f|DD)`, the probability-weighted entropy of the
//! residual subfunctions still on the frontier. The trace logs
//! `H(f|DD)` and `I(f;DD) = H(f) - H(f|DD)` after every expansion, from the
//! empty diagram (`H(f|DD) = H(f)`) to the complete one (`H(f|DD) = 0`).

use std::collections::VecDeque;

use serde::Serialize;

use crate::dd::{reduce, single_output, DdError, DdMode, DdNode, DecisionDiagram, NodeRef};
use crate::info::{entropy_of_masses, Bits, InputDistribution};
use crate::truth_table::{row_bit, AssignmentPrefix, TruthTable};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    /// Probability of the path expanded at this step (1 for step 0).
    pub path_prob: f64,
    /// Variable attached at this step; `None` for the initial state.
    pub variable: Option<String>,
    pub h_f_given_dd: f64,
    pub i_f_dd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuildTrace {
    pub h_f: Bits,
    pub steps: Vec<TraceStep>,
}

impl BuildTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,path_prob,variable,h_f_given_dd,i_f_dd\n");
        for s in &self.steps {
            out.push_str(&format!(
                "{},{:.6},{},{:.6},{:.6}\n",
                s.step,
                s.path_prob,
                s.variable.as_deref().unwrap_or(""),
                s.h_f_given_dd,
                s.i_f_dd
            ));
        }
        out
    }

    pub fn final_entropy(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.h_f_given_dd)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontierEntry {
    pub prefix: AssignmentPrefix,
    pub path_prob: f64,
    /// Non-constant restriction of `f` along the prefix.
    pub residual: TruthTable,
}

/// Unexpanded paths of a partially built diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct Frontier {
    /// Inputs of the function being expanded.
    pub inputs: Vec<String>,
    pub entries: Vec<FrontierEntry>,
    /// Total probability of paths already ending in a terminal.
    pub resolved_prob: f64,
}

impl Frontier {
    pub fn total_prob(&self) -> f64 {
        self.entries.iter().map(|e| e.path_prob).sum::<f64>() + self.resolved_prob
    }
}

/// `H(f|DD)` of a frontier, recomputed from the input distribution: each entry
/// contributes its path probability times the residual's entropy under the
/// path-conditioned distribution.
pub fn partial_conditional_entropy(frontier: &Frontier, dist: &InputDistribution) -> Result<Bits, DdError> {
    let n = frontier.inputs.len();
    let weights = dist.weights(n)?;
    let position = |name: &str| {
        frontier
            .inputs
            .iter()
            .position(|i| i == name)
            .ok_or_else(|| DdError::UnknownVariable(name.to_string()))
    };
    let mut total = 0.0;
    for entry in &frontier.entries {
        let bound: Vec<(usize, bool)> = entry
            .prefix
            .bindings()
            .iter()
            .map(|(name, v)| Ok((position(name)?, *v)))
            .collect::<Result<_, DdError>>()?;
        let free: Vec<usize> = entry
            .residual
            .input_names()
            .iter()
            .map(|name| position(name))
            .collect::<Result<_, _>>()?;
        let (ids, distinct) = entry.residual.pattern_ids();
        let mut masses = vec![0.0; distinct];
        for (row, &w) in weights.iter().enumerate() {
            if bound.iter().all(|&(v, b)| row_bit(row, v, n) == b) {
                let sub = free
                    .iter()
                    .fold(0usize, |acc, &v| (acc << 1) | usize::from(row_bit(row, v, n)));
                masses[ids[sub] as usize] += w;
            }
        }
        let mass: f64 = masses.iter().sum();
        total += mass * entropy_of_masses(&masses);
    }
    Ok(Bits::new(total))
}

/// Where a pending path attaches once expanded or resolved.
#[derive(Debug, Clone, Copy)]
enum Slot {
    Root,
    Low(usize),
    High(usize),
}

#[derive(Debug, Clone)]
struct Pending {
    /// `(input index, value)` bindings along the path.
    prefix: Vec<(usize, bool)>,
    prob: f64,
    /// Remaining input indices, first is most significant in `column`.
    vars: Vec<usize>,
    column: Vec<bool>,
    /// Path-conditioned probabilities of the residual rows (sum to 1).
    weights: Vec<f64>,
    entropy: f64,
    slot: Slot,
}

impl Pending {
    fn depends_on(&self, pos: usize) -> bool {
        let k = self.vars.len();
        let stride = 1usize << (k - 1 - pos);
        (0..self.column.len())
            .filter(|r| r & stride == 0)
            .any(|r| self.column[r] != self.column[r | stride])
    }

    fn position(&self, var: usize) -> Option<usize> {
        self.vars.iter().position(|&v| v == var)
    }

    /// `(P(x=0), P(x=1), H(f | x))` under the conditioned weights.
    fn split_entropy(&self, pos: usize) -> (f64, f64, f64) {
        let k = self.vars.len();
        let mut m = [[0.0f64; 2]; 2];
        for (row, (&b, &w)) in self.column.iter().zip(&self.weights).enumerate() {
            m[usize::from(row_bit(row, pos, k))][usize::from(b)] += w;
        }
        let p0 = m[0][0] + m[0][1];
        let p1 = m[1][0] + m[1][1];
        let h = p0 * entropy_of_masses(&m[0]) + p1 * entropy_of_masses(&m[1]);
        (p0, p1, h)
    }

    /// Entropy this entry keeps after a level tests `var` (unchanged if the
    /// residual does not depend on it).
    fn score(&self, var: usize) -> f64 {
        match self.position(var) {
            Some(pos) if self.depends_on(pos) => self.split_entropy(pos).2,
            _ => self.entropy,
        }
    }

    fn child(&self, pos: usize, value: bool, branch_prob: f64, slot: Slot) -> Pending {
        let k = self.vars.len();
        let rows: Vec<usize> = (0..self.column.len())
            .filter(|&r| row_bit(r, pos, k) == value)
            .collect();
        let column: Vec<bool> = rows.iter().map(|&r| self.column[r]).collect();
        let weights: Vec<f64> = if branch_prob > 0.0 {
            rows.iter().map(|&r| self.weights[r] / branch_prob).collect()
        } else {
            vec![1.0 / rows.len() as f64; rows.len()]
        };
        let mut counts = [0.0; 2];
        for (&b, &w) in column.iter().zip(&weights) {
            counts[usize::from(b)] += w;
        }
        let mut prefix = self.prefix.clone();
        prefix.push((self.vars[pos], value));
        let mut vars = self.vars.clone();
        vars.remove(pos);
        Pending {
            prefix,
            prob: self.prob * branch_prob,
            vars,
            entropy: entropy_of_masses(&counts),
            column,
            weights,
            slot,
        }
    }

    fn constant(&self) -> Option<bool> {
        let first = self.column[0];
        self.column.iter().all(|&b| b == first).then_some(first)
    }
}

/// Step-by-step entropy-driven construction. `step` performs one expansion;
/// `frontier` exposes the intermediate state between steps.
#[derive(Debug, Clone)]
pub struct EntropyDdBuilder {
    inputs: Vec<String>,
    output: String,
    mode: DdMode,
    nodes: Vec<DdNode>,
    root: NodeRef,
    /// Current level (ordered mode) or work queue (free mode).
    queue: VecDeque<Pending>,
    /// Ordered mode: entries deferred to the next level.
    next_level: VecDeque<Pending>,
    level_var: Option<usize>,
    order: Vec<usize>,
    resolved_prob: f64,
    h_f: f64,
    h_current: f64,
    trace: Vec<TraceStep>,
}

impl EntropyDdBuilder {
    pub fn new(f: &TruthTable, dist: &InputDistribution, mode: DdMode) -> Result<Self, DdError> {
        let column = single_output(f)?.to_vec();
        let n = f.num_inputs();
        let weights = dist.weights(n)?;
        let mut counts = [0.0; 2];
        for (&b, &w) in column.iter().zip(&weights) {
            counts[usize::from(b)] += w;
        }
        let root = Pending {
            prefix: Vec::new(),
            prob: 1.0,
            vars: (0..n).collect(),
            entropy: entropy_of_masses(&counts),
            column,
            weights,
            slot: Slot::Root,
        };
        let h_f = root.entropy;
        let mut builder = EntropyDdBuilder {
            inputs: f.input_names().to_vec(),
            output: f.output_names()[0].clone(),
            mode,
            nodes: Vec::new(),
            root: NodeRef::Terminal(false),
            queue: VecDeque::new(),
            next_level: VecDeque::new(),
            level_var: None,
            order: Vec::new(),
            resolved_prob: 0.0,
            h_f,
            h_current: h_f,
            trace: vec![TraceStep {
                step: 0,
                path_prob: 1.0,
                variable: None,
                h_f_given_dd: h_f,
                i_f_dd: 0.0,
            }],
        };
        builder.attach_or_enqueue(root);
        Ok(builder)
    }

    fn set_slot(&mut self, slot: Slot, target: NodeRef) {
        match slot {
            Slot::Root => self.root = target,
            Slot::Low(p) => self.nodes[p].low = target,
            Slot::High(p) => self.nodes[p].high = target,
        }
    }

    fn attach_or_enqueue(&mut self, entry: Pending) {
        match entry.constant() {
            Some(value) => {
                self.resolved_prob += entry.prob;
                self.set_slot(entry.slot, NodeRef::Terminal(value));
            }
            None => match self.mode {
                DdMode::Free => self.queue.push_back(entry),
                DdMode::Ordered => self.next_level.push_back(entry),
            },
        }
    }

    pub fn is_done(&self) -> bool {
        self.queue.is_empty() && self.next_level.is_empty()
    }

    pub fn h_f(&self) -> f64 {
        self.h_f
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    /// Picks the level variable minimizing the probability-weighted residual
    /// entropy over the whole frontier; ties go to the lowest input index.
    fn choose_level_variable(&self) -> Option<usize> {
        let mut candidates: Vec<usize> = Vec::new();
        for e in &self.queue {
            for (pos, &v) in e.vars.iter().enumerate() {
                if !candidates.contains(&v) && e.depends_on(pos) {
                    candidates.push(v);
                }
            }
        }
        candidates.sort_unstable();
        let mut best: Option<(usize, f64)> = None;
        for v in candidates {
            let score = self.queue.iter().fold(0.0, |acc, e| acc + e.prob * e.score(v));
            if best.is_none_or(|(_, s)| score < s) {
                best = Some((v, score));
            }
        }
        best.map(|(v, _)| v)
    }

    /// Per-node choice: the support variable minimizing `H(f_residual | x)`.
    fn choose_free_variable(entry: &Pending) -> usize {
        let mut best: Option<(usize, f64)> = None;
        let mut by_index: Vec<(usize, usize)> = entry.vars.iter().copied().enumerate().collect();
        by_index.sort_unstable_by_key(|&(_, v)| v);
        for (pos, v) in by_index {
            if !entry.depends_on(pos) {
                continue;
            }
            let h = entry.split_entropy(pos).2;
            if best.is_none_or(|(_, s)| h < s) {
                best = Some((v, h));
            }
        }
        best.expect("non-constant residual has a support variable").0
    }

    /// Performs one expansion. Returns the recorded step, or `None` when the
    /// diagram is complete.
    pub fn step(&mut self) -> Option<TraceStep> {
        let (entry, var) = match self.mode {
            DdMode::Free => {
                let entry = self.queue.pop_front()?;
                let var = Self::choose_free_variable(&entry);
                (entry, var)
            }
            DdMode::Ordered => loop {
                if self.level_var.is_none() {
                    if !self.queue.is_empty() {
                        // Entries left over from the finished level move on.
                        let rest: Vec<Pending> = self.queue.drain(..).collect();
                        self.next_level.extend(rest);
                    }
                    if self.next_level.is_empty() {
                        return None;
                    }
                    std::mem::swap(&mut self.queue, &mut self.next_level);
                    let var = self.choose_level_variable().expect("frontier has support");
                    self.order.push(var);
                    self.level_var = Some(var);
                }
                let var = self.level_var.unwrap();
                match self.queue.pop_front() {
                    None => self.level_var = None,
                    Some(e) => match e.position(var) {
                        Some(pos) if e.depends_on(pos) => break (e, var),
                        _ => self.next_level.push_back(e),
                    },
                }
            },
        };

        let pos = entry.position(var).expect("variable is free on this path");
        let (p0, p1, h_split) = entry.split_entropy(pos);
        let node = self.nodes.len();
        self.nodes.push(DdNode {
            var,
            low: NodeRef::Terminal(false),
            high: NodeRef::Terminal(false),
        });
        self.set_slot(entry.slot, NodeRef::Node(node));
        let gain = (entry.prob * (entry.entropy - h_split)).max(0.0);
        self.h_current = (self.h_current - gain).max(0.0);
        let low = entry.child(pos, false, p0, Slot::Low(node));
        let high = entry.child(pos, true, p1, Slot::High(node));
        self.attach_or_enqueue(low);
        self.attach_or_enqueue(high);

        let step = TraceStep {
            step: self.trace.len(),
            path_prob: entry.prob,
            variable: Some(self.inputs[var].clone()),
            h_f_given_dd: self.h_current,
            i_f_dd: self.h_f - self.h_current,
        };
        self.trace.push(step.clone());
        Some(step)
    }

    /// Snapshot of the unexpanded paths.
    pub fn frontier(&self) -> Frontier {
        let entries = self
            .queue
            .iter()
            .chain(self.next_level.iter())
            .map(|e| FrontierEntry {
                prefix: AssignmentPrefix::new(e.prefix.iter().map(|&(v, b)| (self.inputs[v].clone(), b)).collect())
                    .expect("each variable bound once per path"),
                path_prob: e.prob,
                residual: TruthTable::new(
                    e.vars.iter().map(|&v| self.inputs[v].clone()).collect(),
                    vec![self.output.clone()],
                    vec![e.column.clone()],
                )
                .expect("residual is a valid table"),
            })
            .collect();
        Frontier {
            inputs: self.inputs.clone(),
            entries,
            resolved_prob: self.resolved_prob,
        }
    }

    /// Runs to completion and returns the reduced diagram with its trace.
    pub fn finish(mut self) -> (DecisionDiagram, BuildTrace) {
        while self.step().is_some() {}
        let order = match self.mode {
            DdMode::Ordered => {
                let mut order = self.order.clone();
                for v in 0..self.inputs.len() {
                    if !order.contains(&v) {
                        order.push(v);
                    }
                }
                Some(order)
            }
            DdMode::Free => None,
        };
        let dd = DecisionDiagram::from_parts_unchecked(self.inputs.clone(), self.nodes, self.root, self.mode, order);
        let trace = BuildTrace {
            h_f: Bits::new(self.h_f),
            steps: self.trace,
        };
        (reduce(&dd), trace)
    }
}

pub fn build_entropy_dd(
    f: &TruthTable,
    dist: &InputDistribution,
    mode: DdMode,
) -> Result<(DecisionDiagram, BuildTrace), DdError> {
    Ok(EntropyDdBuilder::new(f, dist, mode)?.finish())
}
