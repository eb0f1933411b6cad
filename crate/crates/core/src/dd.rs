// SPDX-License-Identifier: Apache-2.0

//! Binary decision diagrams with 0/1 terminals, Shannon expansion only.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::info::MetricError;
use crate::truth_table::{row_bit, TableError, TruthTable};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DdError {
    #[error("function has {0} outputs; select a single output")]
    MultiOutput(usize),
    #[error("function has no inputs")]
    Empty,
    #[error("diagram variable `{0}` is not among the inputs")]
    UnknownVariable(String),
    #[error("node {node} refers to missing child {child}")]
    DanglingChild { node: usize, child: usize },
    #[error("node {0} lies on a cycle")]
    Cyclic(usize),
    #[error("variable `{0}` is tested twice on one path")]
    NotReadOnce(String),
    #[error("{n} variables exceed the ordering ceiling of {ceiling}")]
    OrderingCeiling { n: usize, ceiling: usize },
    #[error("diagrams support at most 64 variables, got {0}")]
    TooManyVariables(usize),
    #[error("invalid variable order")]
    BadOrder,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeRef {
    Terminal(bool),
    Node(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DdNode {
    /// Index into the diagram's variable list.
    pub var: usize,
    pub low: NodeRef,
    pub high: NodeRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DdMode {
    /// One global variable order on every path.
    Ordered,
    /// Each node picks its own variable.
    Free,
}

impl std::fmt::Display for DdMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DdMode::Ordered => "ordered",
            DdMode::Free => "free",
        })
    }
}

impl std::str::FromStr for DdMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ordered" => Ok(DdMode::Ordered),
            "free" => Ok(DdMode::Free),
            other => Err(format!("unknown mode `{other}` (expected ordered|free)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionDiagram {
    variables: Vec<String>,
    nodes: Vec<DdNode>,
    root: NodeRef,
    mode: DdMode,
    /// Global variable order (indices into `variables`) for ordered diagrams.
    order: Option<Vec<usize>>,
}

impl DecisionDiagram {
    /// Validates child references, acyclicity and the read-once property.
    pub fn new(
        variables: Vec<String>,
        nodes: Vec<DdNode>,
        root: NodeRef,
        mode: DdMode,
        order: Option<Vec<usize>>,
    ) -> Result<Self, DdError> {
        let dd = DecisionDiagram {
            variables,
            nodes,
            root,
            mode,
            order,
        };
        dd.validate()?;
        Ok(dd)
    }

    pub(crate) fn from_parts_unchecked(
        variables: Vec<String>,
        nodes: Vec<DdNode>,
        root: NodeRef,
        mode: DdMode,
        order: Option<Vec<usize>>,
    ) -> Self {
        DecisionDiagram {
            variables,
            nodes,
            root,
            mode,
            order,
        }
    }

    fn validate(&self) -> Result<(), DdError> {
        if self.variables.len() > 64 {
            return Err(DdError::TooManyVariables(self.variables.len()));
        }
        if let Some(order) = &self.order {
            let mut seen = vec![false; self.variables.len()];
            for &v in order {
                if v >= seen.len() || seen[v] {
                    return Err(DdError::BadOrder);
                }
                seen[v] = true;
            }
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if n.var >= self.variables.len() {
                return Err(DdError::BadOrder);
            }
            for c in [n.low, n.high] {
                if let NodeRef::Node(c) = c {
                    if c >= self.nodes.len() {
                        return Err(DdError::DanglingChild { node: i, child: c });
                    }
                }
            }
        }
        if let NodeRef::Node(r) = self.root {
            if r >= self.nodes.len() {
                return Err(DdError::DanglingChild { node: r, child: r });
            }
        }
        // Variables below each node; a node's variable must not reappear.
        #[derive(Clone, Copy, PartialEq)]
        enum State {
            New,
            Active,
            Done,
        }
        let mut state = vec![State::New; self.nodes.len()];
        let mut below: Vec<u64> = vec![0; self.nodes.len()];
        let mut stack: Vec<(usize, bool)> = self.reachable_roots().into_iter().map(|r| (r, false)).collect();
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                let n = self.nodes[id];
                let mut mask = 0u64;
                for c in [n.low, n.high] {
                    if let NodeRef::Node(c) = c {
                        mask |= below[c] | (1 << self.nodes[c].var);
                    }
                }
                if mask & (1 << n.var) != 0 {
                    return Err(DdError::NotReadOnce(self.variables[n.var].clone()));
                }
                below[id] = mask;
                state[id] = State::Done;
                continue;
            }
            match state[id] {
                State::Done => continue,
                State::Active => return Err(DdError::Cyclic(id)),
                State::New => {}
            }
            state[id] = State::Active;
            stack.push((id, true));
            let n = self.nodes[id];
            for c in [n.high, n.low] {
                if let NodeRef::Node(c) = c {
                    match state[c] {
                        State::New => stack.push((c, false)),
                        State::Active => return Err(DdError::Cyclic(c)),
                        State::Done => {}
                    }
                }
            }
        }
        Ok(())
    }

    fn reachable_roots(&self) -> Vec<usize> {
        match self.root {
            NodeRef::Node(r) => vec![r],
            NodeRef::Terminal(_) => Vec::new(),
        }
    }

    pub fn terminal(variables: Vec<String>, value: bool, mode: DdMode) -> Self {
        DecisionDiagram {
            variables,
            nodes: Vec::new(),
            root: NodeRef::Terminal(value),
            mode,
            order: None,
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nodes(&self) -> &[DdNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> DdNode {
        self.nodes[id]
    }

    pub fn root(&self) -> NodeRef {
        self.root
    }

    pub fn mode(&self) -> DdMode {
        self.mode
    }

    pub fn order(&self) -> Option<&[usize]> {
        self.order.as_deref()
    }

    /// Variable names in the global order, for ordered diagrams.
    pub fn order_names(&self) -> Option<Vec<String>> {
        self.order
            .as_ref()
            .map(|o| o.iter().map(|&v| self.variables[v].clone()).collect())
    }

    /// Internal nodes reachable from the root.
    pub fn size(&self) -> usize {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = self.reachable_roots();
        let mut count = 0;
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut seen[id], true) {
                continue;
            }
            count += 1;
            let n = self.nodes[id];
            for c in [n.low, n.high] {
                if let NodeRef::Node(c) = c {
                    stack.push(c);
                }
            }
        }
        count
    }

    /// Follows the path selected by `value_of(var)` to a terminal.
    pub fn evaluate_with(&self, mut value_of: impl FnMut(usize) -> bool) -> bool {
        let mut at = self.root;
        loop {
            match at {
                NodeRef::Terminal(b) => return b,
                NodeRef::Node(id) => {
                    let n = self.nodes[id];
                    at = if value_of(n.var) { n.high } else { n.low };
                }
            }
        }
    }

    /// True when every edge between internal nodes goes strictly downward in `order`.
    pub fn respects_order(&self, order: &[usize]) -> bool {
        let mut rank = vec![usize::MAX; self.variables.len()];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        self.nodes.iter().all(|n| {
            rank[n.var] != usize::MAX
                && [n.low, n.high].iter().all(|c| match c {
                    NodeRef::Node(c) => rank[self.nodes[*c].var] > rank[n.var],
                    NodeRef::Terminal(_) => true,
                })
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dd {\n");
        let _ = writeln!(out, "  node [shape=circle];");
        let mut used = [false; 2];
        let mut stack = self.reachable_roots();
        let mut seen = vec![false; self.nodes.len()];
        let mut ids = Vec::new();
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut seen[id], true) {
                continue;
            }
            ids.push(id);
            let n = self.nodes[id];
            for c in [n.high, n.low] {
                match c {
                    NodeRef::Node(c) => stack.push(c),
                    NodeRef::Terminal(b) => used[usize::from(b)] = true,
                }
            }
        }
        if let NodeRef::Terminal(b) = self.root {
            used[usize::from(b)] = true;
        }
        ids.sort_unstable();
        for (b, &u) in used.iter().enumerate() {
            if u {
                let _ = writeln!(out, "  t{b} [shape=box, label=\"{b}\"];");
            }
        }
        let name = |r: NodeRef| match r {
            NodeRef::Terminal(b) => format!("t{}", u8::from(b)),
            NodeRef::Node(i) => format!("n{i}"),
        };
        for &id in &ids {
            let n = self.nodes[id];
            let _ = writeln!(out, "  n{id} [label=\"{}\"];", self.variables[n.var]);
        }
        for &id in &ids {
            let n = self.nodes[id];
            let _ = writeln!(out, "  n{id} -> {} [style=dashed];", name(n.low));
            let _ = writeln!(out, "  n{id} -> {} [style=solid];", name(n.high));
        }
        let _ = writeln!(out, "  root [shape=plaintext, label=\"\"];");
        let _ = writeln!(out, "  root -> {};", name(self.root));
        out.push_str("}\n");
        out
    }
}

/// Merges duplicate nodes and removes tests with identical children.
/// Surviving nodes are renumbered in post-order from the root.
pub fn reduce(dd: &DecisionDiagram) -> DecisionDiagram {
    let mut unique: HashMap<DdNode, usize> = HashMap::new();
    let mut nodes: Vec<DdNode> = Vec::new();
    let mut memo: Vec<Option<NodeRef>> = vec![None; dd.nodes.len()];
    let root = match dd.root {
        NodeRef::Terminal(b) => NodeRef::Terminal(b),
        NodeRef::Node(r) => {
            // Iterative post-order: children (low, then high) before parents.
            let mut stack = vec![(r, false)];
            while let Some((id, ready)) = stack.pop() {
                if memo[id].is_some() {
                    continue;
                }
                let n = dd.nodes[id];
                let resolve = |c: NodeRef, memo: &Vec<Option<NodeRef>>| match c {
                    NodeRef::Terminal(_) => Some(c),
                    NodeRef::Node(c) => memo[c],
                };
                if !ready {
                    stack.push((id, true));
                    for c in [n.high, n.low] {
                        if let NodeRef::Node(c) = c {
                            if memo[c].is_none() {
                                stack.push((c, false));
                            }
                        }
                    }
                    continue;
                }
                let low = resolve(n.low, &memo).expect("child reduced first");
                let high = resolve(n.high, &memo).expect("child reduced first");
                let result = if low == high {
                    low
                } else {
                    let key = DdNode { var: n.var, low, high };
                    let next = nodes.len();
                    let idx = *unique.entry(key).or_insert_with(|| {
                        nodes.push(key);
                        next
                    });
                    NodeRef::Node(idx)
                };
                memo[id] = Some(result);
            }
            memo[r].unwrap()
        }
    };
    DecisionDiagram {
        variables: dd.variables.clone(),
        nodes,
        root,
        mode: dd.mode,
        order: dd.order.clone(),
    }
}

/// Evaluates the diagram on every assignment of `inputs`.
pub fn dd_to_truth_table(dd: &DecisionDiagram, inputs: &[String]) -> Result<TruthTable, DdError> {
    let n = inputs.len();
    let mut position = vec![usize::MAX; dd.variables.len()];
    for node in &dd.nodes {
        let name = &dd.variables[node.var];
        let pos = inputs
            .iter()
            .position(|i| i == name)
            .ok_or_else(|| DdError::UnknownVariable(name.clone()))?;
        position[node.var] = pos;
    }
    let column = (0..1usize << n)
        .map(|row| dd.evaluate_with(|v| row_bit(row, position[v], n)))
        .collect();
    let out = if inputs.iter().any(|i| i == "f") { "f_out" } else { "f" };
    Ok(TruthTable::new(inputs.to_vec(), vec![out.to_string()], vec![column])?)
}

pub(crate) fn single_output(f: &TruthTable) -> Result<&[bool], DdError> {
    if f.num_outputs() != 1 {
        return Err(DdError::MultiOutput(f.num_outputs()));
    }
    if f.num_inputs() == 0 {
        return Err(DdError::Empty);
    }
    Ok(f.column(0))
}

/// Reduced ordered diagram of `f` for the given variable order (input indices,
/// first tested first).
pub fn build_ordered(f: &TruthTable, order: &[usize]) -> Result<DecisionDiagram, DdError> {
    let column = single_output(f)?;
    let n = f.num_inputs();
    let mut check = order.to_vec();
    check.sort_unstable();
    if check != (0..n).collect::<Vec<_>>() {
        return Err(DdError::BadOrder);
    }
    // Permute rows so that bit positions follow `order`.
    let permuted: Vec<bool> = (0..1usize << n)
        .map(|p| {
            let row = order.iter().enumerate().fold(0usize, |acc, (level, &var)| {
                if row_bit(p, level, n) {
                    acc | (1 << (n - 1 - var))
                } else {
                    acc
                }
            });
            column[row]
        })
        .collect();

    fn build(
        slice: &[bool],
        level: usize,
        order: &[usize],
        nodes: &mut Vec<DdNode>,
        unique: &mut HashMap<DdNode, usize>,
    ) -> NodeRef {
        if slice.iter().all(|&b| b == slice[0]) {
            return NodeRef::Terminal(slice[0]);
        }
        let (lo, hi) = slice.split_at(slice.len() / 2);
        let low = build(lo, level + 1, order, nodes, unique);
        let high = build(hi, level + 1, order, nodes, unique);
        if low == high {
            return low;
        }
        let key = DdNode {
            var: order[level],
            low,
            high,
        };
        let next = nodes.len();
        NodeRef::Node(*unique.entry(key).or_insert_with(|| {
            nodes.push(key);
            next
        }))
    }

    let mut nodes = Vec::new();
    let mut unique = HashMap::new();
    let root = build(&permuted, 0, order, &mut nodes, &mut unique);
    let dd = DecisionDiagram {
        variables: f.input_names().to_vec(),
        nodes,
        root,
        mode: DdMode::Ordered,
        order: Some(order.to_vec()),
    };
    Ok(reduce(&dd))
}
