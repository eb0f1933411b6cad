// SPDX-License-Identifier: Apache-2.0

//! Seeded random functions, distributions and netlists for test corpora.
//!
//! All generators take a caller-owned RNG; seed it with
//! [`rng_from_seed`] for results that are stable across platforms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gates::GateLibrary;
use crate::info::InputDistribution;
use crate::netlist::{Netlist, NetlistBuilder};
use crate::truth_table::TruthTable;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random single-output function over `x1..xn`.
pub fn random_function(n: usize, rng: &mut impl Rng) -> TruthTable {
    let column = (0..1usize << n).map(|_| rng.random::<bool>()).collect();
    TruthTable::from_column(column).expect("n within limits")
}

/// Uniform, independent or explicit distribution with equal chance.
pub fn random_distribution(n: usize, rng: &mut impl Rng) -> InputDistribution {
    match rng.random_range(0..3) {
        0 => InputDistribution::Uniform,
        1 => random_independent(n, rng),
        _ => {
            let raw: Vec<f64> = (0..1usize << n)
                .map(|_| {
                    // Some exact zeros exercise the 0 log 0 convention.
                    if rng.random_bool(0.1) {
                        0.0
                    } else {
                        rng.random::<f64>()
                    }
                })
                .collect();
            let mut weights = raw.clone();
            let total: f64 = raw.iter().sum();
            if total == 0.0 {
                weights[0] = 1.0;
            } else {
                for w in &mut weights {
                    *w /= total;
                }
            }
            InputDistribution::explicit(weights).expect("normalized weights")
        }
    }
}

pub fn random_independent(n: usize, rng: &mut impl Rng) -> InputDistribution {
    InputDistribution::independent((0..n).map(|_| rng.random::<f64>()).collect()).expect("biases in [0, 1)")
}

enum Tree {
    Leaf,
    Gate(usize, Vec<Tree>),
}

impl Tree {
    fn leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Gate(_, kids) => kids.iter().map(Tree::leaves).sum(),
        }
    }
}

fn grow(lib: &GateLibrary, depth: usize, budget: usize, root: bool, rng: &mut impl Rng) -> Tree {
    let fits: Vec<usize> = (0..lib.gates().len())
        .filter(|&g| lib.gates()[g].arity() <= budget)
        .collect();
    if depth == 0 || fits.is_empty() || (!root && rng.random_bool(0.3)) {
        return Tree::Leaf;
    }
    let gate = fits[rng.random_range(0..fits.len())];
    let arity = lib.gates()[gate].arity();
    let mut remaining = budget;
    let mut kids = Vec::with_capacity(arity);
    for i in 0..arity {
        let reserve = arity - i - 1;
        let kid = grow(lib, depth - 1, remaining - reserve, false, rng);
        remaining -= kid.leaves();
        kids.push(kid);
    }
    Tree::Gate(gate, kids)
}

/// Fanout-free netlist: a single gate tree of depth at most `max_depth`
/// whose leaves are distinct primary inputs (at most `max_inputs`), each
/// used exactly once.
pub fn random_tree_netlist(lib: &GateLibrary, max_inputs: usize, max_depth: usize, rng: &mut impl Rng) -> Netlist {
    let tree = grow(lib, max_depth.max(1), max_inputs, true, rng);
    let k = tree.leaves();
    let mut leaf_names: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    leaf_names.shuffle(rng);
    let mut b = NetlistBuilder::new("tree");
    for i in 1..=k {
        b.input(&format!("x{i}"));
    }
    let mut counter = 0usize;
    fn emit(
        t: &Tree,
        lib: &GateLibrary,
        b: &mut NetlistBuilder,
        leaves: &mut std::vec::IntoIter<String>,
        counter: &mut usize,
        out: Option<&str>,
    ) -> String {
        match t {
            Tree::Leaf => leaves.next().expect("one name per leaf"),
            Tree::Gate(g, kids) => {
                let ins: Vec<String> = kids
                    .iter()
                    .map(|kid| emit(kid, lib, b, leaves, counter, None))
                    .collect();
                let name = match out {
                    Some(o) => o.to_string(),
                    None => {
                        *counter += 1;
                        format!("n{counter}")
                    }
                };
                let refs: Vec<&str> = ins.iter().map(String::as_str).collect();
                b.gate(&lib.gates()[*g], &refs, &name);
                name
            }
        }
    }
    let mut leaves = leaf_names.into_iter();
    emit(&tree, lib, &mut b, &mut leaves, &mut counter, Some("f"));
    b.output("f");
    b.build().expect("generated tree is well formed")
}

/// True when some instance has two inputs whose fan-in cones share a net.
pub fn has_reconvergence(nw: &Netlist) -> bool {
    let nets = nw.nets().len();
    let mut cone: Vec<Vec<bool>> = (0..nets)
        .map(|i| {
            let mut v = vec![false; nets];
            v[i] = true;
            v
        })
        .collect();
    for inst in nw.instances() {
        for a in 0..inst.inputs.len() {
            for b in a + 1..inst.inputs.len() {
                let (ca, cb) = (&cone[inst.inputs[a]], &cone[inst.inputs[b]]);
                if ca.iter().zip(cb).any(|(&x, &y)| x && y) {
                    return true;
                }
            }
        }
        let mut merged = vec![false; nets];
        for &i in &inst.inputs {
            for (m, &c) in merged.iter_mut().zip(&cone[i]) {
                *m |= c;
            }
        }
        merged[inst.output] = true;
        cone[inst.output] = merged;
    }
    false
}

/// Random DAG over `n` inputs with `gates` instances whose inputs are drawn
/// from all earlier nets, retried until some instance reconverges. The last
/// gate and one random other net are primary outputs.
pub fn random_reconvergent_netlist(lib: &GateLibrary, n: usize, gates: usize, rng: &mut impl Rng) -> Netlist {
    loop {
        let mut b = NetlistBuilder::new("dag");
        let mut nets: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        for name in &nets {
            b.input(name);
        }
        for k in 1..=gates {
            let gate = &lib.gates()[rng.random_range(0..lib.gates().len())];
            let ins: Vec<String> = (0..gate.arity())
                .map(|_| nets[rng.random_range(0..nets.len())].clone())
                .collect();
            let refs: Vec<&str> = ins.iter().map(String::as_str).collect();
            let name = format!("n{k}");
            b.gate(gate, &refs, &name);
            nets.push(name);
        }
        b.output(nets.last().unwrap());
        let extra = nets[rng.random_range(n..nets.len())].clone();
        if &extra != nets.last().unwrap() {
            b.output(&extra);
        }
        let nw = b.build().expect("generated DAG is well formed");
        if has_reconvergence(&nw) {
            return nw;
        }
    }
}
