// Independent reference computations shared by the integration tests. They
// work on raw columns and never call the crate's measure or diagram code.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use infoengine::dd::{DecisionDiagram, NodeRef};

/// Bit of variable `var` (0 = x1, the most significant) in row `row`.
pub fn bit(row: usize, var: usize, n: usize) -> bool {
    row >> (n - 1 - var) & 1 == 1
}

/// Row probabilities for independent inputs, built directly from the biases.
pub fn product_weights(biases: &[f64]) -> Vec<f64> {
    let n = biases.len();
    (0..1usize << n)
        .map(|row| {
            (0..n)
                .map(|v| if bit(row, v, n) { biases[v] } else { 1.0 - biases[v] })
                .product()
        })
        .collect()
}

pub fn shannon(masses: impl IntoIterator<Item = f64>) -> f64 {
    masses.into_iter().filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum()
}

/// Entropy of the value pattern of `key(row)` under `weights`.
pub fn pattern_entropy<K: Ord>(weights: &[f64], key: impl Fn(usize) -> K) -> f64 {
    let mut mass: BTreeMap<K, f64> = BTreeMap::new();
    for (row, &w) in weights.iter().enumerate() {
        *mass.entry(key(row)).or_default() += w;
    }
    shannon(mass.into_values())
}

/// `H(f | vars)` as `H(f, vars) - H(vars)`.
pub fn cond_entropy(column: &[bool], vars: &[usize], n: usize, weights: &[f64]) -> f64 {
    let key = |row: usize| vars.iter().map(|&v| bit(row, v, n)).collect::<Vec<_>>();
    let joint = pattern_entropy(weights, |row| (key(row), column[row]));
    joint - pattern_entropy(weights, key)
}

/// Node count of the reduced ordered diagram for `order`: at each level, the
/// number of distinct subfunctions (after fixing the earlier variables) that
/// actually depend on that level's variable.
pub fn robdd_size(column: &[bool], n: usize, order: &[usize]) -> usize {
    let mut total = 0;
    for level in 0..n {
        let fixed = &order[..level];
        let var = order[level];
        let mut seen: HashSet<Vec<bool>> = HashSet::new();
        for assignment in 0..1usize << level {
            let matches = |row: usize| {
                fixed
                    .iter()
                    .enumerate()
                    .all(|(i, &v)| bit(row, v, n) == (assignment >> i & 1 == 1))
            };
            let sub: Vec<bool> = (0..column.len()).filter(|&r| matches(r)).map(|r| column[r]).collect();
            let rows: Vec<usize> = (0..column.len()).filter(|&r| matches(r)).collect();
            let depends = rows.iter().zip(&sub).any(|(&r, &value)| {
                let flipped = r ^ (1 << (n - 1 - var));
                column[flipped] != value
            });
            if depends {
                seen.insert(sub);
            }
        }
        total += seen.len();
    }
    total
}

/// Smallest `robdd_size` over all orders, by brute force.
pub fn min_robdd_size(column: &[bool], n: usize) -> usize {
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    permute(&mut order, 0, &mut |o| best = best.min(robdd_size(column, n, o)));
    best
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Walks every root-to-terminal path. Returns false if a variable repeats on
/// a path or, when `order` is given, appears out of order.
pub fn paths_consistent(dd: &DecisionDiagram, order: Option<&[usize]>) -> bool {
    fn walk(dd: &DecisionDiagram, r: NodeRef, seen: &mut Vec<usize>, rank: &Option<Vec<usize>>) -> bool {
        let NodeRef::Node(id) = r else { return true };
        let node = dd.node(id);
        if seen.contains(&node.var) {
            return false;
        }
        if let (Some(rank), Some(&last)) = (rank, seen.last()) {
            if rank[node.var] <= rank[last] {
                return false;
            }
        }
        seen.push(node.var);
        let ok = walk(dd, node.low, seen, rank) && walk(dd, node.high, seen, rank);
        seen.pop();
        ok
    }
    let rank = order.map(|o| {
        let mut r = vec![0; o.len()];
        for (pos, &v) in o.iter().enumerate() {
            r[v] = pos;
        }
        r
    });
    walk(dd, dd.root(), &mut Vec::new(), &rank)
}

/// Evaluates the diagram on `row` by following edges.
pub fn eval(dd: &DecisionDiagram, row: usize, n: usize) -> bool {
    let mut r = dd.root();
    loop {
        match r {
            NodeRef::Terminal(b) => return b,
            NodeRef::Node(id) => {
                let node = dd.node(id);
                r = if bit(row, node.var, n) { node.high } else { node.low };
            }
        }
    }
}
