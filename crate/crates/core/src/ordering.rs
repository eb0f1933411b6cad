// SPDX-License-Identifier: Apache-2.0

//! Exhaustive variable-ordering search for reduced ordered diagrams.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::dd::{build_ordered, single_output, DdError};
use crate::truth_table::TruthTable;

pub const DEFAULT_ORDERING_CEILING: usize = 8;
pub const HARD_ORDERING_CEILING: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingSize {
    pub order: Vec<String>,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingSweep {
    /// Lexicographically first order achieving `best_size`.
    pub best_order: Vec<String>,
    pub best_size: usize,
    /// Every permutation in lexicographic order of input indices.
    pub sizes: Vec<OrderingSize>,
}

impl OrderingSweep {
    pub fn ties(&self) -> usize {
        self.sizes.iter().filter(|s| s.size == self.best_size).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("ordering,size\n");
        for s in &self.sizes {
            out.push_str(&format!("{},{}\n", s.order.join(" "), s.size));
        }
        out
    }
}

pub fn exhaustive_best_ordering(f: &TruthTable) -> Result<OrderingSweep, DdError> {
    exhaustive_best_ordering_with_ceiling(f, DEFAULT_ORDERING_CEILING)
}

/// Builds the reduced ordered diagram for all `n!` orders. Permutations are
/// evaluated in parallel and collected in enumeration order.
pub fn exhaustive_best_ordering_with_ceiling(f: &TruthTable, ceiling: usize) -> Result<OrderingSweep, DdError> {
    single_output(f)?;
    let n = f.num_inputs();
    let ceiling = ceiling.min(HARD_ORDERING_CEILING);
    if n > ceiling {
        return Err(DdError::OrderingCeiling { n, ceiling });
    }
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let sizes: Vec<usize> = perms
        .par_iter()
        .map(|order| build_ordered(f, order).map(|dd| dd.size()))
        .collect::<Result<_, _>>()?;
    let best = sizes
        .iter()
        .enumerate()
        .min_by_key(|&(i, &s)| (s, i))
        .map(|(i, _)| i)
        .expect("at least one permutation");
    let names = |order: &[usize]| -> Vec<String> { order.iter().map(|&v| f.input_names()[v].clone()).collect() };
    Ok(OrderingSweep {
        best_order: names(&perms[best]),
        best_size: sizes[best],
        sizes: perms
            .iter()
            .zip(&sizes)
            .map(|(p, &size)| OrderingSize { order: names(p), size })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and_orderings_tie() {
        let and = TruthTable::from_bit_str("0001").unwrap();
        let sweep = exhaustive_best_ordering(&and).unwrap();
        assert_eq!(sweep.best_size, 2);
        assert_eq!(sweep.ties(), 2);
        assert_eq!(sweep.best_order, ["x1", "x2"]);
    }

    #[test]
    fn projection() {
        let f = TruthTable::from_bit_str("01").unwrap();
        assert_eq!(exhaustive_best_ordering(&f).unwrap().best_size, 1);
    }

    #[test]
    fn majority_is_order_insensitive() {
        let maj = TruthTable::from_fn(3, |x| (x[0] as u8 + x[1] as u8 + x[2] as u8) >= 2).unwrap();
        let sweep = exhaustive_best_ordering(&maj).unwrap();
        assert_eq!(sweep.best_size, 4);
        assert_eq!(sweep.sizes.len(), 6);
        assert_eq!(sweep.ties(), 6);
    }

    #[test]
    fn order_sensitive_function() {
        // x1 x2 + x3 x4: pairing matters
        let f = TruthTable::from_fn(4, |x| (x[0] && x[1]) || (x[2] && x[3])).unwrap();
        let sweep = exhaustive_best_ordering(&f).unwrap();
        assert_eq!(sweep.best_size, 4);
        assert_eq!(sweep.best_order, ["x1", "x2", "x3", "x4"]);
        assert_eq!(sweep.sizes.iter().map(|s| s.size).max(), Some(6));
    }

    #[test]
    fn ceiling_enforced() {
        let f = TruthTable::from_fn(9, |x| x[0]).unwrap();
        assert_eq!(
            exhaustive_best_ordering(&f).unwrap_err(),
            DdError::OrderingCeiling { n: 9, ceiling: 8 }
        );
        let f = TruthTable::from_fn(11, |x| x[0]).unwrap();
        assert_eq!(
            exhaustive_best_ordering_with_ceiling(&f, 12).unwrap_err(),
            DdError::OrderingCeiling { n: 11, ceiling: 10 }
        );
    }
}
