// SPDX-License-Identifier: Apache-2.0

//! Complete multi-output Boolean functions stored as truth tables.
//!
//! Row `r` of a table with `n` inputs holds the outputs for the assignment
//! whose bits, read from `x_1` down to `x_n`, spell `r` in binary. In other
//! words the first input is the most significant bit of the row index.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

/// Default ceiling on the number of inputs of a table.
pub const DEFAULT_MAX_INPUTS: usize = 20;

/// Absolute ceiling; no configuration may raise the input limit beyond this.
pub const HARD_MAX_INPUTS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("function has {got} inputs, limit is {limit}")]
    TooManyInputs { got: usize, limit: usize },
    #[error("function must have at least one output")]
    NoOutputs,
    #[error("output column {index} has {got} rows, expected {expected}")]
    ColumnLength { index: usize, got: usize, expected: usize },
    #[error("column count {got} does not match {expected} output names")]
    ColumnCount { got: usize, expected: usize },
    #[error("duplicate signal name `{0}`")]
    DuplicateName(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` bound more than once")]
    DuplicateBinding(String),
    #[error("assignment has {got} bits, function has {expected} inputs")]
    AssignmentLength { got: usize, expected: usize },
}

/// A completely specified function `{0,1}^n -> {0,1}^m`.
///
/// Tables with zero inputs exist only as full cofactors (a single row);
/// parsers and the diagram builder reject them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    inputs: Vec<String>,
    outputs: Vec<String>,
    columns: Vec<Vec<bool>>,
}

impl TruthTable {
    pub fn new(inputs: Vec<String>, outputs: Vec<String>, columns: Vec<Vec<bool>>) -> Result<Self, TableError> {
        Self::with_limit(inputs, outputs, columns, DEFAULT_MAX_INPUTS)
    }

    pub fn with_limit(
        inputs: Vec<String>,
        outputs: Vec<String>,
        columns: Vec<Vec<bool>>,
        max_inputs: usize,
    ) -> Result<Self, TableError> {
        let limit = max_inputs.min(HARD_MAX_INPUTS);
        if inputs.len() > limit {
            return Err(TableError::TooManyInputs {
                got: inputs.len(),
                limit,
            });
        }
        if outputs.is_empty() {
            return Err(TableError::NoOutputs);
        }
        if columns.len() != outputs.len() {
            return Err(TableError::ColumnCount {
                got: columns.len(),
                expected: outputs.len(),
            });
        }
        let mut seen = HashSet::new();
        for name in inputs.iter().chain(outputs.iter()) {
            if !seen.insert(name.as_str()) {
                return Err(TableError::DuplicateName(name.clone()));
            }
        }
        let rows = 1usize << inputs.len();
        for (index, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(TableError::ColumnLength {
                    index,
                    got: col.len(),
                    expected: rows,
                });
            }
        }
        Ok(TruthTable {
            inputs,
            outputs,
            columns,
        })
    }

    /// Single-output table over inputs `x1..xn` named `f`.
    pub fn from_column(column: Vec<bool>) -> Result<Self, TableError> {
        let n = column.len().trailing_zeros() as usize;
        if !column.len().is_power_of_two() {
            return Err(TableError::ColumnLength {
                index: 0,
                got: column.len(),
                expected: 1 << (n + 1),
            });
        }
        Self::new(default_input_names(n), vec!["f".to_string()], vec![column])
    }

    /// Single-output table from a `'0'/'1'` string in row order, e.g. `"0001"` for AND.
    pub fn from_bit_str(bits: &str) -> Option<Self> {
        let column = parse_bit_str(bits)?;
        Self::from_column(column).ok()
    }

    /// Builds a single-output table over `x1..xn` by evaluating `f` on every row.
    pub fn from_fn(n: usize, f: impl Fn(&[bool]) -> bool) -> Result<Self, TableError> {
        let mut column = Vec::with_capacity(1 << n);
        let mut assignment = vec![false; n];
        for row in 0..(1usize << n) {
            fill_assignment(row, &mut assignment);
            column.push(f(&assignment));
        }
        Self::new(default_input_names(n), vec!["f".to_string()], vec![column])
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn num_rows(&self) -> usize {
        1 << self.inputs.len()
    }

    pub fn input_names(&self) -> &[String] {
        &self.inputs
    }

    pub fn output_names(&self) -> &[String] {
        &self.outputs
    }

    pub fn columns(&self) -> &[Vec<bool>] {
        &self.columns
    }

    pub fn column(&self, output: usize) -> &[bool] {
        &self.columns[output]
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.inputs.iter().position(|n| n == name)
    }

    /// Value of input `var` (0-based) in row `row`.
    pub fn input_bit(&self, row: usize, var: usize) -> bool {
        row_bit(row, var, self.inputs.len())
    }

    /// Restricts the table to the selected output columns.
    pub fn select_outputs(&self, outputs: &[usize]) -> TruthTable {
        TruthTable {
            inputs: self.inputs.clone(),
            outputs: outputs.iter().map(|&o| self.outputs[o].clone()).collect(),
            columns: outputs.iter().map(|&o| self.columns[o].clone()).collect(),
        }
    }

    pub fn evaluate(&self, assignment: &[bool]) -> Result<Vec<bool>, TableError> {
        if assignment.len() != self.inputs.len() {
            return Err(TableError::AssignmentLength {
                got: assignment.len(),
                expected: self.inputs.len(),
            });
        }
        let row = assignment.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
        Ok(self.columns.iter().map(|c| c[row]).collect())
    }

    /// Returns the output pattern if every row carries the same one.
    pub fn is_constant(&self) -> Option<Vec<bool>> {
        let first: Vec<bool> = self.columns.iter().map(|c| c[0]).collect();
        self.columns
            .iter()
            .zip(&first)
            .all(|(c, &v)| c.iter().all(|&b| b == v))
            .then_some(first)
    }

    /// True when some output changes with input `var`.
    pub fn depends_on(&self, var: usize) -> bool {
        let n = self.inputs.len();
        let stride = 1usize << (n - 1 - var);
        self.columns
            .iter()
            .any(|c| (0..c.len()).filter(|r| r & stride == 0).any(|r| c[r] != c[r | stride]))
    }

    /// Indices of the inputs the function actually depends on.
    pub fn support(&self) -> Vec<usize> {
        (0..self.inputs.len()).filter(|&v| self.depends_on(v)).collect()
    }

    /// Fixes the variables in `prefix` and drops them from the input list.
    pub fn cofactor(&self, prefix: &AssignmentPrefix) -> Result<TruthTable, TableError> {
        let n = self.inputs.len();
        let mut fixed: Vec<Option<bool>> = vec![None; n];
        for (name, value) in prefix.bindings() {
            let idx = self
                .input_index(name)
                .ok_or_else(|| TableError::UnknownVariable(name.clone()))?;
            fixed[idx] = Some(*value);
        }
        let free: Vec<usize> = (0..n).filter(|&i| fixed[i].is_none()).collect();
        let base = fixed.iter().enumerate().fold(0usize, |acc, (i, v)| {
            if v == &Some(true) {
                acc | (1 << (n - 1 - i))
            } else {
                acc
            }
        });
        let k = free.len();
        let rows: Vec<usize> = (0..(1usize << k))
            .map(|sub| {
                free.iter().enumerate().fold(base, |acc, (j, &var)| {
                    if sub & (1 << (k - 1 - j)) != 0 {
                        acc | (1 << (n - 1 - var))
                    } else {
                        acc
                    }
                })
            })
            .collect();
        let columns = self
            .columns
            .iter()
            .map(|c| rows.iter().map(|&r| c[r]).collect())
            .collect();
        Ok(TruthTable {
            inputs: free.iter().map(|&i| self.inputs[i].clone()).collect(),
            outputs: self.outputs.clone(),
            columns,
        })
    }

    /// Assigns each row a dense id for its output pattern, numbered by first
    /// occurrence. Returns the ids and the number of distinct patterns.
    pub fn pattern_ids(&self) -> (Vec<u32>, usize) {
        if self.columns.len() == 1 {
            let col = &self.columns[0];
            let first = col[0];
            let ids = col.iter().map(|&b| u32::from(b != first)).collect();
            let distinct = if col.iter().any(|&b| b != first) { 2 } else { 1 };
            return (ids, distinct);
        }
        let mut index: HashMap<Vec<bool>, u32> = HashMap::new();
        let ids = (0..self.num_rows())
            .map(|r| {
                let key: Vec<bool> = self.columns.iter().map(|c| c[r]).collect();
                let next = index.len() as u32;
                *index.entry(key).or_insert(next)
            })
            .collect();
        (ids, index.len())
    }
}

/// An ordered set of variable bindings, each variable at most once.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AssignmentPrefix {
    bindings: Vec<(String, bool)>,
}

impl AssignmentPrefix {
    pub fn new(bindings: Vec<(String, bool)>) -> Result<Self, TableError> {
        let mut seen = HashSet::new();
        for (name, _) in &bindings {
            if !seen.insert(name.as_str()) {
                return Err(TableError::DuplicateBinding(name.clone()));
            }
        }
        Ok(AssignmentPrefix { bindings })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn bindings(&self) -> &[(String, bool)] {
        &self.bindings
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.bindings.iter().any(|(n, _)| n == name)
    }

    /// Returns a copy extended by one binding.
    pub fn extended(&self, name: &str, value: bool) -> Result<Self, TableError> {
        if self.contains(name) {
            return Err(TableError::DuplicateBinding(name.to_string()));
        }
        let mut bindings = self.bindings.clone();
        bindings.push((name.to_string(), value));
        Ok(AssignmentPrefix { bindings })
    }
}

pub fn default_input_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Bit of variable `var` (0-based, first variable most significant) in `row`.
#[inline]
pub fn row_bit(row: usize, var: usize, n: usize) -> bool {
    (row >> (n - 1 - var)) & 1 == 1
}

pub fn fill_assignment(row: usize, out: &mut [bool]) {
    let n = out.len();
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = row_bit(row, i, n);
    }
}

pub fn parse_bit_str(bits: &str) -> Option<Vec<bool>> {
    bits.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

pub fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and() -> TruthTable {
        TruthTable::from_bit_str("0001").unwrap()
    }

    fn xor() -> TruthTable {
        TruthTable::from_bit_str("0110").unwrap()
    }

    fn bind(pairs: &[(&str, bool)]) -> AssignmentPrefix {
        AssignmentPrefix::new(pairs.iter().map(|(n, b)| (n.to_string(), *b)).collect()).unwrap()
    }

    #[test]
    fn cofactor_of_and() {
        let hi = and().cofactor(&bind(&[("x1", true)])).unwrap();
        assert_eq!(hi.input_names(), ["x2"]);
        assert_eq!(hi.column(0), [false, true]);
        let lo = and().cofactor(&bind(&[("x1", false)])).unwrap();
        assert_eq!(lo.column(0), [false, false]);
        assert_eq!(lo.is_constant(), Some(vec![false]));
    }

    #[test]
    fn cofactor_of_xor_is_not() {
        let c = xor().cofactor(&bind(&[("x2", true)])).unwrap();
        assert_eq!(c.input_names(), ["x1"]);
        assert_eq!(c.column(0), [true, false]);
    }

    #[test]
    fn cofactor_rejects_unknown_variable() {
        let err = and().cofactor(&bind(&[("y", true)])).unwrap_err();
        assert_eq!(err, TableError::UnknownVariable("y".into()));
    }

    #[test]
    fn full_cofactor_leaves_single_row() {
        let c = and().cofactor(&bind(&[("x2", true), ("x1", true)])).unwrap();
        assert_eq!(c.num_inputs(), 0);
        assert_eq!(c.column(0), [true]);
    }

    #[test]
    fn evaluate_rows() {
        assert_eq!(and().evaluate(&[true, true]).unwrap(), [true]);
        assert_eq!(and().evaluate(&[true, false]).unwrap(), [false]);
        let not = TruthTable::from_bit_str("10").unwrap();
        assert_eq!(not.evaluate(&[false]).unwrap(), [true]);
        assert!(matches!(
            and().evaluate(&[true]),
            Err(TableError::AssignmentLength { got: 1, expected: 2 })
        ));
    }

    #[test]
    fn constant_detection() {
        let zero = TruthTable::from_fn(3, |_| false).unwrap();
        assert_eq!(zero.is_constant(), Some(vec![false]));
        assert_eq!(and().is_constant(), None);
    }

    #[test]
    fn support_skips_dummy_variables() {
        let f = TruthTable::from_fn(3, |x| x[0] ^ x[2]).unwrap();
        assert_eq!(f.support(), vec![0, 2]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            TruthTable::new(vec!["a".into()], vec!["a".into()], vec![vec![false, true]]),
            Err(TableError::DuplicateName(_))
        ));
        assert!(matches!(
            TruthTable::new(vec!["a".into()], vec!["f".into()], vec![vec![false]]),
            Err(TableError::ColumnLength { .. })
        ));
        assert!(matches!(
            TruthTable::from_fn(21, |_| false),
            Err(TableError::TooManyInputs { got: 21, limit: 20 })
        ));
        assert!(AssignmentPrefix::new(vec![("a".into(), true), ("a".into(), false)]).is_err());
    }

    #[test]
    fn pattern_ids_group_rows() {
        let t = TruthTable::new(
            default_input_names(2),
            vec!["f".into(), "g".into()],
            vec![vec![false, true, true, false], vec![false, false, false, false]],
        )
        .unwrap();
        assert_eq!(t.pattern_ids(), (vec![0, 1, 1, 0], 2));
    }
}
