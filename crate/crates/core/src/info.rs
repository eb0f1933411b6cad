// SPDX-License-Identifier: Apache-2.0

//! Exact Shannon measures of Boolean functions under an input distribution.
//!
//! Everything is computed by enumerating all `2^n` assignments. Sums run in
//! row or pattern-id order so results are reproducible bit for bit.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::truth_table::{row_bit, TruthTable};

/// Rounding noise below this magnitude is clamped to zero.
pub const NOISE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("bias {value} for input {index} is outside [0, 1]")]
    BiasOutOfRange { index: usize, value: f64 },
    #[error("distribution is defined for {got} inputs, function has {expected}")]
    Arity { got: usize, expected: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

/// A non-negative quantity of information in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize)]
#[serde(transparent)]
pub struct Bits(f64);

impl Bits {
    pub const ZERO: Bits = Bits(0.0);

    /// Wraps a value, clamping negative rounding noise to zero.
    ///
    /// Panics on NaN, infinities and genuinely negative values.
    pub fn new(value: f64) -> Bits {
        assert!(value.is_finite(), "information must be finite, got {value}");
        // `<=` also catches -0.0, which an empty f64 sum produces.
        if value <= 0.0 {
            assert!(value > -1e-9, "information must be non-negative, got {value}");
            return Bits(0.0);
        }
        Bits(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{:.*}", p, self.0),
            None => write!(f, "{:.6}", self.0),
        }
    }
}

/// Probability model over the `2^n` input assignments.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InputDistribution {
    Uniform,
    /// Mutually independent inputs; entry `i` is `P(x_{i+1} = 1)`.
    Independent {
        biases: Vec<f64>,
    },
    /// One probability per assignment, in row-index order.
    Explicit {
        weights: Vec<f64>,
    },
}

impl InputDistribution {
    pub fn independent(biases: Vec<f64>) -> Result<Self, MetricError> {
        for (index, &value) in biases.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(MetricError::BiasOutOfRange { index, value });
            }
        }
        Ok(InputDistribution::Independent { biases })
    }

    pub fn explicit(weights: Vec<f64>) -> Result<Self, MetricError> {
        if !weights.len().is_power_of_two() {
            return Err(MetricError::NotNormalized { sum: f64::NAN });
        }
        for (index, &value) in weights.iter().enumerate() {
            if value < 0.0 || !value.is_finite() {
                return Err(MetricError::NegativeProbability { index, value });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(MetricError::NotNormalized { sum });
        }
        Ok(InputDistribution::Explicit { weights })
    }

    /// Number of inputs the distribution is tied to, if any.
    pub fn arity(&self) -> Option<usize> {
        match self {
            InputDistribution::Uniform => None,
            InputDistribution::Independent { biases } => Some(biases.len()),
            InputDistribution::Explicit { weights } => Some(weights.len().trailing_zeros() as usize),
        }
    }

    pub fn check_arity(&self, n: usize) -> Result<(), MetricError> {
        match self.arity() {
            Some(got) if got != n => Err(MetricError::Arity { got, expected: n }),
            _ => Ok(()),
        }
    }

    /// Probability of every assignment, indexed by row.
    pub fn weights(&self, n: usize) -> Result<Vec<f64>, MetricError> {
        self.check_arity(n)?;
        Ok(match self {
            InputDistribution::Uniform => vec![1.0 / (1u64 << n) as f64; 1 << n],
            InputDistribution::Independent { biases } => (0..1usize << n)
                .map(|row| {
                    biases.iter().enumerate().fold(
                        1.0,
                        |acc, (i, &p)| {
                            if row_bit(row, i, n) {
                                acc * p
                            } else {
                                acc * (1.0 - p)
                            }
                        },
                    )
                })
                .collect(),
            InputDistribution::Explicit { weights } => weights.clone(),
        })
    }
}

/// `-sum p log2 p` with `0 log 0 = 0`.
pub fn entropy(probs: &[f64]) -> Result<Bits, MetricError> {
    for (index, &value) in probs.iter().enumerate() {
        if value < 0.0 || value.is_nan() {
            return Err(MetricError::NegativeProbability { index, value });
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(MetricError::NotNormalized { sum });
    }
    Ok(Bits::new(entropy_raw(probs)))
}

/// Entropy of already validated probabilities; no checks.
pub(crate) fn entropy_raw(probs: &[f64]) -> f64 {
    let h = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .fold(0.0, |acc, &p| acc - p * p.log2());
    h.max(0.0)
}

/// Entropy of unnormalized masses, normalized by their total. Zero total
/// yields zero.
pub(crate) fn entropy_of_masses(masses: &[f64]) -> f64 {
    let total: f64 = masses.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let h = masses.iter().filter(|&&m| m > 0.0).fold(0.0, |acc, &m| {
        let p = m / total;
        acc - p * p.log2()
    });
    h.max(0.0)
}

/// Joint entropy of the given value columns under row weights.
pub fn joint_entropy(columns: &[&[bool]], weights: &[f64]) -> Bits {
    let mut masses: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
    let words = columns.len().div_ceil(64).max(1);
    for (row, &w) in weights.iter().enumerate() {
        let mut key = vec![0u64; words];
        for (j, col) in columns.iter().enumerate() {
            if col[row] {
                key[j / 64] |= 1 << (j % 64);
            }
        }
        *masses.entry(key).or_insert(0.0) += w;
    }
    let masses: Vec<f64> = masses.into_values().collect();
    Bits::new(entropy_of_masses(&masses))
}

/// `H(X)` of the joint input assignment.
pub fn input_entropy(dist: &InputDistribution, n: usize) -> Bits {
    match dist {
        InputDistribution::Uniform => Bits::new(n as f64),
        InputDistribution::Independent { biases } => {
            Bits::new(biases.iter().map(|&p| entropy_raw(&[p, 1.0 - p])).sum())
        }
        InputDistribution::Explicit { weights } => Bits::new(entropy_raw(weights)),
    }
}

/// `H(f)`: entropy of the joint output pattern.
pub fn function_entropy(f: &TruthTable, dist: &InputDistribution) -> Result<Bits, MetricError> {
    let weights = dist.weights(f.num_inputs())?;
    Ok(function_entropy_weighted(f, &weights))
}

pub(crate) fn function_entropy_weighted(f: &TruthTable, weights: &[f64]) -> Bits {
    let (ids, distinct) = f.pattern_ids();
    let mut masses = vec![0.0; distinct];
    for (id, &w) in ids.iter().zip(weights) {
        masses[*id as usize] += w;
    }
    Bits::new(entropy_of_masses(&masses))
}

fn resolve(f: &TruthTable, given: &[&str]) -> Result<Vec<usize>, MetricError> {
    given
        .iter()
        .map(|name| {
            f.input_index(name)
                .ok_or_else(|| MetricError::UnknownVariable(name.to_string()))
        })
        .collect()
}

/// `H(f | S)` for a subset `S` of the inputs, named.
pub fn conditional_entropy(f: &TruthTable, given: &[&str], dist: &InputDistribution) -> Result<Bits, MetricError> {
    let vars = resolve(f, given)?;
    let weights = dist.weights(f.num_inputs())?;
    Ok(conditional_entropy_weighted(f, &vars, &weights))
}

/// `H(f | S)` by grouping rows on the values of `vars` and averaging the
/// output entropy of each group by its probability.
pub(crate) fn conditional_entropy_weighted(f: &TruthTable, vars: &[usize], weights: &[f64]) -> Bits {
    let n = f.num_inputs();
    let (ids, distinct) = f.pattern_ids();
    let mut groups: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for (row, (&id, &w)) in ids.iter().zip(weights).enumerate() {
        let key = vars
            .iter()
            .fold(0u64, |acc, &v| (acc << 1) | u64::from(row_bit(row, v, n)));
        groups.entry(key).or_insert_with(|| vec![0.0; distinct])[id as usize] += w;
    }
    let h = groups.values().fold(0.0, |acc, masses| {
        let p: f64 = masses.iter().sum();
        acc + p * entropy_of_masses(masses)
    });
    Bits::new(h)
}

/// `I(f; S) = H(f) - H(f | S)`, clamped at zero.
pub fn mutual_information(f: &TruthTable, given: &[&str], dist: &InputDistribution) -> Result<Bits, MetricError> {
    let vars = resolve(f, given)?;
    let weights = dist.weights(f.num_inputs())?;
    let h = function_entropy_weighted(f, &weights).value();
    let hc = conditional_entropy_weighted(f, &vars, &weights).value();
    Ok(Bits::new((h - hc).max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    fn table(bits: &str) -> TruthTable {
        TruthTable::from_bit_str(bits).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&[0.25; 4]).unwrap().value(), 2.0);
        let h = entropy(&[0.25, 0.75]).unwrap().value();
        assert!((h - 0.811_278_124_459_132_9).abs() < EPS);
        assert_eq!(entropy(&[1.0]).unwrap().value(), 0.0);
        assert_eq!(entropy(&[0.0, 1.0]).unwrap().value(), 0.0);
    }

    #[test]
    fn entropy_rejects_invalid_input() {
        assert!(matches!(
            entropy(&[-0.1, 1.1]),
            Err(MetricError::NegativeProbability { index: 0, .. })
        ));
        assert!(matches!(entropy(&[0.5, 0.4]), Err(MetricError::NotNormalized { .. })));
    }

    #[test]
    fn function_entropy_examples() {
        let u = InputDistribution::Uniform;
        let h_and = function_entropy(&table("0001"), &u).unwrap().value();
        assert!((h_and - 0.811_278_124_459_132_9).abs() < EPS);
        assert_eq!(function_entropy(&table("0110"), &u).unwrap().value(), 1.0);
        let biased = InputDistribution::independent(vec![0.3, 0.9]).unwrap();
        assert_eq!(function_entropy(&table("1111"), &biased).unwrap().value(), 0.0);
    }

    #[test]
    fn input_entropy_examples() {
        assert_eq!(input_entropy(&InputDistribution::Uniform, 2).value(), 2.0);
        assert_eq!(input_entropy(&InputDistribution::Uniform, 1).value(), 1.0);
        let d = InputDistribution::independent(vec![0.5, 1.0]).unwrap();
        assert_eq!(input_entropy(&d, 2).value(), 1.0);
    }

    #[test]
    fn conditional_entropy_examples() {
        let u = InputDistribution::Uniform;
        assert_eq!(conditional_entropy(&table("0001"), &["x1"], &u).unwrap().value(), 0.5);
        assert_eq!(conditional_entropy(&table("0001"), &["x2"], &u).unwrap().value(), 0.5);
        assert_eq!(conditional_entropy(&table("0110"), &["x1"], &u).unwrap().value(), 1.0);
        assert_eq!(
            conditional_entropy(&table("0110"), &["x1", "x2"], &u).unwrap().value(),
            0.0
        );
        assert!(matches!(
            conditional_entropy(&table("0110"), &["z"], &u),
            Err(MetricError::UnknownVariable(_))
        ));
    }

    #[test]
    fn mutual_information_examples() {
        let u = InputDistribution::Uniform;
        assert_eq!(mutual_information(&table("10"), &["x1"], &u).unwrap().value(), 1.0);
        assert_eq!(mutual_information(&table("0110"), &["x1"], &u).unwrap().value(), 0.0);
        let i = mutual_information(&table("0001"), &["x1"], &u).unwrap().value();
        assert!((i - 0.311_278_124_459_132_9).abs() < EPS);
    }

    #[test]
    fn distribution_validation() {
        assert!(InputDistribution::independent(vec![1.5]).is_err());
        assert!(InputDistribution::explicit(vec![0.5, 0.6]).is_err());
        assert!(InputDistribution::explicit(vec![0.5, 0.25, 0.25]).is_err());
        assert!(InputDistribution::explicit(vec![-0.5, 1.5]).is_err());
        let d = InputDistribution::explicit(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(d.arity(), Some(2));
        assert!(matches!(
            function_entropy(&table("10"), &d),
            Err(MetricError::Arity { got: 2, expected: 1 })
        ));
    }

    #[test]
    fn independent_weights_follow_row_order() {
        let d = InputDistribution::independent(vec![0.25, 0.5]).unwrap();
        let w = d.weights(2).unwrap();
        assert_eq!(w, vec![0.375, 0.375, 0.125, 0.125]);
    }

    #[test]
    fn bits_clamps_rounding_noise() {
        assert_eq!(Bits::new(-1e-15).value(), 0.0);
        assert_eq!(format!("{:.2}", Bits::new(1.188_72)), "1.19");
    }

    #[test]
    #[should_panic]
    fn bits_rejects_negative() {
        Bits::new(-0.5);
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(Bits::new(-0.0).to_string(), "0.000000");
        assert_eq!(Bits::new(std::iter::empty::<f64>().sum()).to_string(), "0.000000");
    }
}
