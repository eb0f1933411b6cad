// SPDX-License-Identifier: Apache-2.0

//! Primitive gate libraries and per-gate information reports.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::info::{self, Bits, InputDistribution, MetricError};
use crate::truth_table::{bit_string, parse_bit_str, TruthTable};

/// Library gates may have at most this many inputs unless configured otherwise.
pub const DEFAULT_MAX_GATE_INPUTS: usize = 4;

/// Reserved name of every gate's output pin.
pub const OUTPUT_PIN: &str = "O";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LibraryError {
    #[error("invalid library JSON: {0}")]
    Json(String),
    #[error("gate library is empty")]
    Empty,
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("duplicate gate name `{0}`")]
    DuplicateGate(String),
    #[error("gate `{name}` has {got} inputs, allowed range is 1..={limit}")]
    Arity { name: String, got: usize, limit: usize },
    #[error("gate `{name}`: truth table has {got} characters, expected {expected}")]
    TableLength { name: String, got: usize, expected: usize },
    #[error("gate `{name}`: invalid truth table `{bits}`")]
    TableChars { name: String, bits: String },
    #[error("gate `{name}`: invalid pin list ({reason})")]
    Pins { name: String, reason: String },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A named single-output primitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    name: String,
    table: TruthTable,
}

impl Gate {
    pub fn new(name: &str, inputs: &[&str], bits: &str) -> Result<Gate, LibraryError> {
        GateRecord {
            name: name.to_string(),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            bits: bits.to_string(),
        }
        .into_gate(DEFAULT_MAX_GATE_INPUTS)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    pub fn arity(&self) -> usize {
        self.table.num_inputs()
    }

    pub fn pins(&self) -> &[String] {
        self.table.input_names()
    }

    /// Output for the given pin values.
    pub fn eval(&self, pins: &[bool]) -> bool {
        let row = pins.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
        self.table.column(0)[row]
    }

    /// True when the output is invariant under every permutation of pins.
    pub fn is_symmetric(&self) -> bool {
        let col = self.table.column(0);
        (0..col.len()).all(|r| col[r] == col[sorted_row(r)])
    }
}

/// Row index with the same number of ones packed to the low-order end.
fn sorted_row(row: usize) -> usize {
    (1usize << row.count_ones()) - 1
}

/// On-disk form of a gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub name: String,
    pub inputs: Vec<String>,
    pub bits: String,
}

impl GateRecord {
    fn into_gate(self, max_inputs: usize) -> Result<Gate, LibraryError> {
        let n = self.inputs.len();
        if n == 0 || n > max_inputs {
            return Err(LibraryError::Arity {
                name: self.name,
                got: n,
                limit: max_inputs,
            });
        }
        let mut seen = HashSet::new();
        for pin in &self.inputs {
            if pin == OUTPUT_PIN {
                return Err(LibraryError::Pins {
                    name: self.name.clone(),
                    reason: format!("`{OUTPUT_PIN}` is reserved for the output"),
                });
            }
            if !seen.insert(pin.as_str()) {
                return Err(LibraryError::Pins {
                    name: self.name.clone(),
                    reason: format!("duplicate pin `{pin}`"),
                });
            }
        }
        if self.bits.chars().count() != 1 << n {
            return Err(LibraryError::TableLength {
                name: self.name,
                got: self.bits.chars().count(),
                expected: 1 << n,
            });
        }
        let Some(column) = parse_bit_str(&self.bits) else {
            return Err(LibraryError::TableChars {
                name: self.name,
                bits: self.bits,
            });
        };
        let table = TruthTable::new(self.inputs, vec![OUTPUT_PIN.to_string()], vec![column]).map_err(|e| {
            LibraryError::Pins {
                name: self.name.clone(),
                reason: e.to_string(),
            }
        })?;
        Ok(Gate { name: self.name, table })
    }
}

impl From<&Gate> for GateRecord {
    fn from(g: &Gate) -> Self {
        GateRecord {
            name: g.name.clone(),
            inputs: g.pins().to_vec(),
            bits: bit_string(g.table.column(0)),
        }
    }
}

/// Ordered, non-empty set of uniquely named gates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateLibrary {
    gates: Vec<Gate>,
}

impl GateLibrary {
    pub fn new(gates: Vec<Gate>) -> Result<Self, LibraryError> {
        if gates.is_empty() {
            return Err(LibraryError::Empty);
        }
        let mut seen = HashSet::new();
        for g in &gates {
            if !seen.insert(g.name.as_str()) {
                return Err(LibraryError::DuplicateGate(g.name.clone()));
            }
        }
        Ok(GateLibrary { gates })
    }

    /// NOT, AND, OR and XOR over pins `A` (and `B`).
    pub fn standard() -> Self {
        let gates = vec![
            Gate::new("NOT", &["A"], "10").unwrap(),
            Gate::new("AND", &["A", "B"], "0001").unwrap(),
            Gate::new("OR", &["A", "B"], "0111").unwrap(),
            Gate::new("XOR", &["A", "B"], "0110").unwrap(),
        ];
        GateLibrary { gates }
    }

    /// Subset of `standard()` by gate name, in the given order.
    pub fn standard_subset(names: &[&str]) -> Result<Self, LibraryError> {
        let std = Self::standard();
        let gates = names
            .iter()
            .map(|n| {
                std.get(n)
                    .cloned()
                    .ok_or_else(|| LibraryError::UnknownGate(n.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Self::new(gates)
    }

    pub fn from_json(text: &str) -> Result<Self, LibraryError> {
        Self::from_json_with_limit(text, DEFAULT_MAX_GATE_INPUTS)
    }

    pub fn from_json_with_limit(text: &str, max_inputs: usize) -> Result<Self, LibraryError> {
        let records: Vec<GateRecord> = serde_json::from_str(text).map_err(|e| LibraryError::Json(e.to_string()))?;
        let gates = records
            .into_iter()
            .map(|r| r.into_gate(max_inputs))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(gates)
    }

    pub fn to_json(&self) -> String {
        let records: Vec<GateRecord> = self.gates.iter().map(GateRecord::from).collect();
        serde_json::to_string_pretty(&records).expect("gate records serialize")
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn get(&self, name: &str) -> Option<&Gate> {
        self.gates.iter().find(|g| g.name == name)
    }

    pub fn with_gate(mut self, gate: Gate) -> Result<Self, LibraryError> {
        self.gates.push(gate);
        Self::new(self.gates)
    }
}

/// Information carried from one input to the output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transmission {
    pub input: String,
    /// `H(f | x)`
    pub h_f_given_x: Bits,
    /// `I(f; x)`
    pub i_f_x: Bits,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateReport {
    pub gate: String,
    pub function: String,
    pub h_x: Bits,
    pub h_f: Bits,
    /// `H(X) - H(f)`: information lost by the gate.
    pub i_gate: Bits,
    pub transmission: Vec<Transmission>,
}

pub fn gate_report(gate: &Gate, dist: &InputDistribution) -> Result<GateReport, LibraryError> {
    let f = gate.table();
    let h_x = info::input_entropy(dist, f.num_inputs());
    let h_f = info::function_entropy(f, dist)?;
    let transmission = f
        .input_names()
        .iter()
        .map(|x| {
            Ok(Transmission {
                input: x.clone(),
                h_f_given_x: info::conditional_entropy(f, &[x.as_str()], dist)?,
                i_f_x: info::mutual_information(f, &[x.as_str()], dist)?,
            })
        })
        .collect::<Result<_, MetricError>>()?;
    Ok(GateReport {
        gate: gate.name.clone(),
        function: bit_string(f.column(0)),
        h_x,
        h_f,
        i_gate: Bits::new(h_x.value() - h_f.value()),
        transmission,
    })
}

/// Largest gate information measure in the library under uniform inputs.
pub fn library_max_measure(lib: &GateLibrary) -> Bits {
    lib.gates
        .iter()
        .map(|g| {
            gate_report(g, &InputDistribution::Uniform)
                .expect("uniform distribution fits every gate")
                .i_gate
        })
        .fold(Bits::ZERO, |a, b| if b.value() > a.value() { b } else { a })
}

/// Tabulated two-decimal information figures for the classic primitive gates.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceGate {
    pub label: &'static str,
    pub bits: &'static str,
    pub h_x: f64,
    pub h_f: f64,
    pub i_gate: f64,
    pub transmission: f64,
}

pub const REFERENCE_GATES: [ReferenceGate; 4] = [
    ReferenceGate {
        label: "NOT",
        bits: "10",
        h_x: 1.0,
        h_f: 1.0,
        i_gate: 0.0,
        transmission: 1.0,
    },
    ReferenceGate {
        label: "AND",
        bits: "0001",
        h_x: 2.0,
        h_f: 0.81,
        i_gate: 1.19,
        transmission: 0.5,
    },
    ReferenceGate {
        label: "OR",
        bits: "0111",
        h_x: 2.0,
        h_f: 0.81,
        i_gate: 1.19,
        transmission: 0.5,
    },
    ReferenceGate {
        label: "EXOR",
        bits: "0110",
        h_x: 2.0,
        h_f: 1.0,
        i_gate: 1.0,
        transmission: 1.0,
    },
];

pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Compares a uniform-input report with the tabulated reference figures for
/// the same truth table. Emits a warning for every transmission entry whose
/// tabulated value disagrees with `H(f|x)`, noting when it matches `I(f;x)`
/// instead.
pub fn reference_warnings(report: &GateReport) -> Vec<String> {
    let Some(reference) = REFERENCE_GATES.iter().find(|r| r.bits == report.function) else {
        return Vec::new();
    };
    report
        .transmission
        .iter()
        .filter(|t| round2(t.h_f_given_x.value()) != reference.transmission)
        .map(|t| {
            let alternative = if round2(t.i_f_x.value()) == reference.transmission {
                format!("; it matches the mutual information I(f;{})={}", t.input, t.i_f_x)
            } else {
                String::new()
            };
            format!(
                "{} ({}): tabulated transmission {:.1} for input {} disagrees with the conditional entropy H(f|{})={}{}",
                report.gate, reference.label, reference.transmission, t.input, t.input, t.h_f_given_x, alternative
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> InputDistribution {
        InputDistribution::Uniform
    }

    #[test]
    fn and_report() {
        let lib = GateLibrary::standard();
        let r = gate_report(lib.get("AND").unwrap(), &u()).unwrap();
        assert_eq!(r.h_x.value(), 2.0);
        assert!((r.h_f.value() - 0.811_278_124_459_133).abs() < 1e-12);
        assert!((r.i_gate.value() - 1.188_721_875_540_867).abs() < 1e-12);
        assert_eq!(r.transmission[0].h_f_given_x.value(), 0.5);
        assert_eq!(r.transmission[1].h_f_given_x.value(), 0.5);
    }

    #[test]
    fn not_and_xor_reports() {
        let lib = GateLibrary::standard();
        let not = gate_report(lib.get("NOT").unwrap(), &u()).unwrap();
        assert_eq!((not.h_x.value(), not.h_f.value(), not.i_gate.value()), (1.0, 1.0, 0.0));
        let xor = gate_report(lib.get("XOR").unwrap(), &u()).unwrap();
        assert_eq!((xor.h_x.value(), xor.h_f.value(), xor.i_gate.value()), (2.0, 1.0, 1.0));
        assert_eq!(xor.transmission[0].h_f_given_x.value(), 1.0);
    }

    #[test]
    fn and_and_or_share_measures() {
        let lib = GateLibrary::standard();
        let a = gate_report(lib.get("AND").unwrap(), &u()).unwrap();
        let o = gate_report(lib.get("OR").unwrap(), &u()).unwrap();
        assert_eq!(a.h_f, o.h_f);
        assert_eq!(a.i_gate, o.i_gate);
        assert_eq!(a.transmission, o.transmission);
    }

    #[test]
    fn max_measure_per_library() {
        let m = library_max_measure(&GateLibrary::standard_subset(&["NOT", "AND", "OR"]).unwrap());
        assert!((m.value() - 1.188_721_875_540_867).abs() < 1e-12);
        let m = library_max_measure(&GateLibrary::standard_subset(&["NOT", "XOR"]).unwrap());
        assert_eq!(m.value(), 1.0);
        let m = library_max_measure(&GateLibrary::standard_subset(&["NOT"]).unwrap());
        assert_eq!(m.value(), 0.0);
    }

    #[test]
    fn not_cell_warning() {
        let lib = GateLibrary::standard();
        let warnings: Vec<String> = lib
            .gates()
            .iter()
            .flat_map(|g| reference_warnings(&gate_report(g, &u()).unwrap()))
            .collect();
        assert_eq!(warnings.len(), 1, "{warnings:?}");
        assert!(warnings[0].starts_with("NOT"));
        assert!(warnings[0].contains("H(f|A)=0.000000"));
        assert!(warnings[0].contains("I(f;A)=1.000000"));
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let lib = GateLibrary::standard();
        assert_eq!(GateLibrary::from_json(&lib.to_json()).unwrap(), lib);
        assert_eq!(GateLibrary::from_json("[]"), Err(LibraryError::Empty));
        assert!(matches!(
            GateLibrary::from_json(r#"[{"name":"A","inputs":["a"],"bits":"101"}]"#),
            Err(LibraryError::TableLength { .. })
        ));
        assert!(matches!(
            GateLibrary::from_json(r#"[{"name":"A","inputs":["a"],"bits":"1x"}]"#),
            Err(LibraryError::TableChars { .. })
        ));
        assert!(matches!(
            GateLibrary::from_json(r#"[{"name":"A","inputs":["O"],"bits":"10"}]"#),
            Err(LibraryError::Pins { .. })
        ));
        assert!(matches!(
            GateLibrary::from_json(
                r#"[{"name":"A","inputs":["a","b","c","d","e"],"bits":"00000000000000000000000000000000"}]"#
            ),
            Err(LibraryError::Arity { got: 5, .. })
        ));
        assert!(matches!(
            GateLibrary::from_json(
                r#"[{"name":"A","inputs":["a"],"bits":"10"},{"name":"A","inputs":["a"],"bits":"01"}]"#
            ),
            Err(LibraryError::DuplicateGate(_))
        ));
        assert!(matches!(GateLibrary::from_json("{"), Err(LibraryError::Json(_))));
    }

    #[test]
    fn symmetry_detection() {
        let lib = GateLibrary::standard();
        assert!(lib.get("AND").unwrap().is_symmetric());
        assert!(lib.get("XOR").unwrap().is_symmetric());
        assert!(!Gate::new("ANDN", &["A", "B"], "0010").unwrap().is_symmetric());
        assert!(Gate::new("MAJ", &["A", "B", "C"], "00010111").unwrap().is_symmetric());
    }
}
