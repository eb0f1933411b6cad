// SPDX-License-Identifier: Apache-2.0

//! Information measures for digital logic.
//!
//! The crate quantifies Boolean functions, gate libraries and gate-level
//! netlists with exact Shannon measures (entropy, conditional entropy,
//! mutual information), and builds decision diagrams top-down by greedy
//! conditional-entropy minimization while logging how `H(f|DD)` falls to
//! zero.
//!
//! Main entry points:
//!
//! * [`pla::parse_pla`] / [`truth_table::TruthTable`] for functions;
//! * [`info`] for the measures themselves;
//! * [`gates::gate_report`] and [`geometry::geometry_capacity`] for gate libraries;
//! * [`netlist::parse_blif`] and [`flow`] for network loss, logical work,
//!   information potential and vitality;
//! * [`entropy_dd::build_entropy_dd`] and [`ordering::exhaustive_best_ordering`]
//!   for decision diagrams.

pub mod corpus;
pub mod dd;
pub mod entropy_dd;
pub mod enumerate;
pub mod flow;
pub mod gates;
pub mod geometry;
pub mod info;
pub mod netlist;
pub mod ordering;
pub mod pla;
pub mod truth_table;

pub use dd::{dd_to_truth_table, reduce, DdError, DdMode, DecisionDiagram, NodeRef};
pub use entropy_dd::{build_entropy_dd, partial_conditional_entropy, BuildTrace, EntropyDdBuilder, Frontier};
pub use flow::{
    flow_report, information_potential, logical_work, network_loss, simulate_exact, vitality, CandidateSet, FlowError,
    FlowReport, PotentialResult,
};
pub use gates::{gate_report, library_max_measure, Gate, GateLibrary, GateReport, LibraryError};
pub use geometry::{geometry_capacity, GeometryCapacity, GeometryError, GeometrySpec, Multipliers};
pub use info::{
    conditional_entropy, entropy, function_entropy, input_entropy, mutual_information, Bits, InputDistribution,
    MetricError,
};
pub use netlist::{parse_blif, Netlist, NetlistBuilder, NetlistError};
pub use ordering::{exhaustive_best_ordering, OrderingSweep};
pub use pla::{parse_pla, write_pla, PlaError};
pub use truth_table::{AssignmentPrefix, TableError, TruthTable};
