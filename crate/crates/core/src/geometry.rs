// SPDX-License-Identifier: Apache-2.0

//! Information capacity of a `k x k` gate geometry.
//!
//! The capacity is `M(k) * round2(max I_gate)` where `M(k)` is a configured
//! multiplier per grid side. Only `M(2) = 3` and `M(3) = 5.25` ship as
//! defaults; other sides need a user-supplied value.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::gates::{library_max_measure, round2, GateLibrary};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("unsupported geometry size {0}x{0}: no multiplier configured")]
    Unsupported(usize),
    #[error("grid side must be at least 2, got {0}")]
    SideTooSmall(usize),
    #[error("multiplier for side {side} must be positive and finite, got {value}")]
    BadMultiplier { side: usize, value: f64 },
}

/// Map from grid side to capacity multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct Multipliers(BTreeMap<usize, f64>);

impl Default for Multipliers {
    fn default() -> Self {
        Multipliers(BTreeMap::from([(2, 3.0), (3, 5.25)]))
    }
}

impl Multipliers {
    pub fn empty() -> Self {
        Multipliers(BTreeMap::new())
    }

    pub fn set(&mut self, side: usize, value: f64) -> Result<(), GeometryError> {
        if side < 2 {
            return Err(GeometryError::SideTooSmall(side));
        }
        if !(value.is_finite() && value > 0.0) {
            return Err(GeometryError::BadMultiplier { side, value });
        }
        self.0.insert(side, value);
        Ok(())
    }

    pub fn get(&self, side: usize) -> Option<f64> {
        self.0.get(&side).copied()
    }
}

#[derive(Debug, Clone)]
pub struct GeometrySpec {
    pub library: GateLibrary,
    pub side: usize,
    pub multiplier: f64,
}

impl GeometrySpec {
    pub fn new(library: GateLibrary, side: usize, multipliers: &Multipliers) -> Result<Self, GeometryError> {
        if side < 2 {
            return Err(GeometryError::SideTooSmall(side));
        }
        let multiplier = multipliers.get(side).ok_or(GeometryError::Unsupported(side))?;
        Ok(GeometrySpec {
            library,
            side,
            multiplier,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryCapacity {
    pub side: usize,
    pub multiplier: f64,
    pub max_measure: f64,
    pub max_measure_rounded: f64,
    /// Multiplier times the two-decimal max measure.
    pub capacity: f64,
    /// Multiplier times the unrounded max measure.
    pub capacity_unrounded: f64,
}

pub fn geometry_capacity(spec: &GeometrySpec) -> GeometryCapacity {
    let max_measure = library_max_measure(&spec.library).value();
    let max_measure_rounded = round2(max_measure);
    GeometryCapacity {
        side: spec.side,
        multiplier: spec.multiplier,
        max_measure,
        max_measure_rounded,
        capacity: spec.multiplier * max_measure_rounded,
        capacity_unrounded: spec.multiplier * max_measure,
    }
}
