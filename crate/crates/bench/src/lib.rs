// SPDX-License-Identifier: Apache-2.0

//! Benchmark fixtures for the `infoengine` crate; see `benches/engine.rs`.

use infoengine::corpus::{random_function, rng_from_seed};
use infoengine::TruthTable;

/// Deterministic random function used across benchmarks.
pub fn fixture(n: usize, seed: u64) -> TruthTable {
    random_function(n, &mut rng_from_seed(seed))
}
