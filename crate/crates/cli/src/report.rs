// SPDX-License-Identifier: Apache-2.0

//! Report envelope and byte-stable JSON output.

use serde::Serialize;
use serde_json::{Number, Value};

pub const TOOL: &str = "infoengine";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Decimal places for floats in machine-readable output.
pub const MACHINE_DECIMALS: usize = 6;

#[derive(Debug, Serialize)]
pub struct ReportEnvelope<C: Serialize, P: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: C,
    pub payload: P,
    pub warnings: Vec<String>,
}

impl<C: Serialize, P: Serialize> ReportEnvelope<C, P> {
    pub fn new(command: &'static str, config: C, payload: P, warnings: Vec<String>) -> Self {
        ReportEnvelope {
            tool: TOOL,
            version: VERSION,
            command,
            config,
            payload,
            warnings,
        }
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report types serialize");
        let mut text = serde_json::to_string_pretty(&fix_floats(value)).expect("value serializes");
        text.push('\n');
        text
    }
}

/// Rewrites every non-integer number with exactly six decimals.
pub fn fix_floats(value: Value) -> Value {
    match value {
        Value::Number(n) if !n.is_i64() && !n.is_u64() => {
            let x = n.as_f64().expect("finite float");
            let text = format!("{:.*}", MACHINE_DECIMALS, x + 0.0);
            Value::Number(text.parse::<Number>().expect("decimal literal"))
        }
        Value::Array(items) => Value::Array(items.into_iter().map(fix_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, fix_floats(v))).collect()),
        other => other,
    }
}
