// SPDX-License-Identifier: Apache-2.0

//! Reader and writer for a completely specified subset of the espresso PLA
//! format.
//!
//! Accepted directives: `.i`, `.o`, `.p`, `.ilb`, `.ob`, `.e`. Input fields
//! use `0`, `1` and `-`; output fields only `0` and `1`. Assignments not
//! covered by any row map every output to 0.

use std::fmt::Write as _;

use thiserror::Error;

use crate::truth_table::{default_input_names, TableError, TruthTable, DEFAULT_MAX_INPUTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: row conflicts with an earlier row on assignment {assignment}")]
    Conflict { line: usize, assignment: String },
    #[error("{got} inputs exceed the limit of {limit}")]
    TooManyInputs { got: usize, limit: usize },
    #[error(transparent)]
    Table(#[from] TableError),
}

fn syntax(line: usize, message: impl Into<String>) -> PlaError {
    PlaError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn parse_pla(text: &str) -> Result<TruthTable, PlaError> {
    parse_pla_with_limit(text, DEFAULT_MAX_INPUTS)
}

pub fn parse_pla_with_limit(text: &str, max_inputs: usize) -> Result<TruthTable, PlaError> {
    let mut n: Option<usize> = None;
    let mut m: Option<usize> = None;
    let mut input_names: Option<Vec<String>> = None;
    let mut output_names: Option<Vec<String>> = None;
    // Per output column: row values plus the line that first set each row.
    let mut columns: Vec<Vec<bool>> = Vec::new();
    let mut owner: Vec<usize> = Vec::new();
    let mut ended = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if ended {
            return Err(syntax(line_no, "content after .e"));
        }
        let mut fields = line.split_whitespace();
        let head = fields.next().unwrap();
        if let Some(directive) = head.strip_prefix('.') {
            let args: Vec<&str> = fields.collect();
            match directive {
                "i" | "o" => {
                    if !columns.is_empty() || !owner.is_empty() {
                        return Err(syntax(line_no, format!(".{directive} after data rows")));
                    }
                    let value = single_count(&args, line_no, directive)?;
                    if directive == "i" {
                        if value == 0 {
                            return Err(syntax(line_no, ".i must be at least 1"));
                        }
                        let limit = max_inputs.min(crate::truth_table::HARD_MAX_INPUTS);
                        if value > limit {
                            return Err(PlaError::TooManyInputs { got: value, limit });
                        }
                        n = Some(value);
                    } else {
                        if value == 0 {
                            return Err(syntax(line_no, ".o must be at least 1"));
                        }
                        m = Some(value);
                    }
                }
                "p" => {
                    single_count(&args, line_no, "p")?;
                }
                "ilb" => input_names = Some(args.iter().map(|s| s.to_string()).collect()),
                "ob" => output_names = Some(args.iter().map(|s| s.to_string()).collect()),
                "e" | "end" => ended = true,
                "type" => {
                    if args != ["f"] {
                        return Err(syntax(line_no, "only `.type f` is supported"));
                    }
                }
                other => return Err(syntax(line_no, format!("unsupported directive .{other}"))),
            }
            continue;
        }

        let (Some(n), Some(m)) = (n, m) else {
            return Err(syntax(line_no, "data row before .i and .o"));
        };
        if columns.is_empty() {
            columns = vec![vec![false; 1 << n]; m];
            owner = vec![0; 1 << n];
        }
        let input_field = head;
        let output_field: String = fields.collect();
        if input_field.len() != n {
            return Err(syntax(
                line_no,
                format!("input field has {} characters, expected {n}", input_field.len()),
            ));
        }
        if output_field.len() != m {
            return Err(syntax(
                line_no,
                format!("output field has {} characters, expected {m}", output_field.len()),
            ));
        }
        let mut outputs = Vec::with_capacity(m);
        for c in output_field.chars() {
            match c {
                '0' => outputs.push(false),
                '1' => outputs.push(true),
                '-' | '~' | '2' => return Err(syntax(line_no, "output don't-cares are not supported")),
                other => return Err(syntax(line_no, format!("invalid output character `{other}`"))),
            }
        }
        let mut base = 0usize;
        let mut free = Vec::new();
        for (i, c) in input_field.chars().enumerate() {
            let bit = 1usize << (n - 1 - i);
            match c {
                '0' => {}
                '1' => base |= bit,
                '-' => free.push(bit),
                other => return Err(syntax(line_no, format!("invalid input character `{other}`"))),
            }
        }
        for sub in 0..(1usize << free.len()) {
            let row =
                free.iter()
                    .enumerate()
                    .fold(base, |acc, (j, &bit)| if sub >> j & 1 == 1 { acc | bit } else { acc });
            if owner[row] != 0 {
                if columns.iter().zip(&outputs).any(|(c, &v)| c[row] != v) {
                    return Err(PlaError::Conflict {
                        line: line_no,
                        assignment: format_row(row, n),
                    });
                }
                continue;
            }
            owner[row] = line_no;
            for (c, &v) in columns.iter_mut().zip(&outputs) {
                c[row] = v;
            }
        }
    }

    let n = n.ok_or_else(|| syntax(0, "missing .i"))?;
    let m = m.ok_or_else(|| syntax(0, "missing .o"))?;
    if columns.is_empty() {
        columns = vec![vec![false; 1 << n]; m];
    }
    let inputs = match input_names {
        Some(names) if names.len() == n => names,
        Some(names) => return Err(syntax(0, format!(".ilb lists {} names, expected {n}", names.len()))),
        None => default_input_names(n),
    };
    let outputs = match output_names {
        Some(names) if names.len() == m => names,
        Some(names) => return Err(syntax(0, format!(".ob lists {} names, expected {m}", names.len()))),
        None if m == 1 => vec!["f".to_string()],
        None => (1..=m).map(|i| format!("f{i}")).collect(),
    };
    Ok(TruthTable::with_limit(inputs, outputs, columns, max_inputs)?)
}

fn single_count(args: &[&str], line: usize, directive: &str) -> Result<usize, PlaError> {
    match args {
        [value] => value
            .parse()
            .map_err(|_| syntax(line, format!("invalid count for .{directive}: `{value}`"))),
        _ => Err(syntax(line, format!(".{directive} takes exactly one count"))),
    }
}

fn format_row(row: usize, n: usize) -> String {
    (0..n)
        .map(|i| if (row >> (n - 1 - i)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Writes one fully specified row per assignment with at least one output set.
pub fn write_pla(f: &TruthTable) -> String {
    let n = f.num_inputs();
    let rows: Vec<usize> = (0..f.num_rows())
        .filter(|&r| f.columns().iter().any(|c| c[r]))
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, ".i {n}");
    let _ = writeln!(out, ".o {}", f.num_outputs());
    let _ = writeln!(out, ".ilb {}", f.input_names().join(" "));
    let _ = writeln!(out, ".ob {}", f.output_names().join(" "));
    let _ = writeln!(out, ".p {}", rows.len());
    for r in rows {
        let outputs: String = f.columns().iter().map(|c| if c[r] { '1' } else { '0' }).collect();
        let _ = writeln!(out, "{} {}", format_row(r, n), outputs);
    }
    out.push_str(".e\n");
    out
}
