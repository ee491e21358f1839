//! CSV ingestion for interval micro data and grouped tables.
//!
//! Interval files carry the header `lower,upper`; grouped files add a `count`
//! column. An empty `upper` marks an unbounded top interval, closed at the
//! top-code multiplier times the largest finite endpoint in the file.

use std::path::Path;

use ineqbounds::types::{GroupedTable, IntervalObservation};

use crate::error::{CliError, Result};
use crate::format::g17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Shape {
    #[default]
    Auto,
    Intervals,
    Grouped,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Intervals(Vec<IntervalObservation>),
    Grouped(GroupedTable),
}

pub const DEFAULT_TOP_CODE_MULTIPLIER: f64 = 2.0;

struct Row {
    line: usize,
    lower: f64,
    upper: Option<f64>,
    count: Option<i64>,
}

fn parse_field<T: std::str::FromStr>(raw: &str, line: usize, column: &str) -> Result<T> {
    raw.parse::<T>().map_err(|_| CliError::Parse {
        line,
        column: column.into(),
        message: format!("cannot parse {raw:?}"),
    })
}

pub fn ingest(path: &Path, shape: Shape, top_code_multiplier: f64) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    ingest_str(&text, shape, top_code_multiplier)
}

pub fn ingest_str(text: &str, shape: Shape, top_code_multiplier: f64) -> Result<Dataset> {
    if top_code_multiplier.is_nan() || top_code_multiplier <= 1.0 {
        return Err(CliError::Config("top-code multiplier must exceed 1".into()));
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CliError::Parse { line: 1, column: String::new(), message: e.to_string() })?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let lower_col = col("lower").ok_or_else(|| CliError::Parse {
        line: 1,
        column: "lower".into(),
        message: "missing column".into(),
    })?;
    let upper_col = col("upper").ok_or_else(|| CliError::Parse {
        line: 1,
        column: "upper".into(),
        message: "missing column".into(),
    })?;
    let count_col = col("count");
    let grouped = match (shape, count_col) {
        (Shape::Auto, c) => c.is_some(),
        (Shape::Grouped, Some(_)) => true,
        (Shape::Grouped, None) => {
            return Err(CliError::Parse { line: 1, column: "count".into(), message: "missing column".into() })
        }
        (Shape::Intervals, _) => false,
    };

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            column: String::new(),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| record.get(i).unwrap_or("");
        let lower = parse_field::<f64>(field(lower_col), line, "lower")?;
        let upper = match field(upper_col) {
            "" => None,
            raw => Some(parse_field::<f64>(raw, line, "upper")?),
        };
        let count = if grouped {
            let c = count_col.expect("grouped files have a count column");
            let n = parse_field::<i64>(field(c), line, "count")?;
            if n < 0 {
                return Err(CliError::NegativeCount { line });
            }
            Some(n)
        } else {
            None
        };
        for (v, name) in [(Some(lower), "lower"), (upper, "upper")] {
            if v.is_some_and(|v| !v.is_finite()) {
                return Err(CliError::Parse { line, column: name.into(), message: "value must be finite".into() });
            }
        }
        rows.push(Row { line, lower, upper, count });
    }
    if rows.is_empty() {
        return Err(CliError::Parse { line: 1, column: String::new(), message: "no data rows".into() });
    }

    let largest = rows.iter().flat_map(|r| [Some(r.lower), r.upper]).flatten().fold(f64::NEG_INFINITY, f64::max);
    let top = top_code_multiplier * largest;
    let close = |r: &Row| {
        r.upper.unwrap_or_else(|| {
            log::info!("line {}: open top interval from {} closed at {}", r.line, g17(r.lower), g17(top));
            top
        })
    };

    if grouped {
        for (i, r) in rows.iter().enumerate() {
            if r.upper.is_none() && i + 1 != rows.len() {
                return Err(CliError::Parse {
                    line: r.line,
                    column: "upper".into(),
                    message: "only the last bracket may be open".into(),
                });
            }
        }
        let brackets: Vec<(f64, f64)> = rows.iter().map(|r| (r.lower, close(r))).collect();
        for (w, r) in brackets.windows(2).zip(&rows[1..]) {
            if w[0].1 > w[1].0 {
                return Err(CliError::Overlap { line: r.line, upper: w[0].1, lower: w[1].0 });
            }
        }
        let counts = rows.iter().map(|r| r.count.expect("grouped rows carry counts") as u64).collect();
        Ok(Dataset::Grouped(GroupedTable::new(brackets, counts)?))
    } else {
        rows.iter()
            .map(|r| {
                IntervalObservation::new(r.lower, close(r)).map_err(|e| CliError::Parse {
                    line: r.line,
                    column: "upper".into(),
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Dataset::Intervals)
    }
}

/// Grouped CSV that [`ingest_str`] reads back to the same table.
pub fn emit_grouped(table: &GroupedTable) -> String {
    let mut out = String::from("lower,upper,count\n");
    for (&(lo, hi), &c) in table.brackets().iter().zip(table.counts()) {
        out.push_str(&format!("{},{},{c}\n", g17(lo), g17(hi)));
    }
    out
}
