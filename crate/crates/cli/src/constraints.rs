//! Side-information files: a JSON array of constraint rows.
//!
//! ```json
//! [{"kind": "total_mean", "relation": "eq", "value": 1.25},
//!  {"kind": "group_mean", "group": 2, "relation": "le", "value": 2.5},
//!  {"kind": "lorenz_point", "h": 1, "value": 0.2},
//!  {"kind": "raw_row", "coefficients": [1, 0, -1], "relation": "ge", "value": 0}]
//! ```
//!
//! Group and Lorenz indices are 1-based. `relation` defaults to `eq`; `ge`
//! rows are negated into `le` form.

use std::path::Path;

use ineqbounds::types::{ConstraintRow, ConstraintSet, GroupedTable};
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn number(row: &Map<String, Value>, key: &str, at: usize) -> Result<f64> {
    row.get(key)
        .and_then(Value::as_f64)
        .filter(|v| v.is_finite())
        .ok_or_else(|| config(format!("constraint {at}: field {key:?} must be a finite number")))
}

fn index(row: &Map<String, Value>, key: &str, at: usize, groups: usize) -> Result<usize> {
    let raw = row
        .get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| config(format!("constraint {at}: field {key:?} must be a positive integer")))?;
    let i = raw as usize;
    if i == 0 || i > groups {
        return Err(CliError::BadGroupIndex { index: i, groups });
    }
    Ok(i - 1)
}

pub fn parse_constraints(path: &Path, table: &GroupedTable) -> Result<ConstraintSet> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_constraints_str(&text, table)
}

pub fn parse_constraints_str(text: &str, table: &GroupedTable) -> Result<ConstraintSet> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column().to_string(),
        message: e.to_string(),
    })?;
    let rows = doc.as_array().ok_or_else(|| config("constraint file must hold a JSON array"))?;
    let groups = table.num_groups();
    let mut set = ConstraintSet::new();
    for (k, raw) in rows.iter().enumerate() {
        let at = k + 1;
        let row = raw.as_object().ok_or_else(|| config(format!("constraint {at} is not an object")))?;
        let kind = row
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| config(format!("constraint {at}: missing \"kind\"")))?;
        let parsed = match kind {
            "total_mean" => ConstraintRow::TotalMean(number(row, "value", at)?),
            "group_mean" => ConstraintRow::GroupMean { group: index(row, "group", at, groups)?, value: number(row, "value", at)? },
            "lorenz_point" => ConstraintRow::LorenzPoint { h: index(row, "h", at, groups)?, share: number(row, "value", at)? },
            "raw_row" => {
                let coefficients = row
                    .get("coefficients")
                    .and_then(Value::as_array)
                    .ok_or_else(|| config(format!("constraint {at}: missing \"coefficients\" array")))?
                    .iter()
                    .map(|c| c.as_f64().filter(|v| v.is_finite()))
                    .collect::<Option<Vec<f64>>>()
                    .ok_or_else(|| config(format!("constraint {at}: coefficients must be finite numbers")))?;
                if coefficients.len() != table.n() {
                    return Err(config(format!(
                        "constraint {at}: {} coefficients for {} units",
                        coefficients.len(),
                        table.n()
                    )));
                }
                ConstraintRow::RawRow { coefficients, rhs: number(row, "value", at)? }
            }
            other => return Err(CliError::UnknownKind(other.to_string())),
        };
        match row.get("relation").map(|r| r.as_str()) {
            None | Some(Some("eq")) => set = set.with_equality(parsed),
            Some(Some("le")) => set = set.with_inequality(parsed),
            Some(Some("ge")) => set = set.with_inequality(parsed.negated()),
            Some(r) => return Err(config(format!("constraint {at}: unknown relation {r:?}"))),
        }
    }
    Ok(set)
}
