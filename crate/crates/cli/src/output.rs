//! Result documents in JSON and flattened CSV form.

use ineqbounds::bounds::BoundsResult;
use ineqbounds::inference::{BootstrapConfig, BootstrapResult, CiMethod, Jitter};
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};
use crate::format::{json_f64, json_pair, json_vec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    OneA,
    OneB,
    Two,
}

impl Scenario {
    pub fn label(self) -> &'static str {
        match self {
            Scenario::OneA => "1A",
            Scenario::OneB => "1B",
            Scenario::Two => "2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

pub fn bounds_document(scenario: Scenario, result: &BoundsResult, bootstrap: Option<(&BootstrapConfig, &BootstrapResult)>) -> Value {
    let d = &result.diagnostics;
    let mut doc = Map::new();
    doc.insert("index".into(), json!(result.index.name()));
    doc.insert("scenario".into(), json!(scenario.label()));
    doc.insert("lower".into(), json_f64(result.lower));
    doc.insert("upper".into(), json_f64(result.upper));
    doc.insert("width".into(), json_f64(result.width()));
    doc.insert("argmin".into(), json_vec(&result.argmin));
    doc.insert("argmax".into(), json_vec(&result.argmax));
    doc.insert(
        "diagnostics".into(),
        json!({
            "iterations": d.iterations,
            "exact_enumeration": d.exact,
            "distinct_values": d.distinct_values.map(|(a, b)| json!([a, b])),
            "warnings": d.warnings,
        }),
    );
    if let Some((config, b)) = bootstrap {
        doc.insert("bootstrap".into(), bootstrap_object(config, b));
    }
    Value::Object(doc)
}

fn bootstrap_object(config: &BootstrapConfig, b: &BootstrapResult) -> Value {
    json!({
        "replicates": config.replicates,
        "seed": config.seed,
        "alpha": json_f64(config.alpha),
        "level": json_f64(b.level),
        "ci_method": match config.ci_method {
            CiMethod::Normal => "normal",
            CiMethod::Percentile => "percentile",
        },
        "jitter": match config.jitter {
            Jitter::Off => "off",
            Jitter::Auto => "auto",
            Jitter::Always => "always",
        },
        "n": b.n,
        "t_n": json_f64(b.t_n),
        "se_lower": json_f64(b.se_lower),
        "se_upper": json_f64(b.se_upper),
        "se_width": json_f64(b.se_width),
        "ci_lower": json_pair(b.ci_lower),
        "ci_upper": json_pair(b.ci_upper),
        "normal_ci_lower": json_pair(b.normal_ci_lower),
        "normal_ci_upper": json_pair(b.normal_ci_upper),
        "percentile_ci_lower": json_pair(b.percentile_ci_lower),
        "percentile_ci_upper": json_pair(b.percentile_ci_upper),
        "failures": b.failures,
        "attempts": b.attempts,
        "jittered": b.jittered,
    })
}

pub fn to_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) if prefix.ends_with("warnings") => {
            out.push((prefix.into(), items.iter().map(cell).collect::<Vec<_>>().join("; ")))
        }
        other => out.push((prefix.into(), cell(other))),
    }
}

/// One CSV row per document; nested objects become dotted column names and
/// arrays become space-separated fields. Every document must flatten to the
/// same columns.
pub fn to_csv(docs: &[Value]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Option<Vec<String>> = None;
    for doc in docs {
        let mut fields = Vec::new();
        flatten("", doc, &mut fields);
        let names: Vec<String> = fields.iter().map(|(k, _)| k.clone()).collect();
        match &header {
            None => {
                w.write_record(&names).map_err(csv_error)?;
                header = Some(names);
            }
            Some(h) if *h != names => return Err(CliError::Config("result rows have differing columns".into())),
            Some(_) => {}
        }
        w.write_record(fields.iter().map(|(_, v)| v)).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Config(e.to_string())
}

pub fn render(docs: &[Value], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json if docs.len() == 1 => Ok(to_json(&docs[0])),
        OutputFormat::Json => Ok(to_json(&Value::Array(docs.to_vec()))),
        OutputFormat::Csv => to_csv(docs),
    }
}
