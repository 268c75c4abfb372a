//! JSON, CSV and table rendering with 12 significant digits.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

/// A command result: the full JSON document plus an optional tabular view
/// used by the CSV and table formats.
pub struct Output {
    pub value: Value,
    pub table: Option<Table>,
}

impl Output {
    pub fn new(value: &impl Serialize) -> Self {
        Self {
            value: serde_json::to_value(value).expect("serialisable output"),
            table: None,
        }
    }

    pub fn with_table(mut self, headers: &[&str], rows: Vec<Vec<Value>>) -> Self {
        self.table = Some(Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows,
        });
        self
    }

    pub fn render(self, format: Format) -> String {
        let value = round_value(self.value);
        match format {
            Format::Json => serde_json::to_string(&value).expect("json"),
            Format::Csv | Format::Table => {
                let table = match self.table {
                    Some(t) => Table {
                        headers: t.headers,
                        rows: t
                            .rows
                            .into_iter()
                            .map(|r| r.into_iter().map(round_value).collect())
                            .collect(),
                    },
                    None => flatten(&value),
                };
                if format == Format::Csv {
                    csv(&table)
                } else {
                    aligned(&table)
                }
            }
        }
    }
}

/// Rounds to 12 significant digits; integral results print without a
/// fractional part.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_number(n: &Number) -> Value {
    if n.is_i64() || n.is_u64() {
        return Value::Number(n.clone());
    }
    let x = round12(n.as_f64().expect("finite float"));
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        Value::Number(Number::from(x as i64))
    } else {
        Number::from_f64(x).map_or(Value::Null, Value::Number)
    }
}

pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) => round_number(&n),
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => {
            Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect())
        }
        other => other,
    }
}

fn flatten_into(prefix: &str, v: &Value, out: &mut Vec<Vec<Value>>) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_into(&key, v, out);
            }
        }
        other => out.push(vec![Value::String(prefix.to_string()), other.clone()]),
    }
}

/// Key/value view of an arbitrary document.
fn flatten(v: &Value) -> Table {
    let mut rows = Vec::new();
    flatten_into("", v, &mut rows);
    Table {
        headers: vec!["field".into(), "value".into()],
        rows,
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv(t: &Table) -> String {
    let mut lines = vec![t
        .headers
        .iter()
        .map(|h| csv_field(h))
        .collect::<Vec<_>>()
        .join(",")];
    for row in &t.rows {
        lines.push(
            row.iter()
                .map(|v| csv_field(&cell(v)))
                .collect::<Vec<_>>()
                .join(","),
        );
    }
    lines.join("\n")
}

fn aligned(t: &Table) -> String {
    let cells: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|r| r.iter().map(cell).collect())
        .collect();
    let mut widths: Vec<usize> = t.headers.iter().map(|h| h.chars().count()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |row: &[String]| {
        row.iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = vec![
        line(&t.headers),
        widths
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .join("  "),
    ];
    out.extend(cells.iter().map(|r| line(r)));
    out.join("\n")
}

/// Wraps a JSON object for error reporting on stderr.
pub fn error_document(kind: &str, message: &str) -> String {
    let mut inner = Map::new();
    inner.insert("kind".into(), Value::String(kind.into()));
    inner.insert("message".into(), Value::String(message.into()));
    let mut outer = Map::new();
    outer.insert("error".into(), Value::Object(inner));
    Value::Object(outer).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    #[allow(clippy::approx_constant)]
    fn rounding() {
        assert_eq!(round12(std::f64::consts::SQRT_2), 1.41421356237);
        assert_eq!(round12(0.1 + 0.2), 0.3);
        assert_eq!(round12(-2.5e-20), -2.5e-20);
        assert_eq!(round_value(json!(1.0)).to_string(), "1");
        assert_eq!(round_value(json!(0.30000000000000004)).to_string(), "0.3");
        assert_eq!(
            round_value(json!({"a": [2.0, 1.5]})).to_string(),
            r#"{"a":[2,1.5]}"#
        );
    }

    #[test]
    fn renders_tables() {
        let out = Output::new(&json!({"x": 1.5, "nested": {"y": "a,b"}}));
        assert_eq!(
            out.render(Format::Csv),
            "field,value\nnested.y,\"a,b\"\nx,1.5"
        );
        let out = Output::new(&json!({}))
            .with_table(&["eta", "violation"], vec![vec![json!(0.5), json!(0.25)]]);
        assert_eq!(
            out.render(Format::Table),
            "eta  violation\n---  ---------\n0.5  0.25"
        );
    }
}
