//! Tabular results rendered as JSON (array of objects) or TSV from the same cells.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Rows from serializable records; columns follow the first record's field order.
    pub fn from_records<T: serde::Serialize>(records: &[T], columns: &[&str]) -> Self {
        let mut t = Table::new(columns.iter().copied());
        for r in records {
            let Value::Object(obj) = serde_json::to_value(r).expect("records serialize") else {
                unreachable!("records are structs");
            };
            t.push(columns.iter().map(|c| obj.get(*c).cloned().unwrap_or(Value::Null)).collect());
        }
        t
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect::<Map<_, _>>()))
                    .collect();
                let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("json");
                s.push('\n');
                s
            }
            Format::Tsv => {
                let mut s = self.columns.join("\t");
                s.push('\n');
                for r in &self.rows {
                    s.push_str(&r.iter().map(tsv_cell).collect::<Vec<_>>().join("\t"));
                    s.push('\n');
                }
                s
            }
        }
    }
}

/// Strings verbatim, null as empty, everything else as compact JSON.
pub fn tsv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
