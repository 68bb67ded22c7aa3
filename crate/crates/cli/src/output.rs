use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;
use crate::error::CliError;

pub const SCHEMA: u64 = 1;

/// A finished report: summary fields, an optional row table, and whether
/// every hard assertion held.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub ok: bool,
    pub fields: Map<String, Value>,
    pub table: Option<Table>,
}

#[derive(Debug)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    /// Columns taken from the keys of the first serialized row.
    pub fn from_serialized<T: Serialize>(items: &[T]) -> Result<Self, CliError> {
        let objects: Vec<Map<String, Value>> = items.iter().map(to_object).collect::<Result<_, _>>()?;
        let columns: Vec<String> = objects.first().map(|o| o.keys().cloned().collect()).unwrap_or_default();
        let rows = objects
            .into_iter()
            .map(|mut o| columns.iter().map(|c| o.remove(c).unwrap_or(Value::Null)).collect())
            .collect();
        Ok(Self { columns, rows })
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn to_object<T: Serialize>(value: &T) -> Result<Map<String, Value>, CliError> {
    match serde_json::to_value(value)? {
        Value::Object(map) => Ok(map),
        other => Err(CliError::Runtime(format!("expected an object, got {other}"))),
    }
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self { command, ok: true, fields: Map::new(), table: None }
    }

    pub fn field(&mut self, key: &str, value: impl Serialize) -> Result<&mut Self, CliError> {
        self.fields.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(self)
    }

    pub fn extend<T: Serialize>(&mut self, value: &T) -> Result<&mut Self, CliError> {
        self.fields.extend(to_object(value)?);
        Ok(self)
    }

    pub fn require(&mut self, holds: bool) -> &mut Self {
        self.ok &= holds;
        self
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Text => Ok(self.text()),
        }
    }

    fn json(&self) -> Result<String, CliError> {
        let mut out = self.fields.clone();
        out.insert("schema".into(), SCHEMA.into());
        out.insert("command".into(), self.command.into());
        out.insert("ok".into(), self.ok.into());
        if let Some(t) = &self.table {
            let rows = t
                .rows
                .iter()
                .map(|r| Value::Object(t.columns.iter().cloned().zip(r.iter().cloned()).collect()))
                .collect();
            out.insert("rows".into(), Value::Array(rows));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(out))?;
        s.push('\n');
        Ok(s)
    }

    fn csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some(t) => {
                w.write_record(&t.columns)?;
                for row in &t.rows {
                    w.write_record(row.iter().map(cell))?;
                }
            }
            None => {
                w.write_record(self.fields.keys())?;
                w.write_record(self.fields.values().map(cell))?;
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}: {}", self.command, if self.ok { "ok" } else { "FAILED" });
        for (k, v) in &self.fields {
            let _ = writeln!(s, "  {k}: {}", cell(v));
        }
        if let Some(t) = &self.table {
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|i| cells.iter().map(|r| r[i].len()).chain([t.columns[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |items: &[String]| {
                items.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
            };
            let _ = writeln!(s, "{}", line(&t.columns));
            for r in &cells {
                let _ = writeln!(s, "{}", line(r));
            }
        }
        s
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
