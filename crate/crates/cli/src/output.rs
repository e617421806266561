use std::io::{self, Write};

use serde_json::{json, Map, Value};
use thermo_core::ExtendedReal;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Ext(ExtendedReal),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<ExtendedReal> for Cell {
    fn from(x: ExtendedReal) -> Self {
        Cell::Ext(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

/// 17 significant digits; infinities as `inf` / `-inf`.
fn number(x: f64) -> String {
    ExtendedReal::from_f64(x).to_string()
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_owned()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => number(*x),
            Cell::Ext(x) => x.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => quote(s),
        }
    }

    fn json(&self) -> Value {
        let ext = |x: ExtendedReal| match x {
            ExtendedReal::Finite(v) => json!(v),
            ExtendedReal::PosInf => json!("inf"),
            ExtendedReal::NegInf => json!("-inf"),
        };
        match self {
            Cell::Num(x) => ext(ExtendedReal::from_f64(*x)),
            Cell::Ext(x) => ext(*x),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn write_json(&self, config: Map<String, Value>, out: &mut impl Write) -> io::Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({ "config": config, "columns": self.columns, "rows": rows });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)
    }
}
