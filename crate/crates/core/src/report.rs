//! Tabular results shared by all experiments.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Value::Num(x) => Some(x),
            Value::Int(i) => Some(i as f64),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Value::Num(x) => fmt_g12(*x),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Value {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Value {
        Value::Int(x as i64)
    }
}

impl From<i64> for Value {
    fn from(x: i64) -> Value {
        Value::Int(x)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Value {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Value {
        Value::Text(x.to_string())
    }
}

impl From<String> for Value {
    fn from(x: String) -> Value {
        Value::Text(x)
    }
}

/// Formats with 12 significant digits, like C's `%.12g`.
pub fn fmt_g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp) = sci.split_once('e').unwrap();
    let e: i32 = exp.parse().unwrap();
    if e < -5 || e >= 12 {
        let mant = trim_zeros(mant);
        format!("{}e{}{:02}", mant, if e < 0 { '-' } else { '+' }, e.abs())
    } else {
        let decimals = (11 - e).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A titled table with summary entries and a pass/fail tally.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(String, Value)>,
    pub violations: usize,
    pub worst_margin: Option<f64>,
    pub errors: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Report {
        Report {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            violations: 0,
            worst_margin: None,
            errors: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        let value = value.into();
        if let Some(e) = self.summary.iter_mut().find(|e| e.0 == key) {
            e.1 = value;
        } else {
            self.summary.push((key.to_string(), value));
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.summary.iter().find(|e| e.0 == key).map(|e| &e.1)
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key).and_then(Value::as_f64)
    }

    pub fn get_bool(&self, key: &str) -> Option<bool> {
        match self.get(key) {
            Some(Value::Bool(b)) => Some(*b),
            _ => None,
        }
    }

    pub fn get_text(&self, key: &str) -> Option<&str> {
        match self.get(key) {
            Some(Value::Text(s)) => Some(s),
            _ => None,
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect())
    }

    /// Records a checked inequality with `margin = rhs − lhs`; it counts as a
    /// violation only when the margin is below `−slack`.
    pub fn record_margin(&mut self, margin: f64, slack: f64) -> bool {
        self.worst_margin = Some(self.worst_margin.map_or(margin, |w| w.min(margin)));
        let violated = margin < -slack;
        if violated {
            self.violations += 1;
        }
        violated
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.errors.is_empty()
    }

    /// Plain-text rendering: title, summary entries, then the table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        for (k, v) in &self.summary {
            let _ = writeln!(out, "  {k}: {}", v.render());
        }
        let _ = writeln!(out, "  violations: {}", self.violations);
        if let Some(w) = self.worst_margin {
            let _ = writeln!(out, "  worst margin: {}", fmt_g12(w));
        }
        for e in &self.errors {
            let _ = writeln!(out, "  error: {e}");
        }
        if !self.rows.is_empty() {
            let _ = writeln!(out, "{}", self.columns.join("\t"));
            for r in &self.rows {
                let cells: Vec<String> = r.iter().map(Value::render).collect();
                let _ = writeln!(out, "{}", cells.join("\t"));
            }
        }
        out
    }
}
