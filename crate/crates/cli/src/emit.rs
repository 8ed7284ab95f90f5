//! Report serialization: plain text or CSV, to stdout or a file.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;

use ringmod_core::report::{fmt_g12, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

/// A report plus an optional one-line result printed ahead of it in text mode.
#[derive(Debug)]
pub struct Outcome {
    pub headline: Option<String>,
    pub report: Report,
}

impl Outcome {
    pub fn new(report: Report) -> Outcome {
        Outcome { headline: None, report }
    }

    pub fn with_headline(mut self, h: String) -> Outcome {
        self.headline = Some(h);
        self
    }
}

/// The table as CSV with a header row; a report without a table is written
/// as `key,value` pairs of its summary.
pub fn to_csv(rep: &Report) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rep.columns.is_empty() {
        w.write_record(["key", "value"])?;
        for (k, v) in &rep.summary {
            w.write_record([k.as_str(), v.render().as_str()])?;
        }
    } else {
        w.write_record(&rep.columns)?;
        for row in &rep.rows {
            w.write_record(row.iter().map(|v| v.render()))?;
        }
    }
    Ok(w.into_inner().context("flushing CSV")?)
}

pub fn to_text(out: &Outcome) -> String {
    let mut s = String::new();
    if let Some(h) = &out.headline {
        s.push_str(h);
        s.push('\n');
    }
    s.push_str(&out.report.to_text());
    s
}

/// Writes the report and returns whether it passed. With CSV going to a file,
/// the text summary still goes to stdout.
pub fn emit(out: &Outcome, format: Format, path: Option<&Path>) -> Result<bool> {
    let rep = &out.report;
    let body = match format {
        Format::Csv => to_csv(rep)?,
        Format::Text => to_text(out).into_bytes(),
    };
    match path {
        Some(p) => {
            std::fs::write(p, &body).with_context(|| format!("writing {}", p.display()))?;
            if format == Format::Csv {
                let mut summary = rep.clone();
                summary.rows.clear();
                let text = to_text(&Outcome { headline: out.headline.clone(), report: summary });
                std::io::stdout().write_all(text.as_bytes())?;
            }
        }
        None => std::io::stdout().write_all(&body)?,
    }
    if !rep.passed() {
        let worst = rep.worst_margin.map(fmt_g12).unwrap_or_else(|| "n/a".into());
        eprintln!("{} violations, {} errors, worst margin {worst}", rep.violations, rep.errors.len());
    }
    Ok(rep.passed())
}
