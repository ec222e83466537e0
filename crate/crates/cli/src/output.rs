//! CSV and JSON artifacts.
//!
//! CSV files start with `#` metadata lines (tool version, command, series,
//! the config text), then one header row. Numbers are written with 12
//! significant digits so identical configs give byte-identical files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone)]
pub enum Artifact {
    Csv(Table),
    Json(serde_json::Value),
}

pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        // keep -0 out of the output
        let x = if x == 0.0 { 0.0 } else { x };
        format!("{x:.11e}")
    }
}

pub struct Metadata<'a> {
    pub command: &'a str,
    pub label: &'a str,
    pub config_text: &'a str,
}

pub fn render_csv(meta: &Metadata, table: &Table) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# psagen {VERSION}");
    let _ = writeln!(out, "# command: {}", meta.command);
    if !meta.label.is_empty() {
        let _ = writeln!(out, "# series: {}", meta.label);
    }
    for line in meta.config_text.lines() {
        let _ = writeln!(out, "# config: {line}");
    }
    let _ = writeln!(out, "{}", table.header.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

#[derive(Serialize)]
struct JsonEnvelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    series: &'a str,
    report: &'a serde_json::Value,
}

pub fn render_json(meta: &Metadata, value: &serde_json::Value) -> String {
    let env = JsonEnvelope {
        tool: "psagen",
        version: VERSION,
        command: meta.command,
        series: meta.label,
        report: value,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Destination per series; `None` means stdout.
pub fn destinations(base: Option<&Path>, labels: &[String]) -> Result<Vec<Option<PathBuf>>, CliError> {
    let multi = labels.len() > 1;
    match base {
        None if multi => Err(CliError::Input(
            "several series need an output path containing {label}".into(),
        )),
        None => Ok(vec![None; labels.len()]),
        Some(p) => {
            let text = p.to_string_lossy();
            if multi && !text.contains("{label}") {
                return Err(CliError::Input(format!(
                    "output path '{text}' must contain {{label}} for several series"
                )));
            }
            Ok(labels
                .iter()
                .map(|l| Some(PathBuf::from(text.replace("{label}", l))))
                .collect())
        }
    }
}
