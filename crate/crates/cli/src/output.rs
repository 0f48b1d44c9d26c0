//! Tabular results and their CSV and JSON encodings.
//!
//! CSV columns are fixed: `scenario,axis,axis_value,analytic,mc,mc_stderr,trials,seed`,
//! followed by an optimizer column for optimization tables. Missing Monte Carlo
//! fields are left empty. Numbers use the shortest round-trip decimal form, so
//! output is byte-stable for identical inputs.

use std::io::{self, Write};

use relay_outage::OutageEstimate;
use serde_json::{json, Map, Value};

use crate::config::Format;

pub const COLUMNS: [&str; 8] = [
    "scenario",
    "axis",
    "axis_value",
    "analytic",
    "mc",
    "mc_stderr",
    "trials",
    "seed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub scenario: String,
    pub axis: String,
    pub axis_value: f64,
    pub analytic: f64,
    pub mc: Option<OutageEstimate>,
    pub seed: Option<u64>,
    /// Optimizing parameter value, for optimization tables.
    pub arg_opt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    /// `key = value` lines of the effective configuration.
    pub config: Vec<String>,
    /// Free-form remarks, written after the configuration.
    pub notes: Vec<String>,
    pub rows: Vec<Row>,
    /// Name of the trailing optimizer column, if present.
    pub arg_opt_name: Option<String>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl Table {
    pub fn new(config: Vec<String>) -> Self {
        Self {
            config,
            ..Self::default()
        }
    }

    pub fn write<W: Write>(&self, format: Format, out: &mut W) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
        }
    }

    pub fn to_string(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write(format, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }

    fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for line in &self.config {
            writeln!(out, "# {line}")?;
        }
        for note in &self.notes {
            writeln!(out, "# note: {note}")?;
        }
        write!(out, "{}", COLUMNS.join(","))?;
        if let Some(name) = &self.arg_opt_name {
            write!(out, ",{name}")?;
        }
        writeln!(out)?;
        for r in &self.rows {
            write!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.scenario,
                r.axis,
                r.axis_value,
                r.analytic,
                opt(r.mc.map(|m| m.value)),
                opt(r.mc.and_then(|m| m.stderr)),
                opt(r.mc.and_then(|m| m.trials)),
                opt(r.mc.and(r.seed)),
            )?;
            if self.arg_opt_name.is_some() {
                write!(out, ",{}", opt(r.arg_opt))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let config: Map<String, Value> = self
            .config
            .iter()
            .filter_map(|l| l.split_once(" = "))
            .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut o = json!({
                    "scenario": r.scenario,
                    "axis": r.axis,
                    "axis_value": r.axis_value,
                    "analytic": r.analytic,
                    "mc": r.mc.map(|m| m.value),
                    "mc_stderr": r.mc.and_then(|m| m.stderr),
                    "trials": r.mc.and_then(|m| m.trials),
                    "seed": r.mc.and(r.seed),
                });
                if let Some(name) = &self.arg_opt_name {
                    o[name.as_str()] = json!(r.arg_opt);
                }
                o
            })
            .collect();
        json!({ "config": config, "notes": self.notes, "rows": rows })
    }
}
