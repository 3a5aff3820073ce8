//! Structured check results, serializable as nested JSON or flat CSV.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub n: usize,
    pub t: Option<f64>,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub rows: Vec<CheckRow>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self { suite: suite.into(), rows: Vec::new() }
    }

    /// Records a check that passes iff `residual <= bound`.
    pub fn push(&mut self, name: impl Into<String>, n: usize, t: Option<f64>, residual: f64, bound: f64) {
        let pass = residual <= bound;
        self.rows.push(CheckRow { name: name.into(), n, t, residual, bound, pass });
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.rows.extend(other.rows);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn rows_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a CheckRow> + 'a {
        self.rows.iter().filter(move |r| r.name == name)
    }

    /// Largest residual among rows called `name`.
    pub fn max_residual(&self, name: &str) -> Option<f64> {
        self.rows_named(name).map(|r| r.residual).reduce(f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Flat CSV: `name,n,t,residual,bound,pass`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["name", "n", "t", "residual", "bound", "pass"])?;
        for r in &self.rows {
            w.write_record([
                r.name.clone(),
                r.n.to_string(),
                r.t.map(|t| t.to_string()).unwrap_or_default(),
                r.residual.to_string(),
                r.bound.to_string(),
                r.pass.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Observed convergence orders `log2(e_k / e_{k+1})` along a ladder of
/// successive halvings.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}
