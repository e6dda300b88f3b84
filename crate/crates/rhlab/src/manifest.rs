//! Run manifests and deterministic CSV output.
//!
//! Every numeric artifact the CLI writes is paired with a JSON manifest
//! recording the subcommand, its parameters, every tolerance consulted, the
//! discretization sizes, the residuals achieved and the wall time.  CSV
//! numbers are printed with 17 significant digits and fixed iteration
//! orders, so identical invocations produce byte-identical files at any
//! thread count.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub discretization: BTreeMap<String, serde_json::Value>,
    pub residuals: BTreeMap<String, f64>,
    pub wall_time_seconds: f64,
    pub version: String,
    /// Exit status the run reported (0 ok, 1 residual above tolerance).
    pub exit_code: i32,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            parameters: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            discretization: BTreeMap::new(),
            residuals: BTreeMap::new(),
            wall_time_seconds: 0.0,
            version: env!("CARGO_PKG_VERSION").to_string(),
            exit_code: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(key.to_string(), serde_json::to_value(value).unwrap());
        self
    }

    pub fn tolerance(&mut self, key: &str, value: f64) -> &mut Self {
        self.tolerances.insert(key.to_string(), value);
        self
    }

    pub fn size(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.discretization.insert(key.to_string(), serde_json::to_value(value).unwrap());
        self
    }

    pub fn residual(&mut self, key: &str, value: f64) -> &mut Self {
        self.residuals.insert(key.to_string(), value);
        self
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        let s = serde_json::to_string_pretty(self).unwrap();
        f.write_all(s.as_bytes())?;
        f.write_all(b"\n")
    }
}

/// 17-significant-digit float formatting; the same bits always print the
/// same bytes.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.16e}")
    }
}

/// Deterministic CSV table: one header row, then rows of formatted floats.
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| fmt_float(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        std::fs::write(path, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_stable() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_float(f64::NAN), "nan");
        assert_eq!(fmt_float(-f64::INFINITY), "-inf");
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn manifest_round_trips_through_json() {
        let mut m = RunManifest::new("airy");
        m.param("xmin", -10.0).param("xmax", 10.0);
        m.tolerance("quad_vs_oracle", 1e-10);
        m.residual("max_abs_diff", 3e-12);
        let s = serde_json::to_string(&m).unwrap();
        let back: RunManifest = serde_json::from_str(&s).unwrap();
        assert_eq!(back.subcommand, "airy");
        assert_eq!(back.tolerances["quad_vs_oracle"], 1e-10);
    }
}
