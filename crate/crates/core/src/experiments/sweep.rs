use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::kernel::{EquationParams, GridSpec};

/// Where a sweep came from, written next to its CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub params: EquationParams<f64>,
    pub grid: GridSpec<f64>,
    pub times: Vec<f64>,
    pub seed: Option<u64>,
}

/// Table of observables, one row per value of the swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub label: String,
    pub sweep_name: String,
    pub columns: Vec<String>,
    /// `(sweep_param, observables in column order)`, sorted by `sweep_param`
    pub rows: Vec<(f64, Vec<f64>)>,
    pub provenance: Provenance,
}

impl SweepResult {
    pub fn new(label: &str, sweep_name: &str, columns: &[&str], provenance: Provenance) -> Self {
        Self {
            label: label.into(),
            sweep_name: sweep_name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            provenance,
        }
    }

    /// Inserts a row, keeping rows sorted (stable for equal parameters).
    pub fn push(&mut self, sweep_param: f64, values: Vec<f64>) {
        assert_eq!(values.len(), self.columns.len(), "row width must match the header");
        let at = self.rows.partition_point(|(p, _)| *p <= sweep_param);
        self.rows.insert(at, (sweep_param, values));
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|(_, v)| v[i]).collect())
    }

    pub fn sweep_values(&self) -> Vec<f64> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// Observables that are NaN or infinite, as `(row, column)` pairs.
    pub fn flagged(&self) -> Vec<(usize, String)> {
        let mut out = Vec::new();
        for (i, (_, vals)) in self.rows.iter().enumerate() {
            for (c, v) in self.columns.iter().zip(vals) {
                if !v.is_finite() {
                    out.push((i, c.clone()));
                }
            }
        }
        out
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source }
}

/// Sidecar path `<path>.meta`.
pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

/// Writes the sweep as CSV (header `sweep_param,<columns>`, floats in
/// shortest round-trip form) plus a `<path>.meta` sidecar.
pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    let header: Vec<&str> = std::iter::once("sweep_param").chain(result.columns.iter().map(String::as_str)).collect();
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    for (p, vals) in &result.rows {
        let rec: Vec<String> = std::iter::once(p).chain(vals).map(|v| v.to_string()).collect();
        w.write_record(&rec).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))?;

    let pv = &result.provenance;
    let mut meta = String::new();
    let _ = writeln!(meta, "label = {}", result.label);
    let _ = writeln!(meta, "sweep = {}", result.sweep_name);
    let _ = writeln!(meta, "alpha = {}", pv.params.alpha);
    let _ = writeln!(meta, "beta = {}", pv.params.beta);
    let _ = writeln!(meta, "dim = {}", pv.params.dim);
    let _ = writeln!(meta, "grid_half_extent = {}", pv.grid.half_extent);
    let _ = writeln!(meta, "grid_points_per_axis = {}", pv.grid.points_per_axis);
    let times: Vec<String> = pv.times.iter().map(|t| t.to_string()).collect();
    let _ = writeln!(meta, "times = {}", times.join(","));
    let _ = writeln!(meta, "seed = {}", pv.seed.map_or("none".to_string(), |s| format!("{s:#x}")));
    let _ = writeln!(meta, "version = {} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"));
    let mp = meta_path(path);
    fs::write(&mp, meta).map_err(|e| io_err(&mp, e))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let source = match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    };
    io_err(path, source)
}
