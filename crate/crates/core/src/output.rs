//! CSV and JSON writers for run results.
//!
//! Every file starts with metadata: the crate version, the command and the
//! resolved configuration. In CSV these are `#` comment lines above the header
//! row; in JSON they sit under `"metadata"` next to the column arrays in
//! `"columns"`. Numbers carry 9 significant digits.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::config::{OutputFormat, RunConfig};
use crate::dynamics::{EnsembleSeries, Trajectory};
use crate::error::Result;
use crate::meanfield::MeanFieldPoint;
use crate::model::boundary_curve;
use crate::protocols::Spectrum;
use crate::sweep::PhaseDiagram;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Formats like C's `%.9g`.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let p = SIGNIFICANT_DIGITS;
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
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

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match *self {
            Cell::Num(x) => format_sig(x),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            // Round-trip through the CSV text so both formats carry the same digits.
            Cell::Num(x) if x.is_finite() => format_sig(x)
                .parse::<f64>()
                .map_or(Value::Null, Value::from),
            Cell::Num(_) => Value::Null,
            Cell::Bool(b) => Value::Bool(b),
        }
    }
}

/// Column-named rows ready to be written.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let k = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

use Cell::{Bool, Num};

pub const MEANFIELD_COLUMNS: [&str; 6] = [
    "theta_rad",
    "g_rel",
    "delta_opt",
    "alpha_re",
    "alpha_im",
    "photon",
];
pub const SERIES_COLUMNS: [&str; 8] = [
    "t_ms",
    "theta_rad",
    "g_rel",
    "mean_photon",
    "std_photon",
    "mean_imbalance",
    "std_imbalance",
    "mean_atoms",
];
pub const SPECTRUM_COLUMNS: [&str; 2] = ["freq_2pikHz", "magnitude"];
pub const PHASE_DIAGRAM_COLUMNS: [&str; 5] =
    ["theta_rad", "g_rel", "photon_steady", "is_sr", "converged"];
pub const BOUNDARY_COLUMNS: [&str; 2] = ["theta_rad", "g_rel_crit"];

/// `(θ, g/g₀crit, minimiser)` rows.
pub fn meanfield_table(points: &[(f64, f64, MeanFieldPoint)]) -> Table {
    let mut t = Table::new(&MEANFIELD_COLUMNS);
    for &(theta, g_rel, p) in points {
        t.push(vec![
            Num(theta),
            Num(g_rel),
            Num(p.delta),
            Num(p.alpha.re),
            Num(p.alpha.im),
            Num(p.photon_number()),
        ]);
    }
    t
}

/// Ensemble statistics; `g0` converts the coupling trace to `g/g₀crit`.
pub fn series_table(series: &EnsembleSeries, g0: f64) -> Table {
    let mut t = Table::new(&SERIES_COLUMNS);
    for k in 0..series.len() {
        t.push(vec![
            Num(series.times[k]),
            Num(series.theta_trace[k]),
            Num(series.g_trace[k] / g0),
            Num(series.mean_photon[k]),
            Num(series.std_photon[k]),
            Num(series.mean_imbalance[k]),
            Num(series.std_imbalance[k]),
            Num(series.mean_atoms[k]),
        ]);
    }
    t
}

/// A single trajectory in the ensemble layout, with zero spread.
pub fn trajectory_table(traj: &Trajectory, g0: f64) -> Table {
    let mut t = Table::new(&SERIES_COLUMNS);
    for s in &traj.samples {
        t.push(vec![
            Num(s.t),
            Num(s.theta),
            Num(s.g / g0),
            Num(s.photon),
            Num(0.0),
            Num(s.imbalance),
            Num(0.0),
            Num(s.atoms),
        ]);
    }
    t
}

/// Frequencies converted from rad/ms to 2π × kHz.
pub fn spectrum_table(spectrum: &Spectrum) -> Table {
    let mut t = Table::new(&SPECTRUM_COLUMNS);
    for (&w, &m) in spectrum.frequencies.iter().zip(&spectrum.magnitudes) {
        t.push(vec![Num(w / TAU), Num(m)]);
    }
    t
}

pub fn phase_diagram_table(diagram: &PhaseDiagram) -> Table {
    let mut t = Table::new(&PHASE_DIAGRAM_COLUMNS);
    for (i, &theta) in diagram.grid.theta_values.iter().enumerate() {
        for (k, &g_rel) in diagram.grid.g_rel_values.iter().enumerate() {
            t.push(vec![
                Num(theta),
                Num(g_rel),
                Num(diagram.photon_steady[i][k]),
                Bool(diagram.is_sr[i][k]),
                Bool(diagram.converged[i][k]),
            ]);
        }
    }
    t
}

/// `√cosθ` sampled at `n` points over `[theta_min, theta_max]`, clipped below π/2.
pub fn boundary_table(theta_min: f64, theta_max: f64, n: usize) -> Result<Table> {
    let mut t = Table::new(&BOUNDARY_COLUMNS);
    let hi = theta_max.min(FRAC_PI_2);
    for k in 0..n {
        let theta = if n == 1 {
            theta_min
        } else {
            theta_min + (hi - theta_min) * k as f64 / (n - 1) as f64
        };
        t.push(vec![Num(theta), Num(boundary_curve(theta)?)]);
    }
    Ok(t)
}

/// What produced a file.
#[derive(Debug, Clone)]
pub struct Metadata {
    pub command: String,
    pub config: RunConfig,
}

impl Metadata {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Metadata {
            command: command.to_string(),
            config: config.clone(),
        }
    }

    fn comment_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            format!("command = \"{}\"", self.command),
        ];
        lines.extend(self.config.results_toml().lines().map(str::to_string));
        lines
    }

    fn json(&self) -> Value {
        json!({
            "crate": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config.results_json(),
        })
    }
}

pub fn write_csv<W: Write>(mut w: W, meta: &Metadata, table: &Table) -> Result<()> {
    for line in meta.comment_lines() {
        if line.is_empty() {
            writeln!(w, "#")?;
        } else {
            writeln!(w, "# {line}")?;
        }
    }
    writeln!(w, "{}", table.columns.join(","))?;
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(mut w: W, meta: &Metadata, table: &Table) -> Result<()> {
    let mut columns = Map::new();
    for (k, name) in table.columns.iter().enumerate() {
        let values: Vec<Value> = table.rows.iter().map(|r| r[k].json()).collect();
        columns.insert(name.to_string(), Value::Array(values));
    }
    let doc = json!({ "metadata": meta.json(), "columns": columns });
    serde_json::to_writer_pretty(&mut w, &doc).map_err(std::io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Writes `<dir>/<stem>.csv` or `<dir>/<stem>.json` and returns the path.
pub fn write_table(
    dir: &Path,
    stem: &str,
    format: OutputFormat,
    meta: &Metadata,
    table: &Table,
) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    let path = dir.join(format!("{stem}.{ext}"));
    let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
    match format {
        OutputFormat::Csv => write_csv(file, meta, table)?,
        OutputFormat::Json => write_json(file, meta, table)?,
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(-2.5), "-2.5");
        assert_eq!(format_sig(std::f64::consts::PI), "3.14159265");
        assert_eq!(format_sig(123456789.4), "123456789");
        assert_eq!(format_sig(1234567891.0), "1.23456789e+09");
        assert_eq!(format_sig(0.0001), "0.0001");
        assert_eq!(format_sig(0.00001234), "1.234e-05");
        assert_eq!(format_sig(9.999999999), "10");
        assert_eq!(format_sig(f64::NAN), "nan");
        assert_eq!(format_sig(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn csv_layout() {
        let cfg = RunConfig::default();
        let meta = Metadata::new("meanfield", &cfg);
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![Num(0.5), Bool(true)]);
        let mut buf = Vec::new();
        write_csv(&mut buf, &meta, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# rotsense "));
        assert!(lines.iter().any(|l| l.starts_with("# seed = 1")));
        assert!(!text.contains("threads"));
        let body: Vec<&str> = lines
            .iter()
            .copied()
            .filter(|l| !l.starts_with('#'))
            .collect();
        assert_eq!(body, ["a,b", "0.5,true"]);
    }

    #[test]
    fn json_layout() {
        let meta = Metadata::new("sweep", &RunConfig::default());
        let mut t = Table::new(&["x", "ok"]);
        t.push(vec![Num(1.0 / 3.0), Bool(false)]);
        t.push(vec![Num(f64::NAN), Bool(true)]);
        let mut buf = Vec::new();
        write_json(&mut buf, &meta, &t).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["metadata"]["command"], "sweep");
        assert_eq!(v["metadata"]["config"]["params"]["M"], 4);
        assert_eq!(v["columns"]["x"][0], 0.333333333);
        assert!(v["columns"]["x"][1].is_null());
        assert_eq!(v["columns"]["ok"][1], true);
    }

    #[test]
    fn boundary_rows() {
        let t = boundary_table(0.0, 1.45, 30).unwrap();
        assert_eq!(t.rows.len(), 30);
        assert_eq!(t.rows[0], vec![Num(0.0), Num(1.0)]);
        assert!(boundary_table(0.0, 3.0, 5).is_ok());
    }
}
