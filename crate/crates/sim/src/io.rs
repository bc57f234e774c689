//! Output file formats.
//!
//! Tables are written either as CSV with a fixed header and 17 significant
//! digits per float, or as a JSON array of row objects with the same keys.
//! Peak reports and metadata are always JSON.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use dtc_core::spectral::{PeakReport, Spectrum};

use crate::config::OutputFormat;
use crate::error::{SimError, SimResult};

pub const SERIES_COLUMNS: [&str; 2] = ["period_index", "magnetization"];
pub const SPECTRUM_COLUMNS: [&str; 2] = ["nu", "power"];

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(usize),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Float(x) => json!(x),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

/// Scientific notation with 17 significant digits, enough to round-trip any f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn extension(format: OutputFormat) -> &'static str {
        match format {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }

    /// Writes `<dir>/<stem>.<ext>` and returns the path.
    pub fn write(&self, dir: &Path, stem: &str, format: OutputFormat) -> SimResult<PathBuf> {
        let path = dir.join(format!("{stem}.{}", Self::extension(format)));
        let bytes = match format {
            OutputFormat::Csv => self.to_csv(&path)?,
            OutputFormat::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: Map<String, Value> =
                            self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect();
                        Value::Object(obj)
                    })
                    .collect();
                json_bytes(&Value::Array(rows))
            }
        };
        fs::write(&path, bytes).map_err(|e| SimError::io(&path, e))?;
        Ok(path)
    }

    fn to_csv(&self, path: &Path) -> SimResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let as_io = |e: csv::Error| SimError::io(path, std::io::Error::other(e));
        w.write_record(&self.columns).map_err(as_io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(as_io)?;
        }
        w.into_inner().map_err(|e| SimError::io(path, std::io::Error::other(e.to_string())))
    }
}

pub fn series_table(series: &[f64]) -> Table {
    let mut t = Table::new(&SERIES_COLUMNS);
    for (n, s) in series.iter().enumerate() {
        t.push(vec![Cell::Int(n), Cell::Float(*s)]);
    }
    t
}

pub fn spectrum_table(spec: &Spectrum) -> Table {
    let mut t = Table::new(&SPECTRUM_COLUMNS);
    for (nu, p) in spec.frequencies.iter().zip(&spec.power) {
        t.push(vec![Cell::Float(*nu), Cell::Float(*p)]);
    }
    t
}

pub fn report_json(label: &str, report: &PeakReport, dominance: f64) -> Value {
    json!({
        "label": label,
        "height_at_half": report.height_at_half,
        "global_max_at_half": report.global_max_at_half,
        "satellites": report.satellites.iter().map(|(nu, p)| json!({ "nu": nu, "power": p })).collect::<Vec<_>>(),
        "splitting": report.splitting,
        "largest_satellite": report.largest_satellite(),
        "dtc_signature": report.dtc_signature(dominance),
    })
}

/// Pretty JSON with a trailing newline.
pub fn json_bytes(value: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("JSON values always serialize");
    out.push(b'\n');
    out
}

pub fn write_json(path: &Path, value: &Value) -> SimResult<()> {
    fs::write(path, json_bytes(value)).map_err(|e| SimError::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> SimResult<()> {
    fs::create_dir_all(dir).map_err(|e| SimError::io(dir, e))
}

/// Reads a magnetization series written by [`series_table`], as CSV or JSON
/// (chosen by extension). Period indices must run `0, 1, 2, …`.
pub fn read_series(path: &Path) -> SimResult<Vec<f64>> {
    let input_err = |reason: String| SimError::Input {
        path: path.to_owned(),
        reason,
    };
    let text = fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
    let rows: Vec<(usize, f64)> = if path.extension().is_some_and(|e| e == "json") {
        let value: Value = serde_json::from_str(&text).map_err(|e| input_err(e.to_string()))?;
        let arr = value.as_array().ok_or_else(|| input_err("expected a JSON array of rows".into()))?;
        arr.iter()
            .enumerate()
            .map(|(i, row)| {
                let idx = row.get("period_index").and_then(Value::as_u64);
                let mag = row.get("magnetization").and_then(Value::as_f64);
                match (idx, mag) {
                    (Some(n), Some(s)) => Ok((n as usize, s)),
                    _ => Err(input_err(format!("row {i}: needs `period_index` and `magnetization`"))),
                }
            })
            .collect::<SimResult<_>>()?
    } else {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| input_err(e.to_string()))?.clone();
        if header.iter().collect::<Vec<_>>() != SERIES_COLUMNS {
            return Err(input_err(format!(
                "header must be `{}`, found `{}`",
                SERIES_COLUMNS.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        reader
            .records()
            .enumerate()
            .map(|(i, rec)| {
                let rec = rec.map_err(|e| input_err(e.to_string()))?;
                let line = i + 2;
                let n = rec[0]
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| input_err(format!("line {line}: period_index: {e}")))?;
                let s = rec[1]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| input_err(format!("line {line}: magnetization: {e}")))?;
                Ok((n, s))
            })
            .collect::<SimResult<_>>()?
    };
    if rows.is_empty() {
        return Err(input_err("series is empty".into()));
    }
    if let Some((i, _)) = rows.iter().enumerate().find(|(i, r)| r.0 != *i) {
        return Err(input_err(format!("row {i}: period_index must be {i}")));
    }
    Ok(rows.into_iter().map(|r| r.1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 123456.789, 0.0] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn series_round_trip_both_formats() {
        let dir = tempfile::tempdir().unwrap();
        let series = [1.0, -0.25, 1.0 / 3.0, -1e-17];
        for format in [OutputFormat::Csv, OutputFormat::Json] {
            let path = series_table(&series).write(dir.path(), "series", format).unwrap();
            assert_eq!(read_series(&path).unwrap(), series);
        }
    }

    #[test]
    fn malformed_series_files() {
        let dir = tempfile::tempdir().unwrap();
        let bad_header = dir.path().join("a.csv");
        fs::write(&bad_header, "n,m\n0,1\n").unwrap();
        assert!(matches!(read_series(&bad_header), Err(SimError::Input { .. })));
        let gap = dir.path().join("b.csv");
        fs::write(&gap, "period_index,magnetization\n0,1\n2,1\n").unwrap();
        assert!(read_series(&gap).is_err());
        let empty = dir.path().join("c.csv");
        fs::write(&empty, "period_index,magnetization\n").unwrap();
        assert!(read_series(&empty).is_err());
    }
}
