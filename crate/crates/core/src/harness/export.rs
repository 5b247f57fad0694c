//! CSV and JSON result files.
//!
//! Both formats share the column set in [`COLUMNS`]. Numbers carry 12
//! significant digits; absent values (failed points, undefined ratios) are
//! empty CSV fields and JSON `null`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{OttoError, Result};

use super::sweep::{SweepMetadata, SweepResult, SweepRow};

/// Exported columns, in file order.
pub const COLUMNS: [&str; 15] = [
    "tau_cycle_ms",
    "tau_h_ms",
    "tau_c_ms",
    "q_h",
    "q_c",
    "q_l",
    "w",
    "eta",
    "eta_int",
    "power",
    "sigma_p_sq",
    "fano",
    "n_spin",
    "closed",
    "residual",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = OttoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(OttoError::Config(format!(
                "unknown format `{other}` (csv | json)"
            ))),
        }
    }
}

/// One exported row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub tau_cycle_ms: f64,
    pub tau_h_ms: f64,
    pub tau_c_ms: f64,
    pub q_h: Option<f64>,
    pub q_c: Option<f64>,
    pub q_l: Option<f64>,
    pub w: Option<f64>,
    pub eta: Option<f64>,
    pub eta_int: Option<f64>,
    pub power: Option<f64>,
    pub sigma_p_sq: Option<f64>,
    pub fano: Option<f64>,
    pub n_spin: Option<f64>,
    pub closed: bool,
    pub residual: Option<f64>,
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        format_number(x).parse().expect("formatted float parses")
    } else {
        x
    }
}

fn format_number(x: f64) -> String {
    format!("{x:.11e}")
}

impl ResultRow {
    fn from_sweep_row(row: &SweepRow) -> Self {
        let rec = row.record.as_ref();
        let r = |f: &dyn Fn(&crate::cycle::CycleRecord) -> f64| rec.map(|x| round12(f(x)));
        Self {
            tau_cycle_ms: round12(row.tau_cycle),
            tau_h_ms: round12(row.tau_h),
            tau_c_ms: round12(row.tau_c),
            q_h: r(&|x| x.ledger.q_h),
            q_c: r(&|x| x.ledger.q_c),
            q_l: r(&|x| x.ledger.q_l),
            w: r(&|x| x.w_total),
            eta: rec.and_then(|x| x.eta).map(round12),
            eta_int: rec.and_then(|x| x.eta_int).map(round12),
            power: r(&|x| x.power),
            sigma_p_sq: r(&|x| x.sigma_p_sq),
            fano: rec.and_then(|x| x.fano).map(round12),
            n_spin: r(&|x| x.n_spin),
            closed: rec.is_some_and(|x| x.closed),
            residual: r(&|x| x.residual),
        }
    }

    fn csv_fields(&self) -> Vec<String> {
        let num = |x: f64| format_number(x);
        let opt = |x: Option<f64>| x.map(format_number).unwrap_or_default();
        vec![
            num(self.tau_cycle_ms),
            num(self.tau_h_ms),
            num(self.tau_c_ms),
            opt(self.q_h),
            opt(self.q_c),
            opt(self.q_l),
            opt(self.w),
            opt(self.eta),
            opt(self.eta_int),
            opt(self.power),
            opt(self.sigma_p_sq),
            opt(self.fano),
            opt(self.n_spin),
            self.closed.to_string(),
            opt(self.residual),
        ]
    }
}

pub fn result_rows(result: &SweepResult) -> Vec<ResultRow> {
    result.rows.iter().map(ResultRow::from_sweep_row).collect()
}

/// JSON document layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonResults {
    pub metadata: SweepMetadata,
    pub columns: Vec<String>,
    pub rows: Vec<ResultRow>,
    pub argmax_power: Option<usize>,
    pub fano_crossing_ms: Option<f64>,
}

pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| OttoError::Parse {
        path: "<csv output>".into(),
        message: e.to_string(),
    };
    w.write_record(COLUMNS).map_err(err)?;
    for row in result_rows(result) {
        w.write_record(row.csv_fields()).map_err(err)?;
    }
    w.flush().map_err(|e| OttoError::io("<csv output>", e))?;
    Ok(())
}

pub fn write_json<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let doc = JsonResults {
        metadata: result.metadata.clone(),
        columns: COLUMNS.iter().map(|s| s.to_string()).collect(),
        rows: result_rows(result),
        argmax_power: result.argmax_power,
        fano_crossing_ms: result.fano_crossing.map(round12),
    };
    serde_json::to_writer_pretty(out, &doc).map_err(|e| OttoError::Parse {
        path: "<json output>".into(),
        message: e.to_string(),
    })
}

/// Writes `result` to `path` in the requested format.
pub fn export_results(result: &SweepResult, path: &Path, format: Format) -> Result<()> {
    let file = File::create(path).map_err(|e| OttoError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let written = match format {
        Format::Csv => write_csv(result, &mut out),
        Format::Json => write_json(result, &mut out)
            .and_then(|_| writeln!(out).map_err(|e| OttoError::io(path, e))),
    };
    written.map_err(|e| match e {
        OttoError::Io { source, .. } => OttoError::io(path, source),
        OttoError::Parse { message, .. } => OttoError::Parse {
            path: path.to_path_buf(),
            message,
        },
        other => other,
    })?;
    out.flush().map_err(|e| OttoError::io(path, e))
}

fn parse_opt(s: &str) -> std::result::Result<Option<f64>, String> {
    if s.is_empty() {
        Ok(None)
    } else {
        s.parse().map(Some).map_err(|e| format!("`{s}`: {e}"))
    }
}

/// Reads a CSV written by [`export_results`], checking the header.
pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let perr = |message: String| OttoError::Parse {
        path: path.to_path_buf(),
        message,
    };
    let file = File::open(path).map_err(|e| OttoError::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let header = rdr.headers().map_err(|e| perr(e.to_string()))?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(perr(format!(
            "unexpected header {:?}",
            header.iter().collect::<Vec<_>>()
        )));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| perr(e.to_string()))?;
        let f = |i: usize| parse_opt(&rec[i]).map_err(&perr);
        let req = |i: usize| f(i)?.ok_or_else(|| perr(format!("missing {}", COLUMNS[i])));
        rows.push(ResultRow {
            tau_cycle_ms: req(0)?,
            tau_h_ms: req(1)?,
            tau_c_ms: req(2)?,
            q_h: f(3)?,
            q_c: f(4)?,
            q_l: f(5)?,
            w: f(6)?,
            eta: f(7)?,
            eta_int: f(8)?,
            power: f(9)?,
            sigma_p_sq: f(10)?,
            fano: f(11)?,
            n_spin: f(12)?,
            closed: rec[13].parse().map_err(|e| perr(format!("closed: {e}")))?,
            residual: f(14)?,
        });
    }
    Ok(rows)
}

pub fn read_json(path: &Path) -> Result<JsonResults> {
    let text = std::fs::read_to_string(path).map_err(|e| OttoError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| OttoError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(31727.123456789012), "3.17271234568e4");
        assert_eq!(round12(0.47611127131234567), 0.476111271312);
        assert_eq!(round12(0.0), 0.0);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("CSV".parse::<Format>().unwrap(), Format::Csv);
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }
}
