//! CSV emission of convergence reports and energy histories.
//!
//! A report with rungs `c_1..c_m` becomes one table:
//!
//! ```text
//! epsilon,e(c_1),order(c_1),...,e(c_m),order(c_m)
//! 1,4.5038e-01,-,2.5566e-02,2.0694,...
//! ```
//!
//! Failed cells print `FAIL`, undefined orders `-`. A sibling
//! `<stem>.meta.json` carries the rest of the report.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiments::{Cell, ConvergenceReport};

/// Five significant digits with a two-digit signed exponent: `2.5566e-02`.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.4e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

pub fn format_order(o: Option<f64>) -> String {
    match o {
        Some(v) => format!("{v:.4}"),
        None => "-".into(),
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

/// Header row and data rows of a report's table.
pub fn report_rows(report: &ConvergenceReport) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec![report.row_axis.clone()];
    for label in &report.column_labels {
        header.push(format!("e({label})"));
        header.push(format!("order({label})"));
    }
    if report.columns.is_empty() {
        return (header, Vec::new());
    }
    let rows = report
        .errors
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut out = vec![report.row_labels[r].clone()];
            for (c, cell) in row.iter().enumerate() {
                out.push(match cell {
                    Cell::Value(v) => format_sci(*v),
                    Cell::Failed(_) => "FAIL".into(),
                });
                out.push(format_order(report.orders[r][c]));
            }
            out
        })
        .collect();
    (header, rows)
}

/// Write `<dir>/<stem>.csv` and `<dir>/<stem>.meta.json`; returns both paths.
pub fn write_report_csv(report: &ConvergenceReport, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let (header, rows) = report_rows(report);
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| csv_err(&csv_path, e))?;
    w.write_record(&header).map_err(|e| csv_err(&csv_path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_err(&csv_path, e))?;
    }
    w.flush().map_err(|e| Error::io(&csv_path, e))?;

    let meta_path = dir.join(format!("{stem}.meta.json"));
    let mut meta = serde_json::to_value(report)?;
    if let Some(obj) = meta.as_object_mut() {
        // Histories go to their own CSV.
        obj.remove("energy");
    }
    fs::write(&meta_path, serde_json::to_vec_pretty(&meta)?).map_err(|e| Error::io(&meta_path, e))?;
    Ok((csv_path, meta_path))
}

/// Write every energy history of a report as `row,column,epsilon,tau,step,time,energy,drift`.
pub fn write_energy_csv(report: &ConvergenceReport, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(["row", "column", "epsilon", "tau", "step", "time", "energy", "drift"])
        .map_err(|e| csv_err(path, e))?;
    for series in &report.energy {
        for s in &series.samples {
            w.write_record([
                series.row.to_string(),
                series.column.to_string(),
                report.rows[series.row].to_string(),
                report.columns[series.column].to_string(),
                s.step.to_string(),
                s.time.to_string(),
                format!("{:.16e}", s.value),
                format!("{:.16e}", s.drift),
            ])
            .map_err(|e| csv_err(path, e))?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}
