use serde::{Deserialize, Serialize};

use crate::observables::EnergySample;

/// `log(e_coarse/e_fine) / log(ratio)`, or `None` when either error is not
/// positive (printed as `-`).
pub fn observed_order(e_coarse: f64, e_fine: f64, ratio: f64) -> Option<f64> {
    if e_coarse > 0.0 && e_fine > 0.0 && ratio > 1.0 && e_coarse.is_finite() && e_fine.is_finite()
    {
        Some((e_coarse / e_fine).ln() / ratio.ln())
    } else {
        None
    }
}

/// Result of one sweep cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cell {
    Value(f64),
    Failed(String),
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            Cell::Failed(_) => None,
        }
    }
}

/// Identity of the self-convergence reference used by a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceIdentity {
    pub n_ref: usize,
    pub tau_ref: f64,
    /// Cache digests, one per row.
    pub digests: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub kind: String,
    pub scenario: String,
    pub alpha: f64,
    pub variant: String,
    /// Which clock the column axis and horizon are measured on.
    pub clock: String,
    pub horizon: String,
    pub error_norm: String,
    pub reference: Option<ReferenceIdentity>,
    pub wall_time_s: f64,
}

/// Energy history of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySeries {
    pub row: usize,
    pub column: usize,
    pub samples: Vec<EnergySample>,
}

/// A row × column table of errors with observed orders along each row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub row_axis: String,
    pub rows: Vec<f64>,
    pub row_labels: Vec<String>,
    pub column_axis: String,
    pub columns: Vec<f64>,
    pub column_labels: Vec<String>,
    pub errors: Vec<Vec<Cell>>,
    /// `orders[r][c]` compares columns `c-1` and `c`; `None` in column 0.
    pub orders: Vec<Vec<Option<f64>>>,
    /// Highlighted cells (the diagonal of the oscillatory tables).
    pub marked: Vec<(usize, usize)>,
    /// `error(row r) / error(row r+1)` per column.
    pub row_ratios: Vec<Vec<Option<f64>>>,
    /// Per row: did errors fall at least tenfold per rung down to a floor?
    pub spectral: Vec<Option<bool>>,
    pub energy: Vec<EnergySeries>,
    pub meta: ReportMeta,
}

impl ConvergenceReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        row_axis: &str,
        rows: Vec<f64>,
        row_labels: Vec<String>,
        column_axis: &str,
        columns: Vec<f64>,
        column_labels: Vec<String>,
        errors: Vec<Vec<Cell>>,
        meta: ReportMeta,
    ) -> Self {
        let mut report = Self {
            row_axis: row_axis.into(),
            rows,
            row_labels,
            column_axis: column_axis.into(),
            columns,
            column_labels,
            errors,
            orders: Vec::new(),
            marked: Vec::new(),
            row_ratios: Vec::new(),
            spectral: Vec::new(),
            energy: Vec::new(),
            meta,
        };
        report.recompute_derived();
        report
    }

    /// Refinement ratio between columns `c-1` and `c`.
    pub fn ladder_ratio(&self, c: usize) -> f64 {
        let (a, b) = (self.columns[c - 1], self.columns[c]);
        a.max(b) / a.min(b)
    }

    pub fn error(&self, row: usize, col: usize) -> Option<f64> {
        self.errors[row][col].value()
    }

    fn recompute_derived(&mut self) {
        let ncols = self.columns.len();
        self.orders = self
            .errors
            .iter()
            .map(|row| {
                (0..ncols)
                    .map(|c| {
                        if c == 0 {
                            return None;
                        }
                        match (row[c - 1].value(), row[c].value()) {
                            (Some(a), Some(b)) => observed_order(a, b, self.ladder_ratio(c)),
                            _ => None,
                        }
                    })
                    .collect()
            })
            .collect();
        self.row_ratios = (0..self.errors.len().saturating_sub(1))
            .map(|r| {
                (0..ncols)
                    .map(|c| match (self.error(r, c), self.error(r + 1, c)) {
                        (Some(a), Some(b)) if b > 0.0 => Some(a / b),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        self.spectral = vec![None; self.errors.len()];
    }

    /// Flag rows whose errors drop at least `factor`× per rung until they
    /// reach `floor`.
    pub fn flag_spectral(&mut self, factor: f64, floor: f64) {
        self.spectral = self
            .errors
            .iter()
            .map(|row| {
                let vals: Option<Vec<f64>> = row.iter().map(Cell::value).collect();
                let vals = vals?;
                Some(spectral_decay(&vals, factor, floor))
            })
            .collect();
    }

    /// Rungs along a row where the error grew after first dropping below
    /// `threshold`.
    pub fn monotone_violations(&self, row: usize, threshold: f64) -> usize {
        let vals: Vec<f64> = self.errors[row].iter().filter_map(Cell::value).collect();
        let start = match vals.iter().position(|&e| e < threshold) {
            Some(s) => s,
            None => return 0,
        };
        vals[start..].windows(2).filter(|w| w[1] > w[0]).count()
    }

    pub fn failed_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (r, row) in self.errors.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                if matches!(cell, Cell::Failed(_)) {
                    out.push((r, c));
                }
            }
        }
        out
    }
}

/// True when consecutive errors fall by at least `factor` until one is at or
/// below `floor`; later (floor-level) entries are not constrained.
pub fn spectral_decay(errors: &[f64], factor: f64, floor: f64) -> bool {
    for w in errors.windows(2) {
        if w[0] <= floor {
            return true;
        }
        if w[0] < factor * w[1] {
            return false;
        }
    }
    true
}

/// `1`, `ε/2`, `ε/2^2`, … labels for halving ladders starting at `ε = 1`;
/// plain numbers otherwise.
pub fn epsilon_labels(eps: &[f64]) -> Vec<String> {
    eps.iter()
        .map(|&e| {
            let k = (1.0 / e).log2();
            if (k - k.round()).abs() < 1e-12 && eps.first() == Some(&1.0) {
                match k.round() as i64 {
                    0 => "1".to_string(),
                    1 => "1/2".to_string(),
                    n => format!("1/2^{n}"),
                }
            } else {
                format!("{e}")
            }
        })
        .collect()
}
