use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic rectangular tensor grid on `∏ (a_i, b_i)` with `N_i` nodes per axis.
///
/// Samples are stored row-major over the axis order, so the first axis is the
/// slowest-varying index and the last axis is contiguous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    intervals: Vec<(f64, f64)>,
    points: Vec<usize>,
}

impl GridSpec {
    pub fn new(intervals: Vec<(f64, f64)>, points: Vec<usize>) -> Result<Self> {
        let dim = intervals.len();
        if !(2..=3).contains(&dim) {
            return Err(Error::invalid(format!("grid dimension must be 2 or 3, got {dim}")));
        }
        if points.len() != dim {
            return Err(Error::invalid(format!(
                "{} intervals but {} point counts",
                dim,
                points.len()
            )));
        }
        for (i, &(a, b)) in intervals.iter().enumerate() {
            if !(a.is_finite() && b.is_finite() && b > a) {
                return Err(Error::invalid(format!("axis {i}: need a < b, got ({a}, {b})")));
            }
        }
        for (i, &n) in points.iter().enumerate() {
            if n < 4 || n % 2 != 0 {
                return Err(Error::invalid(format!(
                    "axis {i}: point count must be even and >= 4, got {n}"
                )));
            }
        }
        Ok(Self { intervals, points })
    }

    /// Same interval and point count on every axis.
    pub fn cube(dim: usize, a: f64, b: f64, n: usize) -> Result<Self> {
        Self::new(vec![(a, b); dim], vec![n; dim])
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self, axis: usize) -> f64 {
        let (a, b) = self.intervals[axis];
        b - a
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.length(axis) / self.points[axis] as f64
    }

    pub fn spacings(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.spacing(i)).collect()
    }

    /// Product of the mesh sizes, the quadrature weight of one node.
    pub fn cell_volume(&self) -> f64 {
        self.spacings().iter().product()
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.length(i)).product()
    }

    /// Node coordinate `a_i + p h_i`.
    pub fn node(&self, axis: usize, p: usize) -> f64 {
        self.intervals[axis].0 + p as f64 * self.spacing(axis)
    }

    /// Same intervals, different resolution.
    pub fn with_points(&self, points: Vec<usize>) -> Result<Self> {
        Self::new(self.intervals.clone(), points)
    }

    pub fn same_domain(&self, other: &GridSpec) -> bool {
        self.intervals == other.intervals
    }

    /// Row-major strides.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dim()];
        for i in (0..self.dim() - 1).rev() {
            strides[i] = strides[i + 1] * self.points[i + 1];
        }
        strides
    }

    /// Decompose a flat index into per-axis indices.
    pub fn unravel(&self, mut flat: usize, out: &mut [usize]) {
        for i in (0..self.dim()).rev() {
            out[i] = flat % self.points[i];
            flat /= self.points[i];
        }
    }

    /// Visit every node with its flat index and coordinates.
    pub fn for_each_node(&self, mut visit: impl FnMut(usize, &[f64])) {
        let mut idx = vec![0usize; self.dim()];
        let mut x = vec![0.0; self.dim()];
        for flat in 0..self.len() {
            self.unravel(flat, &mut idx);
            for (axis, xi) in x.iter_mut().enumerate() {
                *xi = self.node(axis, idx[axis]);
            }
            visit(flat, &x);
        }
    }
}

/// Frequency index `k ∈ T_N = {-N/2, …, N/2-1}` stored in FFT bin `bin`.
///
/// Bins `0..N/2` hold `k = 0..N/2-1`; bins `N/2..N` hold `k = -N/2..-1`.
pub fn bin_to_wavenumber(bin: usize, n: usize) -> i64 {
    if bin < n / 2 {
        bin as i64
    } else {
        bin as i64 - n as i64
    }
}

/// Inverse of [`bin_to_wavenumber`]; `None` when `k ∉ T_N`.
pub fn wavenumber_to_bin(k: i64, n: usize) -> Option<usize> {
    let half = (n / 2) as i64;
    if k >= -half && k < half {
        Some(if k >= 0 { k as usize } else { (k + n as i64) as usize })
    } else {
        None
    }
}
