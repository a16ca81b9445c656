//! Multi-dimensional discrete Fourier transforms in the interpolation
//! coefficient convention.
//!
//! The forward transform carries the full `1/∏N_i` normalization, so the
//! coefficient in bin `k` is
//!
//! ```text
//! c_k = (1/∏N_i) Σ_p f_p exp(-i Σ_i μ_{k_i} (x_{i,p} - a_i))
//! ```
//!
//! and the inverse is the plain exponential sum. One-dimensional FFTs along
//! each axis come from `rustfft`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::{Field, Space};
use super::grid::{wavenumber_to_bin, bin_to_wavenumber, GridSpec};
use crate::error::{Error, Result};

/// Planned transforms for one grid shape. Cheap to share between threads.
pub struct FftPlan {
    grid: GridSpec,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl std::fmt::Debug for FftPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftPlan").field("grid", &self.grid).finish()
    }
}

impl FftPlan {
    pub fn new(grid: &GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let forward = grid.points().iter().map(|&n| planner.plan_fft_forward(n)).collect();
        let inverse = grid.points().iter().map(|&n| planner.plan_fft_inverse(n)).collect();
        Self {
            grid: grid.clone(),
            forward,
            inverse,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn run(&self, values: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>]) {
        let points = self.grid.points();
        let strides = self.grid.strides();
        let total = values.len();
        let max_scratch = plans
            .iter()
            .map(|p| p.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        let mut scratch = vec![Complex64::new(0.0, 0.0); max_scratch];
        let mut lines: Vec<Complex64> = Vec::new();

        for (axis, plan) in plans.iter().enumerate() {
            let n = points[axis];
            let stride = strides[axis];
            if stride == 1 {
                plan.process_with_scratch(values, &mut scratch);
                continue;
            }
            // Gather strided lines into a contiguous batch, transform, scatter back.
            lines.resize(total, Complex64::new(0.0, 0.0));
            let block = n * stride;
            let mut line = 0;
            for outer in (0..total).step_by(block) {
                for inner in 0..stride {
                    let base = outer + inner;
                    let dst = &mut lines[line * n..(line + 1) * n];
                    for (p, d) in dst.iter_mut().enumerate() {
                        *d = values[base + p * stride];
                    }
                    line += 1;
                }
            }
            plan.process_with_scratch(&mut lines, &mut scratch);
            let mut line = 0;
            for outer in (0..total).step_by(block) {
                for inner in 0..stride {
                    let base = outer + inner;
                    let src = &lines[line * n..(line + 1) * n];
                    for (p, s) in src.iter().enumerate() {
                        values[base + p * stride] = *s;
                    }
                    line += 1;
                }
            }
        }
    }

    /// Physical samples to coefficients, in place.
    pub fn forward_in_place(&self, values: &mut [Complex64]) {
        debug_assert_eq!(values.len(), self.grid.len());
        self.run(values, &self.forward);
        let scale = 1.0 / values.len() as f64;
        for v in values.iter_mut() {
            *v *= scale;
        }
    }

    /// Coefficients to physical samples, in place (unnormalized sum).
    pub fn inverse_in_place(&self, values: &mut [Complex64]) {
        debug_assert_eq!(values.len(), self.grid.len());
        self.run(values, &self.inverse);
    }

    fn check_grid(&self, field: &Field) -> Result<()> {
        if field.grid() != &self.grid {
            return Err(Error::GridMismatch(
                "field grid differs from the transform plan's grid".into(),
            ));
        }
        Ok(())
    }

    pub fn forward(&self, field: &Field) -> Result<Field> {
        field.expect_space(Space::Physical)?;
        self.check_grid(field)?;
        let mut out = field.clone();
        self.forward_in_place(out.values_mut());
        out.set_space(Space::Spectral);
        Ok(out)
    }

    pub fn inverse(&self, field: &Field) -> Result<Field> {
        field.expect_space(Space::Spectral)?;
        self.check_grid(field)?;
        let mut out = field.clone();
        self.inverse_in_place(out.values_mut());
        out.set_space(Space::Physical);
        Ok(out)
    }

    /// Return the field in spectral space, transforming if needed.
    pub fn to_spectral(&self, field: &Field) -> Result<Field> {
        match field.space() {
            Space::Spectral => Ok(field.clone()),
            Space::Physical => self.forward(field),
        }
    }

    pub fn to_physical(&self, field: &Field) -> Result<Field> {
        match field.space() {
            Space::Physical => Ok(field.clone()),
            Space::Spectral => self.inverse(field),
        }
    }
}

/// Interpolation coefficients of a physical field.
pub fn forward_transform(field: &Field) -> Result<Field> {
    FftPlan::new(field.grid()).forward(field)
}

/// Samples of the trigonometric interpolant with the given coefficients.
pub fn inverse_transform(field: &Field) -> Result<Field> {
    FftPlan::new(field.grid()).inverse(field)
}

/// Spectral resampling onto a grid with the same intervals.
///
/// Modes of `T_{N_target}` that exist in the source are copied, the rest are
/// zero: zero-padding when refining, truncation (the `P_N` restriction) when
/// coarsening. The result is in the same space as the input.
pub fn resample(field: &Field, target: &GridSpec) -> Result<Field> {
    let source = field.grid();
    if !source.same_domain(target) {
        return Err(Error::GridMismatch(format!(
            "cannot resample between domains {:?} and {:?}",
            source.intervals(),
            target.intervals()
        )));
    }
    if source == target {
        return Ok(field.clone());
    }
    let coeffs = match field.space() {
        Space::Spectral => field.clone(),
        Space::Physical => forward_transform(field)?,
    };

    let dim = target.dim();
    let src_points = source.points();
    let src_strides = source.strides();
    let mut out = Field::zeros(target, Space::Spectral);
    let mut idx = vec![0usize; dim];
    let src = coeffs.values();
    for (flat, value) in out.values_mut().iter_mut().enumerate() {
        target.unravel(flat, &mut idx);
        let mut src_flat = 0;
        let mut present = true;
        for axis in 0..dim {
            let k = bin_to_wavenumber(idx[axis], target.points()[axis]);
            match wavenumber_to_bin(k, src_points[axis]) {
                Some(bin) => src_flat += bin * src_strides[axis],
                None => {
                    present = false;
                    break;
                }
            }
        }
        if present {
            *value = src[src_flat];
        }
    }

    match field.space() {
        Space::Spectral => Ok(out),
        Space::Physical => inverse_transform(&out),
    }
}
