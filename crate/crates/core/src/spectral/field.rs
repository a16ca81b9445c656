use num_complex::Complex64;

use super::grid::GridSpec;
use crate::error::{Error, Result};

/// Which representation a [`Field`] currently holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// Samples at the grid nodes.
    Physical,
    /// Trigonometric interpolation coefficients in FFT bin order.
    Spectral,
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::Physical => "physical",
            Space::Spectral => "spectral",
        }
    }
}

/// Complex sample or coefficient array on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: GridSpec,
    space: Space,
    values: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: GridSpec, space: Space, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "field has {} values but grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            space,
            values,
        })
    }

    pub fn zeros(grid: &GridSpec, space: Space) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            grid: grid.clone(),
            space,
        }
    }

    /// Sample a complex function at the grid nodes.
    pub fn from_fn(grid: &GridSpec, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        grid.for_each_node(|i, x| values[i] = f(x));
        Self {
            grid: grid.clone(),
            space: Space::Physical,
            values,
        }
    }

    /// Sample a real function at the grid nodes.
    pub fn from_real_fn(grid: &GridSpec, mut f: impl FnMut(&[f64]) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn from_real(grid: &GridSpec, values: &[f64]) -> Result<Self> {
        Self::new(
            grid.clone(),
            Space::Physical,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub(crate) fn set_space(&mut self, space: Space) {
        self.space = space;
    }

    pub fn expect_space(&self, space: Space) -> Result<()> {
        if self.space == space {
            Ok(())
        } else {
            Err(Error::WrongSpace {
                expected: space.name(),
                found: self.space.name(),
            })
        }
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.re).collect()
    }

    pub fn imag_parts(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.im).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, c| m.max(c.im.abs()))
    }

    /// True when `max |Im| ≤ tol · max |value|`.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        self.max_abs_imag() <= tol * self.max_abs()
    }

    /// Check that a physical field represents a real quantity (relative 1e-12).
    pub fn check_real(&self) -> Result<()> {
        self.expect_space(Space::Physical)?;
        if self.is_real_valued(1e-12) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "field is not real-valued: max |imag| = {:.3e}, max |value| = {:.3e}",
                self.max_abs_imag(),
                self.max_abs()
            )))
        }
    }

    /// Drop the imaginary parts.
    pub fn real_projection(&self) -> Field {
        Field {
            grid: self.grid.clone(),
            space: self.space,
            values: self
                .values
                .iter()
                .map(|c| Complex64::new(c.re, 0.0))
                .collect(),
        }
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn check_compatible(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("fields live on different grids".into()));
        }
        if self.space != other.space {
            return Err(Error::WrongSpace {
                expected: self.space.name(),
                found: other.space.name(),
            });
        }
        Ok(())
    }

    /// `self + scale * other`, pointwise.
    pub fn axpy(&self, scale: Complex64, other: &Field) -> Result<Field> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + scale * b)
            .collect();
        Ok(Field {
            grid: self.grid.clone(),
            space: self.space,
            values,
        })
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn scale(&self, factor: Complex64) -> Field {
        Field {
            grid: self.grid.clone(),
            space: self.space,
            values: self.values.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Field {
        Field {
            grid: self.grid.clone(),
            space: self.space,
            values: self.values.iter().map(|&c| f(c)).collect(),
        }
    }

    /// Largest pointwise distance to another field on the same grid.
    pub fn max_distance(&self, other: &Field) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }
}
