use std::f64::consts::PI;

use num_complex::Complex64;

use super::field::{Field, Space};
use super::grid::{bin_to_wavenumber, GridSpec};
use crate::error::{Error, Result};

/// Validate a fractional order.
pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("alpha must be in (1,2], got {alpha}")))
    }
}

/// Diagonal Fourier multipliers for one grid and fractional order, in FFT bin
/// order.
#[derive(Debug, Clone)]
pub struct SymbolSet {
    grid: GridSpec,
    alpha: f64,
    mu: Vec<Vec<f64>>,
    /// `Σ_i μ_{k_i}²`
    mu_sq: Vec<f64>,
    /// `|μ_k|^α`
    frac_lap: Vec<f64>,
    /// `sqrt(1 + |μ_k|^α)`
    delta: Vec<f64>,
}

impl SymbolSet {
    pub fn new(grid: &GridSpec, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let mu: Vec<Vec<f64>> = (0..grid.dim())
            .map(|axis| {
                let n = grid.points()[axis];
                let len = grid.length(axis);
                (0..n)
                    .map(|bin| 2.0 * PI * bin_to_wavenumber(bin, n) as f64 / len)
                    .collect()
            })
            .collect();

        let mut mu_sq = vec![0.0; grid.len()];
        let mut idx = vec![0usize; grid.dim()];
        for (flat, m) in mu_sq.iter_mut().enumerate() {
            grid.unravel(flat, &mut idx);
            *m = idx
                .iter()
                .enumerate()
                .map(|(axis, &bin)| mu[axis][bin] * mu[axis][bin])
                .sum();
        }
        let frac_lap: Vec<f64> = mu_sq.iter().map(|&m| m.powf(alpha / 2.0)).collect();
        let delta = frac_lap.iter().map(|&l| (1.0 + l).sqrt()).collect();
        Ok(Self {
            grid: grid.clone(),
            alpha,
            mu,
            mu_sq,
            frac_lap,
            delta,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Per-axis frequencies `μ_k = 2πk/(b-a)` in bin order.
    pub fn mu(&self, axis: usize) -> &[f64] {
        &self.mu[axis]
    }

    pub fn mu_sq(&self) -> &[f64] {
        &self.mu_sq
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn frac_lap(&self) -> &[f64] {
        &self.frac_lap
    }

    /// Phases `exp(i t δ_k)` of the exact linear flow over time `t`.
    pub fn propagator(&self, t: f64) -> Vec<Complex64> {
        self.delta
            .iter()
            .map(|&d| Complex64::from_polar(1.0, t * d))
            .collect()
    }

    /// Multiplier values in bin order.
    pub fn multiplier(&self, m: &Multiplier<'_>) -> Result<Vec<Complex64>> {
        let real = |v: f64| Complex64::new(v, 0.0);
        Ok(match m {
            Multiplier::Identity => vec![real(1.0); self.grid.len()],
            Multiplier::Delta => self.delta.iter().map(|&d| real(d)).collect(),
            Multiplier::InverseDelta => self.delta.iter().map(|&d| real(1.0 / d)).collect(),
            Multiplier::Propagator(t) => self.propagator(*t),
            Multiplier::FractionalGradient => {
                self.frac_lap.iter().map(|&l| real(l.sqrt())).collect()
            }
            Multiplier::Bessel(s) => self
                .mu_sq
                .iter()
                .map(|&m| real((1.0 + m).powf(s / 2.0)))
                .collect(),
            Multiplier::OfDelta(f) => self.delta.iter().map(|&d| f(d)).collect(),
            Multiplier::Array(values) => {
                if values.len() != self.grid.len() {
                    return Err(Error::GridMismatch(format!(
                        "multiplier has {} entries, grid has {}",
                        values.len(),
                        self.grid.len()
                    )));
                }
                values.to_vec()
            }
        })
    }
}

/// Build the symbols for `(grid, alpha)`.
pub fn build_symbols(grid: &GridSpec, alpha: f64) -> Result<SymbolSet> {
    SymbolSet::new(grid, alpha)
}

/// A diagonal operator in coefficient space.
pub enum Multiplier<'a> {
    Identity,
    /// `⟨∇⟩_α`
    Delta,
    /// `⟨∇⟩_α⁻¹`
    InverseDelta,
    /// `exp(i t ⟨∇⟩_α)`
    Propagator(f64),
    /// `(-Δ)^{α/4}`, symbol `|μ|^{α/2}`
    FractionalGradient,
    /// `(1 - Δ)^{s/2}`, symbol `(1+|μ|²)^{s/2}`
    Bessel(f64),
    /// Any scalar function of `δ_k`.
    OfDelta(&'a dyn Fn(f64) -> Complex64),
    /// Explicit values in bin order.
    Array(&'a [Complex64]),
}

/// Pointwise product of coefficients with a multiplier.
pub fn apply_symbol(coeffs: &Field, symbols: &SymbolSet, m: &Multiplier<'_>) -> Result<Field> {
    coeffs.expect_space(Space::Spectral)?;
    if coeffs.grid() != symbols.grid() {
        return Err(Error::GridMismatch("symbols built for a different grid".into()));
    }
    let factors = symbols.multiplier(m)?;
    let mut out = coeffs.clone();
    for (c, f) in out.values_mut().iter_mut().zip(&factors) {
        *c *= f;
    }
    Ok(out)
}
