//! Sobolev norms, grid-to-grid error norms, the discrete energy and the
//! twisted-variable increment.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{potential_density, Phi, State};
use crate::error::{Error, Result};
use crate::spectral::{resample, FftPlan, Field, Space, SymbolSet};

/// `‖f‖_s² = Σ_k (1 + |μ_k|²)^s |f̂_k|²` over the grid's modes.
///
/// Physical fields are transformed first. `s = 0` is the coefficient ℓ² norm.
pub fn sobolev_norm(field: &Field, s: f64) -> Result<f64> {
    let coeffs = match field.space() {
        Space::Spectral => field.clone(),
        Space::Physical => FftPlan::new(field.grid()).forward(field)?,
    };
    Ok(sobolev_norm_sq_coeffs(&coeffs, s).sqrt())
}

fn sobolev_norm_sq_coeffs(coeffs: &Field, s: f64) -> f64 {
    let grid = coeffs.grid();
    let dim = grid.dim();
    let mut idx = vec![0usize; dim];
    // Per-axis μ² tables; the SymbolSet would need an α we do not have here.
    let mu_sq: Vec<Vec<f64>> = (0..dim)
        .map(|axis| {
            let n = grid.points()[axis];
            let len = grid.length(axis);
            (0..n)
                .map(|bin| {
                    let mu = 2.0 * std::f64::consts::PI
                        * crate::spectral::bin_to_wavenumber(bin, n) as f64
                        / len;
                    mu * mu
                })
                .collect()
        })
        .collect();
    let mut total = 0.0;
    for (flat, c) in coeffs.values().iter().enumerate() {
        let weight = if s == 0.0 {
            1.0
        } else {
            grid.unravel(flat, &mut idx);
            let m: f64 = (0..dim).map(|a| mu_sq[a][idx[a]]).sum();
            (1.0 + m).powf(s)
        };
        total += weight * c.norm_sqr();
    }
    total
}

/// `‖num - ref‖_s`, resampling the coarser field onto the finer grid first.
pub fn error_norm(num: &Field, reference: &Field, s: f64) -> Result<f64> {
    if !num.grid().same_domain(reference.grid()) {
        return Err(Error::GridMismatch(
            "error_norm: fields live on different domains".into(),
        ));
    }
    let a = to_coeffs(num)?;
    let b = to_coeffs(reference)?;
    let (a, b) = if a.grid() == b.grid() {
        (a, b)
    } else {
        // Target grid: per-axis max of the two resolutions.
        let points = a
            .grid()
            .points()
            .iter()
            .zip(b.grid().points())
            .map(|(x, y)| *x.max(y))
            .collect();
        let target = a.grid().with_points(points)?;
        (resample(&a, &target)?, resample(&b, &target)?)
    };
    Ok(sobolev_norm_sq_coeffs(&a.sub(&b)?, s).sqrt())
}

fn to_coeffs(field: &Field) -> Result<Field> {
    match field.space() {
        Space::Spectral => Ok(field.clone()),
        Space::Physical => FftPlan::new(field.grid()).forward(field),
    }
}

/// One point of an energy history.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergySample {
    pub step: usize,
    pub time: f64,
    pub value: f64,
    /// `E_h^n - E_h^0`
    pub drift: f64,
}

/// Discrete energy
///
/// ```text
/// E_h = ∏h_i Σ_p [ |v_p|² + |((-Δ)^{α/4} u)_p|² + (2/ε²)(1 - cos ε u_p) ]
/// ```
///
/// of real physical fields `u`, `v`.
pub fn discrete_energy(
    u: &Field,
    v: &Field,
    symbols: &SymbolSet,
    epsilon: f64,
    threshold: f64,
) -> Result<f64> {
    for f in [u, v] {
        f.check_real()?;
        if f.grid() != symbols.grid() {
            return Err(Error::GridMismatch("energy: field and symbols disagree".into()));
        }
    }
    let plan = FftPlan::new(u.grid());
    let mut grad = plan.forward(u)?;
    for (c, l) in grad.values_mut().iter_mut().zip(symbols.frac_lap()) {
        *c *= l.sqrt();
    }
    let grad = plan.inverse(&grad)?;
    let sum: f64 = u
        .values()
        .iter()
        .zip(v.values())
        .zip(grad.values())
        .map(|((u, v), g)| v.re * v.re + g.re * g.re + potential_density(u.re, epsilon, threshold))
        .sum();
    Ok(u.grid().cell_volume() * sum)
}

/// Energy of the current state of a real-valued trajectory.
pub fn state_energy(state: &State) -> Result<f64> {
    let (u, v) = state.reconstruct_uv()?;
    let p = state.params();
    discrete_energy(&u, &v, state.symbols(), p.epsilon, p.taylor_threshold)
}

/// Records the energy every `every` steps.
pub struct EnergyRecorder {
    every: usize,
    initial: Option<f64>,
    pub samples: Vec<EnergySample>,
}

impl EnergyRecorder {
    pub fn every(every: usize) -> Self {
        Self {
            every: every.max(1),
            initial: None,
            samples: Vec::new(),
        }
    }

    /// Largest `|E^n - E^0|` recorded.
    pub fn max_drift(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.drift.abs()))
    }
}

impl crate::dynamics::Observer for EnergyRecorder {
    fn observe(&mut self, step: usize, state: &State) -> Result<()> {
        if !step.is_multiple_of(self.every) && self.initial.is_some() {
            return Ok(());
        }
        let value = state_energy(state)?;
        let initial = *self.initial.get_or_insert(value);
        self.samples.push(EnergySample {
            step,
            time: state.time(),
            value,
            drift: value - initial,
        });
        Ok(())
    }
}

/// `‖ξ^{n+1} - ξ^n‖_s` with `ξ = e^{-it⟨∇⟩}φ`; for the coupled system the
/// two components are combined in ℓ².
pub fn twisted_increment(before: &State, after: &State, s: f64) -> Result<f64> {
    if after.time() <= before.time() {
        return Err(Error::invalid(format!(
            "twisted increment needs consecutive states, got t = {} then {}",
            before.time(),
            after.time()
        )));
    }
    if before.grid() != after.grid() {
        return Err(Error::GridMismatch("twisted increment across grids".into()));
    }
    let diff = |a: &Field, b: &Field| -> Result<f64> {
        Ok(sobolev_norm_sq_coeffs(&b.sub(a)?, s))
    };
    let total = match (before.twisted(), after.twisted()) {
        (Phi::Single(a), Phi::Single(b)) => diff(&a, &b)?,
        (
            Phi::Coupled {
                plus: ap,
                minus: am,
            },
            Phi::Coupled {
                plus: bp,
                minus: bm,
            },
        ) => diff(&ap, &bp)? + diff(&am, &bm)?,
        _ => return Err(Error::invalid("states use different variants")),
    };
    Ok(total.sqrt())
}

/// Complex-coefficient helper used by tests and the Python bindings.
pub fn single_mode(grid: &crate::spectral::GridSpec, k: &[i64], amplitude: Complex64) -> Result<Field> {
    let mut f = Field::zeros(grid, Space::Spectral);
    let strides = grid.strides();
    let mut flat = 0;
    for (axis, &ki) in k.iter().enumerate() {
        let bin = crate::spectral::wavenumber_to_bin(ki, grid.points()[axis])
            .ok_or_else(|| Error::invalid(format!("mode {ki} not on axis {axis}")))?;
        flat += bin * strides[axis];
    }
    f.values_mut()[flat] = amplitude;
    Ok(f)
}
