use serde::{Deserialize, Serialize};

use crate::dynamics::{NonlinearTerm, Variant};
use crate::error::{Error, Result};
use crate::scenarios::ScenarioName;

/// Largest number of steps any single run may take.
pub const MAX_STEPS: usize = 10_000_000;

/// How far to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Horizon {
    /// Stop at native time `T`.
    FixedT(f64),
    /// Stop at `T/ε²`.
    LongTime(f64),
}

impl Horizon {
    pub fn time(&self, epsilon: f64) -> f64 {
        match *self {
            Horizon::FixedT(t) => t,
            Horizon::LongTime(t) => t / (epsilon * epsilon),
        }
    }
}

/// Number of steps of size `tau` that reach `t`, refusing fractional counts
/// and budgets above [`MAX_STEPS`].
pub fn step_count(t: f64, tau: f64) -> Result<usize> {
    if !(tau > 0.0 && tau.is_finite()) || !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("bad horizon/step pair t={t}, tau={tau}")));
    }
    let n = t / tau;
    let rounded = n.round();
    if (n - rounded).abs() > 1e-8 * n.max(1.0) {
        return Err(Error::invalid(format!(
            "horizon {t} is not a whole number of steps of {tau}"
        )));
    }
    let steps = rounded as usize;
    if steps > MAX_STEPS {
        return Err(Error::invalid(format!(
            "{steps} steps exceeds the budget of {MAX_STEPS} (t={t}, tau={tau})"
        )));
    }
    Ok(steps)
}

/// Resolution of the self-convergence reference run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferencePolicy {
    pub tau_ref: f64,
    pub n_ref: usize,
}

impl ReferencePolicy {
    /// Laptop-sized references: `N_ref` 64 (2D) / 32 (3D), `τ_ref = 2.5e-4`.
    pub fn desk(dim: usize) -> Self {
        Self {
            tau_ref: 2.5e-4,
            n_ref: if dim == 2 { 64 } else { 32 },
        }
    }

    /// `N_ref = 128`, `τ_ref = 1e-3`.
    pub fn full_scale() -> Self {
        Self {
            tau_ref: 1e-3,
            n_ref: 128,
        }
    }
}

/// A parameter sweep over `α × ε × (τ or N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub scenario: ScenarioName,
    pub alphas: Vec<f64>,
    pub epsilons: Vec<f64>,
    /// Time steps for temporal and energy sweeps.
    pub taus: Vec<f64>,
    /// Point counts (per axis) for spatial sweeps.
    pub ns: Vec<usize>,
    pub horizon: Horizon,
    pub reference: ReferencePolicy,
    pub variant: Variant,
    #[serde(default)]
    pub nonlinearity: NonlinearTerm,
}

impl SweepPlan {
    pub fn new(scenario: ScenarioName, horizon: Horizon) -> Self {
        Self {
            scenario,
            alphas: vec![2.0],
            epsilons: vec![1.0],
            taus: Vec::new(),
            ns: Vec::new(),
            horizon,
            reference: ReferencePolicy::desk(scenario.dim()),
            variant: scenario.default_variant(),
            nonlinearity: NonlinearTerm::Sine,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() || self.epsilons.is_empty() {
            return Err(Error::invalid("sweep needs at least one alpha and one epsilon"));
        }
        if self.taus.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::invalid("tau ladder must be strictly decreasing"));
        }
        if self.ns.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("N ladder must be strictly increasing"));
        }
        Ok(())
    }

    /// Total steps the sweep will take (references plus cells), checking
    /// every run against the per-run guardrail.
    pub fn step_budget(&self, temporal: bool) -> Result<usize> {
        self.validate()?;
        let mut total = 0usize;
        for &eps in &self.epsilons {
            let t = self.horizon.time(eps);
            let per_alpha = step_count(t, self.reference.tau_ref)?
                + if temporal {
                    self.taus
                        .iter()
                        .map(|&tau| step_count(t, tau))
                        .sum::<Result<usize>>()?
                } else {
                    self.ns.len() * step_count(t, self.reference.tau_ref)?
                };
            total += per_alpha * self.alphas.len();
        }
        Ok(total)
    }
}
