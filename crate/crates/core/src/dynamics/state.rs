use std::sync::Arc;

use num_complex::Complex64;

use super::nonlinearity::{sine_source, sine_source_complex};
use super::params::{Coupling, ModelParams, NonlinearTerm};
use crate::error::{Error, Result};
use crate::spectral::{FftPlan, Field, GridSpec, Space, SymbolSet};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The relativistic unknowns, always stored as spectral coefficients.
#[derive(Debug, Clone)]
pub enum Phi {
    /// `φ = u - i⟨∇⟩⁻¹v` for real `u`.
    Single(Field),
    /// `φ± = u ∓ i⟨∇⟩⁻¹v` for complex `u`.
    Coupled { plus: Field, minus: Field },
}

/// `φ⁰ = u₀ - i⟨∇⟩⁻¹u₁` for real initial data, as spectral coefficients.
pub fn phi0_from_uv(u0: &Field, u1: &Field, symbols: &SymbolSet) -> Result<Field> {
    u0.check_real()?;
    u1.check_real()?;
    let (plus, _) = coupled_from_uv(u0, u1, symbols)?;
    Ok(plus)
}

/// `φ±⁰ = u₀ ∓ i⟨∇⟩⁻¹u₁` for (possibly complex) initial data.
pub fn coupled_from_uv(u0: &Field, u1: &Field, symbols: &SymbolSet) -> Result<(Field, Field)> {
    u0.expect_space(Space::Physical)?;
    u1.expect_space(Space::Physical)?;
    if u0.grid() != u1.grid() || u0.grid() != symbols.grid() {
        return Err(Error::GridMismatch(
            "initial data and symbols must share one grid".into(),
        ));
    }
    let plan = FftPlan::new(u0.grid());
    let u0_hat = plan.forward(u0)?;
    let u1_hat = plan.forward(u1)?;
    let mut plus = u0_hat.clone();
    let mut minus = u0_hat;
    for (((p, m), v), d) in plus
        .values_mut()
        .iter_mut()
        .zip(minus.values_mut())
        .zip(u1_hat.values())
        .zip(symbols.delta())
    {
        let w = I * v / d;
        *p -= w;
        *m += w;
    }
    Ok((plus, minus))
}

/// Something that watches a trajectory at step boundaries.
pub trait Observer {
    fn observe(&mut self, step: usize, state: &State) -> Result<()>;
}

impl<F: FnMut(usize, &State) -> Result<()>> Observer for F {
    fn observe(&mut self, step: usize, state: &State) -> Result<()> {
        self(step, state)
    }
}

/// A solver trajectory: parameters, clock and canonical (spectral) unknowns.
#[derive(Debug, Clone)]
pub struct State {
    params: ModelParams,
    time: f64,
    step: usize,
    phi: Phi,
    symbols: Arc<SymbolSet>,
    plan: Arc<FftPlan>,
    half_phase: Option<(f64, Vec<Complex64>)>,
}

impl State {
    /// Initialise from `u(0) = u0`, `∂_t u(0) = u1` (native clock).
    pub fn new(params: ModelParams, u0: &Field, u1: &Field) -> Result<Self> {
        params.validate()?;
        let symbols = Arc::new(SymbolSet::new(u0.grid(), params.alpha)?);
        let phi = if params.variant.is_coupled() {
            let (plus, minus) = coupled_from_uv(u0, u1, &symbols)?;
            Phi::Coupled { plus, minus }
        } else {
            Phi::Single(phi0_from_uv(u0, u1, &symbols)?)
        };
        Ok(Self::from_phi(params, phi, symbols))
    }

    /// Initialise directly from spectral unknowns.
    pub fn from_phi(params: ModelParams, phi: Phi, symbols: Arc<SymbolSet>) -> Self {
        let plan = Arc::new(FftPlan::new(symbols.grid()));
        Self {
            params,
            time: 0.0,
            step: 0,
            phi,
            symbols,
            plan,
            half_phase: None,
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Number of steps taken since initialisation.
    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn phi(&self) -> &Phi {
        &self.phi
    }

    pub fn grid(&self) -> &GridSpec {
        self.symbols.grid()
    }

    pub fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    pub fn plan(&self) -> &FftPlan {
        &self.plan
    }

    fn half_phase(&mut self, tau: f64) -> Vec<Complex64> {
        match &self.half_phase {
            Some((t, phase)) if *t == tau => phase.clone(),
            _ => {
                let phase = self.symbols.propagator(0.5 * tau);
                self.half_phase = Some((tau, phase.clone()));
                phase
            }
        }
    }

    /// Exact linear flow over time `t`.
    pub fn linear_flow(&mut self, t: f64) {
        let phase = self.symbols.propagator(t);
        apply_linear(&mut self.phi, &phase);
    }

    /// Exact nonlinear flow `φ ↦ φ + t F(φ)`, evaluated in physical space.
    pub fn nonlinear_flow(&mut self, t: f64) {
        if self.params.nonlinearity == NonlinearTerm::Off {
            return;
        }
        let eps = self.params.epsilon;
        let thr = self.params.taylor_threshold;
        let plan = &self.plan;
        let delta = self.symbols.delta();
        match &mut self.phi {
            Phi::Single(phi) => {
                let mut work = phi.values().to_vec();
                plan.inverse_in_place(&mut work);
                for w in work.iter_mut() {
                    *w = Complex64::new(sine_source(w.re, eps, thr), 0.0);
                }
                plan.forward_in_place(&mut work);
                for ((c, g), d) in phi.values_mut().iter_mut().zip(&work).zip(delta) {
                    *c += I * g * (t / d);
                }
            }
            Phi::Coupled { plus, minus } => {
                let mut work: Vec<Complex64> = match self.params.coupling {
                    Coupling::Sum => {
                        let mut w: Vec<Complex64> = plus
                            .values()
                            .iter()
                            .zip(minus.values())
                            .map(|(p, m)| 0.5 * (p + m))
                            .collect();
                        plan.inverse_in_place(&mut w);
                        w
                    }
                    Coupling::ConjugateSum => {
                        let mut p = plus.values().to_vec();
                        let mut m = minus.values().to_vec();
                        plan.inverse_in_place(&mut p);
                        plan.inverse_in_place(&mut m);
                        p.iter().zip(&m).map(|(a, b)| 0.5 * (a + b.conj())).collect()
                    }
                };
                for w in work.iter_mut() {
                    *w = sine_source_complex(*w, eps, thr);
                }
                plan.forward_in_place(&mut work);
                for (((p, m), g), d) in plus
                    .values_mut()
                    .iter_mut()
                    .zip(minus.values_mut())
                    .zip(&work)
                    .zip(delta)
                {
                    let inc = I * g * (t / d);
                    *p += inc;
                    *m -= inc;
                }
            }
        }
    }

    /// One Strang step: half linear flow, full nonlinear flow, half linear flow.
    pub fn step(&mut self, tau: f64) -> Result<()> {
        if !tau.is_finite() || tau == 0.0 {
            return Err(Error::invalid(format!("time step must be finite and nonzero, got {tau}")));
        }
        let half = self.half_phase(tau);
        apply_linear(&mut self.phi, &half);
        self.nonlinear_flow(tau);
        apply_linear(&mut self.phi, &half);
        self.time += tau;
        self.step += 1;
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        match &self.phi {
            Phi::Single(p) => p.all_finite(),
            Phi::Coupled { plus, minus } => plus.all_finite() && minus.all_finite(),
        }
    }

    /// Physical `u` and `v = ∂_t u` (native clock).
    pub fn reconstruct_uv(&self) -> Result<(Field, Field)> {
        let plan = &self.plan;
        let delta = self.symbols.delta();
        match &self.phi {
            Phi::Single(phi) => {
                let phys = plan.inverse(phi)?;
                let u = phys.real_projection();
                // v = (i/2)⟨∇⟩(φ - φ̄)
                let diff = phys.map(|c| c - c.conj());
                let mut w = plan.forward(&diff)?;
                for (c, d) in w.values_mut().iter_mut().zip(delta) {
                    *c *= 0.5 * I * d;
                }
                let v = plan.inverse(&w)?.real_projection();
                Ok((u, v))
            }
            Phi::Coupled { plus, minus } => {
                let sum = plus.axpy(Complex64::new(1.0, 0.0), minus)?.scale(0.5.into());
                let u = plan.inverse(&sum)?;
                let mut w = plus.sub(minus)?;
                for (c, d) in w.values_mut().iter_mut().zip(delta) {
                    *c *= 0.5 * I * d;
                }
                let v = plan.inverse(&w)?;
                Ok((u, v))
            }
        }
    }

    /// Physical `u` only.
    pub fn u(&self) -> Result<Field> {
        match &self.phi {
            Phi::Single(phi) => Ok(self.plan.inverse(phi)?.real_projection()),
            Phi::Coupled { plus, minus } => {
                let sum = plus.axpy(Complex64::new(1.0, 0.0), minus)?.scale(0.5.into());
                self.plan.inverse(&sum)
            }
        }
    }

    /// `ξ = e^{-it⟨∇⟩}φ` (for the coupled system `φ₋` is twisted with the
    /// opposite sign).
    pub fn twisted(&self) -> Phi {
        let back = self.symbols.propagator(-self.time);
        let mut phi = self.phi.clone();
        apply_linear(&mut phi, &back);
        phi
    }
}

fn apply_linear(phi: &mut Phi, phase: &[Complex64]) {
    match phi {
        Phi::Single(f) => {
            for (c, p) in f.values_mut().iter_mut().zip(phase) {
                *c *= p;
            }
        }
        Phi::Coupled { plus, minus } => {
            for ((a, b), p) in plus
                .values_mut()
                .iter_mut()
                .zip(minus.values_mut())
                .zip(phase)
            {
                *a *= p;
                *b *= p.conj();
            }
        }
    }
}

/// Functional form of [`State::step`].
pub fn strang_step(mut state: State, tau: f64) -> Result<State> {
    state.step(tau)?;
    Ok(state)
}

/// Advance `steps` Strang steps, calling every observer at the starting step
/// and after each step. Aborts on the first non-finite coefficient.
pub fn evolve(
    state: &mut State,
    tau: f64,
    steps: usize,
    observers: &mut [&mut dyn Observer],
) -> Result<()> {
    for obs in observers.iter_mut() {
        obs.observe(state.step_index(), state)?;
    }
    for _ in 0..steps {
        state.step(tau)?;
        if !state.is_finite() {
            return Err(Error::BlowUp {
                step: state.step_index(),
                time: state.time(),
            });
        }
        for obs in observers.iter_mut() {
            obs.observe(state.step_index(), state)?;
        }
    }
    Ok(())
}
