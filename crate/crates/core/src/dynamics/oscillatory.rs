//! Slow-clock form of the complex model.
//!
//! With `s = ε^{2p} t` and `ω(·, s) = u(·, t)`, a step `λ` on the slow clock
//! is a step `τ = λ/ε^{2p}` on the native clock, and `ε^{2p} ∂_s ω = ∂_t u`.
//! The slow-clock problem is therefore integrated by the native solver.

use super::params::{ModelParams, Variant};
use crate::error::{Error, Result};

/// Mapping between the slow clock `s` and the native clock `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockMap {
    pub p: u32,
    pub epsilon: f64,
    /// Slow-clock step `λ`.
    pub lambda: f64,
    /// Native step `τ = λ/ε^{2p}`.
    pub tau: f64,
}

impl ClockMap {
    /// `ε^{2p}`
    pub fn scale(&self) -> f64 {
        self.epsilon.powi(2 * self.p as i32)
    }

    /// Native time reached at slow time `s`.
    pub fn native_time(&self, s: f64) -> f64 {
        s / self.scale()
    }

    /// Number of steps to reach slow time `s`, when `s/λ` is (numerically) integral.
    pub fn steps_to(&self, s: f64) -> Result<usize> {
        let n = s / self.lambda;
        let rounded = n.round();
        if (n - rounded).abs() > 1e-9 * n.max(1.0) || rounded < 0.0 {
            return Err(Error::invalid(format!(
                "horizon {s} is not a whole number of steps of {}",
                self.lambda
            )));
        }
        Ok(rounded as usize)
    }

    /// `∂_s ω` from the native velocity.
    pub fn slow_velocity_factor(&self) -> f64 {
        1.0 / self.scale()
    }
}

/// Build the clock mapping for an oscillatory run with slow-clock step `lambda`.
pub fn oscillatory_wrap(params: &ModelParams, lambda: f64) -> Result<ClockMap> {
    let Variant::Oscillatory { p } = params.variant else {
        return Err(Error::invalid("oscillatory_wrap needs the oscillatory variant"));
    };
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::invalid(format!(
            "slow-clock step must be in (0,1), got {lambda}"
        )));
    }
    let scale = params.epsilon.powi(2 * p as i32);
    Ok(ClockMap {
        p,
        epsilon: params.epsilon,
        lambda,
        tau: lambda / scale,
    })
}
