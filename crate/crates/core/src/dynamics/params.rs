use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::check_alpha;

/// Default switch point (on `ε|u|`) between the direct formula and the
/// Taylor series in the nonlinearity.
pub const DEFAULT_TAYLOR_THRESHOLD: f64 = 0.05;

/// Which sine-Gordon model is being integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Real-valued `u`, one complex unknown `φ = u - i⟨∇⟩⁻¹v`.
    RealSg,
    /// Complex-valued `u`, coupled unknowns `φ± = u ∓ i⟨∇⟩⁻¹v`.
    ComplexSg,
    /// Complex model on the slow clock `s = ε^{2p} t`, integrated in the
    /// native clock.
    Oscillatory { p: u32 },
}

impl Variant {
    pub fn is_coupled(self) -> bool {
        !matches!(self, Variant::RealSg)
    }

    /// Parse `real`, `complex` or `oscillatory:<p>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Variant::RealSg),
            "complex" => Ok(Variant::ComplexSg),
            _ => {
                let p = s
                    .strip_prefix("oscillatory:")
                    .and_then(|p| p.parse::<u32>().ok())
                    .filter(|&p| p >= 1)
                    .ok_or_else(|| {
                        Error::invalid(format!(
                            "unknown variant {s:?} (expected real, complex or oscillatory:<p>)"
                        ))
                    })?;
                Ok(Variant::Oscillatory { p })
            }
        }
    }

    pub fn label(self) -> String {
        match self {
            Variant::RealSg => "real".into(),
            Variant::ComplexSg => "complex".into(),
            Variant::Oscillatory { p } => format!("oscillatory:{p}"),
        }
    }
}

/// Test hook: switch the nonlinear source off to isolate the linear flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum NonlinearTerm {
    #[default]
    Sine,
    Off,
}

/// Argument of the shared source in the coupled system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Coupling {
    /// `(φ₊ + φ₋)/2`
    #[default]
    Sum,
    /// `(φ₊ + conj(φ₋))/2`, kept for comparison only.
    ConjugateSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub epsilon: f64,
    pub variant: Variant,
    pub taylor_threshold: f64,
    #[serde(default)]
    pub nonlinearity: NonlinearTerm,
    #[serde(default)]
    pub coupling: Coupling,
}

impl ModelParams {
    pub fn new(alpha: f64, epsilon: f64, variant: Variant) -> Result<Self> {
        let params = Self {
            alpha,
            epsilon,
            variant,
            taylor_threshold: DEFAULT_TAYLOR_THRESHOLD,
            nonlinearity: NonlinearTerm::Sine,
            coupling: Coupling::Sum,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn real(alpha: f64, epsilon: f64) -> Result<Self> {
        Self::new(alpha, epsilon, Variant::RealSg)
    }

    pub fn with_nonlinearity(mut self, term: NonlinearTerm) -> Self {
        self.nonlinearity = term;
        self
    }

    pub fn with_coupling(mut self, coupling: Coupling) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_taylor_threshold(mut self, threshold: f64) -> Result<Self> {
        self.taylor_threshold = threshold;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::invalid(format!(
                "epsilon must be in (0,1], got {}",
                self.epsilon
            )));
        }
        if !(self.taylor_threshold > 0.0 && self.taylor_threshold < 0.1) {
            return Err(Error::invalid(format!(
                "taylor threshold must be in (0,0.1), got {}",
                self.taylor_threshold
            )));
        }
        if let Variant::Oscillatory { p } = self.variant {
            if p == 0 {
                return Err(Error::invalid("oscillatory exponent p must be >= 1"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert!(ModelParams::real(2.0, 1.0).is_ok());
        assert!(ModelParams::real(2.0, 1.5).is_err());
        assert!(ModelParams::real(2.0, 0.0).is_err());
        assert!(ModelParams::real(1.0, 0.5).is_err());
        let p = ModelParams::real(1.5, 0.5).unwrap();
        assert!(p.with_taylor_threshold(0.2).is_err());
        assert!(ModelParams::new(2.0, 0.5, Variant::Oscillatory { p: 0 }).is_err());
    }

    #[test]
    fn variant_names() {
        for v in [Variant::RealSg, Variant::ComplexSg, Variant::Oscillatory { p: 2 }] {
            assert_eq!(Variant::parse(&v.label()).unwrap(), v);
        }
        assert!(Variant::parse("oscillatory:0").is_err());
        assert!(Variant::parse("imaginary").is_err());
    }
}
