//! Named initial-value problems with their domains.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::Variant;
use crate::error::{Error, Result};
use crate::spectral::{Field, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioName {
    #[serde(rename = "smooth2d")]
    Smooth2D,
    #[serde(rename = "smooth3d")]
    Smooth3D,
    #[serde(rename = "osc-complex-2d")]
    OscComplex2D,
    #[serde(rename = "elliptic-ring-2d")]
    EllipticRing2D,
    #[serde(rename = "two-circular-2d")]
    TwoCircular2D,
    #[serde(rename = "two-circular-3d")]
    TwoCircular3D,
    #[serde(rename = "four-circular-3d")]
    FourCircular3D,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 7] = [
        ScenarioName::Smooth2D,
        ScenarioName::Smooth3D,
        ScenarioName::OscComplex2D,
        ScenarioName::EllipticRing2D,
        ScenarioName::TwoCircular2D,
        ScenarioName::TwoCircular3D,
        ScenarioName::FourCircular3D,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::Smooth2D => "smooth2d",
            ScenarioName::Smooth3D => "smooth3d",
            ScenarioName::OscComplex2D => "osc-complex-2d",
            ScenarioName::EllipticRing2D => "elliptic-ring-2d",
            ScenarioName::TwoCircular2D => "two-circular-2d",
            ScenarioName::TwoCircular3D => "two-circular-3d",
            ScenarioName::FourCircular3D => "four-circular-3d",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            ScenarioName::Smooth3D | ScenarioName::TwoCircular3D | ScenarioName::FourCircular3D => 3,
            _ => 2,
        }
    }

    pub fn intervals(self) -> Vec<(f64, f64)> {
        let two_pi = 2.0 * PI;
        match self {
            ScenarioName::Smooth2D => vec![(0.0, 1.0), (0.0, two_pi)],
            ScenarioName::Smooth3D => vec![(0.0, 2.0), (0.0, two_pi), (0.0, two_pi)],
            ScenarioName::OscComplex2D => vec![(0.0, 1.0), (0.0, 1.0)],
            ScenarioName::EllipticRing2D => vec![(-7.0, 7.0), (-7.0, 7.0)],
            ScenarioName::TwoCircular2D => vec![(-30.0, 10.0), (-21.0, 7.0)],
            ScenarioName::TwoCircular3D => vec![(-30.0, 10.0), (-21.0, 7.0), (-21.0, 7.0)],
            ScenarioName::FourCircular3D => vec![(-30.0, 10.0); 3],
        }
    }

    pub fn default_points(self) -> usize {
        if self.dim() == 2 {
            128
        } else {
            64
        }
    }

    pub fn default_variant(self) -> Variant {
        match self {
            ScenarioName::OscComplex2D => Variant::Oscillatory { p: 1 },
            _ => Variant::RealSg,
        }
    }

    pub fn is_complex(self) -> bool {
        matches!(self, ScenarioName::OscComplex2D)
    }

    pub fn is_ring(self) -> bool {
        matches!(
            self,
            ScenarioName::EllipticRing2D
                | ScenarioName::TwoCircular2D
                | ScenarioName::TwoCircular3D
                | ScenarioName::FourCircular3D
        )
    }

    fn initial_data(self, x: &[f64]) -> (Complex64, Complex64) {
        let re = |v: f64| Complex64::new(v, 0.0);
        match self {
            ScenarioName::Smooth2D => {
                let c = (2.0 * PI * x[0] + x[1]).cos();
                let c2 = c * c;
                (re(2.0 / (2.0 + c2)), re(2.0 / (2.0 + 2.0 * c2)))
            }
            ScenarioName::Smooth3D => {
                let s = (2.0 * PI * x[0] + x[1] + x[2]).sin();
                let s2 = s * s;
                (re(1.0 / (1.0 + s2)), re(2.0 / (1.0 + s2)))
            }
            ScenarioName::OscComplex2D => {
                let (x, y) = (x[0], x[1]);
                let u0 = Complex64::new(x * x * (x - 1.0) * (x - 1.0) + y * (y - 1.0), 6.0);
                let u1 = Complex64::new(
                    x * (x - 1.0) * (2.0 * x - 1.0) + y * y * (y - 1.0) * (y - 1.0),
                    (2.0 * PI * x + 2.0 * PI * y).cos(),
                );
                (u0, u1)
            }
            ScenarioName::EllipticRing2D => {
                let (x, y) = (x[0], x[1]);
                let r = ((x - y).powi(2) / 3.0 + (x + y).powi(2) / 2.0).sqrt();
                (re(4.0 * (3.0 - r).exp().atan()), re(0.0))
            }
            ScenarioName::TwoCircular2D => {
                let r = ((x[0] + 3.0).powi(2) + (x[1] + 7.0).powi(2)).sqrt();
                ring(r)
            }
            ScenarioName::TwoCircular3D => {
                let r = ((x[0] + 3.0).powi(2) + (x[1] + 7.0).powi(2) + (x[2] + 7.0).powi(2)).sqrt();
                ring(r)
            }
            ScenarioName::FourCircular3D => {
                let r = ((x[0] + 3.0).powi(2) + x[1].powi(2) + (x[2] + 3.0).powi(2)).sqrt();
                ring(r)
            }
        }
    }
}

/// Kink-ring profile `4 atan(exp((4-r)/0.436))` with velocity `4.13 sech((4-r)/0.436)`.
fn ring(r: f64) -> (Complex64, Complex64) {
    let z = (4.0 - r) / 0.436;
    (
        Complex64::new(4.0 * z.exp().atan(), 0.0),
        Complex64::new(4.13 / z.cosh(), 0.0),
    )
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ScenarioName::ALL.iter().map(|n| n.as_str()).collect();
                Error::invalid(format!(
                    "unknown scenario {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: ScenarioName,
    pub grid: GridSpec,
    pub default_variant: Variant,
}

/// Build a scenario on its default grid (or `override_n` per axis) and sample
/// `u(0)`, `∂_t u(0)` at the nodes.
pub fn make_scenario(
    name: ScenarioName,
    override_n: Option<&[usize]>,
) -> Result<(ScenarioSpec, Field, Field)> {
    let points = match override_n {
        Some(n) if n.len() == name.dim() => n.to_vec(),
        Some(n) if n.len() == 1 => vec![n[0]; name.dim()],
        Some(n) => {
            return Err(Error::invalid(format!(
                "{name} is {}-dimensional but {} point counts were given",
                name.dim(),
                n.len()
            )))
        }
        None => vec![name.default_points(); name.dim()],
    };
    let grid = GridSpec::new(name.intervals(), points)?;
    let u0 = Field::from_fn(&grid, |x| name.initial_data(x).0);
    let u1 = Field::from_fn(&grid, |x| name.initial_data(x).1);
    if !(u0.all_finite() && u1.all_finite()) {
        return Err(Error::invalid(format!("{name}: non-finite initial data")));
    }
    Ok((
        ScenarioSpec {
            name,
            default_variant: name.default_variant(),
            grid,
        },
        u0,
        u1,
    ))
}
