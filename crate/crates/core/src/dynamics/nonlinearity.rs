//! The weak sine nonlinearity `f(u) = sin(εu)/ε - u` and the matching
//! potential density `(2/ε²)(1 - cos εu)`.
//!
//! Both lose digits to cancellation when `ε|u|` is small, so below the
//! threshold they switch to a truncated Taylor series in `x = εu`.

use num_complex::Complex64;

/// `f(u) = sin(εu)/ε - u` for one real sample.
#[inline]
pub fn sine_source(u: f64, epsilon: f64, threshold: f64) -> f64 {
    let x = epsilon * u;
    if x.abs() >= threshold {
        x.sin() / epsilon - u
    } else {
        let x2 = x * x;
        u * x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 - x2 / 5040.0))
    }
}

/// Complex-argument version of [`sine_source`], switching on `|εu|`.
#[inline]
pub fn sine_source_complex(u: Complex64, epsilon: f64, threshold: f64) -> Complex64 {
    let x = u * epsilon;
    if x.norm() >= threshold {
        x.sin() / epsilon - u
    } else {
        let x2 = x * x;
        u * x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 - x2 / 5040.0))
    }
}

/// Evaluate `f` pointwise.
pub fn eval_f(u: &[f64], epsilon: f64, threshold: f64) -> Vec<f64> {
    u.iter().map(|&v| sine_source(v, epsilon, threshold)).collect()
}

/// `(2/ε²)(1 - cos εu)`.
///
/// The direct branch uses the half-angle form `(4/ε²) sin²(εu/2)`, which has
/// no subtractive cancellation.
#[inline]
pub fn potential_density(u: f64, epsilon: f64, threshold: f64) -> f64 {
    let x = epsilon * u;
    if x.abs() >= threshold {
        let s = (0.5 * x).sin();
        4.0 * s * s / (epsilon * epsilon)
    } else {
        let x2 = x * x;
        u * u * (1.0 + x2 * (-1.0 / 12.0 + x2 * (1.0 / 360.0 - x2 / 20160.0)))
    }
}
