//! Brute-force oracle for the local error of one Strang step against RK4 on the semi-discrete system
//!
//! ```text
//! dφ̂_k/dt = i δ_k φ̂_k + i ĝ_k / δ_k,   g = sin(ε Re φ)/ε - Re φ,
//! ```
//!
//! built here from a direct O(N⁴) DFT on an 8×8 grid over (0, 2π)².

#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use frsg::dynamics::{ModelParams, Phi, State};
use frsg::spectral::{Field, GridSpec, Space, SymbolSet};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const N: usize = 8;
const ALPHA: f64 = 1.5;
const EPS: f64 = 1.0;

fn wavenumber(bin: usize) -> f64 {
    if bin < N / 2 {
        bin as f64
    } else {
        bin as f64 - N as f64
    }
}

fn delta(k0: usize, k1: usize) -> f64 {
    let m2 = wavenumber(k0).powi(2) + wavenumber(k1).powi(2);
    (1.0 + m2.powf(ALPHA / 2.0)).sqrt()
}

fn dft(f: &[Complex64], sign: f64, scale: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); N * N];
    for k0 in 0..N {
        for k1 in 0..N {
            let mut acc = Complex64::new(0.0, 0.0);
            for p0 in 0..N {
                for p1 in 0..N {
                    let x0 = 2.0 * PI * p0 as f64 / N as f64;
                    let x1 = 2.0 * PI * p1 as f64 / N as f64;
                    let arg = sign * (wavenumber(k0) * x0 + wavenumber(k1) * x1);
                    acc += f[p0 * N + p1] * Complex64::from_polar(1.0, arg);
                }
            }
            out[k0 * N + k1] = acc * scale;
        }
    }
    out
}

fn rhs(phi_hat: &[Complex64]) -> Vec<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let phys = dft(phi_hat, 1.0, 1.0);
    let g: Vec<Complex64> = phys
        .iter()
        .map(|c| Complex64::new((EPS * c.re).sin() / EPS - c.re, 0.0))
        .collect();
    let g_hat = dft(&g, -1.0, 1.0 / (N * N) as f64);
    (0..N * N)
        .map(|idx| {
            let d = delta(idx / N, idx % N);
            i * d * phi_hat[idx] + i * g_hat[idx] / d
        })
        .collect()
}

fn rk4(mut y: Vec<Complex64>, t: f64, substeps: usize) -> Vec<Complex64> {
    let h = t / substeps as f64;
    let add = |a: &[Complex64], b: &[Complex64], s: f64| -> Vec<Complex64> {
        a.iter().zip(b).map(|(x, y)| x + y * s).collect()
    };
    for _ in 0..substeps {
        let k1 = rhs(&y);
        let k2 = rhs(&add(&y, &k1, h / 2.0));
        let k3 = rhs(&add(&y, &k2, h / 2.0));
        let k4 = rhs(&add(&y, &k3, h));
        for idx in 0..y.len() {
            y[idx] += (k1[idx] + 2.0 * k2[idx] + 2.0 * k3[idx] + k4[idx]) * (h / 6.0);
        }
    }
    y
}

pub fn random_smooth_coeffs(seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..N * N)
        .map(|idx| {
            let k = (wavenumber(idx / N).powi(2) + wavenumber(idx % N).powi(2)).sqrt();
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            c * (-k).exp()
        })
        .collect()
}

fn solver_step(coeffs: &[Complex64], tau: f64) -> Vec<Complex64> {
    let grid = GridSpec::cube(2, 0.0, 2.0 * PI, N).unwrap();
    let symbols = Arc::new(SymbolSet::new(&grid, ALPHA).unwrap());
    let phi = Field::new(grid, Space::Spectral, coeffs.to_vec()).unwrap();
    let mut state = State::from_phi(ModelParams::real(ALPHA, EPS).unwrap(), Phi::Single(phi), symbols);
    state.step(tau).unwrap();
    match state.phi() {
        Phi::Single(f) => f.values().to_vec(),
        Phi::Coupled { .. } => unreachable!(),
    }
}

pub fn local_error(coeffs: &[Complex64], tau: f64) -> f64 {
    let exact = rk4(coeffs.to_vec(), tau, 1000);
    let approx = solver_step(coeffs, tau);
    exact
        .iter()
        .zip(&approx)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Errors after one step of each `tau`, and their successive ratios.
pub fn local_error_ratios(seed: u64, taus: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let coeffs = random_smooth_coeffs(seed);
    let errors: Vec<f64> = taus.iter().map(|&t| local_error(&coeffs, t)).collect();
    let ratios = errors.windows(2).map(|w| w[0] / w[1]).collect();
    (errors, ratios)
}
