//! Spectral solver for the space-fractional sine-Gordon equation with weak
//! nonlinearity,
//!
//! ```text
//! u_tt + (-Δ)^{α/2} u + sin(εu)/ε = 0,   1 < α ≤ 2,  0 < ε ≤ 1,
//! ```
//!
//! on periodic rectangles in two and three dimensions. Time stepping is a
//! Strang splitting of the equivalent first-order system for
//! `φ = u - i⟨∇⟩_α⁻¹ u_t`, with both sub-flows solved exactly and Fourier
//! pseudo-spectral discretization in space.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod io;
pub mod observables;
pub mod scenarios;
pub mod spectral;

pub use error::{Error, Result};
