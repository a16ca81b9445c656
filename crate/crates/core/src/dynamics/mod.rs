//! Time-splitting integrator for the relativistic form of the equation.

mod nonlinearity;
mod oscillatory;
mod params;
mod state;

pub use nonlinearity::{eval_f, potential_density, sine_source, sine_source_complex};
pub use oscillatory::{oscillatory_wrap, ClockMap};
pub use params::{Coupling, ModelParams, NonlinearTerm, Variant, DEFAULT_TAYLOR_THRESHOLD};
pub use state::{coupled_from_uv, evolve, phi0_from_uv, strang_step, Observer, Phi, State};
