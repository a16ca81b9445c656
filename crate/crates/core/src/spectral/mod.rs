//! Periodic grids, fields, transforms and diagonal Fourier symbols.

mod field;
mod grid;
mod symbols;
mod transform;

pub use field::{Field, Space};
pub use grid::{bin_to_wavenumber, wavenumber_to_bin, GridSpec};
pub use symbols::{apply_symbol, build_symbols, check_alpha, Multiplier, SymbolSet};
pub use transform::{forward_transform, inverse_transform, resample, FftPlan};
