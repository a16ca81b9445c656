//! Legacy ASCII `STRUCTURED_POINTS` export of snapshots.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::io::snapshot::read_snapshot;
use crate::spectral::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportQuantity {
    U,
    /// `sin(u/2)`, the quantity plotted for ring solitons.
    SinHalfU,
}

impl ExportQuantity {
    pub fn name(self) -> &'static str {
        match self {
            ExportQuantity::U => "u",
            ExportQuantity::SinHalfU => "sin_half_u",
        }
    }
}

impl FromStr for ExportQuantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u" => Ok(ExportQuantity::U),
            "sin(u/2)" | "sin-half-u" => Ok(ExportQuantity::SinHalfU),
            _ => Err(Error::invalid(format!(
                "unknown export quantity {s:?} (expected u or sin(u/2))"
            ))),
        }
    }
}

/// Render a real physical field. The first grid axis is VTK's `x` (fastest).
pub fn structured_points(field: &Field, quantity: ExportQuantity, title: &str) -> Result<String> {
    let grid = field.grid();
    let dim = grid.dim();
    if dim > 3 {
        return Err(Error::invalid(format!("cannot export a {dim}-dimensional field")));
    }
    let n = grid.points();
    let dims: Vec<usize> = (0..3).map(|a| if a < dim { n[a] } else { 1 }).collect();
    let origin: Vec<f64> = (0..3).map(|a| if a < dim { grid.intervals()[a].0 } else { 0.0 }).collect();
    let spacing: Vec<f64> = (0..3).map(|a| if a < dim { grid.spacing(a) } else { 1.0 }).collect();
    let strides = grid.strides();
    let stride = |a: usize| if a < dim { strides[a] } else { 0 };

    let mut out = String::with_capacity(24 * grid.len() + 256);
    out.push_str("# vtk DataFile Version 3.0\n");
    out.push_str(&title.replace('\n', " "));
    out.push('\n');
    out.push_str("ASCII\nDATASET STRUCTURED_POINTS\n");
    writeln!(out, "DIMENSIONS {} {} {}", dims[0], dims[1], dims[2]).unwrap();
    writeln!(out, "ORIGIN {} {} {}", origin[0], origin[1], origin[2]).unwrap();
    writeln!(out, "SPACING {} {} {}", spacing[0], spacing[1], spacing[2]).unwrap();
    writeln!(out, "POINT_DATA {}", grid.len()).unwrap();
    writeln!(out, "SCALARS {} double 1", quantity.name()).unwrap();
    out.push_str("LOOKUP_TABLE default\n");
    let values = field.values();
    for k in 0..dims[2] {
        for j in 0..dims[1] {
            for i in 0..dims[0] {
                let u = values[i * stride(0) + j * stride(1) + k * stride(2)].re;
                let v = match quantity {
                    ExportQuantity::U => u,
                    ExportQuantity::SinHalfU => (u / 2.0).sin(),
                };
                writeln!(out, "{v}").unwrap();
            }
        }
    }
    Ok(out)
}

/// Convert a snapshot file into a structured-points file.
pub fn export_structured_grid(snapshot: &Path, out: &Path, quantity: ExportQuantity) -> Result<()> {
    let (field, header) = read_snapshot(snapshot)?;
    let title = format!(
        "frsg {} t={} alpha={} epsilon={}",
        quantity.name(),
        header.time,
        header.alpha,
        header.epsilon
    );
    let text = structured_points(&field, quantity, &title)?;
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    fs::write(out, text).map_err(|e| Error::io(out, e))
}
