//! `FRSG0001` binary field snapshots.
//!
//! Layout: 8-byte magic `FRSG0001`, little-endian `u32` header length, UTF-8
//! JSON header, then `∏N_i` little-endian binary64 samples in row-major order.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Field, GridSpec, Space};

pub const MAGIC: &[u8; 8] = b"FRSG0001";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SnapshotQuantity {
    #[serde(rename = "u")]
    U,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "phi_re")]
    PhiRe,
    #[serde(rename = "phi_im")]
    PhiIm,
}

/// Which component of a complex field the payload holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    #[default]
    Re,
    Im,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotHeader {
    pub version: u32,
    pub dim: usize,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub alpha: f64,
    pub epsilon: f64,
    pub time: f64,
    pub field: SnapshotQuantity,
    pub layout: String,
    /// Absent for real quantities; `"im"` marks the imaginary part of a
    /// complex one.
    #[serde(default, skip_serializing_if = "is_re")]
    pub part: Part,
}

fn is_re(p: &Part) -> bool {
    *p == Part::Re
}

/// Metadata supplied when writing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotMeta {
    pub alpha: f64,
    pub epsilon: f64,
    pub time: f64,
    pub field: SnapshotQuantity,
    pub part: Part,
}

impl SnapshotHeader {
    pub fn grid(&self) -> Result<GridSpec> {
        if self.n.len() != self.dim || self.a.len() != self.dim || self.b.len() != self.dim {
            return Err(Error::invalid("snapshot header arrays disagree with dim"));
        }
        GridSpec::new(
            self.a.iter().copied().zip(self.b.iter().copied()).collect(),
            self.n.clone(),
        )
    }

    pub fn meta(&self) -> SnapshotMeta {
        SnapshotMeta {
            alpha: self.alpha,
            epsilon: self.epsilon,
            time: self.time,
            field: self.field,
            part: self.part,
        }
    }

    /// Warning text when the stored α differs from the one a caller expects.
    /// The data stays usable either way.
    pub fn alpha_warning(&self, expected: f64) -> Option<String> {
        (self.alpha != expected).then(|| {
            format!(
                "snapshot was produced with alpha = {} but alpha = {} was requested",
                self.alpha, expected
            )
        })
    }
}

/// Encode a physical field into snapshot bytes (the selected part of every sample).
pub fn encode_snapshot(field: &Field, meta: &SnapshotMeta) -> Result<Vec<u8>> {
    field.expect_space(Space::Physical)?;
    let grid = field.grid();
    let header = SnapshotHeader {
        version: FORMAT_VERSION,
        dim: grid.dim(),
        n: grid.points().to_vec(),
        a: grid.intervals().iter().map(|i| i.0).collect(),
        b: grid.intervals().iter().map(|i| i.1).collect(),
        alpha: meta.alpha,
        epsilon: meta.epsilon,
        time: meta.time,
        field: meta.field,
        layout: "row-major".into(),
        part: meta.part,
    };
    let json = serde_json::to_vec(&header)?;
    let mut out = Vec::with_capacity(12 + json.len() + 8 * grid.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(json.len() as u32).to_le_bytes());
    out.extend_from_slice(&json);
    for c in field.values() {
        let v = match meta.part {
            Part::Re => c.re,
            Part::Im => c.im,
        };
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn write_snapshot(path: &Path, field: &Field, meta: &SnapshotMeta) -> Result<()> {
    let bytes = encode_snapshot(field, meta)?;
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Decode snapshot bytes; `path` only labels errors.
pub fn decode_snapshot(bytes: &[u8], path: &Path) -> Result<(Field, SnapshotHeader)> {
    let bad = |reason: String| Error::Snapshot {
        path: path.to_path_buf(),
        reason,
    };
    if bytes.len() < 12 {
        return Err(bad(format!(
            "file is {} bytes, shorter than the 12-byte preamble",
            bytes.len()
        )));
    }
    if &bytes[..8] != MAGIC {
        return Err(bad(format!(
            "bad magic at offset 0: expected {:?}, found {:?}",
            String::from_utf8_lossy(MAGIC),
            String::from_utf8_lossy(&bytes[..8])
        )));
    }
    let header_len = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let payload_start = 12 + header_len;
    if bytes.len() < payload_start {
        return Err(bad(format!(
            "header at offset 12 declares {header_len} bytes but only {} remain",
            bytes.len() - 12
        )));
    }
    let header: SnapshotHeader = serde_json::from_slice(&bytes[12..payload_start])
        .map_err(|e| bad(format!("header at offset 12: {e}")))?;
    if header.version != FORMAT_VERSION {
        return Err(bad(format!("unsupported version {}", header.version)));
    }
    let grid = header.grid().map_err(|e| bad(e.to_string()))?;
    let expected = 8 * grid.len();
    let actual = bytes.len() - payload_start;
    if actual != expected {
        return Err(bad(format!(
            "payload at offset {payload_start}: expected {expected} bytes, found {actual}"
        )));
    }
    let values = bytes[payload_start..]
        .chunks_exact(8)
        .map(|c| {
            let v = f64::from_le_bytes(c.try_into().unwrap());
            match header.part {
                Part::Re => Complex64::new(v, 0.0),
                Part::Im => Complex64::new(0.0, v),
            }
        })
        .collect();
    Ok((Field::new(grid, Space::Physical, values)?, header))
}

pub fn read_snapshot(path: &Path) -> Result<(Field, SnapshotHeader)> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_snapshot(&bytes, path)
}

/// Write a complex physical field as a real/imaginary pair of files.
pub fn write_complex_pair(
    re_path: &Path,
    im_path: &Path,
    field: &Field,
    meta: SnapshotMeta,
) -> Result<()> {
    write_snapshot(re_path, field, &SnapshotMeta { part: Part::Re, ..meta })?;
    write_snapshot(im_path, field, &SnapshotMeta { part: Part::Im, ..meta })
}

/// Inverse of [`write_complex_pair`].
pub fn read_complex_pair(re_path: &Path, im_path: &Path) -> Result<(Field, SnapshotHeader)> {
    let (re, header) = read_snapshot(re_path)?;
    let (im, _) = read_snapshot(im_path)?;
    let sum = re.axpy(Complex64::new(1.0, 0.0), &im)?;
    Ok((sum, header))
}
