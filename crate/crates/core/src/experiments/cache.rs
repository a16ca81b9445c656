//! Content-addressed store for reference trajectories.
//!
//! Each entry lives in `<cache>/<sha256 of the key JSON>/` and holds
//! `meta.json` plus one `FRSG0001` file per stored quantity and snapshot
//! time. `meta.json` records the SHA-256 of every file; a mismatch on load is
//! treated as corruption and the entry is recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::plan::step_count;
use crate::dynamics::{evolve, ModelParams, Observer, State};
use crate::error::{Error, Result};
use crate::io::snapshot::{
    read_snapshot, write_snapshot, Part, SnapshotMeta, SnapshotQuantity,
};
use crate::scenarios::{make_scenario, ScenarioName};
use crate::spectral::{Field, GridSpec};

const CACHE_FORMAT: u32 = 1;

/// Everything that determines a reference trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceKey {
    pub format: u32,
    pub scenario: ScenarioName,
    pub params: ModelParams,
    pub points: Vec<usize>,
    pub tau: f64,
    /// Native times at which `u`, `v` are stored; the last is the horizon.
    pub times: Vec<f64>,
}

impl ReferenceKey {
    pub fn new(
        scenario: ScenarioName,
        params: ModelParams,
        points: Vec<usize>,
        tau: f64,
        times: Vec<f64>,
    ) -> Self {
        Self {
            format: CACHE_FORMAT,
            scenario,
            params,
            points,
            tau,
            times,
        }
    }

    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("key serializes");
        hex::encode(Sha256::digest(&json))
    }
}

/// `u` and `v` at one stored time.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub time: f64,
    pub u: Field,
    pub v: Field,
}

#[derive(Debug, Clone)]
pub struct ReferenceTrajectory {
    pub key: ReferenceKey,
    pub snapshots: Vec<Snapshot>,
}

impl ReferenceTrajectory {
    pub fn grid(&self) -> &GridSpec {
        self.snapshots[0].u.grid()
    }

    pub fn terminal(&self) -> &Snapshot {
        self.snapshots.last().expect("at least one snapshot")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Computed,
    /// The stored entry failed its integrity check and was rebuilt.
    Recomputed,
}

#[derive(Debug, Serialize, Deserialize)]
struct EntryMeta {
    key: ReferenceKey,
    files: Vec<FileRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FileRecord {
    name: String,
    sha256: String,
}

#[derive(Debug, Clone)]
pub struct ReferenceCache {
    root: PathBuf,
}

impl ReferenceCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn entry_dir(&self, key: &ReferenceKey) -> PathBuf {
        self.root.join(key.digest())
    }

    /// Load the entry for `key`, or run it and store it.
    pub fn get_or_compute(&self, key: &ReferenceKey) -> Result<(ReferenceTrajectory, CacheOutcome)> {
        let dir = self.entry_dir(key);
        let mut outcome = CacheOutcome::Computed;
        if dir.join("meta.json").exists() {
            match self.load(&dir, key) {
                Ok(traj) => return Ok((traj, CacheOutcome::Hit)),
                Err(e) => {
                    log::warn!("reference cache entry {} is corrupt ({e}); recomputing", dir.display());
                    outcome = CacheOutcome::Recomputed;
                }
            }
        }
        let traj = compute_reference(key)?;
        self.store(&dir, &traj)?;
        Ok((traj, outcome))
    }

    fn load(&self, dir: &Path, key: &ReferenceKey) -> Result<ReferenceTrajectory> {
        let meta_path = dir.join("meta.json");
        let text = fs::read(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
        let meta: EntryMeta = serde_json::from_slice(&text)?;
        if &meta.key != key {
            return Err(Error::invalid("stored key differs from requested key"));
        }
        for rec in &meta.files {
            let path = dir.join(&rec.name);
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            if hex::encode(Sha256::digest(&bytes)) != rec.sha256 {
                return Err(Error::Snapshot {
                    path,
                    reason: "content hash mismatch".into(),
                });
            }
        }
        let complex = key.params.variant.is_coupled();
        let mut snapshots = Vec::with_capacity(key.times.len());
        for (i, &time) in key.times.iter().enumerate() {
            let read = |q: &str| -> Result<Field> {
                let (re, _) = read_snapshot(&dir.join(file_name(i, q, Part::Re)))?;
                if complex {
                    let (im, _) = read_snapshot(&dir.join(file_name(i, q, Part::Im)))?;
                    re.axpy(num_complex::Complex64::new(1.0, 0.0), &im)
                } else {
                    Ok(re)
                }
            };
            snapshots.push(Snapshot {
                time,
                u: read("u")?,
                v: read("v")?,
            });
        }
        Ok(ReferenceTrajectory {
            key: key.clone(),
            snapshots,
        })
    }

    fn store(&self, dir: &Path, traj: &ReferenceTrajectory) -> Result<()> {
        let key = &traj.key;
        let staging = self
            .root
            .join(format!(".{}.tmp-{}", key.digest(), std::process::id()));
        if staging.exists() {
            fs::remove_dir_all(&staging).map_err(|e| Error::io(&staging, e))?;
        }
        fs::create_dir_all(&staging).map_err(|e| Error::io(&staging, e))?;
        let parts: &[Part] = if key.params.variant.is_coupled() {
            &[Part::Re, Part::Im]
        } else {
            &[Part::Re]
        };
        let mut files = Vec::new();
        for (i, snap) in traj.snapshots.iter().enumerate() {
            for (q, quantity, field) in [
                ("u", SnapshotQuantity::U, &snap.u),
                ("v", SnapshotQuantity::V, &snap.v),
            ] {
                for &part in parts {
                    let name = file_name(i, q, part);
                    let path = staging.join(&name);
                    let meta = SnapshotMeta {
                        alpha: key.params.alpha,
                        epsilon: key.params.epsilon,
                        time: snap.time,
                        field: quantity,
                        part,
                    };
                    write_snapshot(&path, field, &meta)?;
                    let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
                    files.push(FileRecord {
                        name,
                        sha256: hex::encode(Sha256::digest(&bytes)),
                    });
                }
            }
        }
        let meta = EntryMeta {
            key: key.clone(),
            files,
        };
        let meta_path = staging.join("meta.json");
        fs::write(&meta_path, serde_json::to_vec_pretty(&meta)?)
            .map_err(|e| Error::io(&meta_path, e))?;
        if dir.exists() {
            fs::remove_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        fs::rename(&staging, dir).map_err(|e| Error::io(dir, e))
    }
}

fn file_name(index: usize, quantity: &str, part: Part) -> String {
    match part {
        Part::Re => format!("s{index:03}_{quantity}.frsg"),
        Part::Im => format!("s{index:03}_{quantity}.im.frsg"),
    }
}

/// Run the trajectory described by `key` from its scenario's initial data.
pub fn compute_reference(key: &ReferenceKey) -> Result<ReferenceTrajectory> {
    let snapshots = run_with_snapshots(key.scenario, key.params, &key.points, key.tau, &key.times)?;
    Ok(ReferenceTrajectory {
        key: key.clone(),
        snapshots,
    })
}

/// Integrate a scenario and keep `u`, `v` at each requested native time.
pub fn run_with_snapshots(
    scenario: ScenarioName,
    params: ModelParams,
    points: &[usize],
    tau: f64,
    times: &[f64],
) -> Result<Vec<Snapshot>> {
    if times.is_empty() {
        return Err(Error::invalid("at least one snapshot time is required"));
    }
    let (_, u0, u1) = make_scenario(scenario, Some(points))?;
    let mut state = State::new(params, &u0, &u1)?;
    let targets: Vec<usize> = times
        .iter()
        .map(|&t| step_count(t, tau))
        .collect::<Result<_>>()?;
    if targets.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("snapshot times must be nondecreasing"));
    }
    let last = *targets.last().unwrap();

    struct Collector<'a> {
        targets: &'a [usize],
        times: &'a [f64],
        out: Vec<Snapshot>,
    }
    impl Observer for Collector<'_> {
        fn observe(&mut self, step: usize, state: &State) -> Result<()> {
            for (i, &t) in self.targets.iter().enumerate() {
                if t == step {
                    let (u, v) = state.reconstruct_uv()?;
                    self.out.push(Snapshot {
                        time: self.times[i],
                        u,
                        v,
                    });
                }
            }
            Ok(())
        }
    }
    let mut collector = Collector {
        targets: &targets,
        times,
        out: Vec::with_capacity(times.len()),
    };
    evolve(&mut state, tau, last, &mut [&mut collector])?;
    Ok(collector.out)
}
