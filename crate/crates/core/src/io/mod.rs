//! Configuration, snapshots, reports and exports.

pub mod config;
pub mod snapshot;
pub mod tables;
pub mod vtk;
