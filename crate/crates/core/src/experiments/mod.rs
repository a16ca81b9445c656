//! Reference management and convergence sweeps.

pub mod cache;
pub mod osc_table;
pub mod plan;
pub mod report;
pub mod sweeps;

pub use cache::{CacheOutcome, ReferenceCache, ReferenceKey, ReferenceTrajectory, Snapshot};
pub use osc_table::{osc_order_table, upper_triangle_orders, OscTableSpec};
pub use plan::{step_count, Horizon, ReferencePolicy, SweepPlan, MAX_STEPS};
pub use report::{observed_order, Cell, ConvergenceReport, ReportMeta};
pub use sweeps::{energy_sweep, reference_solution, spatial_sweep, temporal_sweep};
