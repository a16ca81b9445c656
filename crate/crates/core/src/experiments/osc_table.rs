//! Error/order tables for the oscillatory complex model at slow time `s = 1`.

use std::time::Instant;

use rayon::prelude::*;

use super::cache::{run_with_snapshots, ReferenceCache, Snapshot};
use super::report::{epsilon_labels, Cell, ConvergenceReport, ReferenceIdentity, ReportMeta};
use super::sweeps::reference_solution;
use crate::dynamics::{oscillatory_wrap, ModelParams, Variant};
use crate::error::{Error, Result};
use crate::observables::error_norm;
use crate::scenarios::ScenarioName;

/// Widest table (λ columns).
pub const MAX_DEPTH: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscTableSpec {
    pub alpha: f64,
    pub lambda0: f64,
    /// Number of λ columns, `λ_j = λ0/4^j`.
    pub depth: usize,
    /// Number of ε rows, `ε_i = 2^{-i}`.
    pub epsilon_depth: usize,
    pub p: u32,
    pub n: usize,
    pub lambda_ref: f64,
}

impl OscTableSpec {
    /// N = 64, λ_ref = 1e-4, three ε rows.
    pub fn desk(alpha: f64) -> Self {
        Self {
            alpha,
            lambda0: 0.05,
            depth: 5,
            epsilon_depth: 3,
            p: 1,
            n: 64,
            lambda_ref: 1e-4,
        }
    }

    /// N = 128, λ_ref = 1e-5, five ε rows.
    pub fn full_scale(alpha: f64) -> Self {
        Self {
            n: 128,
            lambda_ref: 1e-5,
            epsilon_depth: 5,
            ..Self::desk(alpha)
        }
    }

    pub fn lambdas(&self) -> Vec<f64> {
        (0..self.depth).map(|j| self.lambda0 / 4f64.powi(j as i32)).collect()
    }

    pub fn epsilons(&self) -> Vec<f64> {
        (0..self.epsilon_depth).map(|i| 0.5f64.powi(i as i32)).collect()
    }
}

/// `‖ω - ω_ref‖_{α/2}` at the horizon.
fn osc_error(num: &Snapshot, reference: &Snapshot, alpha: f64) -> Result<f64> {
    error_norm(&num.u, &reference.u, alpha / 2.0)
}

/// Fill the ε × λ table. Diagonal cells (`λ = λ0 ε²` for `p = 1`) are marked.
pub fn osc_order_table(spec: &OscTableSpec, cache: Option<&ReferenceCache>) -> Result<ConvergenceReport> {
    if spec.depth == 0 || spec.depth > MAX_DEPTH {
        return Err(Error::invalid(format!(
            "table depth must be in 1..={MAX_DEPTH}, got {}",
            spec.depth
        )));
    }
    if spec.epsilon_depth == 0 {
        return Err(Error::invalid("at least one epsilon row is required"));
    }
    if !(spec.lambda_ref > 0.0 && spec.lambda_ref < spec.lambda0 / 4f64.powi(spec.depth as i32 - 1)) {
        return Err(Error::invalid("reference step must be finer than every table step"));
    }
    let start = Instant::now();
    let scenario = ScenarioName::OscComplex2D;
    let points = vec![spec.n; 2];
    let lambdas = spec.lambdas();
    let epsilons = spec.epsilons();
    let mut errors = Vec::new();
    let mut digests = Vec::new();
    for &eps in &epsilons {
        let params = ModelParams::new(spec.alpha, eps, Variant::Oscillatory { p: spec.p })?;
        let ref_clock = oscillatory_wrap(&params, spec.lambda_ref)?;
        let t_end = ref_clock.native_time(1.0);
        ref_clock.steps_to(1.0)?;
        let reference = reference_solution(
            scenario,
            params,
            points.clone(),
            ref_clock.tau,
            vec![t_end],
            cache,
        )?;
        digests.push(reference.key.digest());
        let row: Vec<Cell> = lambdas
            .par_iter()
            .map(|&lambda| {
                let run = || -> Result<f64> {
                    let clock = oscillatory_wrap(&params, lambda)?;
                    clock.steps_to(1.0)?;
                    let snaps = run_with_snapshots(scenario, params, &points, clock.tau, &[t_end])?;
                    osc_error(&snaps[0], reference.terminal(), spec.alpha)
                };
                match run() {
                    Ok(e) => Cell::Value(e),
                    Err(e) => Cell::Failed(e.to_string()),
                }
            })
            .collect();
        errors.push(row);
    }
    let mut report = ConvergenceReport::new(
        "epsilon",
        epsilons.clone(),
        epsilon_labels(&epsilons),
        "lambda",
        lambdas.clone(),
        lambdas.iter().map(|l| format!("{l:e}")).collect(),
        errors,
        ReportMeta {
            kind: "osc-table".into(),
            scenario: scenario.to_string(),
            alpha: spec.alpha,
            variant: Variant::Oscillatory { p: spec.p }.label(),
            clock: "s".into(),
            horizon: "s=1".into(),
            error_norm: "H^{alpha/2} of u".into(),
            reference: Some(ReferenceIdentity {
                n_ref: spec.n,
                tau_ref: spec.lambda_ref,
                digests,
            }),
            wall_time_s: start.elapsed().as_secs_f64(),
        },
    );
    report.marked = diagonal(&epsilons, &lambdas, spec.lambda0, spec.p);
    Ok(report)
}

/// Cells with `λ = λ0 ε^{2p}`.
fn diagonal(epsilons: &[f64], lambdas: &[f64], lambda0: f64, p: u32) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (r, eps) in epsilons.iter().enumerate() {
        let target = lambda0 * eps.powi(2 * p as i32);
        for (c, &l) in lambdas.iter().enumerate() {
            if ((l - target) / target).abs() < 1e-9 {
                out.push((r, c));
            }
        }
    }
    out
}

/// Order entries strictly above the marked diagonal: column `c > r`, so both
/// compared cells satisfy `λ ≤ λ0 ε^{2p}`.
pub fn upper_triangle_orders(report: &ConvergenceReport) -> Vec<(usize, usize, Option<f64>)> {
    let mut out = Vec::new();
    for (r, row) in report.orders.iter().enumerate() {
        for (c, o) in row.iter().enumerate() {
            if c > r {
                out.push((r, c, *o));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladders() {
        let s = OscTableSpec::desk(2.0);
        assert_eq!(s.lambdas().len(), 5);
        assert!((s.lambdas()[4] - 0.05 / 256.0).abs() < 1e-18);
        assert_eq!(s.epsilons(), vec![1.0, 0.5, 0.25]);
        assert_eq!(
            diagonal(&s.epsilons(), &s.lambdas(), 0.05, 1),
            vec![(0, 0), (1, 1), (2, 2)]
        );
    }

    #[test]
    fn depth_guard() {
        let mut s = OscTableSpec::desk(2.0);
        s.depth = 6;
        assert!(osc_order_table(&s, None).is_err());
    }

    #[test]
    fn tiny_table_runs() {
        let s = OscTableSpec {
            alpha: 1.5,
            lambda0: 0.05,
            depth: 2,
            epsilon_depth: 2,
            p: 1,
            n: 8,
            lambda_ref: 1e-3,
        };
        let r = osc_order_table(&s, None).unwrap();
        assert_eq!(r.errors.len(), 2);
        assert!(r.failed_cells().is_empty());
        assert_eq!(upper_triangle_orders(&r).len(), 1);
        assert!(r.orders[0][1].unwrap() > 1.5);
    }
}
