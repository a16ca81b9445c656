//! Temporal, spatial and energy sweeps against self-convergence references.

use std::time::Instant;

use rayon::prelude::*;

use super::cache::{run_with_snapshots, ReferenceCache, ReferenceKey, ReferenceTrajectory, Snapshot};
use super::plan::{step_count, Horizon, SweepPlan};
use super::report::{
    epsilon_labels, Cell, ConvergenceReport, EnergySeries, ReferenceIdentity, ReportMeta,
};
use crate::dynamics::{evolve, ModelParams, State};
use crate::error::Result;
use crate::observables::{error_norm, EnergyRecorder};
use crate::scenarios::{make_scenario, ScenarioName};

/// Decay factor and floor used to flag spectral convergence.
pub const SPECTRAL_FACTOR: f64 = 10.0;
pub const SPECTRAL_FLOOR: f64 = 1e-8;

/// Run (or load) the reference trajectory of one `(α, ε)` pair.
pub fn reference_solution(
    scenario: ScenarioName,
    params: ModelParams,
    points: Vec<usize>,
    tau: f64,
    times: Vec<f64>,
    cache: Option<&ReferenceCache>,
) -> Result<ReferenceTrajectory> {
    let key = ReferenceKey::new(scenario, params, points, tau, times);
    match cache {
        Some(c) => {
            let (traj, outcome) = c.get_or_compute(&key)?;
            log::info!("reference {} ({outcome:?})", key.digest());
            Ok(traj)
        }
        None => super::cache::compute_reference(&key),
    }
}

fn horizon_label(h: Horizon) -> String {
    match h {
        Horizon::FixedT(t) => format!("t={t}"),
        Horizon::LongTime(t) => format!("t={t}/eps^2"),
    }
}

fn params_for(plan: &SweepPlan, alpha: f64, epsilon: f64) -> Result<ModelParams> {
    Ok(ModelParams::new(alpha, epsilon, plan.variant)?.with_nonlinearity(plan.nonlinearity))
}

/// `‖u - u_ref‖_{α/2}` of one cell.
fn cell_error(num: &Snapshot, reference: &Snapshot, alpha: f64) -> Result<f64> {
    error_norm(&num.u, &reference.u, alpha / 2.0)
}

fn terminal(
    scenario: ScenarioName,
    params: ModelParams,
    points: &[usize],
    tau: f64,
    t: f64,
) -> Result<Snapshot> {
    let mut snaps = run_with_snapshots(scenario, params, points, tau, &[t])?;
    Ok(snaps.pop().expect("one snapshot"))
}

fn to_cell(r: Result<f64>) -> Cell {
    match r {
        Ok(v) => Cell::Value(v),
        Err(e) => {
            log::warn!("sweep cell failed: {e}");
            Cell::Failed(e.to_string())
        }
    }
}

fn format_tau(t: f64) -> String {
    format!("{t:e}")
}

/// Time-step sweep on the reference grid, one report per α (rows ε,
/// columns τ). `row_ratios` carry `error(ε)/error(ε/2)` at fixed τ.
pub fn temporal_sweep(plan: &SweepPlan, cache: Option<&ReferenceCache>) -> Result<Vec<ConvergenceReport>> {
    let budget = plan.step_budget(true)?;
    log::info!("temporal sweep: {budget} steps");
    let points = vec![plan.reference.n_ref; plan.scenario.dim()];
    let mut reports = Vec::new();
    for &alpha in &plan.alphas {
        let start = Instant::now();
        let mut errors = Vec::new();
        let mut digests = Vec::new();
        for &eps in &plan.epsilons {
            let params = params_for(plan, alpha, eps)?;
            let t = plan.horizon.time(eps);
            let reference = reference_solution(
                plan.scenario,
                params,
                points.clone(),
                plan.reference.tau_ref,
                vec![t],
                cache,
            )?;
            digests.push(reference.key.digest());
            let row: Vec<Cell> = plan
                .taus
                .par_iter()
                .map(|&tau| {
                    to_cell(
                        terminal(plan.scenario, params, &points, tau, t)
                            .and_then(|s| cell_error(&s, reference.terminal(), alpha)),
                    )
                })
                .collect();
            errors.push(row);
        }
        reports.push(ConvergenceReport::new(
            "epsilon",
            plan.epsilons.clone(),
            epsilon_labels(&plan.epsilons),
            "tau",
            plan.taus.clone(),
            plan.taus.iter().map(|&t| format_tau(t)).collect(),
            errors,
            ReportMeta {
                kind: "temporal".into(),
                scenario: plan.scenario.to_string(),
                alpha,
                variant: plan.variant.label(),
                clock: "t".into(),
                horizon: horizon_label(plan.horizon),
                error_norm: "H^{alpha/2} of u".into(),
                reference: Some(ReferenceIdentity {
                    n_ref: plan.reference.n_ref,
                    tau_ref: plan.reference.tau_ref,
                    digests,
                }),
                wall_time_s: start.elapsed().as_secs_f64(),
            },
        ));
    }
    Ok(reports)
}

/// Grid sweep at `τ_ref`, one report per α (rows ε, columns N).
pub fn spatial_sweep(plan: &SweepPlan, cache: Option<&ReferenceCache>) -> Result<Vec<ConvergenceReport>> {
    let budget = plan.step_budget(false)?;
    log::info!("spatial sweep: {budget} steps");
    let dim = plan.scenario.dim();
    let ref_points = vec![plan.reference.n_ref; dim];
    let mut reports = Vec::new();
    for &alpha in &plan.alphas {
        let start = Instant::now();
        let mut errors = Vec::new();
        let mut digests = Vec::new();
        for &eps in &plan.epsilons {
            let params = params_for(plan, alpha, eps)?;
            let t = plan.horizon.time(eps);
            let tau = plan.reference.tau_ref;
            let reference =
                reference_solution(plan.scenario, params, ref_points.clone(), tau, vec![t], cache)?;
            digests.push(reference.key.digest());
            let row: Vec<Cell> = plan
                .ns
                .par_iter()
                .map(|&n| {
                    to_cell(
                        terminal(plan.scenario, params, &vec![n; dim], tau, t)
                            .and_then(|s| cell_error(&s, reference.terminal(), alpha)),
                    )
                })
                .collect();
            errors.push(row);
        }
        let mut report = ConvergenceReport::new(
            "epsilon",
            plan.epsilons.clone(),
            epsilon_labels(&plan.epsilons),
            "N",
            plan.ns.iter().map(|&n| n as f64).collect(),
            plan.ns.iter().map(|n| n.to_string()).collect(),
            errors,
            ReportMeta {
                kind: "spatial".into(),
                scenario: plan.scenario.to_string(),
                alpha,
                variant: plan.variant.label(),
                clock: "t".into(),
                horizon: horizon_label(plan.horizon),
                error_norm: "H^{alpha/2} of u".into(),
                reference: Some(ReferenceIdentity {
                    n_ref: plan.reference.n_ref,
                    tau_ref: plan.reference.tau_ref,
                    digests,
                }),
                wall_time_s: start.elapsed().as_secs_f64(),
            },
        );
        report.flag_spectral(SPECTRAL_FACTOR, SPECTRAL_FLOOR);
        reports.push(report);
    }
    Ok(reports)
}

/// Energy drift sweep on the reference grid, one report per α. Cell values are
/// `max_n |E_h^n - E_h^0|` over the horizon; full histories go to `energy`.
pub fn energy_sweep(plan: &SweepPlan, every: usize) -> Result<Vec<ConvergenceReport>> {
    plan.validate()?;
    let dim = plan.scenario.dim();
    let points = vec![plan.reference.n_ref; dim];
    for &eps in &plan.epsilons {
        for &tau in &plan.taus {
            step_count(plan.horizon.time(eps), tau)?;
        }
    }
    let mut reports = Vec::new();
    for &alpha in &plan.alphas {
        let start = Instant::now();
        let mut cells = Vec::new();
        for &eps in &plan.epsilons {
            cells.push(params_for(plan, alpha, eps)?);
        }
        let runs: Vec<Vec<Result<EnergyRecorder>>> = cells
            .iter()
            .zip(&plan.epsilons)
            .map(|(&params, &eps)| {
                plan.taus
                    .par_iter()
                    .map(|&tau| {
                        let t = plan.horizon.time(eps);
                        let (_, u0, u1) = make_scenario(plan.scenario, Some(&points))?;
                        let mut state = State::new(params, &u0, &u1)?;
                        let mut rec = EnergyRecorder::every(every);
                        evolve(&mut state, tau, step_count(t, tau)?, &mut [&mut rec])?;
                        Ok(rec)
                    })
                    .collect()
            })
            .collect();
        let mut errors = Vec::new();
        let mut series = Vec::new();
        for (r, row) in runs.into_iter().enumerate() {
            let mut out = Vec::new();
            for (c, run) in row.into_iter().enumerate() {
                out.push(to_cell(run.map(|rec| {
                    let drift = rec.max_drift();
                    series.push(EnergySeries {
                        row: r,
                        column: c,
                        samples: rec.samples,
                    });
                    drift
                })));
            }
            errors.push(out);
        }
        let mut report = ConvergenceReport::new(
            "epsilon",
            plan.epsilons.clone(),
            epsilon_labels(&plan.epsilons),
            "tau",
            plan.taus.clone(),
            plan.taus.iter().map(|&t| format_tau(t)).collect(),
            errors,
            ReportMeta {
                kind: "energy".into(),
                scenario: plan.scenario.to_string(),
                alpha,
                variant: plan.variant.label(),
                clock: "t".into(),
                horizon: horizon_label(plan.horizon),
                error_norm: "max |E^n - E^0|".into(),
                reference: None,
                wall_time_s: start.elapsed().as_secs_f64(),
            },
        );
        report.energy = series;
        reports.push(report);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::NonlinearTerm;
    use crate::experiments::plan::ReferencePolicy;

    fn small_plan() -> SweepPlan {
        let mut plan = SweepPlan::new(ScenarioName::Smooth2D, Horizon::FixedT(0.2));
        plan.epsilons = vec![1.0, 0.5];
        plan.taus = vec![0.1, 0.05];
        plan.ns = vec![8, 16];
        plan.reference = ReferencePolicy {
            tau_ref: 0.0125,
            n_ref: 16,
        };
        plan
    }

    #[test]
    fn linear_hook_is_exact_in_time() {
        let mut plan = small_plan();
        plan.nonlinearity = NonlinearTerm::Off;
        let r = &temporal_sweep(&plan, None).unwrap()[0];
        for row in &r.errors {
            for c in row {
                assert!(c.value().unwrap() < 1e-10, "{c:?}");
            }
        }
    }

    #[test]
    fn shapes_and_metadata() {
        let plan = small_plan();
        let reports = spatial_sweep(&plan, None).unwrap();
        assert_eq!(reports.len(), 1);
        let r = &reports[0];
        assert_eq!(r.errors.len(), 2);
        assert_eq!(r.errors[0].len(), 2);
        assert_eq!(r.meta.reference.as_ref().unwrap().digests.len(), 2);
        assert_eq!(r.spectral.len(), 2);
    }

    #[test]
    fn energy_series_recorded() {
        let plan = small_plan();
        let r = &energy_sweep(&plan, 1).unwrap()[0];
        assert_eq!(r.energy.len(), 4);
        assert_eq!(r.energy[0].samples.len(), 3);
        assert!(r.error(0, 1).unwrap() < r.error(0, 0).unwrap());
    }

    #[test]
    fn over_budget_refused() {
        let mut plan = small_plan();
        plan.horizon = Horizon::LongTime(1e6);
        assert!(temporal_sweep(&plan, None).is_err());
    }
}
