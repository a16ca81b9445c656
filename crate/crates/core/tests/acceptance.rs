//! One PASS/FAIL line per acceptance criterion, followed by diagnostics.
//! References are cached under the target's scratch directory, so reruns
//! only pay for the sweep cells.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use frsg::dynamics::{ModelParams, Phi, State, Variant};
use frsg::experiments::cache::run_with_snapshots;
use frsg::experiments::{
    energy_sweep, osc_order_table, reference_solution, spatial_sweep, temporal_sweep, upper_triangle_orders,
    ConvergenceReport, Horizon, OscTableSpec, ReferenceCache, SweepPlan,
};
use frsg::io::snapshot::{decode_snapshot, encode_snapshot, write_snapshot, Part, SnapshotMeta, SnapshotQuantity};
use frsg::io::vtk::{export_structured_grid, ExportQuantity};
use frsg::observables::{error_norm, sobolev_norm, twisted_increment};
use frsg::scenarios::{make_scenario, ScenarioName};
use frsg::spectral::{forward_transform, inverse_transform, Field, SymbolSet};

use common::oracle::local_error_ratios;

const ORDER_TOL_OSC: f64 = 0.15;
const ORDER_TOL_TIME: f64 = 0.2;
const EPS_RATIO_BAND: (f64, f64) = (2.5, 6.0);
const SPECTRAL_FACTOR: f64 = 10.0;
const SPECTRAL_FLOOR: f64 = 1e-8;
const EPS_SPREAD_MAX: f64 = 2.0;
const ENERGY_RATIO_BAND: (f64, f64) = (3.0, 5.5);
const RING_MARGIN: f64 = 0.5;

/// ε = 1 row of the oscillatory table at N = 128, λ_ref = 1e-5.
const EXPECTED_EPS1_ERRORS: [f64; 5] = [4.5038e-01, 2.5566e-02, 1.5881e-03, 9.9206e-05, 6.1850e-06];

struct Verdict {
    id: usize,
    name: &'static str,
    pass: bool,
    summary: String,
    seconds: f64,
    budget: f64,
    diagnostics: Vec<String>,
}

fn cache() -> ReferenceCache {
    ReferenceCache::new(PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-cache"))
}

fn sci(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn within(x: f64, band: (f64, f64)) -> bool {
    x >= band.0 && x <= band.1
}

fn err(r: &ConvergenceReport, row: usize, col: usize) -> f64 {
    r.error(row, col).unwrap_or(f64::NAN)
}

fn row_line(r: &ConvergenceReport, row: usize) -> String {
    let e: Vec<String> = (0..r.columns.len()).map(|c| format!("{:.4e}", err(r, row, c))).collect();
    let o: Vec<String> = r.orders[row]
        .iter()
        .map(|o| o.map_or("-".into(), |v| format!("{v:.4}")))
        .collect();
    format!("{}={}: errors [{}] orders [{}]", r.row_axis, r.row_labels[row], e.join(", "), o.join(", "))
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let cache = cache();
    let desk = osc_order_table(&OscTableSpec::desk(2.0), Some(&cache)).unwrap();
    let upper = upper_triangle_orders(&desk);
    let off: Vec<String> = upper
        .iter()
        .filter(|(_, _, o)| !o.is_some_and(|v| (v - 2.0).abs() <= ORDER_TOL_OSC))
        .map(|(r, c, o)| format!("({r},{c})={}", o.map_or("-".into(), |v| format!("{v:.4}"))))
        .collect();
    let mut diagnostics: Vec<String> = (0..desk.rows.len()).map(|r| format!("desk {}", row_line(&desk, r))).collect();

    let mut full = OscTableSpec::full_scale(2.0);
    full.epsilon_depth = 1;
    let full = osc_order_table(&full, Some(&cache)).unwrap();
    let factors: Vec<f64> = EXPECTED_EPS1_ERRORS
        .iter()
        .enumerate()
        .map(|(c, &e)| err(&full, 0, c) / e)
        .collect();
    let magnitudes_ok = factors.iter().all(|f| (0.5..=2.0).contains(f));
    diagnostics.push(format!("N=128 lambda_ref=1e-5 {}", row_line(&full, 0)));
    diagnostics.push(format!("N=128 error / expected: {factors:.4?}"));

    let mut fine_ref = OscTableSpec::desk(2.0);
    fine_ref.lambda_ref = 1e-5;
    fine_ref.epsilon_depth = 1;
    let fine_ref = osc_order_table(&fine_ref, Some(&cache)).unwrap();
    diagnostics.push(format!("N=64 lambda_ref=1e-5 {}", row_line(&fine_ref, 0)));

    Verdict {
        id: 1,
        name: "oscillatory table orders",
        pass: off.is_empty() && magnitudes_ok,
        summary: format!(
            "{}/{} upper-triangle orders within 2±{ORDER_TOL_OSC} (outside: {}); N=128 row within x2: {magnitudes_ok}",
            upper.len() - off.len(),
            upper.len(),
            if off.is_empty() { "none".into() } else { off.join(" ") }
        ),
        seconds: start.elapsed().as_secs_f64(),
        budget: 600.0,
        diagnostics,
    }
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let mut plan = SweepPlan::new(ScenarioName::Smooth2D, Horizon::LongTime(1.0));
    plan.alphas = vec![2.0, 1.5, 1.2];
    plan.epsilons = vec![0.5];
    plan.taus = vec![4e-2, 2e-2, 1e-2, 5e-3];
    let reports = temporal_sweep(&plan, Some(&cache())).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    let mut diagnostics = Vec::new();
    for r in &reports {
        let last: Vec<Option<f64>> = r.orders[0][2..].to_vec();
        pass &= last.iter().all(|o| o.is_some_and(|v| (v - 2.0).abs() <= ORDER_TOL_TIME));
        parts.push(format!(
            "alpha={}: {}",
            r.meta.alpha,
            last.iter().map(|o| o.map_or("-".into(), |v| format!("{v:.4}"))).collect::<Vec<_>>().join(", ")
        ));
        diagnostics.push(format!("alpha={} {}", r.meta.alpha, row_line(r, 0)));
    }
    Verdict {
        id: 2,
        name: "temporal second order at t=1/eps^2",
        pass,
        summary: format!("last-rung orders (2±{ORDER_TOL_TIME}): {}", parts.join("; ")),
        seconds: start.elapsed().as_secs_f64(),
        budget: 300.0,
        diagnostics,
    }
}

/// Largest error over `samples` equally spaced times up to `1/ε²`.
fn error_envelope(epsilon: f64, tau: f64, samples: usize) -> f64 {
    let params = ModelParams::real(2.0, epsilon).unwrap();
    let t = 1.0 / (epsilon * epsilon);
    let times: Vec<f64> = (1..=samples).map(|k| t * k as f64 / samples as f64).collect();
    let reference =
        reference_solution(ScenarioName::Smooth2D, params, vec![64, 64], 2.5e-4, times.clone(), Some(&cache())).unwrap();
    let run = run_with_snapshots(ScenarioName::Smooth2D, params, &[64, 64], tau, &times).unwrap();
    reference
        .snapshots
        .iter()
        .zip(&run)
        .map(|(a, b)| error_norm(&b.u, &a.u, 1.0).unwrap())
        .fold(0.0, f64::max)
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut plan = SweepPlan::new(ScenarioName::Smooth2D, Horizon::LongTime(1.0));
    plan.epsilons = vec![0.5, 0.25, 0.125];
    plan.taus = vec![1e-2];
    let r = temporal_sweep(&plan, Some(&cache())).unwrap().remove(0);
    let errors: Vec<f64> = (0..3).map(|row| err(&r, row, 0)).collect();
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let pass = ratios.iter().all(|&q| within(q, EPS_RATIO_BAND));
    let elapsed = start.elapsed().as_secs_f64();

    let envelope: Vec<f64> = plan.epsilons.iter().map(|&e| error_envelope(e, 1e-2, 16)).collect();
    let env_ratios: Vec<f64> = envelope.windows(2).map(|w| w[0] / w[1]).collect();
    Verdict {
        id: 3,
        name: "eps^2 scaling at fixed tau",
        pass,
        summary: format!(
            "errors at t=1/eps^2 {}, ratios {ratios:.3?} (band [{}, {}])",
            sci(&errors),
            EPS_RATIO_BAND.0, EPS_RATIO_BAND.1
        ),
        seconds: elapsed,
        budget: 600.0,
        diagnostics: vec![format!(
            "max error over 16 times in (0, 1/eps^2]: {}, ratios {env_ratios:.3?}",
            sci(&envelope)
        )],
    }
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let mut plan = SweepPlan::new(ScenarioName::Smooth2D, Horizon::FixedT(4.0));
    plan.epsilons = vec![1.0, 0.5, 0.25];
    plan.ns = vec![8, 16, 24, 32];
    let r = spatial_sweep(&plan, Some(&cache())).unwrap().remove(0);
    let decay_ok = r.spectral[1] == Some(true);
    let spreads: Vec<f64> = (0..plan.ns.len())
        .map(|c| {
            let col: Vec<f64> = (0..3).map(|row| err(&r, row, c)).collect();
            col.iter().cloned().fold(f64::MIN, f64::max) / col.iter().cloned().fold(f64::MAX, f64::min)
        })
        .collect();
    let spread_ok = spreads.iter().all(|&s| s < EPS_SPREAD_MAX);
    let eps_half: Vec<f64> = (0..plan.ns.len()).map(|c| err(&r, 1, c)).collect();
    Verdict {
        id: 4,
        name: "spectral spatial accuracy",
        pass: decay_ok && spread_ok,
        summary: format!(
            "eps=1/2 errors {} drop >= {SPECTRAL_FACTOR}x until {SPECTRAL_FLOOR:e}: {decay_ok}; \
             max/min over eps per N {spreads:.3?} (< {EPS_SPREAD_MAX})",
            sci(&eps_half)
        ),
        seconds: start.elapsed().as_secs_f64(),
        budget: 180.0,
        diagnostics: (0..3).map(|row| row_line(&r, row)).collect(),
    }
}

fn criterion_5() -> Verdict {
    let start = Instant::now();
    let mut plan = SweepPlan::new(ScenarioName::Smooth2D, Horizon::FixedT(4.0));
    plan.alphas = vec![2.0, 1.5];
    plan.epsilons = vec![0.5];
    plan.taus = vec![1e-2, 5e-3];
    let reports = energy_sweep(&plan, 1).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for r in &reports {
        let (a, b) = (err(r, 0, 0), err(r, 0, 1));
        let ratio = a / b;
        pass &= within(ratio, ENERGY_RATIO_BAND);
        parts.push(format!("alpha={}: {a:.4e}/{b:.4e} = {ratio:.3}", r.meta.alpha));
    }
    Verdict {
        id: 5,
        name: "energy drift vs tau",
        pass,
        summary: format!(
            "max|E^n-E^0| ratio in [{}, {}]: {}",
            ENERGY_RATIO_BAND.0,
            ENERGY_RATIO_BAND.1,
            parts.join("; ")
        ),
        seconds: start.elapsed().as_secs_f64(),
        budget: 120.0,
        diagnostics: Vec::new(),
    }
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let mut checks: Vec<(String, bool)> = Vec::new();
    let (spec, u0, u1) = make_scenario(ScenarioName::Smooth2D, Some(&[32])).unwrap();
    let grid = spec.grid;

    let symbols = std::sync::Arc::new(SymbolSet::new(&grid, 1.5).unwrap());
    let phi = frsg::dynamics::phi0_from_uv(&u0, &u1, &symbols).unwrap();
    let before = sobolev_norm(&phi, 0.75).unwrap();
    let mut lin = State::from_phi(ModelParams::real(1.5, 1.0).unwrap(), Phi::Single(phi), symbols);
    lin.linear_flow(3.7);
    let Phi::Single(after) = lin.phi() else { unreachable!() };
    let rel = (sobolev_norm(after, 0.75).unwrap() - before).abs() / before;
    checks.push((format!("linear flow norm {rel:.1e}"), rel < 1e-12));

    let back = inverse_transform(&forward_transform(&u0).unwrap()).unwrap();
    let rt = back.max_distance(&u0).unwrap() / u0.max_abs();
    checks.push((format!("round trip {rt:.1e}"), rt < 1e-12));

    let (errors, ratios) = local_error_ratios(7, &[0.2, 0.1, 0.05]);
    let strang_ok = errors.iter().all(|e| e.is_finite()) && ratios.iter().all(|&q| within(q, (6.5, 9.5)));
    checks.push((format!("Strang local ratios {ratios:.2?}"), strang_ok));

    let increment = |eps: f64, tau: f64| {
        let s0 = State::new(ModelParams::real(1.5, eps).unwrap(), &u0, &u1).unwrap();
        let mut s1 = s0.clone();
        s1.step(tau).unwrap();
        twisted_increment(&s0, &s1, 0.75).unwrap()
    };
    let tau_ratio = increment(0.5, 0.02) / increment(0.5, 0.01);
    let eps_ratio = increment(0.5, 0.01) / increment(0.25, 0.01);
    checks.push((
        format!("twisted tau ratio {tau_ratio:.3}, eps ratio {eps_ratio:.3}"),
        within(tau_ratio, (1.7, 2.3)) && within(eps_ratio, (3.0, 5.5)),
    ));

    let state = State::new(ModelParams::real(1.5, 0.5).unwrap(), &u0, &u1).unwrap();
    let (u, v) = state.reconstruct_uv().unwrap();
    let rec = u.max_distance(&u0).unwrap().max(v.max_distance(&u1).unwrap());
    checks.push((format!("reconstruct∘phi0 {rec:.1e}"), rec < 1e-12));

    let mut real = State::new(ModelParams::real(1.5, 0.8).unwrap(), &u0, &u1).unwrap();
    let mut complex = State::new(ModelParams::new(1.5, 0.8, Variant::ComplexSg).unwrap(), &u0, &u1).unwrap();
    for _ in 0..20 {
        real.step(0.05).unwrap();
        complex.step(0.05).unwrap();
    }
    let (ur, _) = real.reconstruct_uv().unwrap();
    let (uc, _) = complex.reconstruct_uv().unwrap();
    let dc = uc.max_distance(&ur).unwrap();
    checks.push((format!("complex vs real {dc:.1e}"), dc < 1e-10));

    let meta = SnapshotMeta {
        alpha: 1.5,
        epsilon: 0.8,
        time: real.time(),
        field: SnapshotQuantity::U,
        part: Part::Re,
    };
    let bytes = encode_snapshot(&ur, &meta).unwrap();
    let (decoded, header) = decode_snapshot(&bytes, std::path::Path::new("mem")).unwrap();
    let bitwise = header.meta() == meta
        && decoded.values().iter().zip(ur.values()).all(|(a, b)| a.re.to_bits() == b.re.to_bits());
    checks.push(("snapshot round trip".into(), bitwise));

    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
    Verdict {
        id: 6,
        name: "property suite",
        pass: failed.is_empty(),
        summary: format!("{}/{} checks pass", checks.len() - failed.len(), checks.len()),
        seconds: start.elapsed().as_secs_f64(),
        budget: 60.0,
        diagnostics: checks.iter().map(|(s, ok)| format!("{} {s}", if *ok { "ok  " } else { "FAIL" })).collect(),
    }
}

/// Smallest distance from the origin to a node where `|sin(u/2)| >= 0.95`.
fn ring_radius(u: &Field) -> f64 {
    let mut r = f64::INFINITY;
    u.grid().for_each_node(|i, x| {
        if (u.values()[i].re / 2.0).sin().abs() >= 0.95 {
            r = r.min(x[0].hypot(x[1]));
        }
    });
    r
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let params = ModelParams::real(2.0, 1.0).unwrap();
    let times = [0.0, 5.0, 12.0];
    let snaps = run_with_snapshots(ScenarioName::EllipticRing2D, params, &[128, 128], 2e-3, &times).unwrap();
    let radii: Vec<f64> = snaps.iter().map(|s| ring_radius(&s.u)).collect();
    let cycle = radii[0] - radii[1] >= RING_MARGIN && radii[2] - radii[1] >= RING_MARGIN;

    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-vtk");
    let mut parsed = 0;
    for s in &snaps {
        let meta = SnapshotMeta {
            alpha: 2.0,
            epsilon: 1.0,
            time: s.time,
            field: SnapshotQuantity::U,
            part: Part::Re,
        };
        let snap = dir.join(format!("ring_t{}.frsg", s.time));
        let vtk = dir.join(format!("ring_t{}.vtk", s.time));
        write_snapshot(&snap, &s.u, &meta).unwrap();
        export_structured_grid(&snap, &vtk, ExportQuantity::SinHalfU).unwrap();
        if let Ok(v) = vtkio::Vtk::import(&vtk) {
            if matches!(v.data, vtkio::model::DataSet::ImageData { .. }) {
                parsed += 1;
            }
        }
    }
    let exported = parsed == snaps.len();
    Verdict {
        id: 7,
        name: "elliptic ring shrink-expand",
        pass: cycle && exported,
        summary: format!(
            "ring radius at t=0,5,12: {radii:.3?} (contract and re-expand by >= {RING_MARGIN}); \
             {parsed}/{} exports parsed",
            snaps.len()
        ),
        seconds: start.elapsed().as_secs_f64(),
        budget: 600.0,
        diagnostics: snaps
            .iter()
            .map(|s| {
                let c = s.u.values()[64 * 128 + 64].re;
                format!("t={}: u(0,0)={c:.4}", s.time)
            })
            .collect(),
    }
}

#[test]
fn acceptance() {
    let criteria: [fn() -> Verdict; 7] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
    ];
    let verdicts: Vec<Verdict> = criteria.iter().map(|f| f()).collect();
    println!();
    for v in &verdicts {
        let in_budget = v.seconds <= v.budget;
        println!(
            "[{}] criterion {}: {}: {} ({:.1}s, budget {:.0}s)",
            if v.pass && in_budget { "PASS" } else { "FAIL" },
            v.id,
            v.name,
            v.summary,
            v.seconds,
            v.budget
        );
    }
    println!();
    for v in &verdicts {
        for d in &v.diagnostics {
            println!("  criterion {} | {d}", v.id);
        }
    }
    let failed: Vec<usize> = verdicts
        .iter()
        .filter(|v| !(v.pass && v.seconds <= v.budget))
        .map(|v| v.id)
        .collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
