use std::f64::consts::PI;
use std::sync::Arc;

use frsg::dynamics::{phi0_from_uv, ModelParams, Phi, State, Variant};
use frsg::io::snapshot::{decode_snapshot, encode_snapshot, Part, SnapshotMeta, SnapshotQuantity};
use frsg::observables::{error_norm, sobolev_norm};
use frsg::spectral::{forward_transform, inverse_transform, resample, Field, GridSpec, SymbolSet};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid_strategy() -> impl Strategy<Value = GridSpec> {
    (
        prop_oneof![Just(2usize), Just(3usize)],
        prop::collection::vec(prop_oneof![Just(4usize), Just(6), Just(8), Just(10)], 3),
        prop::collection::vec((-5.0f64..5.0, 0.5f64..12.0), 3),
    )
        .prop_map(|(dim, n, iv)| {
            GridSpec::new(
                iv[..dim].iter().map(|&(a, l)| (a, a + l)).collect(),
                n[..dim].to_vec(),
            )
            .unwrap()
        })
}

fn random_field(grid: &GridSpec, seed: u64, complex: bool) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Field::from_fn(grid, |_| {
        let re = rng.random_range(-1.0..1.0);
        let im = if complex { rng.random_range(-1.0..1.0) } else { 0.0 };
        Complex64::new(re, im)
    })
}

/// Smooth real data on the grid's domain, built from a few low modes.
fn smooth_real(grid: &GridSpec, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
    let lens: Vec<f64> = (0..grid.dim()).map(|a| grid.length(a)).collect();
    let starts: Vec<f64> = grid.intervals().iter().map(|i| i.0).collect();
    Field::from_real_fn(grid, |x| {
        let th: Vec<f64> = x
            .iter()
            .zip(&lens)
            .zip(&starts)
            .map(|((x, l), a)| 2.0 * PI * (x - a) / l)
            .collect();
        amps[0] + amps[1] * th[0].sin() + amps[2] * (th[1] - th[0]).cos()
    })
}

fn max_rel(a: &Field, b: &Field) -> f64 {
    a.max_distance(b).unwrap() / b.max_abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_round_trip(grid in grid_strategy(), seed in any::<u64>()) {
        let f = random_field(&grid, seed, true);
        let back = inverse_transform(&forward_transform(&f).unwrap()).unwrap();
        prop_assert!(max_rel(&back, &f) < 1e-12);
        let c = forward_transform(&f).unwrap();
        let again = forward_transform(&inverse_transform(&c).unwrap()).unwrap();
        prop_assert!(max_rel(&again, &c) < 1e-12);
    }

    #[test]
    fn parseval(grid in grid_strategy(), seed in any::<u64>()) {
        let f = random_field(&grid, seed, true);
        let lhs: f64 = f.values().iter().map(|c| c.norm_sqr()).sum::<f64>() * grid.cell_volume();
        let c = forward_transform(&f).unwrap();
        let rhs: f64 = c.values().iter().map(|c| c.norm_sqr()).sum::<f64>() * grid.volume();
        prop_assert!(((lhs - rhs) / rhs).abs() < 1e-10);
    }

    #[test]
    fn linear_flow_preserves_sobolev_norms(
        grid in grid_strategy(),
        seed in any::<u64>(),
        alpha in 1.01f64..=2.0,
        t in -5.0f64..5.0,
        s in 0.0f64..2.0,
    ) {
        let symbols = Arc::new(SymbolSet::new(&grid, alpha).unwrap());
        let phi = forward_transform(&random_field(&grid, seed, true)).unwrap();
        let before = sobolev_norm(&phi, s).unwrap();
        let mut state = State::from_phi(ModelParams::real(alpha, 1.0).unwrap(), Phi::Single(phi), symbols);
        state.linear_flow(t);
        let Phi::Single(after) = state.phi() else { unreachable!() };
        let after = sobolev_norm(after, s).unwrap();
        prop_assert!(((after - before) / before).abs() < 1e-12);
    }

    #[test]
    fn reconstruct_inverts_phi0(grid in grid_strategy(), seed in any::<u64>(), alpha in 1.01f64..=2.0) {
        let u0 = smooth_real(&grid, seed);
        let u1 = smooth_real(&grid, seed.wrapping_add(1));
        let symbols = Arc::new(SymbolSet::new(&grid, alpha).unwrap());
        let phi = phi0_from_uv(&u0, &u1, &symbols).unwrap();
        let state = State::from_phi(ModelParams::real(alpha, 0.5).unwrap(), Phi::Single(phi), symbols);
        let (u, v) = state.reconstruct_uv().unwrap();
        prop_assert!(u.max_distance(&u0).unwrap() < 1e-12 * u0.max_abs().max(1.0));
        prop_assert!(v.max_distance(&u1).unwrap() < 1e-12 * u1.max_abs().max(1.0));
    }

    #[test]
    fn snapshot_round_trip_is_bitwise(grid in grid_strategy(), seed in any::<u64>(), t in 0.0f64..100.0) {
        let f = random_field(&grid, seed, false);
        let meta = SnapshotMeta {
            alpha: 1.7,
            epsilon: 0.25,
            time: t,
            field: SnapshotQuantity::V,
            part: Part::Re,
        };
        let bytes = encode_snapshot(&f, &meta).unwrap();
        let (back, header) = decode_snapshot(&bytes, std::path::Path::new("mem")).unwrap();
        prop_assert_eq!(header.meta(), meta);
        for (a, b) in f.values().iter().zip(back.values()) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
        }
    }

    #[test]
    fn sobolev_norm_monotone_in_s(grid in grid_strategy(), seed in any::<u64>(), s in 0.0f64..3.0) {
        let f = random_field(&grid, seed, true);
        let a = sobolev_norm(&f, s).unwrap();
        let b = sobolev_norm(&f, s + 0.5).unwrap();
        prop_assert!(b >= a);
    }

    #[test]
    fn resample_up_then_down(seed in any::<u64>(), n in prop_oneof![Just(4usize), Just(8)]) {
        let coarse = GridSpec::new(vec![(0.0, 3.0), (-1.0, 1.0)], vec![n, n]).unwrap();
        let fine = coarse.with_points(vec![2 * n, 3 * n]).unwrap();
        let f = smooth_real(&coarse, seed);
        let back = resample(&resample(&f, &fine).unwrap(), &coarse).unwrap();
        prop_assert!(max_rel(&back, &f) < 1e-12);
        prop_assert!(error_norm(&f, &resample(&f, &fine).unwrap(), 1.0).unwrap() < 1e-12);
    }
}

#[test]
fn complex_solver_reproduces_real_solver() {
    let grid = GridSpec::cube(2, 0.0, 2.0 * PI, 16).unwrap();
    let u0 = smooth_real(&grid, 3);
    let u1 = smooth_real(&grid, 4);
    let mut real = State::new(ModelParams::real(1.5, 0.8).unwrap(), &u0, &u1).unwrap();
    let mut complex = State::new(ModelParams::new(1.5, 0.8, Variant::ComplexSg).unwrap(), &u0, &u1).unwrap();
    for _ in 0..50 {
        real.step(0.05).unwrap();
        complex.step(0.05).unwrap();
        let (ur, vr) = real.reconstruct_uv().unwrap();
        let (uc, vc) = complex.reconstruct_uv().unwrap();
        assert!(uc.max_distance(&ur).unwrap() < 1e-10);
        assert!(vc.max_distance(&vr).unwrap() < 1e-10);
        let Phi::Coupled { plus, minus } = complex.phi() else { unreachable!() };
        let p = inverse_transform(plus).unwrap();
        let m = inverse_transform(minus).unwrap().map(|c| c.conj());
        assert!(p.max_distance(&m).unwrap() < 1e-10);
    }
}
