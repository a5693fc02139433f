//! Property-based checks for transforms, norms and corpus estimation.

use num_complex::Complex64;
use proptest::prelude::*;

use vlmult::exponents::ExponentField;
use vlmult::grid::{forward_transform, integrate, inverse_transform, GridSpec, SampledFunction};
use vlmult::harness::estimate_bilinear_norm;
use vlmult::norms::{luxemburg_norm, modular, norm_auto};
use vlmult::symbol::Symbol;

fn small_function(values: Vec<(f64, f64)>) -> SampledFunction {
    let grid = GridSpec::new(1, 4.0, 32).unwrap();
    let vals: Vec<Complex64> = values
        .into_iter()
        .cycle()
        .take(grid.len())
        .map(|(re, im)| Complex64::new(re, im))
        .collect();
    SampledFunction::from_values(grid, vals).unwrap()
}

fn value_vec() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_roundtrip(vals in value_vec()) {
        let f = small_function(vals);
        let back = inverse_transform(&forward_transform(&f));
        prop_assert!(f.max_abs_diff(&back) < 1e-11 * (1.0 + f.max_abs()));
    }

    #[test]
    fn parseval_energy(vals in value_vec()) {
        let f = small_function(vals);
        let grid = f.grid();
        let fh = forward_transform(&f);
        let space: f64 = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.spacing();
        let freq: f64 =
            fh.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.freq_spacing();
        prop_assert!((space - freq).abs() <= 1e-9 * (1.0 + space));
    }

    #[test]
    fn integrate_is_linear(vals in value_vec(), a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let f = small_function(vals.clone());
        let g = small_function(vals.into_iter().rev().collect());
        let lhs = integrate(
            &f.scaled(Complex64::new(a, 0.0))
                .add(&g.scaled(Complex64::new(b, 0.0)))
                .unwrap(),
        );
        let rhs = integrate(&f) * a + integrate(&g) * b;
        prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn norm_homogeneity(vals in value_vec(), c in 0.01f64..100.0, p in 1.0f64..6.0) {
        let f = small_function(vals);
        let pf = ExponentField::constant(p).unwrap();
        let n1 = luxemburg_norm(&f, &pf).unwrap().value;
        let n2 = luxemburg_norm(&f.scaled(Complex64::new(c, 0.0)), &pf).unwrap().value;
        prop_assert!((n2 - c * n1).abs() <= 1e-7 * (1.0 + c * n1));
    }

    #[test]
    fn unit_ball_matches_modular(vals in value_vec(), plo in 1.0f64..3.0, phi in 0.0f64..2.0) {
        // norm <= 1 iff modular <= 1 (up to the bisection residual)
        let f = small_function(vals);
        let p = ExponentField::piecewise(vec![0.0], vec![plo, plo + phi]).unwrap();
        let norm = luxemburg_norm(&f, &p).unwrap().value;
        if norm == 0.0 {
            return Ok(());
        }
        let scaled = f.scaled(Complex64::new(1.0 / norm, 0.0));
        let rho = modular(&scaled, &p, None);
        prop_assert!((rho - 1.0).abs() < 1e-6, "rho at the normalized function = {rho}");
    }

    #[test]
    fn quasi_norm_power_identity(vals in value_vec(), p in 0.4f64..0.95) {
        // for constant p < 1 the quasi-norm equals the p-integral^{1/p}
        let f = small_function(vals);
        let pf = ExponentField::constant(p).unwrap();
        let n = norm_auto(&f, &pf).unwrap().value;
        let grid = f.grid();
        let direct = (f.values().iter().map(|v| v.norm().powf(p)).sum::<f64>()
            * grid.spacing())
        .powf(1.0 / p);
        prop_assert!((n - direct).abs() <= 1e-6 * (1.0 + direct));
    }

    #[test]
    fn estimate_monotone_in_corpus(vals in value_vec(), split in 1usize..6) {
        let grid = GridSpec::new(1, 4.0, 32).unwrap();
        let mut corpus = Vec::new();
        for i in 0..6usize {
            let rot: Vec<(f64, f64)> =
                vals.iter().cycle().skip(i * 5).take(32).cloned().collect();
            let f = small_function(rot.clone());
            let g = small_function(rot.into_iter().rev().collect());
            if f.max_abs() > 1e-6 && g.max_abs() > 1e-6 {
                corpus.push((f, g));
            }
        }
        prop_assume!(corpus.len() > split);
        let _ = grid;
        let m = Symbol::difference(Symbol::gaussian(1, 0.5)).unwrap();
        let p2 = ExponentField::constant(2.0).unwrap();
        let p1 = ExponentField::constant(1.0).unwrap();
        let small = estimate_bilinear_norm(&m, &p2, &p2, &p1, &corpus[..split]).unwrap();
        let full = estimate_bilinear_norm(&m, &p2, &p2, &p1, &corpus).unwrap();
        prop_assert!(full >= small - 1e-12);
    }
}

#[test]
fn estimate_rejects_empty_corpus() {
    let m = Symbol::constant(2, 1.0);
    let p = ExponentField::constant(2.0).unwrap();
    assert!(matches!(
        estimate_bilinear_norm(&m, &p, &p, &p, &[]),
        Err(vlmult::Error::EmptyCorpus)
    ));
}

#[test]
fn slope_fit_recovers_power_law() {
    let xs: Vec<f64> = (1..=12).map(|i| 2f64.powf(i as f64 / 3.0)).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-0.75)).collect();
    let (slope, resid) = vlmult::harness::experiments::fit_loglog_upper_half(&xs, &ys).unwrap();
    assert!((slope + 0.75).abs() < 1e-12);
    assert!(resid < 1e-12);
}
