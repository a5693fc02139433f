//! Seeded random corpora: band-limited functions with standard complex
//! normal spectra plus the spectral Gaussian family.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{inverse_transform, Domain, GridSpec, SampledFunction};
use crate::operators::gaussian_g;

/// One draw from the standard complex normal via Box-Muller.
fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    Complex64::new(r * (2.0 * PI * u2).cos(), r * (2.0 * PI * u2).sin())
}

/// Random function with spectrum supported on the `band` lowest signed
/// frequency bins, normalized to max |f| = 1. Modes are drawn in a fixed
/// order (offset -band..=band), so the same seed gives the same physical
/// function on any grid that contains the band.
pub fn band_limited(grid: GridSpec, band: usize, rng: &mut ChaCha8Rng) -> Result<SampledFunction> {
    if grid.dim() != 1 {
        return Err(Error::Config("corpus functions are 1-D".into()));
    }
    if band == 0 || 2 * band >= grid.samples() {
        return Err(Error::Config("band must satisfy 0 < band < N/2".into()));
    }
    let half = grid.samples() / 2;
    let mut fh = SampledFunction::zeros(grid, Domain::Frequency);
    for off in -(band as i64)..=(band as i64) {
        let k = (half as i64 + off) as usize;
        fh.values_mut()[k] = complex_normal(rng);
    }
    let f = inverse_transform(&fh);
    let peak = f.max_abs();
    if peak == 0.0 {
        return Err(Error::EmptyCorpus);
    }
    Ok(f.scaled(Complex64::new(1.0 / peak, 0.0)))
}

/// `count` seeded band-limited pairs.
pub fn band_limited_pairs(
    grid: GridSpec,
    band: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<(SampledFunction, SampledFunction)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Ok((band_limited(grid, band, &mut rng)?, band_limited(grid, band, &mut rng)?)))
        .collect()
}

/// Band-limited pairs plus the Gaussian family (G_lambda, G_lambda) at a
/// few scales whose tails fit the grid.
pub fn estimation_corpus(
    grid: GridSpec,
    band: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<(SampledFunction, SampledFunction)>> {
    let mut pairs = band_limited_pairs(grid, band, count, seed)?;
    for lambda in [1.0, 1.4, 2.0] {
        let g = gaussian_g(lambda, &grid)?;
        pairs.push((g.clone(), g));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::forward_transform;

    #[test]
    fn deterministic_and_normalized() {
        let g = GridSpec::new(1, 8.0, 128).unwrap();
        let a = band_limited_pairs(g, 32, 3, 5).unwrap();
        let b = band_limited_pairs(g, 32, 3, 5).unwrap();
        for (pa, pb) in a.iter().zip(&b) {
            assert_eq!(pa.0.values(), pb.0.values());
            assert_eq!(pa.1.values(), pb.1.values());
        }
        for (f, h) in &a {
            assert!((f.max_abs() - 1.0).abs() < 1e-12);
            assert!((h.max_abs() - 1.0).abs() < 1e-12);
        }
        let c = band_limited_pairs(g, 32, 3, 6).unwrap();
        assert!(a[0].0.max_abs_diff(&c[0].0) > 1e-6);
    }

    #[test]
    fn band_is_respected() {
        let g = GridSpec::new(1, 8.0, 128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = band_limited(g, 16, &mut rng).unwrap();
        let fh = forward_transform(&f);
        for k in 0..g.samples() {
            let off = k as i64 - g.samples() as i64 / 2;
            if off.abs() > 16 {
                assert!(fh.values()[k].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn same_physical_function_across_refinement() {
        // same seed and band on N and 2N grids: identical spectra, so the
        // fine grid samples the same trigonometric polynomial
        let g1 = GridSpec::new(1, 8.0, 128).unwrap();
        let g2 = GridSpec::new(1, 8.0, 256).unwrap();
        let f1 = band_limited_pairs(g1, 32, 1, 9).unwrap().remove(0).0;
        let f2 = band_limited_pairs(g2, 32, 1, 9).unwrap().remove(0).0;
        // the grids share no nodes, so compare spectra; normalization by
        // the sampled peak differs slightly, so allow a common scalar
        let h1 = forward_transform(&f1);
        let h2 = forward_transform(&f2);
        let scale = h2.values()[128] / h1.values()[64];
        assert!((scale.norm() - 1.0).abs() < 0.05);
        for off in -32i64..=32 {
            let k1 = (64 + off) as usize;
            let k2 = (128 + off) as usize;
            let a = h1.values()[k1] * scale;
            let b = h2.values()[k2];
            assert!((a - b).norm() < 1e-10, "off {off}: {a} vs {b}");
        }
    }

    #[test]
    fn estimation_corpus_appends_gaussians() {
        let g = GridSpec::new(1, 8.0, 128).unwrap();
        let c = estimation_corpus(g, 32, 4, 2).unwrap();
        assert_eq!(c.len(), 7);
    }
}
