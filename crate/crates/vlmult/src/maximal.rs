//! Hardy-Littlewood, sharp, delta-power and multilinear maximal
//! operators, with sups taken over the exhaustive family of grid-aligned
//! cubes (all intervals in 1-D, all axis-aligned squares in 2-D). An
//! exhaustive family keeps comparison constants out of the tests; cube
//! averages are O(1) through prefix sums.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, SampledFunction};
use crate::weights::PowerWeight;

/// Largest 1-D grid for exhaustive cube sweeps.
pub const CUBE_MAX_SAMPLES_1D: usize = 512;
/// Largest 2-D grid for exhaustive square sweeps.
pub const CUBE_MAX_SAMPLES_2D: usize = 64;

fn check_cube_cap(grid: &GridSpec) -> Result<()> {
    let cap = if grid.dim() == 1 {
        CUBE_MAX_SAMPLES_1D
    } else {
        CUBE_MAX_SAMPLES_2D
    };
    if grid.samples() > cap {
        return Err(Error::SizeOverrun(format!(
            "exhaustive cube sweep supports at most {cap} samples per axis in {}-D",
            grid.dim()
        )));
    }
    Ok(())
}

fn magnitudes(f: &SampledFunction) -> Vec<f64> {
    f.values().iter().map(|v| v.norm()).collect()
}

fn from_reals(grid: GridSpec, vals: Vec<f64>) -> SampledFunction {
    let values = vals.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    SampledFunction::from_values(grid, values).expect("finite maximal values")
}

/// sup over grid-aligned cubes containing each node of the cube average;
/// `g` holds nonnegative node values. Returns per-node sups.
fn cube_sup_average(grid: &GridSpec, g: &[f64]) -> Vec<f64> {
    let n = grid.samples();
    let mut out = vec![0.0f64; grid.len()];
    match grid.dim() {
        1 => {
            let mut prefix = vec![0.0f64; n + 1];
            for j in 0..n {
                prefix[j + 1] = prefix[j] + g[j];
            }
            for i0 in 0..n {
                for i1 in i0 + 1..=n {
                    let avg = (prefix[i1] - prefix[i0]) / (i1 - i0) as f64;
                    for o in &mut out[i0..i1] {
                        if avg > *o {
                            *o = avg;
                        }
                    }
                }
            }
        }
        _ => {
            let pre = prefix2d(n, g);
            for s in 1..=n {
                let inv = 1.0 / (s * s) as f64;
                for r0 in 0..=n - s {
                    for c0 in 0..=n - s {
                        let avg = rect_sum(&pre, n, r0, c0, s) * inv;
                        for r in r0..r0 + s {
                            for o in &mut out[r * n + c0..r * n + c0 + s] {
                                if avg > *o {
                                    *o = avg;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn prefix2d(n: usize, g: &[f64]) -> Vec<f64> {
    let mut pre = vec![0.0f64; (n + 1) * (n + 1)];
    for r in 0..n {
        let mut row = 0.0;
        for c in 0..n {
            row += g[r * n + c];
            pre[(r + 1) * (n + 1) + (c + 1)] = pre[r * (n + 1) + (c + 1)] + row;
        }
    }
    pre
}

fn rect_sum(pre: &[f64], n: usize, r0: usize, c0: usize, s: usize) -> f64 {
    let w = n + 1;
    pre[(r0 + s) * w + (c0 + s)] - pre[r0 * w + (c0 + s)] - pre[(r0 + s) * w + c0]
        + pre[r0 * w + c0]
}

/// M f(x) = sup_{Q contains x} (1/|Q|) integral_Q |f|.
pub fn hl_maximal(f: &SampledFunction) -> Result<SampledFunction> {
    let grid = f.grid();
    check_cube_cap(&grid)?;
    let g = magnitudes(f);
    Ok(from_reals(grid, cube_sup_average(&grid, &g)))
}

/// Mean absolute deviation from the median of `sorted[..len]`, given its
/// prefix sums; the median is the exact minimizer of c -> avg |g - c|.
fn median_abs_dev(sorted: &[f64], prefix: &[f64], len: usize) -> f64 {
    let m = (len - 1) / 2;
    let med = sorted[m];
    let below = med * (m + 1) as f64 - prefix[m + 1];
    let above = (prefix[len] - prefix[m + 1]) - med * (len - m - 1) as f64;
    (below + above) / len as f64
}

/// M# f(x) = sup_{Q contains x} inf_c (1/|Q|) integral_Q | |f| - c |.
/// Complex inputs are reduced to |f| first.
pub fn sharp_maximal(f: &SampledFunction) -> Result<SampledFunction> {
    let grid = f.grid();
    check_cube_cap(&grid)?;
    let g = magnitudes(f);
    let n = grid.samples();
    let mut out = vec![0.0f64; grid.len()];
    match grid.dim() {
        1 => {
            for i0 in 0..n {
                // grow the interval rightward, keeping a sorted copy
                let mut sorted: Vec<f64> = Vec::with_capacity(n - i0);
                let mut prefix: Vec<f64> = vec![0.0];
                for i1 in i0 + 1..=n {
                    let v = g[i1 - 1];
                    let pos = sorted.partition_point(|s| *s < v);
                    sorted.insert(pos, v);
                    prefix.push(0.0);
                    for k in pos..sorted.len() {
                        prefix[k + 1] = prefix[k] + sorted[k];
                    }
                    let dev = median_abs_dev(&sorted, &prefix, sorted.len());
                    for o in &mut out[i0..i1] {
                        if dev > *o {
                            *o = dev;
                        }
                    }
                }
            }
        }
        _ => {
            for s in 1..=n {
                let mut block: Vec<f64> = Vec::with_capacity(s * s);
                for r0 in 0..=n - s {
                    for c0 in 0..=n - s {
                        block.clear();
                        for r in r0..r0 + s {
                            block.extend_from_slice(&g[r * n + c0..r * n + c0 + s]);
                        }
                        block.sort_by(|a, b| a.partial_cmp(b).unwrap());
                        let mut prefix = vec![0.0; block.len() + 1];
                        for (k, v) in block.iter().enumerate() {
                            prefix[k + 1] = prefix[k] + v;
                        }
                        let dev = median_abs_dev(&block, &prefix, block.len());
                        for r in r0..r0 + s {
                            for o in &mut out[r * n + c0..r * n + c0 + s] {
                                if dev > *o {
                                    *o = dev;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(from_reals(grid, out))
}

fn power_samples(f: &SampledFunction, delta: f64) -> Vec<f64> {
    f.values().iter().map(|v| v.norm().powf(delta)).collect()
}

/// M_delta f = (M |f|^delta)^{1/delta}.
pub fn m_delta(f: &SampledFunction, delta: f64) -> Result<SampledFunction> {
    if !(delta > 0.0) {
        return Err(Error::Config("m_delta needs delta > 0".into()));
    }
    let grid = f.grid();
    check_cube_cap(&grid)?;
    let g = power_samples(f, delta);
    let sup = cube_sup_average(&grid, &g);
    Ok(from_reals(
        grid,
        sup.into_iter().map(|v| v.powf(1.0 / delta)).collect(),
    ))
}

/// M_delta^# f = (M# |f|^delta)^{1/delta}.
pub fn m_delta_sharp(f: &SampledFunction, delta: f64) -> Result<SampledFunction> {
    if !(delta > 0.0) {
        return Err(Error::Config("m_delta_sharp needs delta > 0".into()));
    }
    let grid = f.grid();
    let powered = from_reals(grid, power_samples(f, delta));
    let sharp = sharp_maximal(&powered)?;
    let vals = sharp
        .values()
        .iter()
        .map(|v| v.re.powf(1.0 / delta))
        .collect();
    Ok(from_reals(grid, vals))
}

/// M_{p0}(f1, ..., fN)(x) = sup over a single common cube of the product
/// of per-function L^{p0} averages.
pub fn multilinear_maximal(fs: &[&SampledFunction], p0: f64) -> Result<SampledFunction> {
    if fs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if !(p0 >= 1.0) {
        return Err(Error::Config("multilinear maximal needs p0 >= 1".into()));
    }
    let grid = fs[0].grid();
    if fs.iter().any(|f| f.grid() != grid) {
        return Err(Error::GridMismatch);
    }
    check_cube_cap(&grid)?;
    let n = grid.samples();
    let powered: Vec<Vec<f64>> = fs.iter().map(|f| power_samples(f, p0)).collect();
    let mut out = vec![0.0f64; grid.len()];
    match grid.dim() {
        1 => {
            let prefixes: Vec<Vec<f64>> = powered
                .iter()
                .map(|g| {
                    let mut p = vec![0.0; n + 1];
                    for j in 0..n {
                        p[j + 1] = p[j] + g[j];
                    }
                    p
                })
                .collect();
            for i0 in 0..n {
                for i1 in i0 + 1..=n {
                    let inv = 1.0 / (i1 - i0) as f64;
                    let mut prod = 1.0;
                    for p in &prefixes {
                        prod *= ((p[i1] - p[i0]) * inv).powf(1.0 / p0);
                    }
                    for o in &mut out[i0..i1] {
                        if prod > *o {
                            *o = prod;
                        }
                    }
                }
            }
        }
        _ => {
            let prefixes: Vec<Vec<f64>> = powered.iter().map(|g| prefix2d(n, g)).collect();
            for s in 1..=n {
                let inv = 1.0 / (s * s) as f64;
                for r0 in 0..=n - s {
                    for c0 in 0..=n - s {
                        let mut prod = 1.0;
                        for p in &prefixes {
                            prod *= (rect_sum(p, n, r0, c0, s) * inv).powf(1.0 / p0);
                        }
                        for r in r0..r0 + s {
                            for o in &mut out[r * n + c0..r * n + c0 + s] {
                                if prod > *o {
                                    *o = prod;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(from_reals(grid, out))
}

/// integral (M_delta f)^q w dx / integral (M_delta^# f)^q w dx.
pub fn fefferman_stein_ratio(
    f: &SampledFunction,
    delta: f64,
    q: f64,
    w: &PowerWeight,
) -> Result<f64> {
    if !(delta > 0.0 && q > delta) {
        return Err(Error::Config("fefferman_stein_ratio needs 0 < delta < q".into()));
    }
    let grid = f.grid();
    let ws = w.sample(&grid)?;
    let md = m_delta(f, delta)?;
    let ms = m_delta_sharp(f, delta)?;
    let hn = grid.spacing().powi(grid.dim() as i32);
    let mut num = 0.0;
    let mut den = 0.0;
    for idx in 0..grid.len() {
        num += md.values()[idx].re.powf(q) * ws[idx] * hn;
        den += ms.values()[idx].re.powf(q) * ws[idx] * hn;
    }
    // the sharp maximal of a constant is zero only up to roundoff in the
    // median deviations, so degeneracy is a relative test
    if den <= 1e-12 * num {
        return Err(Error::ZeroDenominator(
            "sharp maximal vanishes identically (constant input)".into(),
        ));
    }
    Ok(num / den)
}
