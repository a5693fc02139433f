//! Fourier multiplier operators: linear, bilinear and trilinear
//! application, Hilbert transform, modulation, band-limiting, the
//! spectral Gaussian family, Hormander Sobolev norms of symbols and
//! standard-kernel checks.
//!
//! Frequency-bin accumulation: the bilinear sum collects coefficients
//! into output bins k1 + k2. On the half-offset grid a circular wrap by
//! one full period multiplies the spatial exponential by -1 (N even),
//! so wrapped contributions carry (-1)^wraps. The brute-force x-loop is
//! kept as a test oracle.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{forward_transform, inverse_transform, Domain, GridSpec, SampledFunction};
use crate::symbol::Symbol;

/// Largest per-axis sample count for the trilinear triple sum.
pub const NLINEAR_MAX_SAMPLES: usize = 64;
/// Largest per-axis sample count for the bilinear sum in 2-D.
pub const BILINEAR_2D_MAX_SAMPLES: usize = 64;

/// T_m f = (m f_hat)^v with a closed-form multiplier.
pub fn apply_multiplier<F>(f: &SampledFunction, m: F) -> SampledFunction
where
    F: Fn(&[f64]) -> Complex64,
{
    let grid = f.grid();
    let mut fh = forward_transform(f);
    for k in 0..grid.len() {
        let xi = grid.freq_point(k);
        fh.values_mut()[k] *= m(&xi[..grid.dim()]);
    }
    inverse_transform(&fh)
}

/// T_m f for an arity-1 symbol.
pub fn apply_linear(m: &Symbol, f: &SampledFunction) -> Result<SampledFunction> {
    if m.arity() != 1 {
        return Err(Error::Config("apply_linear expects an arity-1 symbol".into()));
    }
    Ok(apply_multiplier(f, |xi| m.eval(xi)))
}

/// Hilbert transform: multiplier -i sign(xi) with sign(0) = 0 (1-D).
pub fn hilbert(f: &SampledFunction) -> Result<SampledFunction> {
    if f.grid().dim() != 1 {
        return Err(Error::Config("hilbert transform is 1-D".into()));
    }
    Ok(apply_multiplier(f, |xi| {
        Complex64::new(0.0, -sign(xi[0]))
    }))
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// M^a f(x) = e^{2 pi i a x} f(x); `a` must be a frequency-grid node so
/// periodicity stays exact (1-D).
pub fn modulate(a: f64, f: &SampledFunction) -> Result<SampledFunction> {
    let grid = f.grid();
    if grid.dim() != 1 {
        return Err(Error::Config("modulate is 1-D".into()));
    }
    let steps = a / grid.freq_spacing();
    if (steps - steps.round()).abs() > 1e-9 || a.abs() > grid.freq_max() {
        return Err(Error::OffGridModulation(a));
    }
    let values = (0..grid.len())
        .map(|j| {
            let x = grid.x_node(j);
            f.values()[j] * Complex64::from_polar(1.0, 2.0 * PI * a * x)
        })
        .collect();
    SampledFunction::from_values(grid, values)
}

/// (f_hat chi_[a,b])^v by direct spectral masking, with value 1/2 at the
/// endpoints. Agrees with `bandlimit_hilbert` on the grid.
pub fn bandlimit(a: f64, b: f64, f: &SampledFunction) -> Result<SampledFunction> {
    if f.grid().dim() != 1 {
        return Err(Error::Config("bandlimit is 1-D".into()));
    }
    if a >= b {
        return Err(Error::Config("bandlimit needs a < b".into()));
    }
    let eps = 1e-12 * (1.0 + a.abs().max(b.abs()));
    Ok(apply_multiplier(f, move |xi| {
        let z = xi[0];
        let v = if (z - a).abs() <= eps || (z - b).abs() <= eps {
            0.5
        } else if z > a && z < b {
            1.0
        } else {
            0.0
        };
        Complex64::new(v, 0.0)
    }))
}

/// The same projection through the identity
/// (f_hat chi_[a,b])^v = (i/2)(M^a H M^{-a} - M^b H M^{-b}) f.
pub fn bandlimit_hilbert(a: f64, b: f64, f: &SampledFunction) -> Result<SampledFunction> {
    let term = |c: f64| -> Result<SampledFunction> {
        modulate(c, &hilbert(&modulate(-c, f)?)?)
    };
    let diff = term(a)?.sub(&term(b)?)?;
    Ok(diff.scaled(Complex64::new(0.0, 0.5)))
}

/// Signed frequency index m = k - N/2 folded into [-N/2, N/2), together
/// with the (-1)^wraps factor picked up on the half-offset grid.
fn fold_bin(m: i64, n: i64) -> (usize, f64) {
    let shifted = m + n / 2;
    let w = shifted.div_euclid(n);
    let idx = shifted.rem_euclid(n) as usize;
    let sign = if w.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    (idx, sign)
}

/// B_m(f,g) = sum over frequency pairs of f_hat g_hat m e^{2 pi i (xi+eta) x},
/// evaluated by accumulation into output bins followed by one inverse
/// transform.
pub fn apply_bilinear(
    m: &Symbol,
    f: &SampledFunction,
    g: &SampledFunction,
) -> Result<SampledFunction> {
    if m.arity() != 2 {
        return Err(Error::Config("apply_bilinear expects an arity-2 symbol".into()));
    }
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = f.grid();
    let fh = forward_transform(f);
    let gh = forward_transform(g);
    let n = grid.samples() as i64;
    let dxi = grid.freq_spacing();

    let mut acc = SampledFunction::zeros(grid, Domain::Frequency);
    match grid.dim() {
        1 => {
            let freqs: Vec<f64> = (0..grid.samples()).map(|k| grid.freq_node(k)).collect();
            for k1 in 0..grid.samples() {
                let a = fh.values()[k1] * dxi;
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k2 in 0..grid.samples() {
                    let b = gh.values()[k2];
                    if b.norm_sqr() == 0.0 {
                        continue;
                    }
                    let mv = m.eval(&[freqs[k1], freqs[k2]]);
                    if mv.norm_sqr() == 0.0 {
                        continue;
                    }
                    let msum = (k1 as i64 - n / 2) + (k2 as i64 - n / 2);
                    let (idx, s) = fold_bin(msum, n);
                    acc.values_mut()[idx] += a * b * mv * s;
                }
            }
        }
        _ => {
            let ns = grid.samples();
            if ns > BILINEAR_2D_MAX_SAMPLES {
                return Err(Error::SizeOverrun(format!(
                    "2-D bilinear sums support at most {BILINEAR_2D_MAX_SAMPLES} samples per axis"
                )));
            }
            let d2 = dxi * dxi;
            for k1 in 0..grid.len() {
                let a = fh.values()[k1] * d2;
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let p1 = grid.freq_point(k1);
                let i1 = grid.unflatten(k1);
                for k2 in 0..grid.len() {
                    let b = gh.values()[k2];
                    if b.norm_sqr() == 0.0 {
                        continue;
                    }
                    let p2 = grid.freq_point(k2);
                    let mv = m.eval(&[p1[0], p1[1], p2[0], p2[1]]);
                    if mv.norm_sqr() == 0.0 {
                        continue;
                    }
                    let i2 = grid.unflatten(k2);
                    let (r, sr) = fold_bin(
                        (i1[0] as i64 - n / 2) + (i2[0] as i64 - n / 2),
                        n,
                    );
                    let (c, sc) = fold_bin(
                        (i1[1] as i64 - n / 2) + (i2[1] as i64 - n / 2),
                        n,
                    );
                    acc.values_mut()[r * ns + c] += a * b * mv * (sr * sc);
                }
            }
        }
    }
    Ok(inverse_transform(&acc))
}

/// Reference evaluation of B_m by the literal x-loop with true (unwrapped)
/// exponentials; O(N^2 * N) in 1-D, used as an oracle.
pub fn apply_bilinear_bruteforce(
    m: &Symbol,
    f: &SampledFunction,
    g: &SampledFunction,
) -> Result<SampledFunction> {
    if f.grid() != g.grid() || f.grid().dim() != 1 {
        return Err(Error::GridMismatch);
    }
    let grid = f.grid();
    let fh = forward_transform(f);
    let gh = forward_transform(g);
    let dxi = grid.freq_spacing();
    let ns = grid.samples();
    let mut out = vec![Complex64::new(0.0, 0.0); ns];
    for k1 in 0..ns {
        let xi = grid.freq_node(k1);
        for k2 in 0..ns {
            let eta = grid.freq_node(k2);
            let coef = fh.values()[k1] * gh.values()[k2] * m.eval(&[xi, eta]) * dxi * dxi;
            if coef.norm_sqr() == 0.0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let x = grid.x_node(j);
                *o += coef * Complex64::from_polar(1.0, 2.0 * PI * (xi + eta) * x);
            }
        }
    }
    SampledFunction::from_values(grid, out)
}

/// T_m(f1, f2, f3) by the triple frequency sum (1-D, small grids).
pub fn apply_nlinear(
    m: &Symbol,
    fs: &[&SampledFunction],
) -> Result<SampledFunction> {
    if m.arity() != fs.len() {
        return Err(Error::Config("symbol arity must match the argument count".into()));
    }
    match fs.len() {
        1 => return apply_linear(m, fs[0]),
        2 => return apply_bilinear(m, fs[0], fs[1]),
        3 => {}
        _ => return Err(Error::Config("N-linearity capped at N = 3".into())),
    }
    let grid = fs[0].grid();
    if fs.iter().any(|f| f.grid() != grid) {
        return Err(Error::GridMismatch);
    }
    if grid.dim() != 1 {
        return Err(Error::SizeOverrun("trilinear sums are 1-D only".into()));
    }
    if grid.samples() > NLINEAR_MAX_SAMPLES {
        return Err(Error::SizeOverrun(format!(
            "trilinear sums support at most {NLINEAR_MAX_SAMPLES} samples"
        )));
    }
    let hats: Vec<SampledFunction> = fs.iter().map(|f| forward_transform(f)).collect();
    let ns = grid.samples();
    let n = ns as i64;
    let dxi = grid.freq_spacing();
    let freqs: Vec<f64> = (0..ns).map(|k| grid.freq_node(k)).collect();
    let mut acc = SampledFunction::zeros(grid, Domain::Frequency);
    let w = dxi * dxi;
    for k1 in 0..ns {
        let a = hats[0].values()[k1] * w;
        for k2 in 0..ns {
            let ab = a * hats[1].values()[k2];
            if ab.norm_sqr() == 0.0 {
                continue;
            }
            for k3 in 0..ns {
                let coef = ab
                    * hats[2].values()[k3]
                    * m.eval(&[freqs[k1], freqs[k2], freqs[k3]]);
                if coef.norm_sqr() == 0.0 {
                    continue;
                }
                let msum = (k1 as i64 - n / 2) + (k2 as i64 - n / 2) + (k3 as i64 - n / 2);
                let (idx, s) = fold_bin(msum, n);
                acc.values_mut()[idx] += coef * s;
            }
        }
    }
    Ok(inverse_transform(&acc))
}

/// Diagnostics for the spectral Gaussian on a given grid.
#[derive(Debug, Clone, Copy)]
pub struct GaussianTails {
    /// e^{-2 lambda^2 xi_max^2} at the edge of the frequency grid.
    pub spectral: f64,
    /// Closed-form |G_lambda| at |x| = L.
    pub spatial: f64,
}

impl GaussianTails {
    pub fn ok(&self) -> bool {
        self.spectral <= 1e-12 && self.spatial <= 1e-12
    }
}

pub fn gaussian_tails(lambda: f64, grid: &GridSpec) -> GaussianTails {
    let xi_max = grid.freq_max();
    let nd = grid.dim() as i32;
    let spectral = (-2.0 * lambda * lambda * xi_max * xi_max).exp();
    let l = grid.half_width();
    let spatial = (PI / 2.0).powi(nd).sqrt() / lambda.powi(nd)
        * (-(PI * PI / 2.0) * (l / lambda).powi(2)).exp();
    GaussianTails { spectral, spatial }
}

/// G_lambda with G_hat(xi) = e^{-2 lambda^2 |xi|^2}; matches the closed
/// form (pi/2)^{n/2} lambda^{-n} e^{-(pi^2/2)|x/lambda|^2}.
pub fn gaussian_g(lambda: f64, grid: &GridSpec) -> Result<SampledFunction> {
    if !(lambda > 0.0) {
        return Err(Error::Config("gaussian_g needs lambda > 0".into()));
    }
    let fh = SampledFunction::sample_freq(*grid, |xi| {
        let r2: f64 = xi.iter().map(|z| z * z).sum();
        Complex64::new((-2.0 * lambda * lambda * r2).exp(), 0.0)
    })?;
    Ok(inverse_transform(&fh))
}

/// Closed-form G_lambda for comparisons.
pub fn gaussian_g_closed_form(lambda: f64, x: &[f64]) -> f64 {
    let nd = x.len() as i32;
    let r2: f64 = x.iter().map(|z| z * z).sum();
    (PI / 2.0).powi(nd).sqrt() / lambda.powi(nd) * (-(PI * PI / 2.0) * r2 / (lambda * lambda)).exp()
}

/// Parameter bundle for the sharp-maximal pointwise bound: a Sobolev
/// order s with Nn/2 < s <= Nn, r_0 = Nn/s, an interpolation index
/// r in (1, min{s/(s-1), 2s/(Nn)}), p_0 = r r_0 and delta in (0, p_0/N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HormanderParams {
    pub s: f64,
    pub r0: f64,
    pub r: f64,
    pub p0: f64,
    pub delta: f64,
}

impl HormanderParams {
    pub fn new(s: f64, r: f64, delta: f64, big_n: usize, n: usize) -> Result<Self> {
        let nn = (big_n * n) as f64;
        if !(s > nn / 2.0 && s <= nn) {
            return Err(Error::Config(format!("s = {s} outside (Nn/2, Nn] = ({}, {nn}]", nn / 2.0)));
        }
        let r0 = nn / s;
        let r_max = (s / (s - 1.0)).min(2.0 * s / nn);
        if !(r > 1.0 && r < r_max) {
            return Err(Error::Config(format!("r = {r} outside (1, {r_max})")));
        }
        let p0 = r * r0;
        if !(delta > 0.0 && delta < p0 / big_n as f64) {
            return Err(Error::Config(format!(
                "delta = {delta} outside (0, {})",
                p0 / big_n as f64
            )));
        }
        Ok(Self { s, r0, r, p0, delta })
    }

    /// Midpoint choices for r and delta given only the Sobolev order.
    pub fn derive(s: f64, big_n: usize, n: usize) -> Result<Self> {
        let nn = (big_n * n) as f64;
        let r_max = (s / (s - 1.0)).min(2.0 * s / nn);
        let r = 0.5 * (1.0 + r_max);
        let p0 = r * nn / s;
        let delta = 0.5 * p0 / big_n as f64;
        Self::new(s, r, delta, big_n, n)
    }
}

#[derive(Debug, Clone)]
pub struct HormanderReport {
    /// sup over the R sweep of ||m(R .) chi_{1<|xi|<2}||_{H^s}.
    pub sup: f64,
    pub table: Vec<(f64, f64)>,
}

/// Discrete H^s norm of m(R xi) chi_{1<|xi|<2} over a log sweep of R.
/// The annulus is sampled on a grid over [-4, 4]^{Nn}; Nn <= 2.
pub fn hormander_sobolev_norm(
    m: &Symbol,
    space_dim: usize,
    s: f64,
    r_sweep: Option<&[f64]>,
) -> Result<HormanderReport> {
    let d = m.arity() * space_dim;
    if d > 2 {
        return Err(Error::SizeOverrun(
            "discrete H^s computation supports Nn <= 2".into(),
        ));
    }
    let grid = if d == 1 {
        GridSpec::new(1, 4.0, 512)?
    } else {
        GridSpec::new(2, 4.0, 128)?
    };
    let default_sweep: Vec<f64> = (0..25)
        .map(|i| 2f64.powf(-6.0 + 12.0 * i as f64 / 24.0))
        .collect();
    let sweep: &[f64] = r_sweep.unwrap_or(&default_sweep);

    let mut table = Vec::with_capacity(sweep.len());
    let mut sup: f64 = 0.0;
    for &r in sweep {
        let g = SampledFunction::sample(grid, |x| {
            let mag: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if mag > 1.0 && mag < 2.0 {
                let scaled: Vec<f64> = x.iter().map(|v| r * v).collect();
                m.eval(&scaled)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })?;
        let gh = forward_transform(&g);
        let dxi = grid.freq_spacing().powi(grid.dim() as i32);
        let mut sum = 0.0;
        for k in 0..grid.len() {
            let om = grid.freq_point(k);
            let om2: f64 = om[..grid.dim()].iter().map(|v| v * v).sum();
            sum += (1.0 + om2).powf(s) * gh.values()[k].norm_sqr() * dxi;
        }
        let val = sum.sqrt();
        sup = sup.max(val);
        table.push((r, val));
    }
    Ok(HormanderReport { sup, table })
}

#[derive(Debug, Clone)]
pub struct KernelReport {
    /// sup |K(x)| |x|^n over the probe radii.
    pub c1: f64,
    /// sup |K'(x)| |x|^{n+1} (central differences).
    pub c2: f64,
    /// sup over (r, R) pairs of |int_{r<|x|<R} K|.
    pub c3: f64,
    /// Whether the truncated integrals stayed bounded across the ladder.
    pub c3_bounded: bool,
    /// Estimate of lim_{eps->0} int_{eps<|x|<1} K.
    pub limit_estimate: f64,
    /// Whether the eps ladder forms a Cauchy sequence.
    pub limit_exists: bool,
}

/// Empirical standard-kernel check for 1-D closed-form kernels.
pub fn standard_kernel_check<K>(kernel: K) -> KernelReport
where
    K: Fn(f64) -> f64,
{
    let n = 1i32;
    let mut c1: f64 = 0.0;
    let mut c2: f64 = 0.0;
    // probe radii, logarithmic
    for i in 0..600 {
        let x = 10f64.powf(-5.0 + 8.0 * i as f64 / 599.0);
        for xs in [x, -x] {
            let k = kernel(xs).abs();
            c1 = c1.max(k * x.powi(n));
            let dh = 1e-5 * x;
            let dk = (kernel(xs + dh) - kernel(xs - dh)) / (2.0 * dh);
            c2 = c2.max(dk.abs() * x.powi(n + 1));
        }
    }

    let annulus = |r: f64, big: f64| -> f64 {
        // int_{r<|x|<R} K = int_r^R (K(x) + K(-x)) dx, log-substituted
        let steps = 4000;
        let t0 = r.ln();
        let t1 = big.ln();
        let dt = (t1 - t0) / steps as f64;
        let mut sum = 0.0;
        for i in 0..=steps {
            let t = t0 + i as f64 * dt;
            let x = t.exp();
            let v = (kernel(x) + kernel(-x)) * x;
            let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
            sum += w * v;
        }
        sum * dt
    };

    let mut c3: f64 = 0.0;
    let mut ladder = Vec::new();
    for k in 0..=12 {
        let r = 2f64.powi(-k);
        let big = 2f64.powi(k.min(6));
        let v = annulus(r, big).abs();
        c3 = c3.max(v);
        ladder.push(v);
    }
    // bounded if the tail of the ladder stopped growing
    let tail_growth = ladder[ladder.len() - 1] - ladder[ladder.len() - 4];
    let c3_bounded = tail_growth.abs() < 0.05 * (1.0 + c3);

    let mut prev = annulus(1.0, 1.0 + 1e-12); // 0
    let mut limit_estimate = prev;
    let mut gaps = Vec::new();
    for k in 1..=24 {
        let eps = 2f64.powi(-k);
        let v = annulus(eps, 1.0);
        gaps.push((v - prev).abs());
        prev = v;
        limit_estimate = v;
    }
    let tail_gap: f64 = gaps[gaps.len() - 4..].iter().cloned().fold(0.0, f64::max);
    let limit_exists = tail_gap < 1e-6 * (1.0 + limit_estimate.abs()) + 1e-9;

    KernelReport { c1, c2, c3, c3_bounded, limit_estimate, limit_exists }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::integrate;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn grid128() -> GridSpec {
        GridSpec::new(1, 8.0, 128).unwrap()
    }

    #[test]
    fn identity_multiplier() {
        let g = grid128();
        let f = SampledFunction::sample(g, |x| Complex64::new(x[0].sin(), x[0].cos())).unwrap();
        let m = Symbol::constant(1, 1.0);
        let out = apply_linear(&m, &f).unwrap();
        assert!(f.max_abs_diff(&out) < 1e-12);
    }

    #[test]
    fn mean_projection() {
        let g = grid128();
        let f = SampledFunction::sample(g, |x| c(2.0 + (PI / 8.0 * x[0] * 4.0).cos())).unwrap();
        // project to the xi = 0 bin
        let out = apply_multiplier(&f, |xi| {
            if xi[0] == 0.0 { c(1.0) } else { c(0.0) }
        });
        let mean = integrate(&f) / (2.0 * g.half_width());
        for v in out.values() {
            assert!((v - mean).norm() < 1e-12);
        }
    }

    #[test]
    fn hilbert_cos_to_sin() {
        let g = grid128();
        // one exact grid mode: xi = 4 * freq_spacing
        let a = 4.0 * g.freq_spacing();
        let f = SampledFunction::sample(g, |x| c((2.0 * PI * a * x[0]).cos())).unwrap();
        let expect = SampledFunction::sample(g, |x| c((2.0 * PI * a * x[0]).sin())).unwrap();
        let out = hilbert(&f).unwrap();
        assert!(out.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn hilbert_kills_constants_and_squares_to_minus_one() {
        let g = grid128();
        let constf = SampledFunction::sample(g, |_| c(3.0)).unwrap();
        assert!(hilbert(&constf).unwrap().max_abs() < 1e-12);

        let f = SampledFunction::sample(g, |x| {
            c((2.0 * PI * g.freq_spacing() * 3.0 * x[0]).cos() + 1.5)
        })
        .unwrap();
        let hh = hilbert(&hilbert(&f).unwrap()).unwrap();
        let mean = integrate(&f) / (2.0 * g.half_width());
        let mean_f = SampledFunction::sample(g, |_| c(1.0)).unwrap().scaled(mean);
        let expect = f.sub(&mean_f).unwrap().scaled(c(-1.0));
        assert!(hh.max_abs_diff(&expect) < 1e-11);
    }

    #[test]
    fn modulate_roundtrip_and_shift() {
        let g = grid128();
        let a = 3.0 * g.freq_spacing();
        let f = SampledFunction::sample(g, |x| Complex64::new((0.3 * x[0]).sin(), 0.1)).unwrap();
        let round = modulate(a, &modulate(-a, &f).unwrap()).unwrap();
        assert!(f.max_abs_diff(&round) < 1e-12);
        assert!(modulate(0.0, &f).unwrap().max_abs_diff(&f) < 1e-15);
        assert!(modulate(0.37, &f).is_err());

        // shift theorem on a band-limited f (no wrap)
        let bl = SampledFunction::sample(g, |x| {
            c((2.0 * PI * g.freq_spacing() * 5.0 * x[0]).cos())
        })
        .unwrap();
        let fh = forward_transform(&bl);
        let mh = forward_transform(&modulate(a, &bl).unwrap());
        let shift = (a / g.freq_spacing()).round() as i64;
        for k in 0..g.samples() {
            let src = k as i64 - shift;
            if src >= 0 && (src as usize) < g.samples() {
                assert!((mh.values()[k] - fh.values()[src as usize]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn bandlimit_full_box_keeps_bandlimited_input() {
        let g = grid128();
        let f = SampledFunction::sample(g, |x| {
            c((2.0 * PI * g.freq_spacing() * 2.0 * x[0]).cos())
        })
        .unwrap();
        let lim = g.freq_max() - g.freq_spacing();
        let out = bandlimit(-lim, lim, &f).unwrap();
        assert!(out.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn bandlimit_two_implementations_agree() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let g = grid128();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let band = g.samples() as i64 / 8;
        for _ in 0..20 {
            // random band-limited function
            let mut fh = SampledFunction::zeros(g, Domain::Frequency);
            for k in 0..g.samples() {
                let m = k as i64 - g.samples() as i64 / 2;
                if m.abs() <= band {
                    fh.values_mut()[k] =
                        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                }
            }
            let f = inverse_transform(&fh);
            let a = -(rng.gen_range(0..band) as f64) * g.freq_spacing();
            let b = (rng.gen_range(1..band) as f64) * g.freq_spacing();
            let direct = bandlimit(a, b, &f).unwrap();
            let viah = bandlimit_hilbert(a, b, &f).unwrap();
            let err = direct.max_abs_diff(&viah);
            assert!(err < 1e-10, "err = {err:e}");
        }
    }

    #[test]
    fn bilinear_constant_symbol_is_product() {
        let g = grid128();
        let f = SampledFunction::sample(g, |x| Complex64::new((0.5 * x[0]).sin(), 0.2)).unwrap();
        let h = SampledFunction::sample(g, |x| Complex64::new(0.1, (0.3 * x[0]).cos())).unwrap();
        let out = apply_bilinear(&Symbol::constant(2, 1.0), &f, &h).unwrap();
        let prod = f.pointwise_mul(&h).unwrap();
        let scale = out.max_abs().max(1.0);
        assert!(out.max_abs_diff(&prod) / scale < 1e-10);
    }

    #[test]
    fn bilinear_tensor_separates() {
        let g = grid128();
        let f = SampledFunction::sample(g, |x| Complex64::new((0.4 * x[0]).sin(), 0.0)).unwrap();
        let h = SampledFunction::sample(g, |x| Complex64::new((0.9 * x[0]).cos(), 0.1)).unwrap();
        let m1 = Symbol::gaussian(1, 0.3);
        let m2 = Symbol::gaussian(1, 1.1);
        let t = Symbol::tensor(vec![m1.clone(), m2.clone()]).unwrap();
        let lhs = apply_bilinear(&t, &f, &h).unwrap();
        let rhs = apply_linear(&m1, &f)
            .unwrap()
            .pointwise_mul(&apply_linear(&m2, &h).unwrap())
            .unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-10 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn bilinear_matches_bruteforce_full_spectrum() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let g = GridSpec::new(1, 4.0, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut rand_fn = || {
            let vals: Vec<Complex64> = (0..g.len())
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            SampledFunction::from_values(g, vals).unwrap()
        };
        let f = rand_fn();
        let h = rand_fn();
        let m = Symbol::difference(Symbol::gaussian(1, 0.7)).unwrap();
        let fast = apply_bilinear(&m, &f, &h).unwrap();
        let slow = apply_bilinear_bruteforce(&m, &f, &h).unwrap();
        let err = fast.max_abs_diff(&slow);
        assert!(err < 1e-11 * fast.max_abs().max(1.0), "err = {err:e}");
    }

    #[test]
    fn trilinear_product_and_bruteforce() {
        let g = GridSpec::new(1, 4.0, 16).unwrap();
        let f1 = SampledFunction::sample(g, |x| Complex64::new((0.7 * x[0]).sin(), 0.3)).unwrap();
        let f2 = SampledFunction::sample(g, |x| Complex64::new(0.2, (0.4 * x[0]).cos())).unwrap();
        let f3 = SampledFunction::sample(g, |x| Complex64::new((0.1 * x[0]).cos(), 0.0)).unwrap();

        let one = Symbol::constant(3, 1.0);
        let out = apply_nlinear(&one, &[&f1, &f2, &f3]).unwrap();
        let prod = f1.pointwise_mul(&f2).unwrap().pointwise_mul(&f3).unwrap();
        assert!(out.max_abs_diff(&prod) < 1e-10 * prod.max_abs().max(1.0));

        let ident = Symbol::constant(1, 1.0);
        let tens = Symbol::tensor(vec![ident.clone(), ident.clone(), ident]).unwrap();
        let out2 = apply_nlinear(&tens, &[&f1, &f2, &f3]).unwrap();
        assert!(out2.max_abs_diff(&prod) < 1e-10 * prod.max_abs().max(1.0));

        // coifman-meyer sample against the definition unrolled by hand
        let cm = Symbol::coifman_meyer(3, 0.4);
        let fast = apply_nlinear(&cm, &[&f1, &f2, &f3]).unwrap();
        let hats: Vec<_> = [&f1, &f2, &f3].iter().map(|f| forward_transform(f)).collect();
        let dxi = g.freq_spacing();
        let mut slow = vec![Complex64::new(0.0, 0.0); g.len()];
        for k1 in 0..g.samples() {
            for k2 in 0..g.samples() {
                for k3 in 0..g.samples() {
                    let zeta = [g.freq_node(k1), g.freq_node(k2), g.freq_node(k3)];
                    let coef = hats[0].values()[k1]
                        * hats[1].values()[k2]
                        * hats[2].values()[k3]
                        * cm.eval(&zeta)
                        * dxi.powi(3)
                        * (2.0 * g.half_width());
                    if coef.norm_sqr() == 0.0 {
                        continue;
                    }
                    for (j, o) in slow.iter_mut().enumerate() {
                        let x = g.x_node(j);
                        *o += coef / (2.0 * g.half_width())
                            * Complex64::from_polar(
                                1.0,
                                2.0 * PI * (zeta[0] + zeta[1] + zeta[2]) * x,
                            );
                    }
                }
            }
        }
        let slowf = SampledFunction::from_values(g, slow).unwrap();
        assert!(fast.max_abs_diff(&slowf) < 1e-11 * fast.max_abs().max(1.0));
    }

    fn band_limited(g: GridSpec, band: i64, rng: &mut impl rand::Rng) -> SampledFunction {
        let mut fh = SampledFunction::zeros(g, Domain::Frequency);
        for k in 0..g.samples() {
            let m = k as i64 - g.samples() as i64 / 2;
            if m.abs() <= band {
                fh.values_mut()[k] =
                    Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
        }
        inverse_transform(&fh)
    }

    #[test]
    fn composition_identity() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let g = grid128();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m1 = Symbol::gaussian(1, 0.4);
        let m2 = Symbol::coifman_meyer(1, 1.1);
        let m = Symbol::difference(Symbol::gaussian(1, 0.9)).unwrap();
        let outer = Symbol::product(vec![
            Symbol::tensor(vec![m1.clone(), m2.clone()]).unwrap(),
            m.clone(),
        ])
        .unwrap();
        for _ in 0..5 {
            let f = band_limited(g, 16, &mut rng);
            let h = band_limited(g, 16, &mut rng);
            let lhs = apply_bilinear(&outer, &f, &h).unwrap();
            let rhs = apply_bilinear(
                &m,
                &apply_linear(&m1, &f).unwrap(),
                &apply_linear(&m2, &h).unwrap(),
            )
            .unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-10 * lhs.max_abs().max(1.0));
        }
    }

    #[test]
    fn modulation_translation_identity() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let g = grid128();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let base = Symbol::gaussian(1, 0.6);
        let m = Symbol::difference(base.clone()).unwrap();
        let y = 3.0 * g.freq_spacing();
        let shifted = Symbol::difference(Symbol::translate(base, vec![y]).unwrap()).unwrap();
        for _ in 0..5 {
            let f = band_limited(g, 16, &mut rng);
            let h = band_limited(g, 16, &mut rng);
            let lhs = apply_bilinear(
                &m,
                &modulate(y, &f).unwrap(),
                &modulate(-y, &h).unwrap(),
            )
            .unwrap();
            let rhs = apply_bilinear(&shifted, &f, &h).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-10 * lhs.max_abs().max(1.0));
        }
    }

    #[test]
    fn indicator_symbol_matches_bandlimited_product() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let g = grid128();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let d = g.freq_spacing();
        let (a, b) = (-8.0 * d, 10.0 * d);
        let (cc, dd) = (-12.0 * d, 6.0 * d);
        let q = Symbol::indicator(2, vec![a, cc], vec![b, dd]).unwrap();
        let one = Symbol::constant(2, 1.0);
        for _ in 0..5 {
            let f = band_limited(g, 16, &mut rng);
            let h = band_limited(g, 16, &mut rng);
            let lhs = apply_bilinear(&q, &f, &h).unwrap();
            let rhs = apply_bilinear(
                &one,
                &bandlimit(a, b, &f).unwrap(),
                &bandlimit(cc, dd, &h).unwrap(),
            )
            .unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-10 * lhs.max_abs().max(1.0));
        }
    }

    #[test]
    fn hormander_params_windows() {
        let p = HormanderParams::new(1.5, 1.25, 0.5, 2, 1).unwrap();
        assert!((p.r0 - 4.0 / 3.0).abs() < 1e-15);
        assert!((p.p0 - 5.0 / 3.0).abs() < 1e-15);
        assert!(HormanderParams::new(1.5, 1.6, 0.5, 2, 1).is_err()); // r cap 1.5
        assert!(HormanderParams::new(0.9, 1.25, 0.5, 2, 1).is_err()); // s too small
        assert!(HormanderParams::new(1.5, 1.25, 0.9, 2, 1).is_err()); // delta cap 5/6
        assert!(HormanderParams::derive(1.5, 2, 1).is_ok());
    }

    #[test]
    fn nlinear_size_guard() {
        let g = GridSpec::new(1, 4.0, 128).unwrap();
        let f = SampledFunction::sample(g, |_| c(1.0)).unwrap();
        let m = Symbol::constant(3, 1.0);
        assert!(matches!(
            apply_nlinear(&m, &[&f, &f, &f]),
            Err(Error::SizeOverrun(_))
        ));
    }

    #[test]
    fn gaussian_g_values() {
        let g = GridSpec::new(1, 8.0, 256).unwrap();
        let f1 = gaussian_g(1.0, &g).unwrap();
        // value at the node nearest 0 compared against the closed form
        let j = g.samples() / 2;
        let x = g.x_node(j);
        let expect = gaussian_g_closed_form(1.0, &[x]);
        assert!((f1.values()[j].re - expect).abs() < 1e-9);
        assert!((gaussian_g_closed_form(1.0, &[0.0]) - (PI / 2.0).sqrt()).abs() < 1e-12);
        assert!(
            (gaussian_g_closed_form(2.0, &[0.0]) - 0.5 * (PI / 2.0).sqrt()).abs() < 1e-12
        );

        // round trip back to the spectral gaussian
        let fh = forward_transform(&f1);
        for k in 0..g.samples() {
            let xi = g.freq_node(k);
            assert!((fh.values()[k].re - (-2.0 * xi * xi).exp()).abs() < 1e-10);
        }
        assert!(gaussian_tails(1.0, &g).ok());
    }

    #[test]
    fn hormander_r_invariance() {
        let one = Symbol::constant(1, 1.0);
        let rep = hormander_sobolev_norm(&one, 1, 0.75, None).unwrap();
        let vals: Vec<f64> = rep.table.iter().map(|t| t.1).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(0.0, f64::max);
        assert!((hi - lo) / hi < 1e-6);
        assert!(rep.sup.is_finite());

        let cm = Symbol::coifman_meyer(2, 0.3);
        let rep = hormander_sobolev_norm(&cm, 1, 1.5, None).unwrap();
        let vals: Vec<f64> = rep.table.iter().map(|t| t.1).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(0.0, f64::max);
        assert!((hi - lo) / hi < 1e-6, "spread {}", (hi - lo) / hi);
    }

    #[test]
    fn hormander_gaussian_decays_for_large_r() {
        let m = Symbol::gaussian(1, 1.0);
        let rep = hormander_sobolev_norm(&m, 1, 0.75, None).unwrap();
        assert!(rep.sup.is_finite());
        let first = rep.table.first().unwrap().1;
        let last = rep.table.last().unwrap().1;
        assert!(last < first, "H^s should decay as R grows: {first} vs {last}");
    }

    #[test]
    fn kernel_checks() {
        // Hilbert kernel 1/(pi x): c1 = 1/pi, odd so truncated integrals vanish
        let rep = standard_kernel_check(|x| 1.0 / (PI * x));
        assert!((rep.c1 - 1.0 / PI).abs() < 1e-6);
        assert!(rep.c3 < 1e-10);
        assert!(rep.limit_exists);
        assert!(rep.limit_estimate.abs() < 1e-10);

        // 1/|x|: c1 = 1 but truncated integrals diverge like log
        let rep = standard_kernel_check(|x| 1.0 / x.abs());
        assert!((rep.c1 - 1.0).abs() < 1e-6);
        assert!(!rep.c3_bounded);
        assert!(!rep.limit_exists);

        // smooth kernel: everything finite and the limit exists
        let rep = standard_kernel_check(|x| (-x * x).exp());
        assert!(rep.c1.is_finite() && rep.c2.is_finite());
        assert!(rep.c3_bounded);
        assert!(rep.limit_exists);
    }
}
