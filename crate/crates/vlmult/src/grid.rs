//! Uniform grids on [-L, L]^n with forward/inverse discrete Fourier
//! transforms and quadrature.
//!
//! Conventions: x-nodes are half-offset, x_j = -L + (j + 1/2) h with
//! h = 2L/N, so weight singularities at grid-rational points are never
//! sampled. Frequency nodes are xi_k = k/(2L) for k = -N/2 .. N/2 - 1.
//! The forward transform is f_hat(xi) = integral f(x) e^{-2 pi i x xi} dx,
//! discretized as an h^n-weighted Riemann sum.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 2;

/// Which side of the transform a sampled function lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Space,
    Frequency,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    half_width: f64,
    samples: usize,
}

impl GridSpec {
    pub fn new(dim: usize, half_width: f64, samples: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=2")));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidGrid(format!("half-width {half_width} must be positive")));
        }
        if samples < 16 || !samples.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "samples {samples} must be a power of two >= 16"
            )));
        }
        Ok(Self { dim, half_width, samples })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Samples per axis.
    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Grid spacing h = 2L/N.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.samples as f64
    }

    /// Frequency spacing 1/(2L).
    pub fn freq_spacing(&self) -> f64 {
        1.0 / (2.0 * self.half_width)
    }

    /// Largest representable frequency magnitude, N/(4L).
    pub fn freq_max(&self) -> f64 {
        self.samples as f64 / (4.0 * self.half_width)
    }

    /// Total number of nodes, N^n.
    pub fn len(&self) -> usize {
        self.samples.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of the j-th x-node along one axis.
    pub fn x_node(&self, j: usize) -> f64 {
        -self.half_width + (j as f64 + 0.5) * self.spacing()
    }

    /// Frequency of the k-th node along one axis (k = 0..N maps to
    /// -N/2 .. N/2 - 1).
    pub fn freq_node(&self, k: usize) -> f64 {
        (k as f64 - (self.samples / 2) as f64) * self.freq_spacing()
    }

    /// Multi-index of a flat index, row-major.
    pub fn unflatten(&self, idx: usize) -> [usize; MAX_DIM] {
        let mut out = [0usize; MAX_DIM];
        match self.dim {
            1 => out[0] = idx,
            _ => {
                out[0] = idx / self.samples;
                out[1] = idx % self.samples;
            }
        }
        out
    }

    /// Spatial coordinates of a flat index; only the first `dim` entries
    /// are meaningful.
    pub fn x_point(&self, idx: usize) -> [f64; MAX_DIM] {
        let mi = self.unflatten(idx);
        let mut out = [0.0; MAX_DIM];
        for a in 0..self.dim {
            out[a] = self.x_node(mi[a]);
        }
        out
    }

    /// Frequency coordinates of a flat index.
    pub fn freq_point(&self, idx: usize) -> [f64; MAX_DIM] {
        let mi = self.unflatten(idx);
        let mut out = [0.0; MAX_DIM];
        for a in 0..self.dim {
            out[a] = self.freq_node(mi[a]);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: GridSpec,
    domain: Domain,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn from_values(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        Self::with_domain(grid, Domain::Space, values)
    }

    pub fn with_domain(grid: GridSpec, domain: Domain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "value length {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidGrid("non-finite sample value".into()));
        }
        Ok(Self { grid, domain, values })
    }

    /// Sample a closed-form function of space on the grid.
    pub fn sample<F>(grid: GridSpec, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let values = (0..grid.len())
            .map(|idx| {
                let p = grid.x_point(idx);
                f(&p[..grid.dim()])
            })
            .collect();
        Self::from_values(grid, values)
    }

    /// Sample a closed-form function of frequency on the frequency grid.
    pub fn sample_freq<F>(grid: GridSpec, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let values = (0..grid.len())
            .map(|idx| {
                let p = grid.freq_point(idx);
                f(&p[..grid.dim()])
            })
            .collect();
        Self::with_domain(grid, Domain::Frequency, values)
    }

    pub fn zeros(grid: GridSpec, domain: Domain) -> Self {
        Self {
            grid,
            domain,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            domain: self.domain,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid || self.domain != other.domain {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid,
            domain: self.domain,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid || self.domain != other.domain {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid,
            domain: self.domain,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// f_hat(xi_k) = h^n sum_j f(x_j) e^{-2 pi i <x_j, xi_k>}, frequency-indexed.
pub fn forward_transform(f: &SampledFunction) -> SampledFunction {
    assert_eq!(f.domain, Domain::Space, "forward_transform expects a space-domain input");
    let grid = f.grid;
    let mut values = f.values.clone();
    transform_axes(grid, &mut values, true);
    let scale = grid.spacing().powi(grid.dim() as i32);
    for v in &mut values {
        *v *= scale;
    }
    SampledFunction {
        grid,
        domain: Domain::Frequency,
        values,
    }
}

/// f(x_j) = (1/(2L))^n sum_k F(xi_k) e^{+2 pi i <x_j, xi_k>}; exact inverse
/// of `forward_transform` on the grid.
pub fn inverse_transform(f: &SampledFunction) -> SampledFunction {
    assert_eq!(f.domain, Domain::Frequency, "inverse_transform expects a frequency-domain input");
    let grid = f.grid;
    let mut values = f.values.clone();
    transform_axes(grid, &mut values, false);
    let scale = grid.freq_spacing().powi(grid.dim() as i32);
    for v in &mut values {
        *v *= scale;
    }
    SampledFunction {
        grid,
        domain: Domain::Space,
        values,
    }
}

/// Riemann-sum quadrature h^n * sum f over [-L, L]^n.
pub fn integrate(f: &SampledFunction) -> Complex64 {
    let sum: Complex64 = f.values.iter().sum();
    sum * f.grid.spacing().powi(f.grid.dim() as i32)
}

/// In-place separable transform, without the h^n / (1/2L)^n weights.
fn transform_axes(grid: GridSpec, values: &mut [Complex64], forward: bool) {
    let n = grid.samples();
    let mut planner = FftPlanner::<f64>::new();
    let fft = if forward {
        planner.plan_fft_forward(n)
    } else {
        planner.plan_fft_inverse(n)
    };
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let twiddle = phase_twiddles(n, forward);

    match grid.dim() {
        1 => transform_line(&*fft, values, &twiddle, forward, &mut line),
        _ => {
            // axis 1 (contiguous rows)
            for row in values.chunks_mut(n) {
                transform_line(&*fft, row, &twiddle, forward, &mut line);
            }
            // axis 0 (strided columns)
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for c in 0..n {
                for r in 0..n {
                    col[r] = values[r * n + c];
                }
                transform_line(&*fft, &mut col, &twiddle, forward, &mut line);
                for r in 0..n {
                    values[r * n + c] = col[r];
                }
            }
        }
    }
}

/// Pre/post phase factors that shift between the half-offset physical
/// nodes and the plain DFT index convention. For output index k with
/// m = k - N/2, the forward factor is (-1)^m e^{-i pi m / N}.
fn phase_twiddles(n: usize, forward: bool) -> Vec<Complex64> {
    let sign = if forward { -1.0 } else { 1.0 };
    (0..n)
        .map(|k| {
            let m = k as f64 - (n / 2) as f64;
            let parity = if (m as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            Complex64::from_polar(1.0, sign * PI * m / n as f64) * parity
        })
        .collect()
}

fn transform_line(
    fft: &dyn rustfft::Fft<f64>,
    data: &mut [Complex64],
    twiddle: &[Complex64],
    forward: bool,
    scratch: &mut [Complex64],
) {
    let n = data.len();
    let half = n / 2;
    if forward {
        fft.process(data);
        // reorder to ascending frequency and apply phases
        for k in 0..n {
            scratch[k] = data[(k + half) % n] * twiddle[k];
        }
        data.copy_from_slice(scratch);
    } else {
        for k in 0..n {
            scratch[(k + half) % n] = data[k] * twiddle[k];
        }
        data.copy_from_slice(scratch);
        fft.process(data);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1, 8.0, 256).is_ok());
        assert!(GridSpec::new(3, 8.0, 256).is_err());
        assert!(GridSpec::new(1, -1.0, 256).is_err());
        assert!(GridSpec::new(1, 8.0, 100).is_err());
        assert!(GridSpec::new(1, 8.0, 8).is_err());
    }

    #[test]
    fn spacing_identity() {
        let g = GridSpec::new(1, 8.0, 256).unwrap();
        assert!((g.spacing() * g.samples() as f64 - 2.0 * g.half_width()).abs() < 1e-14);
        // half-offset nodes are symmetric about 0
        assert!((g.x_node(0) + g.x_node(255)).abs() < 1e-12);
    }

    #[test]
    fn forward_gaussian_self_dual() {
        let g = GridSpec::new(1, 8.0, 256).unwrap();
        let f = SampledFunction::sample(g, |x| c((-PI * x[0] * x[0]).exp())).unwrap();
        let fh = forward_transform(&f);
        let mut max_err: f64 = 0.0;
        for k in 0..g.len() {
            let xi = g.freq_node(k);
            let expect = (-PI * xi * xi).exp();
            max_err = max_err.max((fh.values()[k] - c(expect)).norm());
        }
        assert!(max_err < 1e-10, "max_err = {max_err:e}");
    }

    #[test]
    fn forward_constant_concentrates_at_zero() {
        let g = GridSpec::new(1, 4.0, 64).unwrap();
        let f = SampledFunction::sample(g, |_| c(1.0)).unwrap();
        let fh = forward_transform(&f);
        let k0 = g.samples() / 2;
        assert!((fh.values()[k0] - c(2.0 * g.half_width())).norm() < 1e-10);
        for k in 0..g.len() {
            if k != k0 {
                assert!(fh.values()[k].norm() < 1e-10);
            }
        }
    }

    #[test]
    fn forward_narrow_gaussian_at_zero() {
        // f = e^{-2 x^2}; f_hat(0) = integral = sqrt(pi/2)
        let g = GridSpec::new(1, 8.0, 256).unwrap();
        let f = SampledFunction::sample(g, |x| c((-2.0 * x[0] * x[0]).exp())).unwrap();
        let fh = forward_transform(&f);
        let expect = (PI / 2.0).sqrt();
        assert!((fh.values()[g.samples() / 2] - c(expect)).norm() < 1e-10);
    }

    #[test]
    fn roundtrip_1d() {
        let g = GridSpec::new(1, 8.0, 128).unwrap();
        let f = SampledFunction::sample(g, |x| {
            Complex64::new((x[0] * 0.7).sin(), (x[0] * 0.3).cos())
        })
        .unwrap();
        let back = inverse_transform(&forward_transform(&f));
        assert!(f.max_abs_diff(&back) < 1e-12 * f.max_abs().max(1.0));
    }

    #[test]
    fn roundtrip_2d() {
        let g = GridSpec::new(2, 4.0, 32).unwrap();
        let f = SampledFunction::sample(g, |x| {
            Complex64::new((x[0] + 2.0 * x[1]).sin(), (x[0] * x[1] * 0.1).cos())
        })
        .unwrap();
        let back = inverse_transform(&forward_transform(&f));
        assert!(f.max_abs_diff(&back) < 1e-12 * f.max_abs().max(1.0));
    }

    #[test]
    fn inverse_of_spectral_gaussian_matches_closed_form() {
        // F = e^{-2 xi^2}  ->  (pi/2)^{1/2} e^{-pi^2 x^2 / 2}
        let g = GridSpec::new(1, 8.0, 256).unwrap();
        let fh = SampledFunction::sample_freq(g, |xi| c((-2.0 * xi[0] * xi[0]).exp())).unwrap();
        let f = inverse_transform(&fh);
        for j in 0..g.len() {
            let x = g.x_node(j);
            let expect = (PI / 2.0).sqrt() * (-PI * PI * x * x / 2.0).exp();
            if expect.abs() > 1e-8 {
                let rel = (f.values()[j] - c(expect)).norm() / expect.abs();
                assert!(rel < 1e-6, "x={x} rel={rel:e}");
            }
        }
    }

    #[test]
    fn inverse_of_single_bin_is_constant() {
        let g = GridSpec::new(1, 4.0, 64).unwrap();
        let mut fh = SampledFunction::zeros(g, Domain::Frequency);
        fh.values_mut()[g.samples() / 2] = c(1.0);
        let f = inverse_transform(&fh);
        let expect = g.freq_spacing();
        for v in f.values() {
            assert!((v - c(expect)).norm() < 1e-14);
        }
    }

    #[test]
    fn integrate_examples() {
        let g = GridSpec::new(1, 1.0, 64).unwrap();
        let one = SampledFunction::sample(g, |_| c(1.0)).unwrap();
        assert!((integrate(&one) - c(2.0)).norm() < 1e-13);

        let g8 = GridSpec::new(1, 8.0, 256).unwrap();
        let gauss = SampledFunction::sample(g8, |x| c((-PI * x[0] * x[0]).exp())).unwrap();
        assert!((integrate(&gauss) - c(1.0)).norm() < 1e-12);

        // e^{-16 x^2}: integral sqrt(pi)/4
        let narrow = SampledFunction::sample(g8, |x| c((-16.0 * x[0] * x[0]).exp())).unwrap();
        assert!((integrate(&narrow) - c(PI.sqrt() / 4.0)).norm() < 1e-10);
    }

    #[test]
    fn parseval() {
        let g = GridSpec::new(1, 8.0, 128).unwrap();
        let f = SampledFunction::sample(g, |x| {
            Complex64::new((1.3 * x[0]).sin(), (0.4 * x[0]).cos() * 0.5)
        })
        .unwrap();
        let fh = forward_transform(&f);
        let space: f64 = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * g.spacing();
        let freq: f64 = fh.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * g.freq_spacing();
        assert!((space - freq).abs() < 1e-10 * space.max(1.0));
    }
}
