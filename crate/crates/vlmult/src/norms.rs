//! Modular functionals and Luxemburg norms on variable exponent spaces.
//!
//! The Luxemburg norm inf{lambda > 0 : rho(f/lambda) <= 1} is located by
//! bisection on lambda, using the strict monotone decrease of
//! lambda -> rho(f/lambda) for f != 0. The tolerance is placed on the
//! modular residual |rho(f/lambda) - 1|, tying accuracy to the defining
//! inequality rather than to lambda itself.

use crate::error::{Error, Result};
use crate::exponents::ExponentField;
use crate::grid::SampledFunction;

pub const MODULAR_RESIDUAL_TOL: f64 = 1e-10;
const MAX_BISECTIONS: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResult {
    pub value: f64,
    pub iterations: u32,
    /// |rho(f/lambda) - 1| at termination (0 for the zero function).
    pub residual: f64,
    /// The p0 used by the quasi-norm reduction, when one was applied.
    pub quasi_p0: Option<f64>,
}

/// rho(f) = integral over [-L,L]^n of |f(x) w(x)|^{p(x)} dx, with w == 1
/// when absent. Overflow-prone points are evaluated in log space.
pub fn modular(f: &SampledFunction, p: &ExponentField, w: Option<&[f64]>) -> f64 {
    let grid = f.grid();
    let pvals = exponent_samples(f, p);
    modular_scaled(f, &pvals, w, 1.0) * grid.spacing().powi(grid.dim() as i32)
}

/// Per-node exponent samples, computed once per (f, p) pair.
pub fn exponent_samples(f: &SampledFunction, p: &ExponentField) -> Vec<f64> {
    let grid = f.grid();
    (0..grid.len())
        .map(|idx| {
            let pt = grid.x_point(idx);
            p.evaluate(&pt[..grid.dim()])
        })
        .collect()
}

/// sum over nodes of |f w / lambda|^{p}, without the h^n weight.
fn modular_scaled(f: &SampledFunction, pvals: &[f64], w: Option<&[f64]>, inv_lambda: f64) -> f64 {
    let mut sum = 0.0;
    for (idx, v) in f.values().iter().enumerate() {
        let mut t = v.norm() * inv_lambda;
        if let Some(ws) = w {
            t *= ws[idx];
        }
        if t == 0.0 {
            continue;
        }
        let p = pvals[idx];
        let term = if t > 1e100 {
            let lt = p * t.ln();
            if lt > 709.0 {
                return f64::INFINITY;
            }
            lt.exp()
        } else {
            t.powf(p)
        };
        sum += term;
        if sum.is_infinite() {
            return f64::INFINITY;
        }
    }
    sum
}

/// Luxemburg norm for p in P (p_- >= 1).
pub fn luxemburg_norm(f: &SampledFunction, p: &ExponentField) -> Result<NormResult> {
    luxemburg_norm_weighted(f, p, None)
}

pub fn luxemburg_norm_weighted(
    f: &SampledFunction,
    p: &ExponentField,
    w: Option<&[f64]>,
) -> Result<NormResult> {
    let grid = f.grid();
    let hn = grid.spacing().powi(grid.dim() as i32);
    let pvals = exponent_samples(f, p);

    let mut peak: f64 = 0.0;
    for (idx, v) in f.values().iter().enumerate() {
        let mut t = v.norm();
        if let Some(ws) = w {
            t *= ws[idx];
        }
        peak = peak.max(t);
    }
    if peak == 0.0 {
        return Ok(NormResult { value: 0.0, iterations: 0, residual: 0.0, quasi_p0: None });
    }

    let vol = (2.0 * grid.half_width()).powi(grid.dim() as i32);
    let mut lo = peak * vol * 1e-16;
    let mut hi = peak * vol.max(1.0) * 2.0;
    let rho = |lambda: f64| modular_scaled(f, &pvals, w, 1.0 / lambda) * hn;

    let mut lambda = 0.5 * (lo + hi);
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    for _ in 0..MAX_BISECTIONS {
        iterations += 1;
        lambda = 0.5 * (lo + hi);
        let r = rho(lambda);
        residual = (r - 1.0).abs();
        if residual <= MODULAR_RESIDUAL_TOL {
            break;
        }
        if r > 1.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        if hi - lo <= f64::EPSILON * hi {
            // bracket exhausted at machine precision
            let r = rho(0.5 * (lo + hi));
            residual = (r - 1.0).abs();
            lambda = 0.5 * (lo + hi);
            break;
        }
    }
    if residual > MODULAR_RESIDUAL_TOL.max(1e-8) {
        return Err(Error::NonConvergence { residual, iterations });
    }
    Ok(NormResult { value: lambda, iterations, residual, quasi_p0: None })
}

/// Quasi-norm for p in P^0: ||f||_{p(.)} = || |f|^{p0} ||_{q(.)}^{1/p0}
/// with the fixed rule p0 = p_-/2 and q = p/p0. Delegates to the
/// Luxemburg norm when p_- >= 1 already.
pub fn quasi_norm(f: &SampledFunction, p: &ExponentField) -> Result<NormResult> {
    quasi_norm_weighted(f, p, None)
}

pub fn quasi_norm_weighted(
    f: &SampledFunction,
    p: &ExponentField,
    w: Option<&[f64]>,
) -> Result<NormResult> {
    if p.is_classical() {
        return luxemburg_norm_weighted(f, p, w);
    }
    let p0 = p.p_minus() / 2.0;
    let q = p.scale_down(p0)?;
    let grid = f.grid();
    let powered_vals: Vec<_> = f
        .values()
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            let mut t = v.norm();
            if let Some(ws) = w {
                t *= ws[idx];
            }
            num_complex::Complex64::new(t.powf(p0), 0.0)
        })
        .collect();
    let powered = SampledFunction::from_values(grid, powered_vals)?;
    let inner = luxemburg_norm(&powered, &q)?;
    Ok(NormResult {
        value: inner.value.powf(1.0 / p0),
        iterations: inner.iterations,
        residual: inner.residual,
        quasi_p0: Some(p0),
    })
}

/// Norm (or quasi-norm) picked by the exponent's class.
pub fn norm_auto(f: &SampledFunction, p: &ExponentField) -> Result<NormResult> {
    if p.is_classical() {
        luxemburg_norm(f, p)
    } else {
        quasi_norm(f, p)
    }
}

/// || f ||_{L^{p(.)}(w^{p(.)})}, realized as the (quasi-)norm of f*w.
/// The interpretation ||f||_{L^{p(.)}(w^{p(.)})} = ||f w||_{p(.)} is
/// recorded in harness reports.
pub fn weighted_norm(
    f: &SampledFunction,
    p: &ExponentField,
    w: &crate::weights::PowerWeight,
) -> Result<NormResult> {
    let ws = w.sample(&f.grid())?;
    quasi_norm_weighted(f, p, Some(&ws))
}

/// Returns ||fg||_{p3(.)} / (||f||_{p1(.)} ||g||_{p2(.)}); the exponents
/// must satisfy 1/p1 + 1/p2 = 1/p3 pointwise to 1e-10.
pub fn holder_check(
    f: &SampledFunction,
    g: &SampledFunction,
    p1: &ExponentField,
    p2: &ExponentField,
    p3: &ExponentField,
) -> Result<f64> {
    let grid = f.grid();
    for idx in (0..grid.len()).step_by((grid.len() / 64).max(1)) {
        let pt = grid.x_point(idx);
        let x = &pt[..grid.dim()];
        let lhs = 1.0 / p1.evaluate(x) + 1.0 / p2.evaluate(x);
        let rhs = 1.0 / p3.evaluate(x);
        if (lhs - rhs).abs() > 1e-10 {
            return Err(Error::Config(format!(
                "exponents violate 1/p1 + 1/p2 = 1/p3 at x = {x:?}"
            )));
        }
    }
    let fg = f.pointwise_mul(g)?;
    let nf = norm_auto(f, p1)?.value;
    let ng = norm_auto(g, p2)?.value;
    if nf == 0.0 || ng == 0.0 {
        return Err(Error::ZeroDenominator("Holder check with zero-norm factor".into()));
    }
    let nfg = norm_auto(&fg, p3)?.value;
    Ok(nfg / (nf * ng))
}
