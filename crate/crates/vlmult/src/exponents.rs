//! Variable exponent functions p(.): closed-form descriptors with cached
//! essential bounds, pointwise conjugates, harmonic sums and log-Holder
//! modulus estimation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Closed-form exponent descriptor. Exponents are never free samples so
/// that structural hypotheses (log-Holder class, constancy outside a
/// ball) stay checkable analytically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExponentDescriptor {
    Constant {
        value: f64,
    },
    /// 1-D step function: value[i] on [breaks[i-1], breaks[i]), with
    /// values[0] left of breaks[0] and values.last() right of the last
    /// breakpoint.
    PiecewiseConstant {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
    /// p(x) = p_inf + amplitude * max(0, 1 - |x - center|/radius)^2;
    /// constant outside B(center, radius).
    RadialSmooth {
        p_inf: f64,
        amplitude: f64,
        radius: f64,
        center: Vec<f64>,
    },
    /// Pointwise 1/p = sum of 1/p_j over the parts.
    Harmonic {
        parts: Vec<ExponentField>,
    },
    /// base(x) / factor (used for the quasi-norm reduction q = p/p0).
    Scaled {
        base: Box<ExponentField>,
        factor: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentField {
    descriptor: ExponentDescriptor,
    p_minus: f64,
    p_plus: f64,
}

impl ExponentField {
    pub fn new(descriptor: ExponentDescriptor) -> Result<Self> {
        let (p_minus, p_plus) = analytic_bounds(&descriptor)?;
        if !(p_minus > 0.0 && p_minus <= p_plus && p_plus.is_finite()) {
            return Err(Error::Config(format!(
                "exponent bounds ({p_minus}, {p_plus}) violate 0 < p_- <= p_+ < inf"
            )));
        }
        Ok(Self { descriptor, p_minus, p_plus })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(ExponentDescriptor::Constant { value })
    }

    pub fn piecewise(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(ExponentDescriptor::PiecewiseConstant { breaks, values })
    }

    pub fn radial_smooth(p_inf: f64, amplitude: f64, radius: f64, center: Vec<f64>) -> Result<Self> {
        Self::new(ExponentDescriptor::RadialSmooth { p_inf, amplitude, radius, center })
    }

    pub fn descriptor(&self) -> &ExponentDescriptor {
        &self.descriptor
    }

    /// Cached essential infimum over the working domain.
    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    /// Cached essential supremum over the working domain.
    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    /// True if p is in the classical range P (p_- >= 1).
    pub fn is_classical(&self) -> bool {
        self.p_minus >= 1.0
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        match &self.descriptor {
            ExponentDescriptor::Constant { value } => *value,
            ExponentDescriptor::PiecewiseConstant { breaks, values } => {
                let t = x[0];
                let mut i = 0;
                while i < breaks.len() && t >= breaks[i] {
                    i += 1;
                }
                values[i]
            }
            ExponentDescriptor::RadialSmooth { p_inf, amplitude, radius, center } => {
                let mut d2 = 0.0;
                for (a, c) in x.iter().zip(center.iter()) {
                    d2 += (a - c) * (a - c);
                }
                let t = (1.0 - d2.sqrt() / radius).max(0.0);
                p_inf + amplitude * t * t
            }
            ExponentDescriptor::Harmonic { parts } => {
                let inv: f64 = parts.iter().map(|p| 1.0 / p.evaluate(x)).sum();
                1.0 / inv
            }
            ExponentDescriptor::Scaled { base, factor } => base.evaluate(x) / factor,
        }
    }

    /// p(x) / factor, staying closed-form where the family allows it.
    pub fn scale_down(&self, factor: f64) -> Result<Self> {
        let d = match &self.descriptor {
            ExponentDescriptor::Constant { value } => {
                ExponentDescriptor::Constant { value: value / factor }
            }
            ExponentDescriptor::PiecewiseConstant { breaks, values } => {
                ExponentDescriptor::PiecewiseConstant {
                    breaks: breaks.clone(),
                    values: values.iter().map(|v| v / factor).collect(),
                }
            }
            ExponentDescriptor::RadialSmooth { p_inf, amplitude, radius, center } => {
                ExponentDescriptor::RadialSmooth {
                    p_inf: p_inf / factor,
                    amplitude: amplitude / factor,
                    radius: *radius,
                    center: center.clone(),
                }
            }
            other => ExponentDescriptor::Scaled {
                base: Box::new(ExponentField {
                    descriptor: other.clone(),
                    p_minus: self.p_minus,
                    p_plus: self.p_plus,
                }),
                factor,
            },
        };
        Self::new(d)
    }

    /// Structural (p_inf, ball radius, center) when p is constant outside
    /// a ball; None for descriptors without that property.
    pub fn constant_outside_ball(&self) -> Option<(f64, f64, Vec<f64>)> {
        match &self.descriptor {
            ExponentDescriptor::Constant { value } => Some((*value, 0.0, vec![0.0, 0.0])),
            ExponentDescriptor::RadialSmooth { p_inf, radius, center, .. } => {
                Some((*p_inf, *radius, center.clone()))
            }
            _ => None,
        }
    }

    /// Whether the descriptor family is log-Holder continuous by
    /// construction (Lipschitz or constant profiles are; steps are not).
    pub fn is_log_holder(&self) -> bool {
        match &self.descriptor {
            ExponentDescriptor::Constant { .. } => true,
            ExponentDescriptor::PiecewiseConstant { breaks, .. } => breaks.is_empty(),
            ExponentDescriptor::RadialSmooth { .. } => true,
            ExponentDescriptor::Harmonic { parts } => parts.iter().all(|p| p.is_log_holder()),
            ExponentDescriptor::Scaled { base, .. } => base.is_log_holder(),
        }
    }
}

fn analytic_bounds(d: &ExponentDescriptor) -> Result<(f64, f64)> {
    Ok(match d {
        ExponentDescriptor::Constant { value } => (*value, *value),
        ExponentDescriptor::PiecewiseConstant { breaks, values } => {
            if values.len() != breaks.len() + 1 {
                return Err(Error::Config(
                    "piecewise exponent needs exactly one more value than breakpoints".into(),
                ));
            }
            if breaks.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config("piecewise breakpoints must be increasing".into()));
            }
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        }
        ExponentDescriptor::RadialSmooth { p_inf, amplitude, radius, center } => {
            if !(*radius > 0.0) {
                return Err(Error::Config("radial exponent radius must be positive".into()));
            }
            if center.is_empty() || center.len() > 2 {
                return Err(Error::Config("radial exponent center must have 1 or 2 coordinates".into()));
            }
            if *amplitude >= 0.0 {
                (*p_inf, *p_inf + *amplitude)
            } else {
                (*p_inf + *amplitude, *p_inf)
            }
        }
        ExponentDescriptor::Harmonic { parts } => {
            if parts.is_empty() {
                return Err(Error::Config("harmonic sum of no exponents".into()));
            }
            // 1/p(x) lies between sum(1/(p_j)_+) and sum(1/(p_j)_-)
            let inv_hi: f64 = parts.iter().map(|p| 1.0 / p.p_minus()).sum();
            let inv_lo: f64 = parts.iter().map(|p| 1.0 / p.p_plus()).sum();
            (1.0 / inv_hi, 1.0 / inv_lo)
        }
        ExponentDescriptor::Scaled { base, factor } => {
            if !(*factor > 0.0) {
                return Err(Error::Config("scale factor must be positive".into()));
            }
            (base.p_minus() / factor, base.p_plus() / factor)
        }
    })
}

/// Min/max of p over the grid nodes.
pub fn ess_bounds(p: &ExponentField, grid: &GridSpec) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for idx in 0..grid.len() {
        let pt = grid.x_point(idx);
        let v = p.evaluate(&pt[..grid.dim()]);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// Conjugate exponent p'(x) = p(x)/(p(x)-1).
pub fn conjugate(p: &ExponentField, x: &[f64]) -> Result<f64> {
    conjugate_value(p.evaluate(x))
}

pub fn conjugate_value(v: f64) -> Result<f64> {
    if v <= 1.0 {
        return Err(Error::NotConjugable);
    }
    Ok(v / (v - 1.0))
}

/// Pointwise 1/result = sum of 1/p_j. The result may land in P^0
/// (p_- < 1). Constant and piecewise inputs are merged eagerly so the
/// result stays in the base families.
pub fn harmonic_sum(ps: &[ExponentField]) -> Result<ExponentField> {
    if ps.is_empty() {
        return Err(Error::Config("harmonic sum of no exponents".into()));
    }
    let all_const = ps
        .iter()
        .all(|p| matches!(p.descriptor(), ExponentDescriptor::Constant { .. }));
    if all_const {
        let inv: f64 = ps.iter().map(|p| 1.0 / p.p_minus()).sum();
        return ExponentField::constant(1.0 / inv);
    }
    let flat = ps.iter().all(|p| {
        matches!(
            p.descriptor(),
            ExponentDescriptor::Constant { .. } | ExponentDescriptor::PiecewiseConstant { .. }
        )
    });
    if flat {
        let mut breaks: Vec<f64> = Vec::new();
        for p in ps {
            if let ExponentDescriptor::PiecewiseConstant { breaks: b, .. } = p.descriptor() {
                breaks.extend_from_slice(b);
            }
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup();
        let mut probes: Vec<f64> = Vec::with_capacity(breaks.len() + 1);
        probes.push(breaks.first().map_or(0.0, |b| b - 1.0));
        for w in breaks.windows(2) {
            probes.push(0.5 * (w[0] + w[1]));
        }
        if let Some(last) = breaks.last() {
            probes.push(last + 1.0);
        }
        let values: Vec<f64> = probes
            .iter()
            .map(|t| {
                let inv: f64 = ps.iter().map(|p| 1.0 / p.evaluate(&[*t])).sum();
                1.0 / inv
            })
            .collect();
        return ExponentField::piecewise(breaks, values);
    }
    ExponentField::new(ExponentDescriptor::Harmonic { parts: ps.to_vec() })
}

/// sup over node pairs with 0 < |x - y| <= 1/2 of |p(x)-p(y)| * (-ln|x-y|).
/// In 2-D the pair sweep is restricted to axis-aligned and diagonal pairs.
pub fn lh0_modulus(p: &ExponentField, grid: &GridSpec) -> f64 {
    let mut sup: f64 = 0.0;
    match grid.dim() {
        1 => {
            let n = grid.samples();
            let vals: Vec<f64> = (0..n).map(|j| p.evaluate(&[grid.x_node(j)])).collect();
            let h = grid.spacing();
            let max_sep = (0.5 / h).floor() as usize;
            for j in 0..n {
                for d in 1..=max_sep.min(n - 1 - j) {
                    let dist = d as f64 * h;
                    let m = (vals[j] - vals[j + d]).abs() * (-dist.ln());
                    sup = sup.max(m);
                }
            }
        }
        _ => {
            let n = grid.samples();
            let h = grid.spacing();
            let max_sep = (0.5 / (h * std::f64::consts::SQRT_2)).floor() as usize;
            let at = |r: usize, c: usize| p.evaluate(&[grid.x_node(r), grid.x_node(c)]);
            for r in 0..n {
                for c in 0..n {
                    let v = at(r, c);
                    for d in 1..=max_sep {
                        for (dr, dc) in [(0usize, d), (d, 0usize), (d, d)] {
                            if r + dr < n && c + dc < n {
                                let dist = h * ((dr * dr + dc * dc) as f64).sqrt();
                                if dist <= 0.5 {
                                    let m = (v - at(r + dr, c + dc)).abs() * (-dist.ln());
                                    sup = sup.max(m);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_families() {
        let c2 = ExponentField::constant(2.0).unwrap();
        assert_eq!(c2.evaluate(&[0.3]), 2.0);

        let pw = ExponentField::piecewise(vec![0.5], vec![2.0, 4.0]).unwrap();
        assert_eq!(pw.evaluate(&[0.75]), 4.0);
        assert_eq!(pw.evaluate(&[0.25]), 2.0);

        let rad = ExponentField::radial_smooth(2.0, 1.0, 1.0, vec![0.0]).unwrap();
        assert_eq!(rad.evaluate(&[0.0]), 3.0);
        assert_eq!(rad.evaluate(&[2.0]), 2.0);
    }

    #[test]
    fn ess_bounds_families() {
        let g = GridSpec::new(1, 4.0, 256).unwrap();
        let c3 = ExponentField::constant(3.0).unwrap();
        assert_eq!(ess_bounds(&c3, &g), (3.0, 3.0));

        let pw = ExponentField::piecewise(vec![0.5], vec![2.0, 4.0]).unwrap();
        assert_eq!(ess_bounds(&pw, &g), (2.0, 4.0));

        let rad = ExponentField::radial_smooth(2.0, 1.0, 1.0, vec![0.0]).unwrap();
        let (lo, hi) = ess_bounds(&rad, &g);
        assert_eq!(lo, 2.0);
        // analytic max 3 at the center, which is never a node; allow h*slope
        assert!(hi <= 3.0 && hi > 3.0 - g.spacing() * 2.0);
    }

    #[test]
    fn conjugate_examples() {
        let p = ExponentField::constant(2.0).unwrap();
        assert!((conjugate(&p, &[0.0]).unwrap() - 2.0).abs() < 1e-15);
        let p = ExponentField::constant(4.0).unwrap();
        assert!((conjugate(&p, &[0.0]).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        let p = ExponentField::constant(1.5).unwrap();
        assert!((conjugate(&p, &[0.0]).unwrap() - 3.0).abs() < 1e-15);
        let p = ExponentField::constant(1.0).unwrap();
        assert!(conjugate(&p, &[0.0]).is_err());
    }

    #[test]
    fn conjugate_involution() {
        for v in [1.1, 1.5, 2.0, 3.7, 10.0] {
            let q = conjugate_value(v).unwrap();
            let back = conjugate_value(q).unwrap();
            assert!((back - v).abs() < 1e-12);
        }
    }

    #[test]
    fn harmonic_sum_constants() {
        let p4 = ExponentField::constant(4.0).unwrap();
        let s = harmonic_sum(&[p4.clone(), p4]).unwrap();
        assert_eq!(s.evaluate(&[1.0]), 2.0);

        let p2 = ExponentField::constant(2.0).unwrap();
        let s = harmonic_sum(&[p2.clone(), p2.clone(), p2]).unwrap();
        assert!((s.evaluate(&[0.0]) - 2.0 / 3.0).abs() < 1e-15);
        assert!(!s.is_classical());
    }

    #[test]
    fn harmonic_sum_piecewise() {
        let pw = ExponentField::piecewise(vec![0.5], vec![2.0, 4.0]).unwrap();
        let c4 = ExponentField::constant(4.0).unwrap();
        let s = harmonic_sum(&[pw, c4]).unwrap();
        assert!((s.evaluate(&[0.0]) - 4.0 / 3.0).abs() < 1e-15);
        assert!((s.evaluate(&[0.9]) - 2.0).abs() < 1e-15);
        assert!(matches!(
            s.descriptor(),
            ExponentDescriptor::PiecewiseConstant { .. }
        ));
    }

    #[test]
    fn harmonic_sum_permutation_invariant_and_bounded() {
        let a = ExponentField::piecewise(vec![0.0], vec![2.0, 3.0]).unwrap();
        let b = ExponentField::constant(4.0).unwrap();
        let s1 = harmonic_sum(&[a.clone(), b.clone()]).unwrap();
        let s2 = harmonic_sum(&[b.clone(), a.clone()]).unwrap();
        for t in [-1.0, 0.3, 2.0] {
            assert!((s1.evaluate(&[t]) - s2.evaluate(&[t])).abs() < 1e-15);
        }
        let bound = 1.0 / (1.0 / a.p_minus() + 1.0 / b.p_minus());
        assert!(s1.p_minus() >= bound - 1e-15);
    }

    #[test]
    fn lh0_constant_is_zero() {
        let g = GridSpec::new(1, 4.0, 128).unwrap();
        let p = ExponentField::constant(2.0).unwrap();
        assert_eq!(lh0_modulus(&p, &g), 0.0);
    }

    #[test]
    fn lh0_step_diverges_with_refinement() {
        let pw = ExponentField::piecewise(vec![0.0], vec![2.0, 4.0]).unwrap();
        let mut prev = 0.0;
        for n in [64usize, 128, 256] {
            let g = GridSpec::new(1, 4.0, n).unwrap();
            let m = lh0_modulus(&pw, &g);
            assert!(m > prev, "modulus should grow with N: {m} vs {prev}");
            prev = m;
        }
        // adjacent nodes across the jump give 2 * (-ln h)
        let g = GridSpec::new(1, 4.0, 256).unwrap();
        assert!((prev - 2.0 * (-g.spacing().ln())).abs() < 1e-9);
    }

    #[test]
    fn lh0_radial_stable_under_refinement() {
        let rad = ExponentField::radial_smooth(2.0, 1.0, 1.0, vec![0.0]).unwrap();
        let g1 = GridSpec::new(1, 4.0, 128).unwrap();
        let g2 = GridSpec::new(1, 4.0, 256).unwrap();
        let m1 = lh0_modulus(&rad, &g1);
        let m2 = lh0_modulus(&rad, &g2);
        assert!(m1.is_finite() && m2.is_finite());
        assert!((m2 - m1).abs() / m1 < 0.05, "m1={m1} m2={m2}");
    }

    #[test]
    fn quasi_scale_down() {
        let pw = ExponentField::piecewise(vec![0.0], vec![2.0, 4.0]).unwrap();
        let q = pw.scale_down(1.0).unwrap();
        assert_eq!(q, pw);
        let q = pw.scale_down(2.0).unwrap();
        assert_eq!(q.p_minus(), 1.0);
        assert_eq!(q.p_plus(), 2.0);
    }
}
