//! Power weights, Muckenhoupt constants on grids, membership tests for
//! the V_{p(.)} class and the full hypothesis checker used by the
//! weighted experiments.
//!
//! Grid A_p constants are lower bounds of the continuum sup; divergence
//! is detected by refinement (the estimate keeps growing as N doubles)
//! rather than claimed from a closed form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::ExponentField;
use crate::grid::GridSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularFactor {
    pub point: Vec<f64>,
    pub beta: f64,
}

/// w(x) = [1 + |x - x0|]^{beta_inf} * prod_k |x - x_k|^{beta_k}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerWeight {
    pub center: Vec<f64>,
    pub beta_inf: f64,
    pub singular: Vec<SingularFactor>,
}

impl PowerWeight {
    pub fn new(center: Vec<f64>, beta_inf: f64, singular: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        if center.is_empty() || center.len() > 2 {
            return Err(Error::Config("weight center must have 1 or 2 coordinates".into()));
        }
        if !beta_inf.is_finite() {
            return Err(Error::Config("weight decay exponent must be finite".into()));
        }
        let singular: Vec<SingularFactor> = singular
            .into_iter()
            .map(|(point, beta)| SingularFactor { point, beta })
            .collect();
        for s in &singular {
            if s.point.len() != center.len() || !s.beta.is_finite() {
                return Err(Error::Config("singular point dimension/exponent invalid".into()));
            }
        }
        Ok(Self { center, beta_inf, singular })
    }

    /// Sum of the singular exponents plus the decay exponent; this is the
    /// growth rate of w at infinity.
    pub fn infinity_sum(&self) -> f64 {
        self.beta_inf + self.singular.iter().map(|s| s.beta).sum::<f64>()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        let mut out = (1.0 + dist(x, &self.center)).powf(self.beta_inf);
        for s in &self.singular {
            let d = dist(x, &s.point);
            if d == 0.0 && s.beta != 0.0 {
                return Err(Error::SingularHit(s.point.clone()));
            }
            out *= d.powf(s.beta);
        }
        Ok(out)
    }

    /// Weight values at all x-nodes; half-offset nodes never coincide with
    /// grid-rational singular points, but exact hits are still an error.
    pub fn sample(&self, grid: &GridSpec) -> Result<Vec<f64>> {
        if self.center.len() != grid.dim() {
            return Err(Error::GridMismatch);
        }
        (0..grid.len())
            .map(|idx| {
                let p = grid.x_point(idx);
                self.evaluate(&p[..grid.dim()])
            })
            .collect()
    }
}

/// Alias matching the operation vocabulary.
pub fn evaluate_weight(w: &PowerWeight, x: &[f64]) -> Result<f64> {
    w.evaluate(x)
}

fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Per-cube statistics needed by the A_p sups: averages of two node
/// arrays and the minimum of the first, over every grid-aligned cube.
fn cube_sweep<F>(grid: &GridSpec, arrays: &[&[f64]], mut visit: F)
where
    F: FnMut(&[f64], &[f64]),
{
    // visit(avgs, mins) per cube
    let n = grid.samples();
    let m = arrays.len();
    let mut avgs = vec![0.0f64; m];
    let mut mins = vec![0.0f64; m];
    match grid.dim() {
        1 => {
            let prefixes: Vec<Vec<f64>> = arrays
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
                for s in &mut mins {
                    *s = f64::INFINITY;
                }
                for i1 in i0 + 1..=n {
                    let inv = 1.0 / (i1 - i0) as f64;
                    for k in 0..m {
                        avgs[k] = (prefixes[k][i1] - prefixes[k][i0]) * inv;
                        mins[k] = mins[k].min(arrays[k][i1 - 1]);
                    }
                    visit(&avgs, &mins);
                }
            }
        }
        _ => {
            for s in 1..=n {
                let inv = 1.0 / (s * s) as f64;
                for r0 in 0..=n - s {
                    for c0 in 0..=n - s {
                        for k in 0..m {
                            let mut sum = 0.0;
                            let mut mn = f64::INFINITY;
                            for r in r0..r0 + s {
                                for v in &arrays[k][r * n + c0..r * n + c0 + s] {
                                    sum += v;
                                    mn = mn.min(*v);
                                }
                            }
                            avgs[k] = sum * inv;
                            mins[k] = mn;
                        }
                        visit(&avgs, &mins);
                    }
                }
            }
        }
    }
}

/// Classical A_p constant estimate:
/// sup_Q (avg_Q w)(avg_Q w^{1-p'})^{p-1}; for p = 1 the second factor is
/// (min_Q w)^{-1}.
pub fn ap_constant(w: &PowerWeight, p: f64, grid: &GridSpec) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Config("ap_constant needs p >= 1".into()));
    }
    let ws = w.sample(grid)?;
    let mut sup: f64 = 0.0;
    if p == 1.0 {
        cube_sweep(grid, &[&ws], |avgs, mins| {
            sup = sup.max(avgs[0] / mins[0]);
        });
    } else {
        let pp = p / (p - 1.0);
        let dual: Vec<f64> = ws.iter().map(|v| v.powf(1.0 - pp)).collect();
        cube_sweep(grid, &[&ws, &dual], |avgs, _| {
            sup = sup.max(avgs[0] * avgs[1].powf(p - 1.0));
        });
    }
    Ok(sup)
}

/// Multilinear A_P constant estimate for constant exponents:
/// sup_Q (avg_Q v)^{1/p} prod_i (avg_Q w_i^{1-p_i'})^{1/p_i'} with
/// v = prod w_i^{p/p_i} and 1/p = sum 1/p_i; p_i = 1 factors use
/// (min_Q w_i)^{-1}. Note the N = 1 case is the p-th root of
/// `ap_constant` (the joint form carries an outer 1/p power).
pub fn multilinear_ap_constant(
    ws: &[&PowerWeight],
    ps: &[f64],
    grid: &GridSpec,
) -> Result<f64> {
    if ws.is_empty() || ws.len() != ps.len() {
        return Err(Error::Config("weights and exponents must pair up".into()));
    }
    if ps.iter().any(|p| !(*p >= 1.0)) {
        return Err(Error::Config("multilinear A_P needs p_i >= 1".into()));
    }
    let p = 1.0 / ps.iter().map(|pi| 1.0 / pi).sum::<f64>();
    let sampled: Vec<Vec<f64>> = ws
        .iter()
        .map(|w| w.sample(grid))
        .collect::<Result<_>>()?;
    let joint: Vec<f64> = (0..grid.len())
        .map(|idx| {
            sampled
                .iter()
                .zip(ps)
                .map(|(s, pi)| s[idx].powf(p / pi))
                .product()
        })
        .collect();
    // arrays: joint, then one dual (or raw, for p_i = 1) array per factor
    let mut arrays: Vec<Vec<f64>> = vec![joint];
    for (s, pi) in sampled.iter().zip(ps) {
        if *pi == 1.0 {
            arrays.push(s.clone());
        } else {
            let ppi = pi / (pi - 1.0);
            arrays.push(s.iter().map(|v| v.powf(1.0 - ppi)).collect());
        }
    }
    let views: Vec<&[f64]> = arrays.iter().map(|a| a.as_slice()).collect();
    let mut sup: f64 = 0.0;
    cube_sweep(grid, &views, |avgs, mins| {
        let mut prod = avgs[0].powf(1.0 / p);
        for (i, pi) in ps.iter().enumerate() {
            if *pi == 1.0 {
                prod /= mins[i + 1];
            } else {
                let ppi = pi / (pi - 1.0);
                prod *= avgs[i + 1].powf(1.0 / ppi);
            }
        }
        sup = sup.max(prod);
    });
    Ok(sup)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub label: String,
    pub value: f64,
}

/// Result of a strict-inequality hypothesis battery: member iff every
/// margin is strictly positive; `binding` names the smallest margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub member: bool,
    pub margins: Vec<Margin>,
    pub binding: String,
}

impl MembershipReport {
    fn from_margins(margins: Vec<Margin>) -> Self {
        let member = margins.iter().all(|m| m.value > 0.0);
        let binding = margins
            .iter()
            .min_by(|a, b| a.value.partial_cmp(&b.value).unwrap())
            .map(|m| m.label.clone())
            .unwrap_or_default();
        Self { member, margins, binding }
    }
}

/// Membership of a power weight in V_{p(.)}: at each singular point x_k,
/// -n/p(x_k) < beta_k < n/p'(x_k), and at infinity
/// -n/p_inf < beta_inf + sum beta_k < n/p_inf'. Requires p constant
/// outside a ball so p_inf is structural.
pub fn v_pdot_membership(w: &PowerWeight, p: &ExponentField) -> Result<MembershipReport> {
    let n = w.center.len() as f64;
    let (p_inf, _, _) = p.constant_outside_ball().ok_or(Error::MissingStructure)?;
    let mut margins = Vec::new();
    for (k, s) in w.singular.iter().enumerate() {
        let pk = p.evaluate(&s.point);
        if pk <= 1.0 {
            return Err(Error::NotConjugable);
        }
        let pk_dual = pk / (pk - 1.0);
        margins.push(Margin {
            label: format!("-n/p(x_{}) < beta_{}", k + 1, k + 1),
            value: s.beta + n / pk,
        });
        margins.push(Margin {
            label: format!("beta_{} < n/p'(x_{})", k + 1, k + 1),
            value: n / pk_dual - s.beta,
        });
    }
    if p_inf <= 1.0 {
        return Err(Error::NotConjugable);
    }
    let p_inf_dual = p_inf / (p_inf - 1.0);
    let total = w.infinity_sum();
    margins.push(Margin {
        label: "-n/p_inf < beta_inf + sum beta_k".into(),
        value: total + n / p_inf,
    });
    margins.push(Margin {
        label: "beta_inf + sum beta_k < n/p_inf'".into(),
        value: n / p_inf_dual - total,
    });
    Ok(MembershipReport::from_margins(margins))
}

/// Pointwise product of power weights (exponents add; singular points
/// merged by coincidence, centers must agree).
pub fn product_weight(ws: &[&PowerWeight]) -> Result<PowerWeight> {
    let first = ws.first().ok_or(Error::EmptyCorpus)?;
    let mut singular: Vec<SingularFactor> = Vec::new();
    let mut beta_inf = 0.0;
    for w in ws {
        if dist(&w.center, &first.center) > 1e-12 {
            return Err(Error::Config("product weight needs a common center".into()));
        }
        beta_inf += w.beta_inf;
        for s in &w.singular {
            if let Some(existing) = singular
                .iter_mut()
                .find(|e| dist(&e.point, &s.point) <= 1e-12)
            {
                existing.beta += s.beta;
            } else {
                singular.push(s.clone());
            }
        }
    }
    Ok(PowerWeight { center: first.center.clone(), beta_inf, singular })
}

/// Full hypothesis battery for the weighted multiplier corollary with
/// power weights: the Sobolev-order window Nn/2 < s <= Nn, the gates
/// r_0 = Nn/s < (p_j)_- and p_j log-Holder, the per-point exponent
/// windows -n/p_j(x_k) < beta_k^j < min{n/p_j'(x_k), n/(N p'(x_k))},
/// the analogous window at infinity, and the implied memberships
/// w_j in V_{p_j(.)} and w_1...w_N in V_{p(.)} (recomputed directly).
pub fn corollary_hypothesis_check(
    ps: &[ExponentField],
    ws: &[PowerWeight],
    s: f64,
    n: usize,
) -> Result<MembershipReport> {
    if ps.is_empty() || ps.len() != ws.len() {
        return Err(Error::Config("need one exponent per weight".into()));
    }
    let nn = (ps.len() * n) as f64;
    let nf = n as f64;
    let big_n = ps.len() as f64;
    let mut margins = Vec::new();

    margins.push(Margin { label: "Nn/2 < s".into(), value: s - nn / 2.0 });
    margins.push(Margin { label: "s <= Nn".into(), value: nn - s });

    let r0 = nn / s;
    for (j, pj) in ps.iter().enumerate() {
        margins.push(Margin {
            label: format!("r_0 < (p_{})_-", j + 1),
            value: pj.p_minus() - r0,
        });
        margins.push(Margin {
            label: format!("p_{} log-Holder", j + 1),
            value: if pj.is_log_holder() { 1.0 } else { -1.0 },
        });
    }

    let p = crate::exponents::harmonic_sum(ps)?;
    let (p_inf, _, _) = p.constant_outside_ball().ok_or(Error::MissingStructure)?;

    for (j, (pj, wj)) in ps.iter().zip(ws).enumerate() {
        let (pj_inf, _, _) = pj.constant_outside_ball().ok_or(Error::MissingStructure)?;
        for (k, sing) in wj.singular.iter().enumerate() {
            let pjx = pj.evaluate(&sing.point);
            let px = p.evaluate(&sing.point);
            if pjx <= 1.0 {
                return Err(Error::NotConjugable);
            }
            margins.push(Margin {
                label: format!("-n/p_{}(x_{}) < beta", j + 1, k + 1),
                value: sing.beta + nf / pjx,
            });
            if px <= 1.0 {
                // p' undefined: record the failed precondition instead
                margins.push(Margin {
                    label: format!("p(x_{}) > 1", k + 1),
                    value: px - 1.0,
                });
            } else {
                let upper = (nf * (pjx - 1.0) / pjx).min(nf * (px - 1.0) / (big_n * px));
                margins.push(Margin {
                    label: format!("beta < min bound (j={}, k={})", j + 1, k + 1),
                    value: upper - sing.beta,
                });
            }
        }
        if pj_inf <= 1.0 {
            return Err(Error::NotConjugable);
        }
        let total = wj.infinity_sum();
        margins.push(Margin {
            label: format!("-n/(p_{})_inf < sum beta", j + 1),
            value: total + nf / pj_inf,
        });
        if p_inf <= 1.0 {
            margins.push(Margin { label: "p_inf > 1".into(), value: p_inf - 1.0 });
        } else {
            let upper_inf =
                (nf * (pj_inf - 1.0) / pj_inf).min(nf * (p_inf - 1.0) / (big_n * p_inf));
            margins.push(Margin {
                label: format!("sum beta < min bound at infinity (j={})", j + 1),
                value: upper_inf - total,
            });
        }
    }

    // implied memberships, recomputed from the plain V_{p(.)} windows
    for (j, (pj, wj)) in ps.iter().zip(ws).enumerate() {
        let member = v_pdot_membership(wj, pj).map(|r| r.member).unwrap_or(false);
        margins.push(Margin {
            label: format!("w_{} in V_p_{}", j + 1, j + 1),
            value: if member { 1.0 } else { -1.0 },
        });
    }
    let refs: Vec<&PowerWeight> = ws.iter().collect();
    let prod = product_weight(&refs)?;
    let member = v_pdot_membership(&prod, &p).map(|r| r.member).unwrap_or(false);
    margins.push(Margin {
        label: "w_1...w_N in V_p".into(),
        value: if member { 1.0 } else { -1.0 },
    });

    Ok(MembershipReport::from_margins(margins))
}
