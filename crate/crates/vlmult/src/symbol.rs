//! Closed-form multiplier symbols on R^{N n}, N in {1,2,3}.
//!
//! Symbols are closed-form only, so translation and scaling are exact.
//! An N-ary symbol takes the concatenated frequency vector
//! (xi_1, ..., xi_N) with n coordinates per argument.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolDescriptor {
    Constant {
        value: f64,
    },
    /// m(xi_1, ..., xi_N) = m_1(xi_1) ... m_N(xi_N) with arity-1 factors.
    Tensor {
        factors: Vec<Symbol>,
    },
    /// m(xi, eta) = base(xi - eta); base has arity 1.
    Difference {
        base: Box<Symbol>,
    },
    /// Indicator of the rectangle [lo, hi] in R^{Nn}, with value 1/2 on
    /// the boundary (the convention forced by sign(0) = 0 in the
    /// Hilbert-transform band-limit identity).
    Indicator {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    /// e^{-scale * |zeta|^2} on the full argument.
    Gaussian {
        scale: f64,
    },
    /// Degree-0 homogeneous smooth family: <u(theta), zeta> / |zeta|,
    /// with u a unit vector parameterized by theta; value 0 at zeta = 0.
    CoifmanMeyer {
        theta: f64,
    },
    /// m(xi, eta) = base(xi - eta) * phi_hat(xi + eta); both arity 1.
    ModulatedDifference {
        base: Box<Symbol>,
        phi_hat: Box<Symbol>,
    },
    /// base(zeta + 2y) (the T_{-2y} translate of an arity-1 symbol).
    Translate {
        base: Box<Symbol>,
        y: Vec<f64>,
    },
    /// Pointwise product of symbols of the same arity.
    Product {
        factors: Vec<Symbol>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Symbol {
    arity: usize,
    descriptor: SymbolDescriptor,
}

impl Symbol {
    pub fn new(arity: usize, descriptor: SymbolDescriptor) -> Result<Self> {
        if arity == 0 || arity > 3 {
            return Err(Error::Config(format!("symbol arity {arity} not in 1..=3")));
        }
        match &descriptor {
            SymbolDescriptor::Tensor { factors } => {
                if factors.len() != arity {
                    return Err(Error::Config("tensor symbol needs one factor per argument".into()));
                }
                if factors.iter().any(|f| f.arity != 1) {
                    return Err(Error::Config("tensor factors must have arity 1".into()));
                }
            }
            SymbolDescriptor::Difference { base }
            | SymbolDescriptor::ModulatedDifference { base, .. } => {
                if arity != 2 {
                    return Err(Error::Config("difference symbols have arity 2".into()));
                }
                if base.arity != 1 {
                    return Err(Error::Config("difference base must have arity 1".into()));
                }
            }
            SymbolDescriptor::Indicator { lo, hi } => {
                if lo.len() != hi.len() || lo.is_empty() {
                    return Err(Error::Config("indicator bounds must have matching lengths".into()));
                }
                if lo.iter().zip(hi).any(|(a, b)| a >= b) {
                    return Err(Error::Config("indicator rectangle must be non-degenerate".into()));
                }
            }
            SymbolDescriptor::Translate { base, .. } => {
                if base.arity != arity {
                    return Err(Error::Config("translate preserves arity".into()));
                }
            }
            SymbolDescriptor::Product { factors } => {
                if factors.is_empty() || factors.iter().any(|f| f.arity != arity) {
                    return Err(Error::Config("product factors must share the arity".into()));
                }
            }
            _ => {}
        }
        Ok(Self { arity, descriptor })
    }

    pub fn constant(arity: usize, value: f64) -> Self {
        Self::new(arity, SymbolDescriptor::Constant { value }).unwrap()
    }

    pub fn gaussian(arity: usize, scale: f64) -> Self {
        Self::new(arity, SymbolDescriptor::Gaussian { scale }).unwrap()
    }

    pub fn difference(base: Symbol) -> Result<Self> {
        Self::new(2, SymbolDescriptor::Difference { base: Box::new(base) })
    }

    pub fn modulated_difference(base: Symbol, phi_hat: Symbol) -> Result<Self> {
        Self::new(
            2,
            SymbolDescriptor::ModulatedDifference {
                base: Box::new(base),
                phi_hat: Box::new(phi_hat),
            },
        )
    }

    pub fn tensor(factors: Vec<Symbol>) -> Result<Self> {
        let arity = factors.len();
        Self::new(arity, SymbolDescriptor::Tensor { factors })
    }

    pub fn indicator(arity: usize, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        Self::new(arity, SymbolDescriptor::Indicator { lo, hi })
    }

    pub fn coifman_meyer(arity: usize, theta: f64) -> Self {
        Self::new(arity, SymbolDescriptor::CoifmanMeyer { theta }).unwrap()
    }

    pub fn translate(base: Symbol, y: Vec<f64>) -> Result<Self> {
        let arity = base.arity;
        Self::new(arity, SymbolDescriptor::Translate { base: Box::new(base), y })
    }

    pub fn product(factors: Vec<Symbol>) -> Result<Self> {
        let arity = factors.first().map_or(0, |f| f.arity);
        Self::new(arity, SymbolDescriptor::Product { factors })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn descriptor(&self) -> &SymbolDescriptor {
        &self.descriptor
    }

    /// Evaluate at the concatenated frequency vector; `zeta.len()` must
    /// be `arity * n`.
    pub fn eval(&self, zeta: &[f64]) -> Complex64 {
        match &self.descriptor {
            SymbolDescriptor::Constant { value } => Complex64::new(*value, 0.0),
            SymbolDescriptor::Tensor { factors } => {
                let n = zeta.len() / self.arity;
                let mut out = Complex64::new(1.0, 0.0);
                for (i, f) in factors.iter().enumerate() {
                    out *= f.eval(&zeta[i * n..(i + 1) * n]);
                }
                out
            }
            SymbolDescriptor::Difference { base } => {
                let n = zeta.len() / 2;
                let diff: Vec<f64> = (0..n).map(|a| zeta[a] - zeta[n + a]).collect();
                base.eval(&diff)
            }
            SymbolDescriptor::Indicator { lo, hi } => {
                let mut out = 1.0;
                for (d, z) in zeta.iter().enumerate() {
                    out *= indicator_axis(*z, lo[d], hi[d]);
                    if out == 0.0 {
                        break;
                    }
                }
                Complex64::new(out, 0.0)
            }
            SymbolDescriptor::Gaussian { scale } => {
                let r2: f64 = zeta.iter().map(|z| z * z).sum();
                Complex64::new((-scale * r2).exp(), 0.0)
            }
            SymbolDescriptor::CoifmanMeyer { theta } => {
                let r2: f64 = zeta.iter().map(|z| z * z).sum();
                if r2 == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let u = direction(*theta, zeta.len());
                let dot: f64 = zeta.iter().zip(&u).map(|(z, ui)| z * ui).sum();
                Complex64::new(dot / r2.sqrt(), 0.0)
            }
            SymbolDescriptor::ModulatedDifference { base, phi_hat } => {
                let n = zeta.len() / 2;
                let diff: Vec<f64> = (0..n).map(|a| zeta[a] - zeta[n + a]).collect();
                let sum: Vec<f64> = (0..n).map(|a| zeta[a] + zeta[n + a]).collect();
                base.eval(&diff) * phi_hat.eval(&sum)
            }
            SymbolDescriptor::Product { factors } => factors
                .iter()
                .map(|f| f.eval(zeta))
                .product(),
            SymbolDescriptor::Translate { base, y } => {
                let shifted: Vec<f64> = zeta
                    .iter()
                    .enumerate()
                    .map(|(d, z)| z + 2.0 * y[d % y.len()])
                    .collect();
                base.eval(&shifted)
            }
        }
    }
}

fn indicator_axis(z: f64, lo: f64, hi: f64) -> f64 {
    let eps = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    if (z - lo).abs() <= eps || (z - hi).abs() <= eps {
        0.5
    } else if z > lo && z < hi {
        1.0
    } else {
        0.0
    }
}

/// Unit vector in R^d parameterized by theta.
fn direction(theta: f64, d: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..d)
        .map(|i| (theta + i as f64 * std::f64::consts::FRAC_PI_2).cos())
        .collect();
    let norm: f64 = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        let mut e = vec![0.0; d];
        e[0] = 1.0;
        return e;
    }
    raw.into_iter().map(|v| v / norm).collect()
}
