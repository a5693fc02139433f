//! Harness configuration: TOML file with per-experiment sections,
//! strict about unknown keys, merged with CLI overrides.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HarnessConfig {
    pub seed: u64,
    pub grid: GridConfig,
    pub e1: E1Config,
    pub e2: E2Config,
    pub e3: E3Config,
    pub e4: E4Config,
    pub e5: E5Config,
    pub e6: E6Config,
    pub e7: E7Config,
    pub e8: E8Config,
    pub e9: E9Config,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            grid: GridConfig::default(),
            e1: E1Config::default(),
            e2: E2Config::default(),
            e3: E3Config::default(),
            e4: E4Config::default(),
            e5: E5Config::default(),
            e6: E6Config::default(),
            e7: E7Config::default(),
            e8: E8Config::default(),
            e9: E9Config::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n: usize,
    pub l: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n: 128, l: 8.0 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_count: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { lambda_min: 2.0, lambda_max: 64.0, lambda_count: 13 }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_min > 0.0 && self.lambda_max > self.lambda_min && self.lambda_count >= 4)
        {
            return Err(Error::Config(
                "lambda sweep must be increasing with at least 4 points".into(),
            ));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let k = self.lambda_count;
        let ratio = (self.lambda_max / self.lambda_min).ln();
        (0..k)
            .map(|i| self.lambda_min * (ratio * i as f64 / (k - 1) as f64).exp())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct E1Config {
    pub grid_n: usize,
    pub grid_l: f64,
    pub sweep: SweepConfig,
    pub slope_tol: f64,
}

impl Default for E1Config {
    fn default() -> Self {
        Self { grid_n: 2048, grid_l: 160.0, sweep: SweepConfig::default(), slope_tol: 0.02 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct E2Config {
    pub grid_n: usize,
    pub grid_l: f64,
    pub sweep: SweepConfig,
    pub y: f64,
    pub limit_rel_tol: f64,
    pub slope_slack: f64,
}

impl Default for E2Config {
    fn default() -> Self {
        Self {
            grid_n: 2048,
            grid_l: 160.0,
            sweep: SweepConfig::default(),
            y: 0.25,
            limit_rel_tol: 0.01,
            slope_slack: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct E3Config {
    pub grid_n: usize,
    pub grid_l: f64,
    pub sweep: SweepConfig,
    pub slope_tol: f64,
}

impl Default for E3Config {
    fn default() -> Self {
        Self {
            grid_n: 2048,
            grid_l: 160.0,
            sweep: SweepConfig { lambda_count: 11, ..SweepConfig::default() },
            slope_tol: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct E4Config {
    pub rectangles: usize,
    pub pairs: usize,
    pub spread_factor: f64,
    pub full_box_tol: f64,
}

impl Default for E4Config {
    fn default() -> Self {
        Self { rectangles: 20, pairs: 12, spread_factor: 10.0, full_box_tol: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct E5Config {
    pub pairs: usize,
    pub tol: f64,
}

impl Default for E5Config {
    fn default() -> Self {
        Self { pairs: 100, tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct E6Config {
    pub pairs: usize,
    pub tol: f64,
}

impl Default for E6Config {
    fn default() -> Self {
        Self { pairs: 100, tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct E7Config {
    pub pairs: usize,
    pub identity_tol: f64,
    pub young_tol: f64,
    /// Gaussian mollifier phi(u) = sqrt(beta/pi) e^{-beta u^2}.
    pub phi_beta: f64,
}

impl Default for E7Config {
    fn default() -> Self {
        Self { pairs: 20, identity_tol: 1e-8, young_tol: 1e-6, phi_beta: 8.0 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct E8Config {
    pub pairs: usize,
    pub s: f64,
    pub r: f64,
    pub delta: f64,
    pub factor_constant: f64,
    pub factor_coifman_meyer: f64,
}

impl Default for E8Config {
    fn default() -> Self {
        Self {
            pairs: 100,
            s: 1.5,
            r: 1.25,
            delta: 0.5,
            factor_constant: 3.0,
            factor_coifman_meyer: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct E9Config {
    pub pairs: usize,
    pub beta: f64,
    pub violating_beta: f64,
    pub s: f64,
    pub ratio_factor: f64,
    pub refine_factor: f64,
}

impl Default for E9Config {
    fn default() -> Self {
        Self {
            pairs: 50,
            beta: 0.1,
            violating_beta: 0.75,
            s: 1.5,
            ratio_factor: 10.0,
            refine_factor: 2.0,
        }
    }
}

impl HarnessConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: HarnessConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.e1.sweep.validate()?;
        self.e2.sweep.validate()?;
        self.e3.sweep.validate()?;
        if self.grid.n < 16 || !self.grid.n.is_power_of_two() || !(self.grid.l > 0.0) {
            return Err(Error::Config("grid.n must be a power of two >= 16, grid.l > 0".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        HarnessConfig::default().validate().unwrap();
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = "seed = 1\nsurprise = true\n";
        let r: std::result::Result<HarnessConfig, _> = toml::from_str(bad);
        assert!(r.is_err());
        let bad = "[e1]\nlambda_mix = 2.0\n";
        let r: std::result::Result<HarnessConfig, _> = toml::from_str(bad);
        assert!(r.is_err());
    }

    #[test]
    fn partial_override() {
        let text = "seed = 7\n[grid]\nn = 256\nl = 4.0\n[e5]\npairs = 10\n";
        let cfg: HarnessConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.grid.n, 256);
        assert_eq!(cfg.e5.pairs, 10);
        assert_eq!(cfg.e6.pairs, 100);
    }

    #[test]
    fn sweep_is_geometric() {
        let s = SweepConfig { lambda_min: 2.0, lambda_max: 64.0, lambda_count: 6 };
        let v = s.values();
        assert_eq!(v.len(), 6);
        assert!((v[0] - 2.0).abs() < 1e-12);
        assert!((v[5] - 64.0).abs() < 1e-10);
        for w in v.windows(2) {
            assert!((w[1] / w[0] - v[1] / v[0]).abs() < 1e-10);
        }
    }
}
