use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hessian::{HessianOptions, DEFAULT_STEP_FACTOR, DEFAULT_TOL_REL};
use crate::matroid::DEFAULT_EPS_RANK;
use crate::saddle::DEFAULT_BUDGET;
use crate::surface::Tolerances;

pub const BUDGET_ENV: &str = "FLATSTRATA_BUDGET";
pub const MIN_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Tolerances, budgets and sampling seed for one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub eps_geom: f64,
    pub eps_angle: f64,
    pub eps_rank: f64,
    pub tol_eig: f64,
    pub budget: usize,
    /// FD step as a fraction of the systole.
    pub fd_step_factor: f64,
    /// Absolute FD step; overrides `fd_step_factor`.
    pub fd_step: Option<f64>,
    /// Unset means each command's own default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let t = Tolerances::default();
        RunConfig {
            eps_geom: t.geom,
            eps_angle: t.angle,
            eps_rank: DEFAULT_EPS_RANK,
            tol_eig: DEFAULT_TOL_REL,
            budget: DEFAULT_BUDGET,
            fd_step_factor: DEFAULT_STEP_FACTOR,
            fd_step: None,
            format: None,
            seed: 0x5eed,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("eps_geom", self.eps_geom),
            ("eps_angle", self.eps_angle),
            ("eps_rank", self.eps_rank),
            ("tol_eig", self.tol_eig),
            ("fd_step_factor", self.fd_step_factor),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(h) = self.fd_step {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::InvalidConfig(format!("fd_step must be positive, got {h}")));
            }
        }
        if self.budget < MIN_BUDGET {
            return Err(Error::InvalidConfig(format!(
                "budget must be at least {MIN_BUDGET}, got {}",
                self.budget
            )));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: RunConfig = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Applies `FLATSTRATA_BUDGET` when set.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var(BUDGET_ENV) {
            self.budget = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("{BUDGET_ENV}={v} is not an integer")))?;
            self.validate()?;
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            geom: self.eps_geom,
            angle: self.eps_angle,
        }
    }

    pub fn hessian_options(&self) -> HessianOptions {
        HessianOptions {
            step: self.fd_step,
            step_factor: self.fd_step_factor,
            tol_rel: self.tol_eig,
            richardson: true,
            budget: self.budget,
            eps_rank: self.eps_rank,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let mut c = RunConfig::default();
        c.fd_step = Some(1e-4);
        c.format = Some(OutputFormat::Csv);
        let back = RunConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert_eq!(RunConfig::from_toml(&RunConfig::default().to_toml()).unwrap(), RunConfig::default());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(RunConfig::from_toml("budget = 10"), Err(Error::InvalidConfig(_))));
        assert!(matches!(RunConfig::from_toml("eps_rank = -1.0"), Err(Error::InvalidConfig(_))));
        assert!(matches!(RunConfig::from_toml("bogus = 1"), Err(Error::InvalidConfig(_))));
        assert_eq!(RunConfig::from_toml("seed = 7").unwrap().seed, 7);
    }
}
