//! JSON run configuration.
//!
//! ```json
//! {
//!   "model":  {"N": 100, "sigma": 0.5, "b": 0.1, "beta": 0.75, "u": 0},
//!   "attack": {"zeta": 0.4, "gamma": 0.5, "alpha": 3, "r": 0.95},
//!   "oracle": {"n_samples": 1000000, "seed": 2024, "n_grid_points": 1000000},
//!   "sweep":  {"axis": "alpha", "lo": 0, "hi": 40, "steps": 9}
//! }
//! ```
//!
//! Only `model` is required. Rates are decimals and amounts plain reals.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use stablegov_core::oracle::{MIN_GRID_POINTS, MIN_SAMPLES};
use stablegov_core::{AttackParams, ModelParams};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attack: Option<AttackParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub n_samples: usize,
    pub seed: u64,
    pub n_grid_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "N")]
    N,
    #[serde(rename = "sigma")]
    Sigma,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "u")]
    U,
    #[serde(rename = "zeta")]
    Zeta,
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "r")]
    R,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 9] = [
        SweepAxis::N,
        SweepAxis::Sigma,
        SweepAxis::B,
        SweepAxis::Beta,
        SweepAxis::U,
        SweepAxis::Zeta,
        SweepAxis::Gamma,
        SweepAxis::Alpha,
        SweepAxis::R,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::N => "N",
            SweepAxis::Sigma => "sigma",
            SweepAxis::B => "b",
            SweepAxis::Beta => "beta",
            SweepAxis::U => "u",
            SweepAxis::Zeta => "zeta",
            SweepAxis::Gamma => "gamma",
            SweepAxis::Alpha => "alpha",
            SweepAxis::R => "r",
        }
    }

    pub fn is_attack(self) -> bool {
        matches!(
            self,
            SweepAxis::Zeta | SweepAxis::Gamma | SweepAxis::Alpha | SweepAxis::R
        )
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl SweepConfig {
    /// Inclusive, evenly spaced, ascending.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * (i as f64 / last)
                }
            })
            .collect()
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            context: format!("reading {}", path.display()),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks the cross-field invariants serde cannot express.
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(o) = &self.oracle {
            if o.n_samples < MIN_SAMPLES {
                return Err(CliError::Config(format!(
                    "oracle.n_samples = {} is below the minimum {MIN_SAMPLES}",
                    o.n_samples
                )));
            }
            if o.n_grid_points < MIN_GRID_POINTS {
                return Err(CliError::Config(format!(
                    "oracle.n_grid_points = {} is below the minimum {MIN_GRID_POINTS}",
                    o.n_grid_points
                )));
            }
        }
        if let Some(s) = &self.sweep {
            if !(s.lo.is_finite() && s.hi.is_finite() && s.lo < s.hi) {
                return Err(CliError::Config(format!(
                    "sweep needs finite lo < hi, got lo = {}, hi = {}",
                    s.lo, s.hi
                )));
            }
            if s.steps < 2 {
                return Err(CliError::Config(format!(
                    "sweep.steps = {} must be at least 2",
                    s.steps
                )));
            }
        }
        Ok(())
    }
}
