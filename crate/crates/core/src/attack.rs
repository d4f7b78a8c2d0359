//! Governance-attack incentive security.
//!
//! An adversary holding a `zeta` share of governance tokens can seize a
//! `gamma` share of the collateral at an outside cost `alpha`, giving up
//! its share of the fee stream. The system is secure when
//!
//! ```text
//! alpha + zeta * G_perp >= gamma * N * e^(sigma^2/2),
//! G_perp = F (e^delta - 1) / (1 - r).
//! ```
//!
//! The margin is affine in `alpha`, `gamma` and `zeta`, so each boundary
//! has a closed form.

use serde::{Deserialize, Serialize};

use crate::equilibrium::Equilibrium;
use crate::error::{Error, Result};
use crate::valuation::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAttackParams", into = "RawAttackParams")]
pub struct AttackParams {
    zeta: f64,
    gamma: f64,
    alpha: f64,
    r: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAttackParams {
    zeta: f64,
    gamma: f64,
    alpha: f64,
    r: f64,
}

impl AttackParams {
    pub fn new(zeta: f64, gamma: f64, alpha: f64, r: f64) -> Result<Self> {
        if !(zeta > 0.0 && zeta <= 1.0) {
            return Err(Error::domain("zeta", zeta, "0 < zeta <= 1"));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::domain("gamma", gamma, "0 <= gamma <= 1"));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::domain("alpha", alpha, "finite alpha >= 0"));
        }
        check_discount(r)?;
        Ok(AttackParams {
            zeta,
            gamma,
            alpha,
            r,
        })
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Copy with one coordinate replaced, revalidated.
    pub fn with(&self, axis: AttackAxis, value: f64) -> Result<Self> {
        let AttackParams {
            zeta,
            gamma,
            alpha,
            r,
        } = *self;
        match axis {
            AttackAxis::Alpha => AttackParams::new(zeta, gamma, value, r),
            AttackAxis::Gamma => AttackParams::new(zeta, value, alpha, r),
            AttackAxis::Zeta => AttackParams::new(value, gamma, alpha, r),
            AttackAxis::R => AttackParams::new(zeta, gamma, alpha, value),
        }
    }
}

impl TryFrom<RawAttackParams> for AttackParams {
    type Error = Error;

    fn try_from(raw: RawAttackParams) -> Result<Self> {
        AttackParams::new(raw.zeta, raw.gamma, raw.alpha, raw.r)
    }
}

impl From<AttackParams> for RawAttackParams {
    fn from(p: AttackParams) -> Self {
        RawAttackParams {
            zeta: p.zeta,
            gamma: p.gamma,
            alpha: p.alpha,
            r: p.r,
        }
    }
}

fn check_discount(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::domain("r", r, "0 <= r < 1"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackAxis {
    Alpha,
    Gamma,
    Zeta,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecurityReport {
    pub gov_perpetuity: f64,
    pub attack_payoff: f64,
    pub defense_value: f64,
    pub margin: f64,
    pub secure: bool,
    /// Perpetuity needed to deter the attack, `(attack_payoff - alpha) / zeta`.
    pub required_perpetuity: f64,
    pub min_alpha: f64,
    pub max_gamma: f64,
    /// Smallest deterring stake, clamped to `[0, 1]`.
    pub min_zeta: f64,
    /// False when deterrence needs `zeta > 1`.
    pub min_zeta_attainable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierPoint {
    pub value: f64,
    pub margin: f64,
    pub secure: bool,
}

/// Inclusive linear grid of `steps` points on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleGrid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl SampleGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        if self.steps == 0 {
            return Err(Error::domain("steps", 0.0, "steps >= 1"));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi) {
            return Err(Error::domain("hi", self.hi, "finite lo <= hi"));
        }
        if self.steps == 1 {
            return Ok(vec![self.lo]);
        }
        let width = self.hi - self.lo;
        let last = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + width * (i as f64 / last)
                }
            })
            .collect())
    }
}

fn require_fee_stream(eq: &Equilibrium) -> Result<()> {
    if eq.feasible {
        Ok(())
    } else {
        Err(Error::Infeasible {
            reason: "no fee stream without a feasible equilibrium".into(),
        })
    }
}

/// Discounted fee revenue `F (e^delta - 1) / (1 - r)`.
pub fn gov_perpetuity(eq: &Equilibrium, r: f64) -> Result<f64> {
    check_discount(r)?;
    require_fee_stream(eq)?;
    Ok(eq.gov_value / (1.0 - r))
}

pub fn security_report(
    params: &ModelParams,
    attack: &AttackParams,
    eq: &Equilibrium,
) -> Result<SecurityReport> {
    let perp = gov_perpetuity(eq, attack.r)?;
    let collateral = params.expected_collateral();
    let attack_payoff = attack.gamma * collateral;
    let defense_value = attack.alpha + attack.zeta * perp;
    let margin = defense_value - attack_payoff;

    let zeta_needed = (attack_payoff - attack.alpha) / perp;
    Ok(SecurityReport {
        gov_perpetuity: perp,
        attack_payoff,
        defense_value,
        margin,
        secure: margin >= 0.0,
        required_perpetuity: (attack_payoff - attack.alpha) / attack.zeta,
        min_alpha: (attack_payoff - attack.zeta * perp).max(0.0),
        max_gamma: (defense_value / collateral).min(1.0),
        min_zeta: zeta_needed.clamp(0.0, 1.0),
        min_zeta_attainable: zeta_needed <= 1.0,
    })
}

/// Margin along one attack coordinate, the others held at `attack`.
pub fn security_frontier(
    params: &ModelParams,
    attack: &AttackParams,
    eq: &Equilibrium,
    axis: AttackAxis,
    grid: &SampleGrid,
) -> Result<Vec<FrontierPoint>> {
    require_fee_stream(eq)?;
    grid.points()?
        .into_iter()
        .map(|value| {
            let report = security_report(params, &attack.with(axis, value)?, eq)?;
            Ok(FrontierPoint {
                value,
                margin: report.margin,
                secure: report.secure,
            })
        })
        .collect()
}
