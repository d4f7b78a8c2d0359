//! Stackelberg equilibrium between governance (leader, sets `delta`) and
//! the vault (follower, sets `F`).
//!
//! Everything is driven by the shortfall ratio
//!
//! ```text
//! q(delta) = (e^(b - delta) - 1) / (e^b - 1)
//! ```
//!
//! which falls from 1 to 0 as `delta` runs over `(0, b)`. The vault's
//! unconstrained best response is
//! `phi(delta) = N exp(sigma Q(q) - delta - sigma^2/2)` with `Q` the normal
//! quantile, and governance's marginal revenue on the interior branch is
//! `phi(delta) * (1 - sigma (1 - q) / pdf(Q(q)))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{cdf, inv_cdf, pdf, FRAC_1_SQRT_2PI};
use crate::root::{brent, Tolerance};
use crate::valuation::{stablecoin_price, vault_objective, ModelParams, Position};

/// Clamp applied to the shortfall ratio before the quantile.
pub const RATIO_CLAMP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    /// Governance sits at the interior optimum `delta*`.
    Interior,
    /// `delta* <= delta_beta`: governance stops where the leverage cap
    /// stops binding, `delta = delta_beta`, `F = beta N`.
    LeverageBound,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Interior => "INTERIOR",
            Regime::LeverageBound => "LEVERAGE_BOUND",
        }
    }
}

/// Vault best response with the divergence at `delta <= 0` made explicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestResponse {
    pub issuance: f64,
    pub diverges: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub delta_beta: f64,
    pub delta_th: f64,
    pub delta_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssumptionCheck {
    pub holds: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssumptionReport {
    /// `2 pdf(0) - sigma`, strict.
    pub a1_volatility: AssumptionCheck,
    /// `((e^b + 1) / 2) e^(-b - sigma^2/2) - beta`, strict.
    pub a2_collateral_factor: AssumptionCheck,
    /// `V(delta*) - u`, non-strict.
    pub a3_participation: AssumptionCheck,
}

impl AssumptionReport {
    pub fn all_hold(&self) -> bool {
        self.a1_volatility.holds && self.a2_collateral_factor.holds && self.a3_participation.holds
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub delta: f64,
    pub issuance: f64,
    pub gov_value: f64,
    pub vault_value: f64,
    pub price: f64,
    pub regime: Regime,
    /// All three assumptions hold and `delta_th < delta_beta < delta* <= b`
    /// (interior), or participation holds at `delta_beta` (leverage bound).
    pub feasible: bool,
    /// Whether the vault's participation constraint holds at the chosen
    /// rate. When false the vault takes its outside option and `F = 0`.
    pub participates: bool,
    pub thresholds: Thresholds,
    pub assumptions: AssumptionReport,
}

/// `(q, 1 - q)` at `delta`, each computed without cancellation and clamped
/// to `[RATIO_CLAMP, 1 - RATIO_CLAMP]`.
fn shortfall_ratio(params: &ModelParams, delta: f64) -> (f64, f64) {
    let b = params.b();
    let growth = params.outside_gain();
    let q = (b - delta).exp_m1() / growth;
    let complement = (b - delta).exp() * delta.exp_m1() / growth;
    let hi = 1.0 - RATIO_CLAMP;
    (q.clamp(RATIO_CLAMP, hi), complement.clamp(RATIO_CLAMP, hi))
}

/// Normal quantile of `q`, taken from whichever tail is smaller.
fn ratio_quantile(q: f64, complement: f64) -> f64 {
    if q <= 0.5 {
        inv_cdf(q)
    } else {
        -inv_cdf(complement)
    }
}

/// `ln(phi(delta) / N)`; independent of `N`.
fn log_issuance_ratio(params: &ModelParams, delta: f64) -> f64 {
    let (q, c) = shortfall_ratio(params, delta);
    let s = params.sigma();
    s * ratio_quantile(q, c) - delta - 0.5 * s * s
}

/// `1 - sigma (1 - q) / pdf(Q(q))`; strictly decreasing in `delta`.
fn marginal_bracket(params: &ModelParams, delta: f64) -> f64 {
    let (q, c) = shortfall_ratio(params, delta);
    1.0 - params.sigma() * c / pdf(ratio_quantile(q, c))
}

fn edge(params: &ModelParams) -> f64 {
    1e-12 * params.b().max(1.0)
}

/// Unconstrained vault-optimal issuance. `0` for `delta >= b`, `+inf` for
/// `delta <= 0`.
pub fn phi(params: &ModelParams, delta: f64) -> f64 {
    best_response(params, delta).issuance
}

pub fn best_response(params: &ModelParams, delta: f64) -> BestResponse {
    if delta <= 0.0 {
        BestResponse {
            issuance: f64::INFINITY,
            diverges: true,
        }
    } else if delta >= params.b() {
        BestResponse {
            issuance: 0.0,
            diverges: false,
        }
    } else {
        BestResponse {
            issuance: params.n() * log_issuance_ratio(params, delta).exp(),
            diverges: false,
        }
    }
}

/// `d phi / d delta = -phi (1 + sigma / pdf(Q(q)) * e^(b-delta) / (e^b - 1))`.
pub fn phi_slope(params: &ModelParams, delta: f64) -> f64 {
    let (q, c) = shortfall_ratio(params, delta);
    let x = ratio_quantile(q, c);
    let b = params.b();
    let tilt = (b - delta).exp() / params.outside_gain();
    -phi(params, delta) * (1.0 + params.sigma() / pdf(x) * tilt)
}

/// Vault issuance with the leverage cap applied, `min(phi, beta N)`.
pub fn f_star(params: &ModelParams, delta: f64) -> f64 {
    phi(params, delta).min(params.max_issuance())
}

/// Rate at which the shortfall ratio is one half; governance revenue is
/// concave above it.
pub fn delta_th(params: &ModelParams) -> f64 {
    let b = params.b();
    b - (0.5 * b.exp_m1()).ln_1p()
}

/// Rate at which the shortfall ratio has normal quantile `x`; the inverse
/// of `delta -> Q(q(delta))`. Each branch avoids cancellation on its side.
fn delta_at_quantile(params: &ModelParams, x: f64) -> f64 {
    let b = params.b();
    let growth = params.outside_gain();
    if x <= 0.0 {
        b - (cdf(x) * growth).ln_1p()
    } else {
        -(-cdf(-x) * growth * (-b).exp()).ln_1p()
    }
}

/// Root of `phi(delta) = beta N` in `(0, b)`. Does not depend on `N`.
///
/// `delta_beta` approaches `b` so fast as `beta` falls that a search in
/// `delta` runs out of resolution, so the root is found in the quantile
/// `x = Q(q)`: `sigma x - delta(x) - sigma^2/2 = ln beta`. Since
/// `0 <= delta(x) <= b`, the root is bracketed in closed form; the bracket
/// is padded because `delta(x)` rounds to `b` deep in the lower tail.
pub fn delta_beta(params: &ModelParams) -> Result<f64> {
    const PAD: f64 = 1e-6;
    let s = params.sigma();
    let shift = params.beta().ln() + 0.5 * s * s;
    let residual = |x: f64| s * x - delta_at_quantile(params, x) - shift;
    let (lo, hi) = (shift / s - PAD, (shift + params.b()) / s + PAD);
    brent(residual, lo, hi, Tolerance::default())
        .map(|r| delta_at_quantile(params, r.x))
        .map_err(|source| Error::Numerical {
            target: "delta_beta",
            source,
        })
}

/// Governance marginal revenue `dG/d delta` on the interior branch
/// `F = phi(delta)`. On the capped branch the slope is `beta N e^delta`.
pub fn gov_marginal(params: &ModelParams, delta: f64) -> f64 {
    phi(params, delta) * marginal_bracket(params, delta)
}

/// `sigma (1 - q) / pdf(Q(q)) - 1`; zero exactly at `delta*`.
pub fn delta_upper_residual(params: &ModelParams, delta: f64) -> f64 {
    -marginal_bracket(params, delta)
}

/// `2 pdf(0) - sigma`.
pub fn volatility_margin(params: &ModelParams) -> f64 {
    2.0 * FRAC_1_SQRT_2PI - params.sigma()
}

/// Upper bound on `beta` that keeps `delta_th < delta_beta`.
pub fn collateral_factor_bound(params: &ModelParams) -> f64 {
    let b = params.b();
    let s = params.sigma();
    0.5 * (b.exp() + 1.0) * (-b - 0.5 * s * s).exp()
}

/// Interior governance optimum in `(delta_th, b)`.
pub fn delta_star(params: &ModelParams) -> Result<f64> {
    let margin = volatility_margin(params);
    if !(margin > 0.0) {
        return Err(Error::VolatilityTooHigh {
            sigma: params.sigma(),
            margin,
        });
    }
    let eps = edge(params);
    brent(
        |d| marginal_bracket(params, d),
        delta_th(params),
        params.b() - eps,
        Tolerance::default(),
    )
    .map(|r| r.x)
    .map_err(|source| Error::Numerical {
        target: "delta_star",
        source,
    })
}

/// Vault value at `(phi(delta), delta)`:
/// `N e^(sigma^2/2) + N Phi(-d1) (e^b - 1)` with `d1 = sigma - Q(q)`.
///
/// The first-order condition `Phi(-d2) = q` collapses the debt terms, so the
/// form holds for any `delta` in `(0, b)` evaluated on the best response.
pub fn vault_value_at_star(params: &ModelParams, delta_star: f64) -> f64 {
    let (q, c) = shortfall_ratio(params, delta_star);
    let d1 = params.sigma() - ratio_quantile(q, c);
    params.expected_collateral() + params.n() * cdf(-d1) * params.outside_gain()
}

pub fn check_assumptions(params: &ModelParams, delta_star: f64) -> AssumptionReport {
    let a1 = volatility_margin(params);
    let a2 = collateral_factor_bound(params) - params.beta();
    let a3 = vault_value_at_star(params, delta_star) - params.u();
    AssumptionReport {
        a1_volatility: AssumptionCheck {
            holds: a1 > 0.0,
            margin: a1,
        },
        a2_collateral_factor: AssumptionCheck {
            holds: a2 > 0.0,
            margin: a2,
        },
        a3_participation: AssumptionCheck {
            holds: a3 >= 0.0,
            margin: a3,
        },
    }
}

pub fn thresholds(params: &ModelParams) -> Result<Thresholds> {
    Ok(Thresholds {
        delta_beta: delta_beta(params)?,
        delta_th: delta_th(params),
        delta_star: delta_star(params)?,
    })
}

/// Governance-first equilibrium.
///
/// `delta* > delta_beta` gives the interior solution `(delta*, phi(delta*))`.
/// Otherwise revenue rises on the capped branch up to `delta_beta` and falls
/// after it, so governance picks `(delta_beta, beta N)`. If the vault's
/// participation constraint fails at the chosen rate it stays out (`F = 0`).
pub fn solve_equilibrium(params: &ModelParams) -> Result<Equilibrium> {
    let thresholds = thresholds(params)?;
    let Thresholds {
        delta_beta,
        delta_th,
        delta_star,
    } = thresholds;
    let assumptions = check_assumptions(params, delta_star);

    let (regime, delta, issuance, vault_value, participates, feasible) = if delta_star > delta_beta
    {
        let issuance = phi(params, delta_star);
        let ordered = delta_th < delta_beta && delta_beta < delta_star && delta_star <= params.b();
        let participates = assumptions.a3_participation.holds;
        (
            Regime::Interior,
            delta_star,
            issuance,
            vault_value_at_star(params, delta_star),
            participates,
            assumptions.all_hold() && ordered,
        )
    } else {
        let issuance = params.max_issuance();
        let v = vault_objective(params, &Position::new(issuance, delta_beta)?);
        let participates = v >= params.u();
        (
            Regime::LeverageBound,
            delta_beta,
            issuance,
            v,
            participates,
            participates,
        )
    };

    if !participates {
        return Ok(Equilibrium {
            delta,
            issuance: 0.0,
            gov_value: 0.0,
            vault_value: params.expected_collateral(),
            price: 1.0,
            regime,
            feasible: false,
            participates,
            thresholds,
            assumptions,
        });
    }

    let pos = Position::new(issuance, delta)?;
    Ok(Equilibrium {
        delta,
        issuance,
        gov_value: issuance * delta.exp_m1(),
        vault_value,
        price: stablecoin_price(params, &pos)?,
        regime,
        feasible,
        participates,
        thresholds,
        assumptions,
    })
}
