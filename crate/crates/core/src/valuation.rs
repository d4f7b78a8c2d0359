//! Closed-form valuation of the positions in the stablecoin capital
//! structure over a unit horizon.
//!
//! The stablecoin holder is short a put on the collateral struck at the
//! debt with interest, `F e^delta`. Its value is
//!
//! ```text
//! P(F, delta) = F e^delta N(-d2) - N N(-d1)
//! d1 = (ln(N / (F e^delta)) + sigma^2 / 2) / sigma,   d2 = d1 - sigma
//! ```
//!
//! and the vault and governance objectives are linear in `P`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::cdf;

/// Model primitives: collateral value, volatility, outside return rate,
/// collateral factor and the vault's outside-option utility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModelParams", into = "RawModelParams")]
pub struct ModelParams {
    n: f64,
    sigma: f64,
    b: f64,
    beta: f64,
    u: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModelParams {
    #[serde(rename = "N")]
    n: f64,
    sigma: f64,
    b: f64,
    beta: f64,
    u: f64,
}

impl ModelParams {
    pub fn new(n: f64, sigma: f64, b: f64, beta: f64, u: f64) -> Result<Self> {
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::domain("N", n, "0 < N < inf"));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain("sigma", sigma, "0 < sigma < inf"));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::domain("b", b, "0 < b < inf"));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::domain("beta", beta, "0 < beta <= 1"));
        }
        if !(u >= 0.0 && u.is_finite()) {
            return Err(Error::domain("u", u, "0 <= u < inf"));
        }
        Ok(ModelParams {
            n,
            sigma,
            b,
            beta,
            u,
        })
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    /// Same model with the collateral and outside utility scaled by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        ModelParams::new(self.n * k, self.sigma, self.b, self.beta, self.u * k)
    }

    /// `E[N e^R] = N e^(sigma^2 / 2)`.
    pub fn expected_collateral(&self) -> f64 {
        self.n * (0.5 * self.sigma * self.sigma).exp()
    }

    /// Leverage cap `beta N`.
    pub fn max_issuance(&self) -> f64 {
        self.beta * self.n
    }

    /// `e^b - 1`.
    pub(crate) fn outside_gain(&self) -> f64 {
        self.b.exp_m1()
    }
}

impl TryFrom<RawModelParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawModelParams) -> Result<Self> {
        ModelParams::new(raw.n, raw.sigma, raw.b, raw.beta, raw.u)
    }
}

impl From<ModelParams> for RawModelParams {
    fn from(p: ModelParams) -> Self {
        RawModelParams {
            n: p.n,
            sigma: p.sigma,
            b: p.b,
            beta: p.beta,
            u: p.u,
        }
    }
}

/// Stablecoin issuance `F` and the interest rate `delta` the vault pays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    f: f64,
    delta: f64,
}

impl Position {
    pub fn new(f: f64, delta: f64) -> Result<Self> {
        if !(f >= 0.0 && f.is_finite()) {
            return Err(Error::domain("F", f, "0 <= F < inf"));
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::domain("delta", delta, "0 <= delta < inf"));
        }
        Ok(Position { f, delta })
    }

    /// For callers that already hold validated inputs.
    pub(crate) fn from_parts(f: f64, delta: f64) -> Self {
        debug_assert!(f >= 0.0 && delta >= 0.0);
        Position { f, delta }
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Debt owed at the horizon, `F e^delta`.
    pub fn strike(&self) -> f64 {
        self.f * self.delta.exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValuationTerms {
    pub d1: f64,
    pub d2: f64,
    /// Expected collateral shortfall `P(F, delta)`.
    pub put_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PutSensitivities {
    pub dp_df: f64,
    pub dp_ddelta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VaultGradients {
    pub dv_df: f64,
    pub dv_ddelta: f64,
}

/// Shortfall put `P(F, delta)` with its `d1`, `d2`.
///
/// `F = 0` is the zero-debt limit: `d1 = d2 = +inf`, `P = 0`. The moneyness
/// is formed in log space so extreme ratios saturate the normal terms at 0
/// or 1 instead of overflowing.
pub fn shortfall_put(params: &ModelParams, pos: &Position) -> ValuationTerms {
    if pos.f == 0.0 {
        return ValuationTerms {
            d1: f64::INFINITY,
            d2: f64::INFINITY,
            put_value: 0.0,
        };
    }
    let sigma = params.sigma;
    let log_moneyness = params.n.ln() - pos.f.ln() - pos.delta;
    let d1 = (log_moneyness + 0.5 * sigma * sigma) / sigma;
    let d2 = d1 - sigma;
    let strike = pos.strike();
    let put = strike * cdf(-d2) - params.n * cdf(-d1);
    ValuationTerms {
        d1,
        d2,
        put_value: put.clamp(0.0, strike),
    }
}

/// Stablecoin price `B = 1 - P / F`. Lies in `(0, 1]` whenever `P < F`.
pub fn stablecoin_price(params: &ModelParams, pos: &Position) -> Result<f64> {
    if pos.f <= 0.0 {
        return Err(Error::domain("F", pos.f, "F > 0 for a stablecoin price"));
    }
    Ok(1.0 - shortfall_put(params, pos).put_value / pos.f)
}

pub fn put_sensitivities(params: &ModelParams, pos: &Position) -> PutSensitivities {
    let terms = shortfall_put(params, pos);
    let dp_df = pos.delta.exp() * cdf(-terms.d2);
    PutSensitivities {
        dp_df,
        dp_ddelta: pos.f * dp_df,
    }
}

/// Vault objective `N e^(sigma^2/2) + F (e^b - e^delta) - P (e^b - 1)`.
pub fn vault_objective(params: &ModelParams, pos: &Position) -> f64 {
    let put = shortfall_put(params, pos).put_value;
    params.expected_collateral() + pos.f * (params.b.exp() - pos.delta.exp())
        - put * params.outside_gain()
}

pub fn vault_gradients(params: &ModelParams, pos: &Position) -> VaultGradients {
    let terms = shortfall_put(params, pos);
    let growth = params.outside_gain();
    let carry = pos.delta.exp();
    let shortfall_prob = cdf(-terms.d2);
    VaultGradients {
        dv_df: (params.b.exp() - carry) - growth * carry * shortfall_prob,
        dv_ddelta: -pos.f * carry * (1.0 + growth * shortfall_prob),
    }
}

/// Governance fee revenue `F (e^delta - 1)`.
pub fn gov_objective(pos: &Position) -> f64 {
    pos.f * pos.delta.exp_m1()
}
