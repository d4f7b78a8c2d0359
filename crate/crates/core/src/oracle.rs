//! Brute-force checks for the closed forms: Monte Carlo over the collateral
//! return and exhaustive grids over each agent's choice variable.
//!
//! Samples are drawn in fixed-size chunks. Chunk `k` uses a ChaCha8 stream
//! keyed by `(seed, k)` and the per-chunk moments are merged in chunk order,
//! so an estimate depends only on `(inputs, n, seed)`, never on the number
//! of worker threads.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::equilibrium::f_star;
use crate::error::{Error, Result};
use crate::math::inv_cdf;
use crate::valuation::{vault_objective, ModelParams, Position};

pub const MIN_SAMPLES: usize = 1000;
pub const MIN_GRID_POINTS: usize = 10_000;
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n)`.
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// Standard-error bands for comparing a closed form with an estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeBands {
    pub soft: f64,
    pub hard: f64,
}

impl Default for SeBands {
    fn default() -> Self {
        SeBands {
            soft: 3.0,
            hard: 5.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    Within,
    Soft,
    Hard,
}

impl McEstimate {
    /// `|exact - mean| / std_error`. A zero-variance estimate is compared
    /// against a relative floor of `1e-12`.
    pub fn z_score(&self, exact: f64) -> f64 {
        let diff = (exact - self.mean).abs();
        if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff <= 1e-12 * exact.abs().max(self.mean.abs()).max(1.0) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn agreement(&self, exact: f64, bands: SeBands) -> Agreement {
        let z = self.z_score(exact);
        if z <= bands.soft {
            Agreement::Within
        } else if z < bands.hard {
            Agreement::Soft
        } else {
            Agreement::Hard
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridResult {
    pub arg_best: f64,
    pub best_value: f64,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub n_points: usize,
    /// Distance from `arg_best` to its upper neighbour (the wider side).
    pub step: f64,
}

#[derive(Clone, Copy)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    const EMPTY: Moments = Moments {
        n: 0.0,
        mean: 0.0,
        m2: 0.0,
    };

    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if other.n == 0.0 {
            return self;
        }
        if self.n == 0.0 {
            return other;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * other.n / n,
            m2: self.m2 + other.m2 + d * d * self.n * other.n / n,
        }
    }
}

/// Uniform on the open interval (0, 1) from the top 53 bits.
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Mean of `payoff(R)` for `R ~ N(0, sigma^2)`.
fn simulate<P>(sigma: f64, n: usize, seed: u64, payoff: P) -> Result<McEstimate>
where
    P: Fn(f64) -> f64 + Sync,
{
    if n < MIN_SAMPLES {
        return Err(Error::domain("n_samples", n as f64, "n_samples >= 1000"));
    }
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let len = CHUNK.min(n - k * CHUNK);
            let mut m = Moments::EMPTY;
            for _ in 0..len {
                m.push(payoff(sigma * inv_cdf(open_unit(&mut rng))));
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::EMPTY, Moments::merge);
    let var = total.m2 / (total.n - 1.0);
    Ok(McEstimate {
        mean: total.mean,
        std_error: (var / total.n).sqrt(),
        n_samples: n,
        seed,
    })
}

/// Estimates `E[(F e^delta - N e^R)+]`.
pub fn mc_shortfall(
    params: &ModelParams,
    pos: &Position,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    let strike = pos.strike();
    let nn = params.n();
    simulate(params.sigma(), n, seed, |r| {
        (strike - nn * r.exp()).max(0.0)
    })
}

/// Estimates `E[min(1, N e^R / F - (e^delta - 1))]`.
pub fn mc_price(params: &ModelParams, pos: &Position, n: usize, seed: u64) -> Result<McEstimate> {
    let f = pos.f();
    if !(f > 0.0) {
        return Err(Error::domain("F", f, "F > 0"));
    }
    let fee = pos.delta().exp_m1();
    let nn = params.n();
    simulate(params.sigma(), n, seed, |r| {
        (nn * r.exp() / f - fee).min(1.0)
    })
}

/// Estimates the vault objective `E[N e^R + F (B (e^b - 1) - (e^delta - 1))]`
/// with the per-sample payout in place of `B`. Uses the same draws as
/// [`mc_price`] for a given seed.
pub fn mc_vault_objective(
    params: &ModelParams,
    pos: &Position,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    let f = pos.f();
    let fee = pos.delta().exp_m1();
    let gain = params.outside_gain();
    let nn = params.n();
    simulate(params.sigma(), n, seed, |r| {
        let collateral = nn * r.exp();
        // F * min(1, collateral / F - fee), written to stay finite at F = 0.
        let paid = f.min(collateral - f * fee);
        collateral + paid * gain - f * fee
    })
}

fn argmax<I>(points: I) -> (f64, f64, usize)
where
    I: Iterator<Item = (f64, f64)>,
{
    let mut best = (f64::NAN, f64::NEG_INFINITY, 0);
    for (i, (x, v)) in points.enumerate() {
        if v > best.1 {
            best = (x, v, i);
        }
    }
    best
}

fn check_points(n_points: usize) -> Result<()> {
    if n_points < MIN_GRID_POINTS {
        Err(Error::domain(
            "n_points",
            n_points as f64,
            "n_points >= 10000",
        ))
    } else {
        Ok(())
    }
}

/// Maximizes the vault objective over a log-spaced `F` grid on
/// `[1e-4 N, 10 N]`.
pub fn grid_vault_best_f(params: &ModelParams, delta: f64, n_points: usize) -> Result<GridResult> {
    check_points(n_points)?;
    if !(delta > 0.0 && delta < params.b()) {
        return Err(Error::domain("delta", delta, "0 < delta < b"));
    }
    let (lo, hi) = (1e-4 * params.n(), 10.0 * params.n());
    let ln_ratio = (hi / lo).ln() / (n_points - 1) as f64;
    let at = |i: usize| {
        if i + 1 == n_points {
            hi
        } else {
            lo * (ln_ratio * i as f64).exp()
        }
    };
    let (arg_best, best_value, idx) = argmax((0..n_points).map(|i| {
        let f = at(i);
        (f, vault_objective(params, &Position::from_parts(f, delta)))
    }));
    let step = if idx + 1 < n_points {
        at(idx + 1) - arg_best
    } else {
        arg_best - at(idx - 1)
    };
    Ok(GridResult {
        arg_best,
        best_value,
        grid_lo: lo,
        grid_hi: hi,
        n_points,
        step,
    })
}

/// Maximizes governance revenue `f_star(delta) (e^delta - 1)` over a uniform
/// grid on `[1e-9, b]`.
pub fn grid_gov_best_delta(params: &ModelParams, n_points: usize) -> Result<GridResult> {
    check_points(n_points)?;
    let (lo, hi) = (1e-9, params.b());
    if !(hi > lo) {
        return Err(Error::domain("b", hi, "b > 1e-9 for the rate grid"));
    }
    let step = (hi - lo) / (n_points - 1) as f64;
    let (arg_best, best_value, _) = argmax((0..n_points).map(|i| {
        let d = if i + 1 == n_points {
            hi
        } else {
            lo + step * i as f64
        };
        (d, f_star(params, d) * d.exp_m1())
    }));
    Ok(GridResult {
        arg_best,
        best_value,
        grid_lo: lo,
        grid_hi: hi,
        n_points,
        step,
    })
}
