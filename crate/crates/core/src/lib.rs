//! Valuation, equilibrium and governance-attack analysis for a
//! non-custodial stablecoin backed by a single volatile collateral pool.
//!
//! A vault locks collateral worth `N` with log-return `R ~ N(0, sigma^2)`
//! and issues `F` stablecoins; governance sets the interest rate `delta`.
//! [`valuation`] prices the positions in closed form, [`equilibrium`]
//! solves the governance-first game, [`attack`] checks whether the fee
//! stream deters a governance takeover, and [`oracle`] re-derives the
//! closed forms by simulation and brute-force search.

// `!(x > 0.0)` is how preconditions reject NaN along with the real violations.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference values in tests keep every digit the oracle produced.
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod attack;
pub mod equilibrium;
pub mod error;
pub mod math;
pub mod oracle;
pub mod root;
pub mod valuation;

pub use attack::{AttackAxis, AttackParams, SecurityReport};
pub use equilibrium::{solve_equilibrium, Equilibrium, Regime};
pub use error::{Error, Result};
pub use valuation::{ModelParams, Position};
