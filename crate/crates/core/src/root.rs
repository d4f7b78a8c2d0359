//! Bracketed scalar root finding.
//!
//! Brent's method: bisection safeguarding secant and inverse quadratic
//! interpolation steps. The bracket always keeps a sign change, so the
//! method converges whenever the initial bracket does.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Absolute tolerance on the abscissa.
    pub x_abs: f64,
    pub max_iter: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            x_abs: 1e-12,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// Function value at `x`.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("no convergence after {iterations} iterations; best x = {x}, f(x) = {residual}, bracket width {width}")]
    MaxIterations {
        iterations: usize,
        x: f64,
        residual: f64,
        width: f64,
    },

    #[error("objective is NaN at x = {x}")]
    NotANumber { x: f64 },
}

const REL_TOL: f64 = 4.0 * f64::EPSILON;

pub fn brent<F>(mut f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<Root, RootError>
where
    F: FnMut(f64) -> f64,
{
    let eval = |f: &mut F, x: f64| {
        let y = f(x);
        if y.is_nan() {
            Err(RootError::NotANumber { x })
        } else {
            Ok(y)
        }
    };

    let (mut x_pre, mut x_cur) = (lo, hi);
    let mut f_pre = eval(&mut f, x_pre)?;
    let mut f_cur = eval(&mut f, x_cur)?;

    if f_pre == 0.0 {
        return Ok(Root {
            x: x_pre,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_cur == 0.0 {
        return Ok(Root {
            x: x_cur,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_pre.signum() == f_cur.signum() {
        return Err(RootError::NoBracket {
            lo,
            hi,
            f_lo: f_pre,
            f_hi: f_cur,
        });
    }

    // `x_blk` is the contrapoint: f(x_blk) and f(x_cur) have opposite signs.
    let (mut x_blk, mut f_blk) = (0.0, 0.0);
    let (mut s_pre, mut s_cur) = (0.0, 0.0);

    for iter in 0..tol.max_iter {
        if f_pre != 0.0 && f_cur != 0.0 && f_pre.signum() != f_cur.signum() {
            x_blk = x_pre;
            f_blk = f_pre;
            s_pre = x_cur - x_pre;
            s_cur = s_pre;
        }
        if f_blk.abs() < f_cur.abs() {
            x_pre = x_cur;
            x_cur = x_blk;
            x_blk = x_pre;
            f_pre = f_cur;
            f_cur = f_blk;
            f_blk = f_pre;
        }

        let delta = 0.5 * (tol.x_abs + REL_TOL * x_cur.abs());
        let s_bis = 0.5 * (x_blk - x_cur);
        if f_cur == 0.0 || s_bis.abs() < delta {
            return Ok(Root {
                x: x_cur,
                residual: f_cur,
                iterations: iter,
            });
        }

        if s_pre.abs() > delta && f_cur.abs() < f_pre.abs() {
            let s_try = if x_pre == x_blk {
                // secant
                -f_cur * (x_cur - x_pre) / (f_cur - f_pre)
            } else {
                // inverse quadratic interpolation
                let d_pre = (f_pre - f_cur) / (x_pre - x_cur);
                let d_blk = (f_blk - f_cur) / (x_blk - x_cur);
                -f_cur * (f_blk * d_blk - f_pre * d_pre) / (d_blk * d_pre * (f_blk - f_pre))
            };
            if 2.0 * s_try.abs() < s_pre.abs().min(3.0 * s_bis.abs() - delta) {
                s_pre = s_cur;
                s_cur = s_try;
            } else {
                s_pre = s_bis;
                s_cur = s_bis;
            }
        } else {
            s_pre = s_bis;
            s_cur = s_bis;
        }

        x_pre = x_cur;
        f_pre = f_cur;
        if s_cur.abs() > delta {
            x_cur += s_cur;
        } else {
            x_cur += delta.copysign(s_bis);
        }
        f_cur = eval(&mut f, x_cur)?;
    }

    Err(RootError::MaxIterations {
        iterations: tol.max_iter,
        x: x_cur,
        residual: f_cur,
        width: (x_blk - x_cur).abs(),
    })
}
