//! Norm derivatives: the one-sided limits
//!
//!   rho_pm(x, y) = lim_{t -> 0pm} (||x + t y||^2 - ||x||^2) / (2t)
//!               = ||x|| * lim_{t -> 0pm} (||x + t y|| - ||x||) / t,
//!
//! their mean rho and product rho_star, a seedless numeric fallback that
//! evaluates the defining limit directly, and the semi-inner product of
//! smooth spaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::NormedSpace;
use crate::vector::{Tolerance, Vector};

/// Which one-sided limit: `Minus` is the left limit, `Plus` the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    NumericLimit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DerivativeResult {
    pub value: f64,
    pub method: Method,
    /// 0 for closed forms; the last successive-quotient gap for numeric limits.
    pub err_estimate: f64,
    pub converged: bool,
}

impl DerivativeResult {
    fn closed(value: f64) -> Self {
        DerivativeResult {
            value,
            method: Method::ClosedForm,
            err_estimate: 0.0,
            converged: true,
        }
    }
}

/// rho_+(x, y) = ||x|| d_+(x, y); zero when x = 0.
pub fn rho_plus(space: &NormedSpace, x: &Vector, y: &Vector) -> Result<DerivativeResult> {
    let nx = space.norm(x)?;
    if nx == 0.0 {
        space.check_dim(y)?;
        return Ok(DerivativeResult::closed(0.0));
    }
    Ok(DerivativeResult::closed(nx * space.dplus(x, y)?))
}

/// rho_-(x, y) = ||x|| d_-(x, y); zero when x = 0.
pub fn rho_minus(space: &NormedSpace, x: &Vector, y: &Vector) -> Result<DerivativeResult> {
    let nx = space.norm(x)?;
    if nx == 0.0 {
        space.check_dim(y)?;
        return Ok(DerivativeResult::closed(0.0));
    }
    Ok(DerivativeResult::closed(nx * space.dminus(x, y)?))
}

pub fn rho_side(space: &NormedSpace, x: &Vector, y: &Vector, branch: Branch) -> Result<f64> {
    match branch {
        Branch::Minus => Ok(rho_minus(space, x, y)?.value),
        Branch::Plus => Ok(rho_plus(space, x, y)?.value),
    }
}

/// rho(x, y) = (rho_-(x, y) + rho_+(x, y)) / 2.
pub fn rho(space: &NormedSpace, x: &Vector, y: &Vector) -> Result<f64> {
    Ok((rho_minus(space, x, y)?.value + rho_plus(space, x, y)?.value) / 2.0)
}

/// rho_star(x, y) = rho_-(x, y) * rho_+(x, y).
pub fn rho_star(space: &NormedSpace, x: &Vector, y: &Vector) -> Result<f64> {
    Ok(rho_minus(space, x, y)?.value * rho_plus(space, x, y)?.value)
}

// Stopping thresholds of the numeric quotient schedule. The successive-gap
// rule stops once |q_k - q_{k-1}| <= GAP_ABS + GAP_REL |q_k|; by convexity the
// remaining error is of the order of the last gap for a halving schedule.
const GAP_ABS: f64 = 2e-8;
const GAP_REL: f64 = 5e-7;

/// Evaluates the defining limit of rho_pm by one-sided difference quotients
/// q(t) = (||x + t y|| - ||x||) / t on the shrinking schedule
/// t = t0 * shrink^k, and returns ||x|| times the last quotient.
///
/// Convexity makes q monotone in t, so successive gaps bound the remaining
/// error. No exception is raised on slow convergence; `converged` is false
/// if the floor was reached with a gap above ten times the stop threshold.
pub fn numeric_one_sided(
    space: &NormedSpace,
    x: &Vector,
    y: &Vector,
    side: Branch,
    tol: &Tolerance,
) -> Result<DerivativeResult> {
    let nx = space.norm(x)?;
    let ny = space.norm(y)?;
    if nx == 0.0 || ny == 0.0 {
        return Ok(DerivativeResult {
            value: 0.0,
            method: Method::NumericLimit,
            err_estimate: 0.0,
            converged: true,
        });
    }
    let sign = match side {
        Branch::Minus => -1.0,
        Branch::Plus => 1.0,
    };
    let quotient = |t: f64| -> Result<f64> {
        let shifted = y.scaled_add(t, x);
        Ok((space.norm(&shifted)? - nx) / t)
    };

    let mut t = tol.limit_t0 * (nx + 1.0) / (ny + 1.0);
    let mut q_prev = quotient(sign * t)?;
    loop {
        t *= tol.limit_shrink;
        let q = quotient(sign * t)?;
        let gap = (q - q_prev).abs();
        let stop = GAP_ABS + GAP_REL * q.abs();
        if gap <= stop {
            return Ok(DerivativeResult {
                value: nx * q,
                method: Method::NumericLimit,
                err_estimate: nx * gap,
                converged: true,
            });
        }
        if t < tol.limit_floor {
            return Ok(DerivativeResult {
                value: nx * q,
                method: Method::NumericLimit,
                err_estimate: nx * gap,
                converged: gap <= 10.0 * stop,
            });
        }
        q_prev = q;
    }
}

/// The unique semi-inner product [y|x] of a smooth space, which equals
/// rho(x, y) there. Errors on families whose unit ball has corners, where
/// the semi-inner product is not unique.
pub fn sip_smooth(space: &NormedSpace, x: &Vector, y: &Vector) -> Result<f64> {
    if !space.is_smooth_family() {
        return Err(Error::SemiInnerProductNotUnique);
    }
    rho(space, x, y)
}
