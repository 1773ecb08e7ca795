//! Closed-form pricing of arbitrary constant policies, and brute-force grid
//! optimization over them — the independent optimality oracle.
//!
//! Under a constant policy `(u, ξ)` the surplus between injections is a
//! Brownian motion with drift `m = μ(u) − δ` and variance rate `s² = σ²(u)`.
//! The expected discount factor to first passage from `x` down to 0 is
//! `e^{−gx}` with
//!
//! ```text
//! g = [m + sqrt(m² + 2rs²)] / s²,
//! ```
//!
//! so the discounted renewal-reward sum of injections of size `ξ` costs
//!
//! ```text
//! C(x) = (K + cξ) e^{−gx} / (1 − e^{−gξ}).
//! ```
//!
//! For `u = 0` the surplus is deterministic (`s² = 0`, drift `−δ`), passage
//! takes exactly `x/δ`, and the same formula holds with `g = r/δ`; at
//! `x = 0` this reproduces the classical admissible-control upper bound on
//! `V(0)`.
//!
//! The oracle confines itself to constant policies: the verification theorem
//! shows constants are optimal, which makes exhaustive grid search a
//! legitimate independent check on the solver's `(u*, ξ*)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::risk_model::{DriftVolProfile, ModelParams};
use crate::{lit, to_f64, Scalar};

/// A constant policy: hold retention `u`, inject `ξ` at every ruin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicySpec<T> {
    /// Retention level in the control region.
    pub retention: T,
    /// Injection size, strictly positive (cost diverges as ξ → 0 because
    /// every cycle pays at least `K`).
    pub injection: T,
}

impl<T: Scalar> PolicySpec<T> {
    pub fn new(retention: T, injection: T) -> Self {
        Self {
            retention,
            injection,
        }
    }
}

/// Decay rate `g` of the expected discount factor `e^{−gx}` to first passage
/// from `x` down to 0, for a Brownian motion with drift `m` and variance
/// rate `s2`.
///
/// # Errors
/// [`Error::DegenerateDiffusion`] when `s2 ≤ 0`; the deterministic case is
/// priced separately by [`renewal_cost`].
pub fn passage_decay<T: Scalar>(m: T, s2: T, r: T) -> Result<T> {
    if !(s2 > T::zero()) {
        return Err(Error::DegenerateDiffusion { s2: to_f64(s2) });
    }
    if !(r > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "r",
            message: format!("must be > 0, got {}", to_f64(r)),
        });
    }
    let two = lit::<T>(2.0);
    Ok((m + (m * m + two * r * s2).sqrt()) / s2)
}

/// Expected total discounted injection cost of a constant policy started at
/// surplus `x ≥ 0`.
///
/// Always finite for `δ > 0`: even with favorable drift the passage decay
/// `g` stays positive, and the per-cycle discount `e^{−gξ} < 1`.
pub fn renewal_cost<T: Scalar>(
    params: &ModelParams<T>,
    profile: &DriftVolProfile<T>,
    policy: &PolicySpec<T>,
    x: T,
) -> Result<T> {
    params.validate()?;
    if !(policy.injection > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "xi",
            message: format!("injection must be > 0, got {}", to_f64(policy.injection)),
        });
    }
    if x < T::zero() {
        return Err(Error::InvalidParameter {
            name: "x",
            message: format!("initial surplus must be >= 0, got {}", to_f64(x)),
        });
    }
    let s2 = profile.variance_rate(policy.retention)?;
    let g = if s2 > T::zero() {
        let m = profile.drift(policy.retention)? - params.delta;
        passage_decay(m, s2, params.r)?
    } else {
        // Full reinsurance: deterministic decline at rate δ, passage time
        // x/δ, discount factor e^{−r x/δ}.
        params.r / params.delta
    };
    let per_call = params.k + params.c * policy.injection;
    let cycle = (-g * policy.injection).exp();
    Ok(per_call * (-g * x).exp() / (T::one() - cycle))
}

/// Exhaustively prices every `(u, ξ)` pair on the grids and returns the
/// cheapest policy, breaking ties toward smaller `u`, then smaller `ξ`.
///
/// Grid evaluation is embarrassingly parallel; the scan that applies the
/// tie-break runs after the reduction, in grid order, so the result does not
/// depend on thread count.
pub fn grid_optimize<T: Scalar>(
    params: &ModelParams<T>,
    profile: &DriftVolProfile<T>,
    u_grid: &[T],
    xi_grid: &[T],
    x: T,
) -> Result<(PolicySpec<T>, T)> {
    if u_grid.is_empty() || xi_grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "grid",
            message: "retention and injection grids must be non-empty".into(),
        });
    }
    let costs: Vec<T> = u_grid
        .par_iter()
        .flat_map_iter(|&u| {
            xi_grid.iter().map(move |&xi| (u, xi))
        })
        .map(|(u, xi)| renewal_cost(params, profile, &PolicySpec::new(u, xi), x))
        .collect::<Result<_>>()?;

    let mut best_idx = 0;
    for (idx, &cost) in costs.iter().enumerate() {
        if cost < costs[best_idx] {
            best_idx = idx;
        }
    }
    let (ui, xii) = (best_idx / xi_grid.len(), best_idx % xi_grid.len());
    Ok((PolicySpec::new(u_grid[ui], xi_grid[xii]), costs[best_idx]))
}
