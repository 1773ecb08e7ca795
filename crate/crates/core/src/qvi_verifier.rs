//! Independent verification that a [`Solution`] satisfies the
//! quasi-variational inequalities.
//!
//! Three conditions characterize the value function of the impulse-control
//! problem:
//!
//! ```text
//! min_u [ L^u V(x) − rV(x) ] ≥ 0          (HJB inequality)
//! MV(x) := inf_{ξ>0} [K + cξ + V(x+ξ)] ≥ V(x)   (intervention inequality)
//! [MV(x) − V(x)] · min_u [L^u V − rV] = 0  (tightness)
//! ```
//!
//! together with `MV(0) = V(0)` at the boundary. For the exponential
//! solutions produced by the solver the HJB minimum is identically zero on
//! `x > 0`, so tightness reduces to that residual vanishing; a candidate
//! built from an inconsistent decay rate shows up as a strictly positive
//! HJB minimum coexisting with a strictly positive intervention gap.
//!
//! Derivatives of `V` are exact (exponential form); a central-difference
//! cross-check runs once per verification to guard against transcription
//! slips in the derivative formulas, and the inf-convolution is evaluated
//! both in closed form and by golden-section search, which must agree.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qvi_solver::Solution;
use crate::risk_model::ReinsuranceKind;
use crate::{lit, to_f64, Scalar};

/// Relative tolerance (scaled by `V(0)`) for all QVI checks.
const QVI_REL_TOL: f64 = 1e-7;
/// Agreement demanded between closed-form and golden-section inf-convolution.
const INF_CONV_CROSS_TOL: f64 = 1e-8;
/// Central-difference step and relative tolerance for the derivative guard.
const FD_STEP: f64 = 1e-5;
const FD_REL_TOL: f64 = 1e-4;

/// Inf-convolution value at one point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InfConvolution<T> {
    /// `MV(x) = inf_{ξ>0} [K + cξ + V(x+ξ)]`.
    pub value: T,
    /// Minimizing injection size, `0` when the infimum is a ξ→0⁺ limit.
    pub argmin: T,
    /// False when the infimum is not attained (`x ≥ ξ*`): the operator uses
    /// strict `ξ > 0`, so the value is a limit there, not a minimum.
    pub attained: bool,
}

/// One violated check, kept for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct ViolationRecord<T> {
    pub check: String,
    pub x: T,
    pub value: T,
}

/// Residuals of every QVI check over a surplus grid.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport<T> {
    /// Surplus levels tested (strictly positive; the boundary is handled
    /// separately).
    pub x_grid: Vec<T>,
    /// `min_u [L^u V − rV]` per grid point.
    pub hjb_residuals: Vec<T>,
    /// Minimizing retention per grid point.
    pub argmin_u: Vec<T>,
    /// `MV(x) − V(x)` per grid point.
    pub intervention_gaps: Vec<T>,
    /// `MV(0) − V(0)`.
    pub boundary_gap: T,
    /// Most negative slack across all checks; passes when it stays above
    /// `−tolerance`.
    pub worst_violation: T,
    /// Absolute tolerance used, `1e-7 · V(0)`.
    pub tolerance: T,
    /// Every check that failed (empty on a pass).
    pub violations: Vec<ViolationRecord<T>>,
}

impl<T: Scalar> ResidualReport<T> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Generator residual `½σ²(u)V''(x) + [μ(u) − δ]V'(x) − rV(x)` with exact
/// derivatives of the exponential value function.
pub fn generator_residual<T: Scalar>(sol: &Solution<T>, u: T, x: T) -> Result<T> {
    let half = lit::<T>(0.5);
    let s2 = sol.profile.variance_rate(u)?;
    let m = sol.profile.drift(u)?;
    let v = sol.value_at(x);
    let v1 = sol.value_derivative(x);
    let v2 = sol.value_second_derivative(x);
    Ok(half * s2 * v2 + (m - sol.params.delta) * v1 - sol.params.r * v)
}

/// Analytic minimizer of `u ↦ L^u V − rV` for the exponential `V`, clamped
/// to the control region.
fn analytic_minimizer<T: Scalar>(sol: &Solution<T>) -> T {
    let raw = match sol.kind() {
        ReinsuranceKind::Proportional => sol.params.mu / (sol.params.variance() * sol.decay),
        ReinsuranceKind::ExcessOfLoss => sol.decay.recip(),
    };
    raw.max(T::zero()).min(sol.profile.u_max())
}

/// Minimizes the generator residual over retentions at fixed `x`.
///
/// Scans a uniform `u`-grid, a refinement around the analytic minimizer, and
/// the analytic minimizer itself, returning the smallest residual and its
/// argmin.
pub fn hjb_min_residual<T: Scalar>(
    sol: &Solution<T>,
    x: T,
    u_grid_size: usize,
) -> Result<(T, T)> {
    if u_grid_size < 3 {
        return Err(Error::InvalidParameter {
            name: "u_grid_size",
            message: format!("need at least 3 grid points, got {u_grid_size}"),
        });
    }
    let u_anal = analytic_minimizer(sol);
    let u_max = sol.profile.u_max();
    // Unbounded control regions are scanned out to a few multiples of the
    // analytic minimizer; the residual is increasing beyond it.
    let cap = if u_max.is_finite() {
        u_max
    } else {
        lit::<T>(4.0) * (u_anal + sol.decay.recip()) + T::one()
    };
    let n = lit::<T>((u_grid_size - 1) as f64);
    let step = cap / n;
    let mut best = T::infinity();
    let mut best_u = T::zero();
    let mut consider = |u: T| -> Result<()> {
        let res = generator_residual(sol, u, x)?;
        if res < best {
            best = res;
            best_u = u;
        }
        Ok(())
    };
    for i in 0..u_grid_size {
        consider(step * lit::<T>(i as f64))?;
    }
    // Local refinement, one coarse step on each side of the analytic point.
    let refine = 10;
    for i in 0..=refine {
        let offset = step * (lit::<T>(2.0) * lit::<T>(i as f64 / refine as f64) - T::one());
        let u = (u_anal + offset).max(T::zero()).min(cap);
        consider(u)?;
    }
    consider(u_anal)?;
    Ok((best, best_u))
}

/// Evaluates `MV(x)` in closed form and cross-checks it by golden-section
/// search over the injection size.
///
/// Closed form: for `x < ξ*` the minimizer is `ξ* − x` and
/// `MV(x) = K + c(ξ* − x) + V(ξ*)`; for `x ≥ ξ*` the infimum is the ξ→0⁺
/// limit `K + V(x)` and is reported as not attained.
///
/// # Errors
/// [`Error::CrossCheckFailure`] if the two evaluations disagree beyond
/// `1e-8` relative.
pub fn inf_convolution<T: Scalar>(sol: &Solution<T>, x: T) -> Result<InfConvolution<T>> {
    if x < T::zero() {
        return Err(Error::InvalidParameter {
            name: "x",
            message: format!("inf-convolution needs x >= 0, got {}", to_f64(x)),
        });
    }
    let p = &sol.params;
    let closed = if x < sol.xi_star {
        let argmin = sol.xi_star - x;
        InfConvolution {
            value: p.k + p.c * argmin + sol.value_at(sol.xi_star),
            argmin,
            attained: true,
        }
    } else {
        InfConvolution {
            value: p.k + sol.value_at(x),
            argmin: T::zero(),
            attained: false,
        }
    };

    // Golden-section search; the objective ξ ↦ K + cξ + V(x+ξ) is strictly
    // convex, so boundary minima collapse onto the lower bracket end.
    let objective = |xi: T| p.k + p.c * xi + sol.value_at(x + xi);
    let golden = lit::<T>(0.618_033_988_749_894_9);
    let mut lo = lit::<T>(1e-12) * (T::one() + sol.xi_star);
    let mut hi = lit::<T>(2.0) * (sol.xi_star + sol.decay.recip());
    let width_tol = lit::<T>(1e-11) * (T::one() + hi);
    let mut x1 = hi - golden * (hi - lo);
    let mut x2 = lo + golden * (hi - lo);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    for _ in 0..200 {
        if hi - lo < width_tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = objective(x2);
        }
    }
    let numerical = objective(lo.max(x1.min(x2)).min(hi)).min(f1).min(f2);

    let tol = lit::<T>(INF_CONV_CROSS_TOL) * closed.value.abs().max(T::one());
    if (closed.value - numerical).abs() > tol {
        return Err(Error::CrossCheckFailure {
            x: to_f64(x),
            closed: to_f64(closed.value),
            numerical: to_f64(numerical),
        });
    }
    Ok(closed)
}

/// Central-difference guard on the exact derivative formulas, run once per
/// verification.
fn derivative_cross_check<T: Scalar>(sol: &Solution<T>) -> Result<()> {
    let x = sol.decay.recip().max(lit(1e-3));
    let h = lit::<T>(FD_STEP);
    let two = lit::<T>(2.0);
    let fd1 = (sol.value_at(x + h) - sol.value_at(x - h)) / (two * h);
    let fd2 = (sol.value_at(x + h) - two * sol.value_at(x) + sol.value_at(x - h)) / (h * h);
    let tol = lit::<T>(FD_REL_TOL);
    let d1 = sol.value_derivative(x);
    let d2 = sol.value_second_derivative(x);
    if (fd1 - d1).abs() > tol * d1.abs() || (fd2 - d2).abs() > tol * d2.abs() {
        return Err(Error::InternalInconsistency(format!(
            "derivative formulas disagree with finite differences at x = {}: V' {} vs {}, V'' {} vs {}",
            to_f64(x),
            to_f64(d1),
            to_f64(fd1),
            to_f64(d2),
            to_f64(fd2),
        )));
    }
    Ok(())
}

/// Evaluates every QVI check over `x_grid` and reports the residuals.
///
/// The grid must be non-empty, strictly increasing, and strictly positive;
/// the `x = 0` boundary condition is always checked in addition.
pub fn residual_report<T: Scalar>(
    sol: &Solution<T>,
    x_grid: &[T],
    u_grid_size: usize,
) -> Result<ResidualReport<T>> {
    if x_grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "x_grid",
            message: "grid must be non-empty".into(),
        });
    }
    for w in x_grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidParameter {
                name: "x_grid",
                message: "grid must be strictly increasing".into(),
            });
        }
    }
    if !(x_grid[0] > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "x_grid",
            message: "grid points must be strictly positive (x = 0 is checked separately)".into(),
        });
    }

    derivative_cross_check(sol)?;

    let tol = lit::<T>(QVI_REL_TOL) * sol.value_at(T::zero());
    let mut hjb_residuals = Vec::with_capacity(x_grid.len());
    let mut argmin_u = Vec::with_capacity(x_grid.len());
    let mut intervention_gaps = Vec::with_capacity(x_grid.len());
    let mut violations = Vec::new();
    let mut worst = T::infinity();

    for &x in x_grid {
        let (res, u_min) = hjb_min_residual(sol, x, u_grid_size)?;
        let mv = inf_convolution(sol, x)?;
        let gap = mv.value - sol.value_at(x);
        worst = worst.min(res).min(gap);
        if res < -tol {
            violations.push(ViolationRecord {
                check: "hjb_inequality".into(),
                x,
                value: res,
            });
        }
        if gap < -tol {
            violations.push(ViolationRecord {
                check: "intervention_inequality".into(),
                x,
                value: gap,
            });
        }
        // Tightness: at least one factor of [MV − V]·min_u[...] must vanish.
        if res > tol && gap > tol {
            let slack = -res.min(gap);
            worst = worst.min(slack);
            violations.push(ViolationRecord {
                check: "tightness".into(),
                x,
                value: res,
            });
        }
        hjb_residuals.push(res);
        argmin_u.push(u_min);
        intervention_gaps.push(gap);
    }

    let boundary = inf_convolution(sol, T::zero())?;
    let boundary_gap = boundary.value - sol.value_at(T::zero());
    worst = worst.min(-boundary_gap.abs());
    if boundary_gap.abs() > tol {
        violations.push(ViolationRecord {
            check: "boundary_tightness".into(),
            x: T::zero(),
            value: boundary_gap,
        });
    }

    Ok(ResidualReport {
        x_grid: x_grid.to_vec(),
        hjb_residuals,
        argmin_u,
        intervention_gaps,
        boundary_gap,
        worst_violation: worst,
        tolerance: tol,
        violations,
    })
}

/// Runs [`residual_report`] and turns any violation into an error carrying
/// the worst offender.
pub fn verify<T: Scalar>(
    sol: &Solution<T>,
    x_grid: &[T],
    u_grid_size: usize,
) -> Result<ResidualReport<T>> {
    let report = residual_report(sol, x_grid, u_grid_size)?;
    if let Some(worst) = report
        .violations
        .iter()
        .min_by(|a, b| a.value.partial_cmp(&b.value).expect("finite residuals"))
    {
        return Err(Error::QviViolation {
            check: worst.check.clone(),
            x: to_f64(worst.x),
            value: to_f64(worst.value),
            tolerance: to_f64(report.tolerance),
        });
    }
    Ok(report)
}
