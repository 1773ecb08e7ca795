//! Closed-form solution of the quasi-variational inequalities.
//!
//! On `(0, ∞)` the value function solves
//!
//! ```text
//! min_u [ ½σ²(u) V''(x) + (μ(u) − δ) V'(x) − r V(x) ] = 0,
//! V(∞) = 0,   MV(0) = V(0),
//! ```
//!
//! and is exponential, `V(x) = A e^{−λx}`. Which formulas produce the decay
//! rate `λ` and the optimal retention depends on the parameter regime:
//!
//! - proportional, low debt (`δ < (μ² + 2rσ²)/(2μ)`): interior retention,
//!   `λ = β = (r + μ²/(2σ²))/δ` and `u* = μ/(σ²β) < 1`;
//! - proportional, high debt: no reinsurance, `λ = γ` the positive root of
//!   the characteristic equation `½σ²γ² − (μ−δ)γ − r = 0` and `u* = 1`;
//! - excess-of-loss, interior (`δ < μ + rN − σ²/(2N)`): `λ = κ = 1/u†` where
//!   `u†` is the unique zero of `J(u) = σ²(u)/(2u) − μ(u) − ru + δ`;
//! - excess-of-loss, boundary: identical to the proportional high-debt case
//!   with `u* = N`.
//!
//! In every regime the amplitude `A` solves
//! `K + (c/λ) ln(Aλ/c) + c/λ − A = 0` on `(c/λ, ∞)` — a strictly decreasing
//! function of `A`, so the root is unique — and the optimal injection size is
//! `ξ* = (1/λ) ln(Aλ/c)`.
//!
//! The characteristic root `γ` is computed from the ODE directly with a
//! cancellation-free quadratic formula; the second (growing) root is used
//! only to discard the `e^{+ρx}` mode via `V(∞) = 0` and is not stored.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{find_root_bracketed, RootConfig};
use crate::risk_model::{DriftVolProfile, ModelParams, ReinsuranceKind};
use crate::{lit, to_f64, Scalar};

/// Absolute slack absorbed by the `u*` range guards, covering root-finder
/// tolerance.
const RETENTION_GUARD_SLACK: f64 = 1e-9;

/// Parameter regime of the optimal policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeTag {
    ProportionalLowDebt,
    ProportionalHighDebt,
    ExcessOfLossInterior,
    ExcessOfLossBoundary,
}

/// Regime tag together with the boundary value of `δ` that separates it from
/// its sibling (infinite when the boundary can never be reached).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime<T> {
    pub tag: RegimeTag,
    pub threshold: T,
}

/// Classifies the parameter regime.
///
/// Ties (`δ` exactly at the threshold) go to the high-debt / boundary branch;
/// both branches produce identical solutions there.
pub fn classify_regime<T: Scalar>(
    params: &ModelParams<T>,
    profile: &DriftVolProfile<T>,
) -> Regime<T> {
    let two = lit::<T>(2.0);
    match profile.kind() {
        ReinsuranceKind::Proportional => {
            let sigma2 = params.variance();
            let threshold = (params.mu * params.mu + two * params.r * sigma2) / (two * params.mu);
            let tag = if params.delta < threshold {
                RegimeTag::ProportionalLowDebt
            } else {
                RegimeTag::ProportionalHighDebt
            };
            Regime { tag, threshold }
        }
        ReinsuranceKind::ExcessOfLoss => {
            let n = profile.u_max();
            let threshold = if n.is_finite() {
                params.mu + params.r * n - params.variance() / (two * n)
            } else {
                T::infinity()
            };
            let tag = if params.delta < threshold {
                RegimeTag::ExcessOfLossInterior
            } else {
                RegimeTag::ExcessOfLossBoundary
            };
            Regime { tag, threshold }
        }
    }
}

/// Positive root of the characteristic equation `½σ²γ² − mγ − r = 0`,
/// written to avoid cancellation for either sign of the net drift `m`.
fn characteristic_root<T: Scalar>(m: T, sigma2: T, r: T) -> T {
    let two = lit::<T>(2.0);
    let disc = (m * m + two * r * sigma2).sqrt();
    if m >= T::zero() {
        (m + disc) / sigma2
    } else {
        two * r / (disc - m)
    }
}

/// The function `J(u) = σ²(u)/(2u) − μ(u) − ru + δ` whose zero pins the
/// excess-of-loss decay rate; `J(0+) = δ` and `J` is strictly decreasing.
fn j_function<T: Scalar>(params: &ModelParams<T>, profile: &DriftVolProfile<T>, u: T) -> Result<T> {
    let two = lit::<T>(2.0);
    let s2 = profile.variance_rate(u)?;
    let m = profile.drift(u)?;
    Ok(s2 / (two * u) - m - params.r * u + params.delta)
}

/// Decay rate of the value function for the given regime.
///
/// # Errors
/// [`Error::NoBracket`] if `J` has no sign change on `(0, N)`, which signals
/// a regime misclassification; root-finder errors otherwise.
pub fn decay_rate<T: Scalar>(
    params: &ModelParams<T>,
    profile: &DriftVolProfile<T>,
    regime: &Regime<T>,
) -> Result<T> {
    let two = lit::<T>(2.0);
    match regime.tag {
        RegimeTag::ProportionalLowDebt => {
            let sigma2 = params.variance();
            Ok((params.r + params.mu * params.mu / (two * sigma2)) / params.delta)
        }
        RegimeTag::ProportionalHighDebt | RegimeTag::ExcessOfLossBoundary => Ok(
            characteristic_root(params.mu - params.delta, params.variance(), params.r),
        ),
        RegimeTag::ExcessOfLossInterior => {
            let j = |u: T| j_function(params, profile, u).expect("u inside control region");
            let lo = lit::<T>(1e-9);
            let n = profile.u_max();
            let hi = if n.is_finite() {
                n
            } else {
                // J(u) → −∞ as u → ∞ (the −ru term wins), so doubling finds
                // a sign change.
                let mut hi = T::one();
                let mut guard = 0;
                while j(hi) > T::zero() {
                    hi = hi * two;
                    guard += 1;
                    if guard > 200 {
                        return Err(Error::NoBracket {
                            lo: to_f64(lo),
                            hi: to_f64(hi),
                            f_lo: to_f64(j(lo)),
                            f_hi: to_f64(j(hi)),
                        });
                    }
                }
                hi
            };
            let u_dag = find_root_bracketed(j, lo, hi, &RootConfig::default())?;
            Ok(u_dag.recip())
        }
    }
}

/// Solves `K + (c/λ) ln(Aλ/c) + c/λ − A = 0` for the amplitude `A` on
/// `(c/λ, ∞)`.
///
/// The left side is strictly decreasing in `A`, equals `K > 0` at `A = c/λ`,
/// and tends to `−∞`, so the bracket is found by doubling and the root is
/// unique.
pub fn solve_amplitude<T: Scalar>(decay: T, c: T, k: T) -> Result<T> {
    if !(decay > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "decay",
            message: format!("must be > 0, got {}", to_f64(decay)),
        });
    }
    let floor = c / decay;
    let g = |a: T| k + floor * (a * decay / c).ln() + floor - a;
    let lo = floor * (T::one() + lit::<T>(1e-9));
    let mut hi = floor * lit::<T>(2.0);
    let mut guard = 0;
    while g(hi) > T::zero() {
        hi = hi * lit::<T>(2.0);
        guard += 1;
        if guard > 200 {
            return Err(Error::InternalInconsistency(
                "amplitude bracket search failed to find a sign change".into(),
            ));
        }
    }
    find_root_bracketed(g, lo, hi, &RootConfig::default())
}

/// Optimal retention for the given regime and decay rate.
///
/// # Errors
/// [`Error::InternalInconsistency`] if the computed value violates the range
/// its regime guarantees by more than `1e-9`.
pub fn optimal_retention<T: Scalar>(
    params: &ModelParams<T>,
    profile: &DriftVolProfile<T>,
    regime: &Regime<T>,
    decay: T,
) -> Result<T> {
    let slack = lit::<T>(RETENTION_GUARD_SLACK);
    match regime.tag {
        RegimeTag::ProportionalLowDebt => {
            let u = params.mu / (params.variance() * decay);
            if u <= T::zero() || u >= T::one() + slack {
                return Err(Error::InternalInconsistency(format!(
                    "low-debt retention {} outside (0, 1)",
                    to_f64(u)
                )));
            }
            Ok(u)
        }
        RegimeTag::ProportionalHighDebt => Ok(T::one()),
        RegimeTag::ExcessOfLossInterior => {
            let u = decay.recip();
            let n = profile.u_max();
            if u <= T::zero() || u >= n * (T::one() + slack) {
                return Err(Error::InternalInconsistency(format!(
                    "excess-of-loss retention {} outside (0, {})",
                    to_f64(u),
                    to_f64(n)
                )));
            }
            Ok(u)
        }
        RegimeTag::ExcessOfLossBoundary => Ok(profile.u_max()),
    }
}

/// Optimal injection size `ξ* = (1/λ) ln(Aλ/c)`.
///
/// # Errors
/// [`Error::NonPositiveInjection`] unless `A > c/λ`.
pub fn optimal_injection<T: Scalar>(amplitude: T, decay: T, c: T) -> Result<T> {
    let floor = c / decay;
    if !(amplitude > floor) {
        return Err(Error::NonPositiveInjection {
            amplitude: to_f64(amplitude),
            floor: to_f64(floor),
        });
    }
    Ok((amplitude * decay / c).ln() / decay)
}

/// The solved control problem: regime, value-function constants, and the
/// optimal constant policy, bundled with the inputs that produced them.
#[derive(Debug, Clone)]
pub struct Solution<T> {
    pub(crate) params: ModelParams<T>,
    pub(crate) profile: DriftVolProfile<T>,
    pub(crate) regime: Regime<T>,
    pub(crate) decay: T,
    pub(crate) amplitude: T,
    pub(crate) u_star: T,
    pub(crate) xi_star: T,
}

impl<T: Scalar> Solution<T> {
    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    pub fn profile(&self) -> &DriftVolProfile<T> {
        &self.profile
    }

    pub fn kind(&self) -> ReinsuranceKind {
        self.profile.kind()
    }

    pub fn regime(&self) -> &Regime<T> {
        &self.regime
    }

    /// Decay rate `λ` of `V(x) = A e^{−λx}` (β, γ, or κ depending on regime).
    pub fn decay(&self) -> T {
        self.decay
    }

    /// Amplitude `A = V(0)` (α, η, or ς depending on regime).
    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    /// Optimal constant retention `u*`.
    pub fn u_star(&self) -> T {
        self.u_star
    }

    /// Optimal constant injection size `ξ*`.
    pub fn xi_star(&self) -> T {
        self.xi_star
    }

    /// The value function, extended to negative surplus by the mandatory
    /// time-zero injection: `V(x) = A e^{−λx}` for `x ≥ 0` and `A − cx`
    /// below.
    pub fn value_at(&self, x: T) -> T {
        if x >= T::zero() {
            self.amplitude * (-self.decay * x).exp()
        } else {
            self.amplitude - self.params.c * x
        }
    }

    /// `V'(x)` on `x > 0` (exact, from the exponential form).
    pub fn value_derivative(&self, x: T) -> T {
        -self.decay * self.value_at(x)
    }

    /// `V''(x)` on `x > 0`.
    pub fn value_second_derivative(&self, x: T) -> T {
        self.decay * self.decay * self.value_at(x)
    }

    /// Assembles a solution from externally supplied constants, e.g. when a
    /// decay override replaces the computed rate. Positivity and the
    /// consistency of `ξ*` with `(A, λ, c)` are enforced; deeper QVI
    /// conformance is the verifier's job.
    pub fn from_parts(
        params: ModelParams<T>,
        profile: DriftVolProfile<T>,
        regime: Regime<T>,
        decay: T,
        amplitude: T,
        u_star: T,
        xi_star: T,
    ) -> Result<Self> {
        params.validate()?;
        if !(decay > T::zero()) || !decay.is_finite() {
            return Err(Error::InvalidParameter {
                name: "decay",
                message: format!("must be positive and finite, got {}", to_f64(decay)),
            });
        }
        if !(amplitude > params.c / decay) {
            return Err(Error::NonPositiveInjection {
                amplitude: to_f64(amplitude),
                floor: to_f64(params.c / decay),
            });
        }
        if u_star < T::zero() || u_star > profile.u_max() {
            return Err(Error::OutOfRegion {
                u: to_f64(u_star),
                u_max: to_f64(profile.u_max()),
            });
        }
        let implied = optimal_injection(amplitude, decay, params.c)?;
        if (xi_star - implied).abs() > lit::<T>(1e-6) * implied.abs() {
            return Err(Error::InternalInconsistency(format!(
                "xi_star {} inconsistent with (amplitude, decay, c): expected {}",
                to_f64(xi_star),
                to_f64(implied)
            )));
        }
        Ok(Self {
            params,
            profile,
            regime,
            decay,
            amplitude,
            u_star,
            xi_star,
        })
    }
}

/// Solves the control problem end to end: classify, decay rate, amplitude,
/// optimal retention, optimal injection.
pub fn solve<T: Scalar>(
    params: &ModelParams<T>,
    profile: &DriftVolProfile<T>,
) -> Result<Solution<T>> {
    params.validate()?;
    let regime = classify_regime(params, profile);
    let decay = decay_rate(params, profile, &regime)?;
    let amplitude = solve_amplitude(decay, params.c, params.k)?;
    let u_star = optimal_retention(params, profile, &regime, decay)?;
    let xi_star = optimal_injection(amplitude, decay, params.c)?;
    Ok(Solution {
        params: *params,
        profile: profile.clone(),
        regime,
        decay,
        amplitude,
        u_star,
        xi_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::risk_model::{make_profile, ClaimDistribution};

    fn example1() -> (ModelParams<f64>, DriftVolProfile<f64>) {
        let p = ModelParams::new(4.0, 0.8, 1.5, 0.1, 1.1, 0.2);
        let profile = make_profile(&p, ReinsuranceKind::Proportional, None).unwrap();
        (p, profile)
    }

    fn example2() -> (ModelParams<f64>, DriftVolProfile<f64>) {
        let p = ModelParams::new(4.0, 0.8, 2.5, 0.1, 1.1, 0.2);
        let profile = make_profile(&p, ReinsuranceKind::Proportional, None).unwrap();
        (p, profile)
    }

    fn example3() -> (ModelParams<f64>, DriftVolProfile<f64>) {
        let p = ModelParams::new(2.0, 8.0f64.sqrt(), 1.5, 0.1, 1.1, 0.2);
        let d = ClaimDistribution::Exponential { theta: 0.5 };
        let profile = make_profile(&p, ReinsuranceKind::ExcessOfLoss, Some(d)).unwrap();
        (p, profile)
    }

    fn example4() -> (ModelParams<f64>, DriftVolProfile<f64>) {
        let p = ModelParams::new(0.5, 1.0, 1.5, 0.1, 1.1, 0.2);
        let d = ClaimDistribution::Pareto { a: 3.0, b: 1.0 };
        let profile = make_profile(&p, ReinsuranceKind::ExcessOfLoss, Some(d)).unwrap();
        (p, profile)
    }

    #[test]
    fn classify_example1_low_debt() {
        let (p, profile) = example1();
        let regime = classify_regime(&p, &profile);
        assert_eq!(regime.tag, RegimeTag::ProportionalLowDebt);
        assert!((regime.threshold - 2.016).abs() < 1e-12);
    }

    #[test]
    fn classify_example2_high_debt() {
        let (p, profile) = example2();
        assert_eq!(
            classify_regime(&p, &profile).tag,
            RegimeTag::ProportionalHighDebt
        );
    }

    #[test]
    fn classify_unbounded_support_is_always_interior() {
        let (mut p, profile) = example3();
        for delta in [0.1, 1.5, 50.0, 1e6] {
            p.delta = delta;
            let regime = classify_regime(&p, &profile);
            assert_eq!(regime.tag, RegimeTag::ExcessOfLossInterior);
            assert_eq!(regime.threshold, f64::INFINITY);
        }
    }

    #[test]
    fn classify_tie_goes_to_high_debt() {
        let (mut p, profile) = example1();
        let threshold = classify_regime(&p, &profile).threshold;
        p.delta = threshold;
        assert_eq!(
            classify_regime(&p, &profile).tag,
            RegimeTag::ProportionalHighDebt
        );
    }

    #[test]
    fn seam_continuity_at_threshold() {
        // At δ = threshold both branch formulas give the same decay rate and
        // the interior retention hits 1.
        let (mut p, profile) = example1();
        p.delta = classify_regime(&p, &profile).threshold;
        let low = Regime {
            tag: RegimeTag::ProportionalLowDebt,
            threshold: p.delta,
        };
        let high = Regime {
            tag: RegimeTag::ProportionalHighDebt,
            threshold: p.delta,
        };
        let beta = decay_rate(&p, &profile, &low).unwrap();
        let gamma = decay_rate(&p, &profile, &high).unwrap();
        assert!((beta - gamma).abs() <= 1e-9 * beta);
        let u = p.mu / (p.variance() * beta);
        assert!((u - 1.0).abs() <= 1e-9);
        // The two full solutions coincide at the tie.
        let a_low = solve_amplitude(beta, p.c, p.k).unwrap();
        let a_high = solve_amplitude(gamma, p.c, p.k).unwrap();
        assert!((a_low - a_high).abs() <= 1e-9 * a_high);
    }

    #[test]
    fn decay_example1_is_exact() {
        let (p, profile) = example1();
        let regime = classify_regime(&p, &profile);
        let beta = decay_rate(&p, &profile, &regime).unwrap();
        assert!((beta - 8.4).abs() <= 1e-9 * 8.4);
    }

    #[test]
    fn decay_example2_uses_ode_root() {
        let (p, profile) = example2();
        let regime = classify_regime(&p, &profile);
        let gamma = decay_rate(&p, &profile, &regime).unwrap();
        assert!((gamma - 4.753244565775154).abs() < 1e-12);
        // Quadratic-formula oracle on ½σ²γ² − (μ−δ)γ − r.
        let residual = 0.5 * p.variance() * gamma * gamma - (p.mu - p.delta) * gamma - p.r;
        assert!(residual.abs() < 1e-12);
    }

    #[test]
    fn decay_example3_root_of_j() {
        let (p, profile) = example3();
        let regime = classify_regime(&p, &profile);
        let kappa = decay_rate(&p, &profile, &regime).unwrap();
        assert!((kappa - 0.2591051595008019).abs() < 1e-10);
        assert!((kappa - 0.2592).abs() < 5e-4);
    }

    #[test]
    fn amplitude_example1() {
        let a: f64 = solve_amplitude(8.4, 1.1, 0.2).unwrap();
        assert!((a - 0.5086434339187716).abs() < 1e-12);
        assert!((a - 0.5088).abs() < 5e-4);
    }

    #[test]
    fn amplitude_example3() {
        let a: f64 = solve_amplitude(0.2591051595008019, 1.1, 0.2).unwrap();
        assert!((a - 5.6851194226568204).abs() < 1e-10);
        assert!((a - 5.6837).abs() < 5e-3);
    }

    #[test]
    fn amplitude_tends_to_floor_as_setup_cost_vanishes() {
        let (decay, c) = (8.4f64, 1.1f64);
        let a = solve_amplitude(decay, c, 1e-12).unwrap();
        assert!((a - c / decay).abs() < 1e-5 * (c / decay));
    }

    #[test]
    fn retention_examples() {
        let (p1, prof1) = example1();
        let r1 = classify_regime(&p1, &prof1);
        let d1 = decay_rate(&p1, &prof1, &r1).unwrap();
        let u1 = optimal_retention(&p1, &prof1, &r1, d1).unwrap();
        assert!((u1 - 0.7440476190476190).abs() < 1e-12);
        assert!((u1 - 0.7440).abs() < 1e-4);

        let (p2, prof2) = example2();
        let r2 = classify_regime(&p2, &prof2);
        let d2 = decay_rate(&p2, &prof2, &r2).unwrap();
        assert_eq!(optimal_retention(&p2, &prof2, &r2, d2).unwrap(), 1.0);

        let (p4, prof4) = example4();
        let r4 = classify_regime(&p4, &prof4);
        let d4 = decay_rate(&p4, &prof4, &r4).unwrap();
        let u4 = optimal_retention(&p4, &prof4, &r4, d4).unwrap();
        assert!((u4 - 10.437171043518959).abs() < 1e-8);
    }

    #[test]
    fn injection_examples() {
        let xi1: f64 = optimal_injection(0.5086434339187716, 8.4, 1.1).unwrap();
        assert!((xi1 - 0.16153732087853699).abs() < 1e-12);
        assert!((xi1 - 0.1616).abs() < 5e-4);

        let xi3: f64 = optimal_injection(5.6851194226568204, 0.2591051595008019, 1.1).unwrap();
        assert!((xi3 - 1.1270353547406884).abs() < 1e-10);
        assert!((xi3 - 1.1271).abs() < 2e-3);

        // A = (c/λ)·e makes ln(Aλ/c) = 1 exactly.
        let xi = optimal_injection(1.1 / 8.4 * std::f64::consts::E, 8.4, 1.1).unwrap();
        assert!((xi - 1.0 / 8.4).abs() < 1e-15);
    }

    #[test]
    fn injection_rejects_amplitude_below_floor() {
        assert!(matches!(
            optimal_injection(0.1, 8.4, 1.1).unwrap_err(),
            Error::NonPositiveInjection { .. }
        ));
    }

    #[test]
    fn solve_example1_tuple() {
        let (p, profile) = example1();
        let sol = solve(&p, &profile).unwrap();
        assert_eq!(sol.regime().tag, RegimeTag::ProportionalLowDebt);
        assert!((sol.decay() - 8.4).abs() < 1e-9);
        assert!((sol.amplitude() - 0.5086434339187716).abs() < 1e-12);
        assert!((sol.u_star() - 0.7440476190476190).abs() < 1e-12);
        assert!((sol.xi_star() - 0.16153732087853699).abs() < 1e-12);
    }

    #[test]
    fn solve_example3_tuple() {
        let (p, profile) = example3();
        let sol = solve(&p, &profile).unwrap();
        assert_eq!(sol.regime().tag, RegimeTag::ExcessOfLossInterior);
        assert!((sol.decay() - 0.2591051595008019).abs() < 1e-10);
        assert!((sol.amplitude() - 5.6851194226568204).abs() < 1e-9);
        assert!((sol.u_star() - 3.8594368476746029).abs() < 1e-9);
        assert!((sol.xi_star() - 1.1270353547406884).abs() < 1e-9);
    }

    #[test]
    fn solve_example4_tuple() {
        let (p, profile) = example4();
        let sol = solve(&p, &profile).unwrap();
        assert_eq!(sol.regime().tag, RegimeTag::ExcessOfLossInterior);
        assert!((sol.decay() - 0.09581140290126391).abs() < 1e-10);
        assert!((sol.amplitude() - 13.759222579553199).abs() < 1e-8);
        assert!((sol.u_star() - 10.437171043518959).abs() < 1e-8);
        assert!((sol.xi_star() - 1.8893949378930402).abs() < 1e-9);
    }

    #[test]
    fn value_function_boundary_and_extension() {
        let (p, profile) = example1();
        let sol = solve(&p, &profile).unwrap();
        assert_eq!(sol.value_at(0.0), sol.amplitude());
        assert!(sol.value_at(100.0) < 1e-300);
        // Negative surplus: V(x) = A − cx, continuous at 0.
        let v_neg = sol.value_at(-1.0);
        assert!((v_neg - (sol.amplitude() + 1.1)).abs() < 1e-15);
        let v_left = sol.value_at(-1e-12);
        assert!((v_left - sol.amplitude()).abs() <= 1e-9 * sol.amplitude());
    }

    #[test]
    fn from_parts_checks_consistency() {
        let (p, profile) = example1();
        let sol = solve(&p, &profile).unwrap();
        let rebuilt = Solution::from_parts(
            p,
            profile.clone(),
            *sol.regime(),
            sol.decay(),
            sol.amplitude(),
            sol.u_star(),
            sol.xi_star(),
        )
        .unwrap();
        assert_eq!(rebuilt.decay(), sol.decay());
        // An injection size that disagrees with (A, λ, c) is rejected.
        let err = Solution::from_parts(
            p,
            profile,
            *sol.regime(),
            sol.decay(),
            sol.amplitude(),
            sol.u_star(),
            sol.xi_star() * 1.5,
        );
        assert!(matches!(
            err.unwrap_err(),
            Error::InternalInconsistency(_)
        ));
    }
}
