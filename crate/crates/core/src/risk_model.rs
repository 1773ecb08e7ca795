//! Market parameters, claim distributions, and the reinsurance
//! drift/volatility profiles.
//!
//! Reinsurance rescales the surplus dynamics through a pair of maps on the
//! control region:
//!
//! ```text
//! proportional:    μ(u) = μu,              σ²(u) = σ²u²,           u ∈ [0, 1]
//! excess-of-loss:  μ(u) = ∫₀ᵘ [1−F(x)] dx, σ²(u) = ∫₀ᵘ 2x[1−F(x)] dx, u ∈ [0, N]
//! ```
//!
//! where `F` is the claim-size distribution and `N ≤ ∞` the upper bound of
//! its support. Exponential and Pareto claims use the closed-form truncated
//! moments; tabulated survival curves are integrated by adaptive quadrature,
//! piecewise between grid knots so each panel is polynomial and resolved
//! exactly.
//!
//! Everything here is an immutable value after construction and every
//! operation is pure, so concurrent use needs no synchronization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate, QuadConfig};
use crate::{lit, to_f64, Scalar};

/// Market and cost primitives of the control problem.
///
/// `c` is the cash that must be raised to add one unit of surplus (so
/// `c ≥ 1`), and `k` the fixed set-up cost of a cash call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    /// Drift rate of the uncontrolled surplus (premium net of expected
    /// claims), per unit time.
    pub mu: T,
    /// Volatility of the uncontrolled surplus, per sqrt unit time.
    pub sigma: T,
    /// Debt liability rate: constant outflow funded from the surplus.
    pub delta: T,
    /// Discount rate.
    pub r: T,
    /// Proportional injection cost per unit of surplus raised.
    pub c: T,
    /// Fixed set-up cost per injection.
    pub k: T,
}

impl<T: Scalar> ModelParams<T> {
    pub fn new(mu: T, sigma: T, delta: T, r: T, c: T, k: T) -> Self {
        Self {
            mu,
            sigma,
            delta,
            r,
            c,
            k,
        }
    }

    /// Variance rate `σ²` of the uncontrolled surplus.
    pub fn variance(&self) -> T {
        self.sigma * self.sigma
    }

    /// Checks every parameter bound.
    ///
    /// # Errors
    /// [`Error::DegenerateLiability`] for `δ ≤ 0` (the problem is trivial and
    /// `V ≡ 0`); otherwise [`Error::InvalidParameter`] naming the violated
    /// bound.
    pub fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, message: String| Err(Error::InvalidParameter { name, message });
        for (name, v) in [
            ("mu", self.mu),
            ("sigma", self.sigma),
            ("delta", self.delta),
            ("r", self.r),
            ("c", self.c),
            ("K", self.k),
        ] {
            if !v.is_finite() {
                return bad(name, format!("must be finite, got {}", to_f64(v)));
            }
        }
        if self.delta <= T::zero() {
            return Err(Error::DegenerateLiability {
                delta: to_f64(self.delta),
            });
        }
        if self.mu <= T::zero() {
            return bad("mu", format!("must be > 0, got {}", to_f64(self.mu)));
        }
        if self.sigma <= T::zero() {
            return bad("sigma", format!("must be > 0, got {}", to_f64(self.sigma)));
        }
        if self.r <= T::zero() {
            return bad("r", format!("must be > 0, got {}", to_f64(self.r)));
        }
        if self.c < T::one() {
            return bad("c", format!("must be >= 1, got {}", to_f64(self.c)));
        }
        if self.k <= T::zero() {
            return bad("K", format!("must be > 0, got {}", to_f64(self.k)));
        }
        Ok(())
    }
}

/// Claim-size distribution for excess-of-loss reinsurance.
///
/// Only distributions with finite first and second moments are admitted;
/// Pareto therefore requires `a > 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClaimDistribution<T> {
    /// `1 − F(x) = e^{−θx}` with rate `θ > 0`.
    Exponential { theta: T },
    /// `1 − F(x) = (b/(x+b))^a` with shape `a > 2` and scale `b > 0`.
    Pareto { a: T, b: T },
    /// Survival sampled on a strictly increasing grid, interpolated
    /// piecewise-linearly in between and identically zero past the last
    /// knot. The first point must be `(0, 1)`.
    Tabulated { points: Vec<[T; 2]> },
}

impl<T: Scalar> ClaimDistribution<T> {
    /// Checks the distribution invariants.
    pub fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, message: String| Err(Error::InvalidParameter { name, message });
        match self {
            Self::Exponential { theta } => {
                if !(*theta > T::zero()) || !theta.is_finite() {
                    return bad("theta", format!("must be > 0, got {}", to_f64(*theta)));
                }
            }
            Self::Pareto { a, b } => {
                if !(*a > lit(2.0)) || !a.is_finite() {
                    return bad(
                        "a",
                        format!("must be > 2 for a finite second moment, got {}", to_f64(*a)),
                    );
                }
                if !(*b > T::zero()) || !b.is_finite() {
                    return bad("b", format!("must be > 0, got {}", to_f64(*b)));
                }
            }
            Self::Tabulated { points } => {
                if points.len() < 2 {
                    return bad("points", format!("need at least 2 points, got {}", points.len()));
                }
                if points[0][0] != T::zero() || points[0][1] != T::one() {
                    return bad("points", "grid must start at (0, 1)".into());
                }
                for w in points.windows(2) {
                    if !(w[1][0] > w[0][0]) {
                        return bad("points", "grid x-values must be strictly increasing".into());
                    }
                    if w[1][1] > w[0][1] {
                        return bad("points", "survival values must be non-increasing".into());
                    }
                }
                for p in points {
                    if !p[0].is_finite() || !p[1].is_finite() || p[1] < T::zero() || p[1] > T::one()
                    {
                        return bad("points", "survival values must lie in [0, 1]".into());
                    }
                }
            }
        }
        Ok(())
    }

    /// Upper bound `N` of the support; infinite for the closed-form families.
    pub fn support_bound(&self) -> T {
        match self {
            Self::Exponential { .. } | Self::Pareto { .. } => T::infinity(),
            Self::Tabulated { points } => points[points.len() - 1][0],
        }
    }

    /// Survival function `1 − F(x)` for `x ≥ 0`.
    pub fn survival(&self, x: T) -> T {
        debug_assert!(x >= T::zero(), "survival queried at negative claim size");
        match self {
            Self::Exponential { theta } => (-*theta * x).exp(),
            Self::Pareto { a, b } => (*b / (x + *b)).powf(*a),
            Self::Tabulated { points } => {
                let last = points.len() - 1;
                if x >= points[last][0] {
                    return if x == points[last][0] {
                        points[last][1]
                    } else {
                        T::zero()
                    };
                }
                // Linear interpolation on the bracketing segment.
                let idx = points.partition_point(|p| p[0] <= x);
                let (p0, p1) = (points[idx - 1], points[idx]);
                let w = (x - p0[0]) / (p1[0] - p0[0]);
                p0[1] + w * (p1[1] - p0[1])
            }
        }
    }

    /// First moment `E[Y] = ∫₀^N [1−F] dx`.
    pub fn mean(&self) -> Result<T> {
        self.truncated_moments(self.support_bound()).map(|(m, _)| m)
    }

    /// Second moment `E[Y²] = ∫₀^N 2x[1−F] dx`.
    pub fn second_moment(&self) -> Result<T> {
        self.truncated_moments(self.support_bound()).map(|(_, s)| s)
    }

    /// Truncated moments `(μ(u), σ²(u))` of the retained claim under
    /// excess-of-loss retention `u`:
    ///
    /// ```text
    /// μ(u) = ∫₀ᵘ [1−F(x)] dx,    σ²(u) = ∫₀ᵘ 2x[1−F(x)] dx.
    /// ```
    ///
    /// At `u = N` (or `u = ∞` on unbounded support) these are the first two
    /// moments of `F`.
    ///
    /// # Errors
    /// [`Error::OutOfRegion`] if `u < 0` or `u > N`.
    pub fn truncated_moments(&self, u: T) -> Result<(T, T)> {
        let n = self.support_bound();
        if u < T::zero() || u > n {
            return Err(Error::OutOfRegion {
                u: to_f64(u),
                u_max: to_f64(n),
            });
        }
        if u == T::zero() {
            return Ok((T::zero(), T::zero()));
        }
        let two = lit::<T>(2.0);
        match self {
            Self::Exponential { theta } => {
                let th = *theta;
                if u == T::infinity() {
                    return Ok((th.recip(), two / (th * th)));
                }
                let x = th * u;
                // 1 − e^{−x} via expm1 to dodge cancellation.
                let om = -(-x).exp_m1();
                let mu_u = om / th;
                let s2_u = if x < lit(1e-3) {
                    // 1 − e^{−x} − x e^{−x} = x²/2 − x³/3 + x⁴/8 − x⁵/30 + …
                    let x2 = x * x;
                    two / (th * th)
                        * (x2 * lit::<T>(0.5) - x2 * x / lit::<T>(3.0)
                            + x2 * x2 / lit::<T>(8.0)
                            - x2 * x2 * x / lit::<T>(30.0))
                } else {
                    two / (th * th) * (om - x * (-x).exp())
                };
                Ok((mu_u, s2_u))
            }
            Self::Pareto { a, b } => {
                let (a, b) = (*a, *b);
                let one = T::one();
                if u == T::infinity() {
                    let m = b / (a - one);
                    let s = two * b * b / ((a - one) * (a - two));
                    return Ok((m, s));
                }
                let ba = b.powf(a);
                let mu_u = ba / (one - a) * ((u + b).powf(one - a) - b.powf(one - a));
                let s2_u = two * ba / ((one - a) * (two - a))
                    * ((two - a) * u * (u + b).powf(one - a) - (u + b).powf(two - a)
                        + b.powf(two - a));
                Ok((mu_u, s2_u))
            }
            Self::Tabulated { points } => {
                let quad = QuadConfig::default();
                let mut mu_u = T::zero();
                let mut s2_u = T::zero();
                // Knot-aligned panels keep each integrand polynomial, so the
                // adaptive rule terminates on its first estimate.
                for w in points.windows(2) {
                    let a = w[0][0];
                    if a >= u {
                        break;
                    }
                    let b = w[1][0].min(u);
                    mu_u = mu_u + integrate(|x| self.survival(x), a, b, &quad)?;
                    s2_u = s2_u + integrate(|x| two * x * self.survival(x), a, b, &quad)?;
                }
                Ok((mu_u, s2_u))
            }
        }
    }
}

/// Which reinsurance contract shapes the drift/volatility maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReinsuranceKind {
    Proportional,
    ExcessOfLoss,
}

/// The maps `u ↦ μ(u)` and `u ↦ σ²(u)` on the control region.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftVolProfile<T> {
    repr: ProfileRepr<T>,
}

#[derive(Debug, Clone, PartialEq)]
enum ProfileRepr<T> {
    Proportional { mu: T, sigma2: T },
    ExcessOfLoss { dist: ClaimDistribution<T> },
}

impl<T: Scalar> DriftVolProfile<T> {
    pub fn kind(&self) -> ReinsuranceKind {
        match self.repr {
            ProfileRepr::Proportional { .. } => ReinsuranceKind::Proportional,
            ProfileRepr::ExcessOfLoss { .. } => ReinsuranceKind::ExcessOfLoss,
        }
    }

    /// Upper end of the control region: 1 for proportional, `N` for
    /// excess-of-loss.
    pub fn u_max(&self) -> T {
        match &self.repr {
            ProfileRepr::Proportional { .. } => T::one(),
            ProfileRepr::ExcessOfLoss { dist } => dist.support_bound(),
        }
    }

    /// The claim distribution backing an excess-of-loss profile.
    pub fn distribution(&self) -> Option<&ClaimDistribution<T>> {
        match &self.repr {
            ProfileRepr::Proportional { .. } => None,
            ProfileRepr::ExcessOfLoss { dist } => Some(dist),
        }
    }

    fn check_region(&self, u: T) -> Result<()> {
        if u < T::zero() || u > self.u_max() {
            return Err(Error::OutOfRegion {
                u: to_f64(u),
                u_max: to_f64(self.u_max()),
            });
        }
        Ok(())
    }

    /// Drift contribution `μ(u)` at retention `u`.
    pub fn drift(&self, u: T) -> Result<T> {
        self.check_region(u)?;
        match &self.repr {
            ProfileRepr::Proportional { mu, .. } => Ok(*mu * u),
            ProfileRepr::ExcessOfLoss { dist } => dist.truncated_moments(u).map(|(m, _)| m),
        }
    }

    /// Variance rate `σ²(u)` at retention `u`.
    pub fn variance_rate(&self, u: T) -> Result<T> {
        self.check_region(u)?;
        match &self.repr {
            ProfileRepr::Proportional { sigma2, .. } => Ok(*sigma2 * u * u),
            ProfileRepr::ExcessOfLoss { dist } => dist.truncated_moments(u).map(|(_, s)| s),
        }
    }

    /// Volatility `σ(u) = sqrt(σ²(u))`.
    pub fn volatility(&self, u: T) -> Result<T> {
        self.variance_rate(u).map(|s2| s2.sqrt())
    }
}

/// Relative tolerance for the moment-consistency check in [`make_profile`].
const MOMENT_MATCH_REL_TOL: f64 = 1e-9;

/// Builds the drift/volatility profile for the given reinsurance kind.
///
/// For excess-of-loss a claim distribution must be supplied and the model's
/// `(μ, σ²)` must agree with its first two moments to `1e-9` relative, since
/// the paperwork convention `μ = μ(N)`, `σ² = σ²(N)` ties the uncontrolled
/// dynamics to the claim law.
///
/// # Errors
/// Parameter validation errors, [`Error::MomentMismatch`] on disagreement,
/// or [`Error::InvalidParameter`] if the distribution argument does not fit
/// the kind.
pub fn make_profile<T: Scalar>(
    params: &ModelParams<T>,
    kind: ReinsuranceKind,
    dist: Option<ClaimDistribution<T>>,
) -> Result<DriftVolProfile<T>> {
    params.validate()?;
    match kind {
        ReinsuranceKind::Proportional => {
            if dist.is_some() {
                return Err(Error::InvalidParameter {
                    name: "distribution",
                    message: "proportional reinsurance takes no claim distribution".into(),
                });
            }
            Ok(DriftVolProfile {
                repr: ProfileRepr::Proportional {
                    mu: params.mu,
                    sigma2: params.variance(),
                },
            })
        }
        ReinsuranceKind::ExcessOfLoss => {
            let dist = dist.ok_or(Error::InvalidParameter {
                name: "distribution",
                message: "excess-of-loss reinsurance requires a claim distribution".into(),
            })?;
            dist.validate()?;
            let dist_mu = dist.mean()?;
            let dist_s2 = dist.second_moment()?;
            let tol = lit::<T>(MOMENT_MATCH_REL_TOL);
            let sigma2 = params.variance();
            let mu_ok = (params.mu - dist_mu).abs() <= tol * dist_mu.abs();
            let s2_ok = (sigma2 - dist_s2).abs() <= tol * dist_s2.abs();
            if !mu_ok || !s2_ok {
                return Err(Error::MomentMismatch {
                    mu: to_f64(params.mu),
                    sigma2: to_f64(sigma2),
                    dist_mu: to_f64(dist_mu),
                    dist_sigma2: to_f64(dist_s2),
                });
            }
            Ok(DriftVolProfile {
                repr: ProfileRepr::ExcessOfLoss { dist },
            })
        }
    }
}
