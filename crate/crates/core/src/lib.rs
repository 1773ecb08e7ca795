//! Cost-minimizing reinsurance and capital-injection policies for an insurance
//! surplus modeled as a Brownian motion with drift.
//!
//! The surplus under a constant policy `(u, ξ)` follows
//!
//! ```text
//! dX_t = [μ(u) − δ] dt + σ(u) dW_t,   X ← ξ whenever X hits 0,
//! ```
//!
//! where every cash call costs `K + cξ`, discounted at rate `r`. The minimal
//! expected total discounted injection cost is exponential in the surplus,
//! `V(x) = A e^{−λx}`, and the optimal retention and injection size are
//! constants. This crate computes that solution in closed form and checks it
//! three independent ways:
//!
//! - [`qvi_solver`] — regime classification, decay rate, amplitude, optimal
//!   retention `u*` and injection `ξ*` for proportional and excess-of-loss
//!   reinsurance;
//! - [`qvi_verifier`] — generator residuals, the inf-convolution inequality,
//!   and boundary tightness of a candidate solution;
//! - [`cost_oracle`] — closed-form pricing of *any* constant policy through
//!   the first-passage-time Laplace transform, plus brute-force grid search;
//! - [`mc_simulator`] — Euler–Maruyama Monte Carlo of the controlled surplus
//!   with reproducible per-path random streams.
//!
//! [`risk_model`] holds the market parameters, claim distributions and the
//! reinsurance drift/volatility maps; [`numerics`] provides the bracketed
//! root finder and adaptive quadrature the rest of the crate builds on.
//!
//! All core math is generic over the floating-point scalar via [`Scalar`];
//! `*64` aliases at the crate root fix `f64` for ordinary use.

// `!(x > 0)` is used on purpose in validators: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Frozen oracle constants in tests carry full precision.
#![cfg_attr(test, allow(clippy::excessive_precision))]

use std::fmt;

pub mod cost_oracle;
pub mod error;
pub mod mc_simulator;
pub mod numerics;
pub mod qvi_solver;
pub mod qvi_verifier;
pub mod risk_model;

pub use error::{Error, Result};

/// Floating-point scalar for all model computations: `f32` or `f64`.
pub trait Scalar:
    num_traits::Float + num_traits::FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: num_traits::Float
        + num_traits::FromPrimitive
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal to the working scalar type.
#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from(x).expect("finite f64 constant must be representable in the scalar type")
}

/// Lossy conversion back to `f64`, for error messages and reports.
#[inline]
pub(crate) fn to_f64<T: Scalar>(x: T) -> f64 {
    num_traits::ToPrimitive::to_f64(&x).unwrap_or(f64::NAN)
}

pub type ModelParams64 = risk_model::ModelParams<f64>;
pub type ClaimDistribution64 = risk_model::ClaimDistribution<f64>;
pub type DriftVolProfile64 = risk_model::DriftVolProfile<f64>;
pub type Regime64 = qvi_solver::Regime<f64>;
pub type Solution64 = qvi_solver::Solution<f64>;
pub type ResidualReport64 = qvi_verifier::ResidualReport<f64>;
pub type PolicySpec64 = cost_oracle::PolicySpec<f64>;
pub type SimConfig64 = mc_simulator::SimConfig<f64>;
pub type SimResult64 = mc_simulator::SimResult<f64>;
