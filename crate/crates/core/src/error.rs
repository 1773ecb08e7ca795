//! Error type shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while validating inputs, solving the
/// quasi-variational inequalities, or cross-checking a solution.
///
/// Numeric payloads are stored as `f64` regardless of the working scalar so
/// the error type stays non-generic.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// `δ ≤ 0` makes the control problem trivial: the company buys full
    /// reinsurance, never ruins, and `V ≡ 0`.
    #[error("degenerate liability: delta = {delta} (with no debt outflow the value function is identically zero)")]
    DegenerateLiability { delta: f64 },

    /// A model parameter violates its stated bound.
    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// A retention level outside the control region `[0, u_max]`.
    #[error("retention {u} lies outside the control region [0, {u_max}]")]
    OutOfRegion { u: f64, u_max: f64 },

    /// Supplied `(μ, σ²)` disagree with the claim distribution's first two
    /// moments.
    #[error("moment mismatch: params give (mu, sigma^2) = ({mu}, {sigma2}) but the claim distribution has ({dist_mu}, {dist_sigma2})")]
    MomentMismatch {
        mu: f64,
        sigma2: f64,
        dist_mu: f64,
        dist_sigma2: f64,
    },

    /// The root finder was handed endpoints with the same sign.
    #[error("no bracket: f({lo}) = {f_lo} and f({hi}) = {f_hi} have the same sign")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// The root finder hit its iteration cap before the bracket collapsed.
    #[error("root finder did not converge within {max_iter} iterations")]
    NoConvergence { max_iter: usize },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature tolerance unreachable within subdivision depth {max_depth}")]
    DepthExceeded { max_depth: usize },

    /// A quantity violated a range the theory guarantees; indicates a bug or
    /// an inconsistent override, not bad user input.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// The amplitude does not support a positive injection size.
    #[error("non-positive injection: amplitude {amplitude} must exceed c/decay = {floor}")]
    NonPositiveInjection { amplitude: f64, floor: f64 },

    /// Closed-form and numerical inf-convolution disagree.
    #[error("inf-convolution cross-check failed at x = {x}: closed form {closed} vs numerical {numerical}")]
    CrossCheckFailure { x: f64, closed: f64, numerical: f64 },

    /// A candidate solution violates the quasi-variational inequalities.
    #[error("QVI violation ({check}) at x = {x}: value {value} exceeds tolerance {tolerance}")]
    QviViolation {
        check: String,
        x: f64,
        value: f64,
        tolerance: f64,
    },

    /// Passage-time pricing needs a strictly positive variance rate; the
    /// deterministic `u = 0` case is priced by its own branch.
    #[error("degenerate diffusion: variance rate {s2} is not positive")]
    DegenerateDiffusion { s2: f64 },
}
