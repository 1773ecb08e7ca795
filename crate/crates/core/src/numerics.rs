//! Scalar numeric kernels: bracketed root finding and adaptive quadrature.
//!
//! Both routines carry explicit tolerance contracts. The root finder is a
//! Brent-style bisection/secant/inverse-quadratic hybrid: it never evaluates
//! the function outside the initial bracket and falls back to bisection
//! whenever interpolation stalls, so convergence is guaranteed for the
//! strictly monotone functions solved elsewhere in this crate. Quadrature is
//! adaptive Simpson with Richardson extrapolation, exact on cubics.

use crate::error::{Error, Result};
use crate::{lit, to_f64, Scalar};

/// Tolerances for [`find_root_bracketed`].
#[derive(Debug, Clone, Copy)]
pub struct RootConfig<T> {
    /// Absolute x-tolerance; the returned root lies within a bracket of this
    /// width.
    pub abs_tol: T,
    /// Iteration cap.
    pub max_iter: usize,
}

impl<T: Scalar> Default for RootConfig<T> {
    fn default() -> Self {
        Self {
            abs_tol: lit(1e-12),
            max_iter: 200,
        }
    }
}

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig<T> {
    /// Relative tolerance against panel refinement.
    pub rel_tol: T,
    /// Subdivision depth cap.
    pub max_depth: usize,
}

impl<T: Scalar> Default for QuadConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: lit(1e-10),
            max_depth: 50,
        }
    }
}

/// Finds a root of `f` inside `[lo, hi]`, given `f(lo)` and `f(hi)` of
/// opposite sign (or one of them zero).
///
/// Brent's method: inverse-quadratic / secant steps with a bisection
/// fallback. Deterministic, never evaluates `f` outside the bracket, and
/// stops once the bracket width drops below `cfg.abs_tol` (plus a machine-
/// epsilon floor that keeps the loop honest near representable limits).
///
/// # Errors
/// [`Error::NoBracket`] if the endpoint values share a sign,
/// [`Error::NoConvergence`] if `cfg.max_iter` is exhausted.
pub fn find_root_bracketed<T, F>(f: F, lo: T, hi: T, cfg: &RootConfig<T>) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    if !(lo < hi) {
        return Err(Error::InvalidParameter {
            name: "bracket",
            message: format!("need lo < hi, got [{}, {}]", to_f64(lo), to_f64(hi)),
        });
    }
    let zero = T::zero();
    let two = lit::<T>(2.0);
    let half = lit::<T>(0.5);

    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == zero {
        return Ok(a);
    }
    if fb == zero {
        return Ok(b);
    }
    if (fa > zero) == (fb > zero) {
        return Err(Error::NoBracket {
            lo: to_f64(lo),
            hi: to_f64(hi),
            f_lo: to_f64(fa),
            f_hi: to_f64(fb),
        });
    }

    // c is the previous iterate; (b, fb) is the best root estimate and
    // [a or c, b] always brackets the root.
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..cfg.max_iter {
        if (fb > zero) == (fc > zero) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + half * cfg.abs_tol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == zero {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Secant, or inverse quadratic when all three points differ.
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (two * xm * s, T::one() - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (two * xm * q * (q - r) - (b - a) * (r - T::one())),
                    (q - T::one()) * (r - T::one()) * (s - T::one()),
                )
            };
            if p > zero {
                q = -q;
            }
            p = p.abs();
            let min1 = lit::<T>(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = b + if d.abs() > tol1 {
            d
        } else if xm > zero {
            tol1
        } else {
            -tol1
        };
        fb = f(b);
    }
    Err(Error::NoConvergence {
        max_iter: cfg.max_iter,
    })
}

/// Adaptive Simpson estimate of `∫_a^b f(x) dx` with relative error
/// `cfg.rel_tol` against panel refinement.
///
/// # Errors
/// [`Error::DepthExceeded`] if some panel still misses its tolerance at
/// `cfg.max_depth` subdivisions.
pub fn integrate<T, F>(f: F, a: T, b: T, cfg: &QuadConfig<T>) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    if a == b {
        return Ok(T::zero());
    }
    if !(a < b) {
        return Err(Error::InvalidParameter {
            name: "interval",
            message: format!("need a <= b, got [{}, {}]", to_f64(a), to_f64(b)),
        });
    }
    let half = lit::<T>(0.5);
    let six = lit::<T>(6.0);
    let m = half * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / six * (fa + lit::<T>(4.0) * fm + fb);
    // Absolute budget derived from the first estimate; the floor keeps
    // integrals that are genuinely ~0 from demanding impossible precision.
    let scale = whole.abs().max(lit(1e-300));
    let budget = cfg.rel_tol * scale;
    simpson_panel(&f, a, fa, m, fm, b, fb, whole, budget, cfg.max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_panel<T, F>(
    f: &F,
    a: T,
    fa: T,
    m: T,
    fm: T,
    b: T,
    fb: T,
    whole: T,
    budget: T,
    depth: usize,
) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let half = lit::<T>(0.5);
    let six = lit::<T>(6.0);
    let four = lit::<T>(4.0);
    let ml = half * (a + m);
    let mr = half * (m + b);
    let fml = f(ml);
    let fmr = f(mr);
    let left = (m - a) / six * (fa + four * fml + fm);
    let right = (b - m) / six * (fm + four * fmr + fb);
    let diff = left + right - whole;
    if diff.abs() <= lit::<T>(15.0) * budget {
        // Richardson extrapolation: one order beyond plain Simpson.
        return Ok(left + right + diff / lit::<T>(15.0));
    }
    if depth == 0 {
        return Err(Error::DepthExceeded { max_depth: 0 });
    }
    let half_budget = half * budget;
    let l = simpson_panel(f, a, fa, ml, fml, m, fm, left, half_budget, depth - 1);
    let r = simpson_panel(f, m, fm, mr, fmr, b, fb, right, half_budget, depth - 1);
    match (l, r) {
        (Ok(l), Ok(r)) => Ok(l + r),
        _ => Err(Error::DepthExceeded { max_depth: depth }),
    }
}

/// Deterministic pairwise summation; the result depends only on the order of
/// `xs`, never on chunking or thread count.
pub fn pairwise_sum<T: Scalar>(xs: &[T]) -> T {
    if xs.len() <= 8 {
        return xs.iter().fold(T::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
