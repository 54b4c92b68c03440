//! Pivot laws.
//!
//! A pivot law is the cdf `G` of the negated linear pivot
//! `(τ(θ) − a₁(X)) / a₂(X)`, centered so that its density `G′` has its mode
//! at 0. For symmetric laws the sign convention is immaterial.
//!
//! [`PivotLaw`] is the interface consumed by the interval constructions.
//! [`Pivot`] is the built-in catalog; [`CustomPivot`] admits user supplied
//! laws after they pass [`self_check`].

mod catalog;
mod check;
mod custom;

pub use catalog::{Family, Pivot};
pub use check::{self_check, CheckOptions, CheckReport};
pub use custom::{CustomPivot, CustomPivotBuilder};

use rand::RngCore;

use crate::error::{domain, ensure_finite, ensure_probability, Result};
use crate::roots::invert_monotone;
use crate::Real;

/// Open interval `(lo, hi)` on which the density is positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support<R> {
    pub lo: R,
    pub hi: R,
}

impl<R: Real> Support<R> {
    pub fn real_line() -> Self {
        Self {
            lo: R::neg_infinity(),
            hi: R::infinity(),
        }
    }

    pub fn contains(&self, y: R) -> bool {
        y > self.lo && y < self.hi
    }
}

/// A continuous pivot distribution with unimodal density (mode at 0).
///
/// Implementors provide the `eval_*` kernels, which may assume a finite
/// argument. The unprefixed methods validate their inputs and are the ones
/// callers outside the crate normally use.
pub trait PivotLaw<R: Real>: Send + Sync {
    fn name(&self) -> String;

    fn support(&self) -> Support<R>;

    /// Whether `G′(y) = G′(−y)`.
    fn is_symmetric(&self) -> bool;

    /// Whether the density is unimodal at 0. Laws registered with
    /// multimodality allowed report `false`.
    fn is_unimodal(&self) -> bool {
        true
    }

    fn eval_cdf(&self, y: R) -> R;

    /// Survival function `1 − G(y)`; override when a direct form keeps
    /// precision in the upper tail.
    fn eval_sf(&self, y: R) -> R {
        R::one() - self.eval_cdf(y)
    }

    fn eval_density(&self, y: R) -> R;

    /// Quantile for `p ∈ (0, 1)`.
    fn eval_quantile(&self, p: R) -> Result<R> {
        if p <= R::lit(0.5) {
            solve_lower_tail(self, p)
        } else {
            solve_upper_tail(self, R::one() - p)
        }
    }

    /// Inverse survival function for `q ∈ (0, 1)`: the `y` with `1 − G(y) = q`.
    fn eval_isf(&self, q: R) -> Result<R> {
        if q <= R::lit(0.5) {
            solve_upper_tail(self, q)
        } else {
            solve_lower_tail(self, R::one() - q)
        }
    }

    /// One draw from `G`.
    fn draw(&self, rng: &mut dyn RngCore) -> R;

    fn cdf(&self, y: R) -> Result<R> {
        ensure_finite("y", y)?;
        Ok(self.eval_cdf(y))
    }

    fn sf(&self, y: R) -> Result<R> {
        ensure_finite("y", y)?;
        Ok(self.eval_sf(y))
    }

    fn density(&self, y: R) -> Result<R> {
        ensure_finite("y", y)?;
        Ok(self.eval_density(y))
    }

    fn quantile(&self, p: R) -> Result<R> {
        ensure_probability("p", p)?;
        self.eval_quantile(p)
    }

    fn isf(&self, q: R) -> Result<R> {
        ensure_probability("q", q)?;
        self.eval_isf(q)
    }

    /// Quantile extended to `[0, 1]`, mapping the ends to the support ends.
    fn quantile_closed(&self, p: R) -> Result<R> {
        if p <= R::zero() {
            Ok(self.support().lo)
        } else if p >= R::one() {
            Ok(self.support().hi)
        } else {
            self.eval_quantile(p)
        }
    }

    /// Inverse survival function extended to `[0, 1]`.
    fn isf_closed(&self, q: R) -> Result<R> {
        if q <= R::zero() {
            Ok(self.support().hi)
        } else if q >= R::one() {
            Ok(self.support().lo)
        } else {
            self.eval_isf(q)
        }
    }

    /// `n` independent draws.
    fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Result<Vec<R>> {
        if n == 0 {
            return domain("sample size must be at least 1");
        }
        Ok((0..n).map(|_| self.draw(rng)).collect())
    }
}

fn initial_guess<R: Real>(support: Support<R>) -> R {
    let zero = R::zero();
    if support.contains(zero) {
        zero
    } else if support.lo.is_finite() && support.hi.is_finite() {
        R::lit(0.5) * (support.lo + support.hi)
    } else if support.lo.is_finite() {
        support.lo + R::one()
    } else {
        support.hi - R::one()
    }
}

/// Solves `G(y) = p`.
pub(crate) fn solve_lower_tail<R: Real, D: PivotLaw<R> + ?Sized>(law: &D, p: R) -> Result<R> {
    let s = law.support();
    invert_monotone(
        |y| {
            if y <= s.lo {
                return (-p, R::zero());
            }
            if y >= s.hi {
                return (R::one() - p, R::zero());
            }
            (law.eval_cdf(y) - p, law.eval_density(y))
        },
        s.lo,
        s.hi,
        initial_guess(s),
    )
}

/// Solves `1 − G(y) = q`, written as the nondecreasing residual `q − sf(y)`.
pub(crate) fn solve_upper_tail<R: Real, D: PivotLaw<R> + ?Sized>(law: &D, q: R) -> Result<R> {
    let s = law.support();
    invert_monotone(
        |y| {
            if y <= s.lo {
                return (q - R::one(), R::zero());
            }
            if y >= s.hi {
                return (q, R::zero());
            }
            (q - law.eval_sf(y), law.eval_density(y))
        },
        s.lo,
        s.hi,
        initial_guess(s),
    )
}
