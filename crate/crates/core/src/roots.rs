//! Bracketed root finding.
//!
//! [`brent`] is the classic bisection/secant/inverse-quadratic hybrid and is
//! used wherever only function values are available. [`invert_monotone`]
//! solves `f(x) = target` for a nondecreasing `f` with a known derivative,
//! growing a bracket geometrically and then running Newton steps that fall
//! back to bisection whenever they would leave the bracket.

use crate::error::{HpdError, Result};
use crate::Real;

const MAX_ITER: usize = 500;
const MAX_EXPANSIONS: usize = 2100;

/// Finds a root of `f` in `[a, b]`, where `f(a)` and `f(b)` bracket zero.
///
/// Converges once the bracket is narrower than `2·eps·|x| + xtol`.
pub fn brent<R, F>(mut f: F, a: R, b: R, xtol: R) -> Result<R>
where
    R: Real,
    F: FnMut(R) -> Result<R>,
{
    let two = R::lit(2.0);
    let three = R::lit(3.0);
    let half = R::lit(0.5);
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == R::zero() {
        return Ok(a);
    }
    if fb == R::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(HpdError::Convergence(format!(
            "root not bracketed on [{a}, {b}] (f = {fa}, {fb})"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
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
        let tol = two * R::epsilon() * b.abs() + half * xtol;
        let m = half * (c - b);
        if m.abs() <= tol || fb == R::zero() {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = R::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qq * (qq - r) - (b - a) * (r - R::one()));
                q = (qq - R::one()) * (r - R::one()) * (s - R::one());
            }
            if p > R::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (three * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol {
            d
        } else if m > R::zero() {
            tol
        } else {
            -tol
        };
        fb = f(b)?;
    }
    Err(HpdError::Convergence(format!(
        "brent did not converge within {MAX_ITER} iterations near {b}"
    )))
}

/// Solves `value(x) = 0` for a nondecreasing residual on the open interval
/// `(lo, hi)` (either end may be infinite), starting from `guess`.
///
/// `eval` returns `(residual, derivative)`. Finite support ends are used as
/// bracket ends directly; infinite ones are approached by doubling steps.
pub fn invert_monotone<R, F>(mut eval: F, lo: R, hi: R, guess: R) -> Result<R>
where
    R: Real,
    F: FnMut(R) -> (R, R),
{
    let two = R::lit(2.0);
    let half = R::lit(0.5);
    let mut x = guess;
    if !(x > lo && x < hi) {
        x = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => half * (lo + hi),
            (true, false) => lo + R::one(),
            (false, true) => hi - R::one(),
            (false, false) => R::zero(),
        };
    }
    let (f0, mut df) = eval(x);
    if f0.is_nan() {
        return Err(HpdError::Convergence(format!("residual is NaN at {x}")));
    }
    if f0 == R::zero() {
        return Ok(x);
    }

    // Bracket [a, b] with residual(a) < 0 < residual(b).
    let (mut a, mut b);
    let mut fx = f0;
    let mut step = R::one().max(x.abs() * R::lit(0.25));
    if f0 < R::zero() {
        a = x;
        b = x;
        let mut found = false;
        for _ in 0..MAX_EXPANSIONS {
            let next = b + step;
            if next >= hi {
                b = hi;
                found = true;
                break;
            }
            let (fv, _) = eval(next);
            if fv >= R::zero() {
                b = next;
                found = true;
                break;
            }
            a = next;
            step *= two;
        }
        if !found {
            return Err(HpdError::Convergence(format!(
                "could not bracket the root above {guess} within the support"
            )));
        }
    } else {
        a = x;
        b = x;
        let mut found = false;
        for _ in 0..MAX_EXPANSIONS {
            let next = a - step;
            if next <= lo {
                a = lo;
                found = true;
                break;
            }
            let (fv, _) = eval(next);
            if fv <= R::zero() {
                a = next;
                found = true;
                break;
            }
            b = next;
            step *= two;
        }
        if !found {
            return Err(HpdError::Convergence(format!(
                "could not bracket the root below {guess} within the support"
            )));
        }
    }
    if !(x >= a && x <= b) {
        x = if a.is_finite() && b.is_finite() {
            half * (a + b)
        } else if a.is_finite() {
            a
        } else {
            b
        };
        let (f, d) = eval(x);
        fx = f;
        df = d;
    }

    for _ in 0..MAX_ITER {
        if fx == R::zero() {
            return Ok(x);
        }
        if fx < R::zero() {
            a = x;
        } else {
            b = x;
        }
        let newton = if df > R::zero() && df.is_finite() {
            x - fx / df
        } else {
            R::nan()
        };
        let next = if newton > a && newton < b {
            newton
        } else if a.is_finite() && b.is_finite() {
            half * (a + b)
        } else if a.is_finite() {
            // Upper end infinite: keep doubling away from a.
            a + (R::one().max(a.abs()))
        } else {
            b - (R::one().max(b.abs()))
        };
        let tol = R::lit(4.0) * R::epsilon() * next.abs().max(R::min_positive_value());
        let moved = (next - x).abs();
        x = next;
        let (f, d) = eval(x);
        fx = f;
        df = d;
        if moved <= tol || (a.is_finite() && b.is_finite() && (b - a) <= tol) {
            return Ok(x);
        }
    }
    Err(HpdError::Convergence(format!(
        "inversion did not converge near {x} (residual {fx})"
    )))
}
