//! Test-only oracles, written independently of the code under test where
//! the check calls for it.
#![allow(dead_code)]

use restricted_hpd::pivot::PivotLaw;
use restricted_hpd::roots::brent;
use restricted_hpd::{Hpd, IntervalSpec, Pivot, SufficientPair};

/// Φ⁻¹ reference values (50-digit evaluation, rounded).
pub const PHI_INV_1_OVER_1_05: f64 = 1.668_391_193_947_079_3;
pub const PHI_INV_1_OVER_1_1: f64 = 1.335_177_736_118_937_6;
pub const PHI_INV_0_975: f64 = 1.959_963_984_540_054;

/// Two-sided DKW band half-width holding with probability `1 − fail`.
pub fn dkw_band(n: usize, fail: f64) -> f64 {
    ((2.0 / fail).ln() / (2.0 * n as f64)).sqrt()
}

/// Kolmogorov distance between the empirical cdf of `xs` and `cdf`.
pub fn kolmogorov(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Shortest interval `[−γ₁, γ₂]` of mass `delta` by golden-section search of
/// the length `γ₁ + γ₂(γ₁)` over the feasible range of `γ₁`.
pub fn golden_gamma_pair<D: PivotLaw<f64>>(law: &D, delta: f64) -> (f64, f64) {
    let g0 = law.cdf(0.0).unwrap();
    let lo = if g0 > 1.0 - delta { -law.quantile(1.0 - delta).unwrap() } else { 0.0 };
    let hi = if g0 > delta { -law.quantile(g0 - delta).unwrap() } else { -law.quantile(1e-14).unwrap() };
    let g2 = |g1: f64| {
        let left = law.cdf(-g1).unwrap();
        law.isf((1.0 - delta - left).max(1e-300)).unwrap()
    };
    let len = |g1: f64| g1 + g2(g1);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (len(c), len(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-13 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = len(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = len(d);
        }
    }
    let g1 = 0.5 * (a + b);
    (g1, g2(g1))
}

/// Exact coverage of the HPD interval in the location model `x = τ + w`,
/// `w ~ law`: the covered set of `x` is an interval whose ends solve
/// `u(x) = τ` and `l(x) = τ`.
pub fn exact_location_coverage(law: Pivot, alpha: f64, tau: f64) -> f64 {
    let hpd = Hpd::new(law, IntervalSpec::new(alpha).unwrap()).unwrap();
    let iv = |x: f64| hpd.interval(SufficientPair::new(x, 1.0).unwrap()).unwrap();
    // u increases in x; find x with u(x) = tau
    let span = 30.0;
    let x_lo = if iv(tau - span).upper >= tau {
        f64::NEG_INFINITY
    } else {
        brent(|x| Ok(iv(x).upper - tau), tau - span, tau + 1e-9, 1e-13).unwrap()
    };
    // l(x) = 0 for small x; find the x where l(x) crosses tau (tau > 0)
    let x_hi = if tau == 0.0 {
        hpd.threshold().unwrap()
    } else {
        brent(|x| Ok(iv(x).lower - tau), tau - 1e-9, tau + span, 1e-13).unwrap()
    };
    let below = if x_lo.is_finite() { law.cdf(x_lo - tau).unwrap() } else { 0.0 };
    law.cdf(x_hi - tau).unwrap() - below
}

/// Endpoint agreement between an analytic interval and the water-filling
/// oracle: each pair of ends is within `tol` once any stretch carrying no
/// posterior mass is discounted (decreasing pivot densities put none on
/// `[0, a₁)`).
pub fn agrees_with_oracle<D: PivotLaw<f64>>(
    law: &D,
    pair: SufficientPair,
    analytic: &restricted_hpd::CredibleInterval,
    oracle: &restricted_hpd::CredibleInterval,
    tol: f64,
) -> bool {
    let null = |a: f64, b: f64| {
        let (lo, hi) = (a.min(b) + tol, a.max(b) - tol);
        let z = |y: f64| (y - pair.a1()) / pair.a2();
        law.eval_cdf(z(hi)) - law.eval_cdf(z(lo)) <= 1e-12
    };
    let close = |a: f64, b: f64| (a - b).abs() <= tol || null(a, b);
    close(analytic.lower, oracle.lower) && close(analytic.upper, oracle.upper)
}
