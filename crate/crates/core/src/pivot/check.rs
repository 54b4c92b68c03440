use super::PivotLaw;
use crate::quadrature::integrate;
use crate::Real;

/// Tolerances for [`self_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions<R> {
    /// Allowed `|∫G′ − 1|`.
    pub mass_tol: R,
    /// Allowed `|G(G⁻¹(p)) − p|` on the probability grid.
    pub round_trip_tol: R,
    /// Allowed `|G(y) + G(−y) − 1|` for laws flagged symmetric.
    pub symmetry_tol: R,
    /// Skip the unimodality test (the law is then reported as not unimodal).
    pub allow_multimodal: bool,
    /// Number of interior probability grid points.
    pub grid: usize,
}

impl<R: Real> Default for CheckOptions<R> {
    fn default() -> Self {
        let eps = R::epsilon();
        Self {
            mass_tol: R::lit(1e-8).max(R::lit(100.0) * eps),
            round_trip_tol: R::lit(1e-9).max(R::lit(64.0) * eps),
            symmetry_tol: R::lit(1e-12).max(R::lit(16.0) * eps),
            allow_multimodal: false,
            grid: 199,
        }
    }
}

/// Outcome of [`self_check`]; `failures` is empty when the law passed.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport<R> {
    pub mass: R,
    pub max_round_trip_error: R,
    pub max_symmetry_error: R,
    pub failures: Vec<String>,
}

impl<R: Real> CheckReport<R> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the invariant checks a pivot law must satisfy before the interval
/// constructions may rely on it: total mass, monotone cdf with the right
/// tail limits, quantile round trip, unimodality at 0, symmetry when
/// flagged, and no jump in the density inside the support.
pub fn self_check<R: Real, D: PivotLaw<R> + ?Sized>(law: &D, opts: &CheckOptions<R>) -> CheckReport<R> {
    let mut failures = Vec::new();
    let s = law.support();
    let zero = R::zero();
    let one = R::one();

    let mass = integrate(|y| law.eval_density(y), s.lo, s.hi, R::lit(1e-3) * opts.mass_tol);
    if !((mass - one).abs() <= opts.mass_tol) {
        failures.push(format!("density integrates to {mass}"));
    }

    let n = opts.grid.max(3);
    let probs: Vec<R> = (1..=n)
        .map(|i| R::lit(0.001) + R::lit(0.998) * R::lit(i as f64) / R::lit((n + 1) as f64))
        .collect();
    let mut ys = Vec::with_capacity(n + 1);
    let mut max_rt = zero;
    for &p in &probs {
        match law.eval_quantile(p) {
            Ok(y) if y.is_finite() => {
                let err = (law.eval_cdf(y) - p).abs();
                max_rt = max_rt.max(err);
                ys.push(y);
            }
            Ok(y) => failures.push(format!("quantile({p}) is not finite: {y}")),
            Err(e) => failures.push(format!("quantile({p}) failed: {e}")),
        }
    }
    if max_rt > opts.round_trip_tol {
        failures.push(format!("quantile round trip error {max_rt}"));
    }
    if s.contains(zero) {
        ys.push(zero);
    }
    ys.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    ys.dedup();

    let cdfs: Vec<R> = ys.iter().map(|&y| law.eval_cdf(y)).collect();
    if cdfs.iter().any(|c| !(*c >= zero && *c <= one)) {
        failures.push("cdf leaves [0, 1]".to_string());
    }
    if cdfs.windows(2).any(|w| w[1] < w[0]) {
        failures.push("cdf is not monotone".to_string());
    }
    let (lo_probe, hi_probe) = tail_probes(law);
    if law.eval_cdf(lo_probe) > R::lit(1e-6) || law.eval_cdf(hi_probe) < one - R::lit(1e-6) {
        failures.push("cdf does not reach 0 and 1 at the support ends".to_string());
    }

    if !opts.allow_multimodal {
        let dens: Vec<R> = ys.iter().map(|&y| law.eval_density(y)).collect();
        let slack = R::lit(1e-12).max(R::lit(16.0) * R::epsilon());
        let ok = ys.windows(2).zip(dens.windows(2)).all(|(y, d)| {
            let tol = slack * d[0].max(d[1]);
            if y[1] <= zero {
                d[1] + tol >= d[0]
            } else if y[0] >= zero {
                d[1] <= d[0] + tol
            } else {
                true
            }
        });
        // a mode at a support end is approached from inside
        let tiny = R::lit(1e-9);
        let f0 = law
            .eval_density(zero)
            .max(law.eval_density(-tiny))
            .max(law.eval_density(tiny));
        let near = [R::lit(1e-3), R::lit(1e-2), R::lit(0.1)];
        let centered = near
            .iter()
            .all(|&h| law.eval_density(-h) <= f0 * (one + slack) && law.eval_density(h) <= f0 * (one + slack));
        if !ok || !centered {
            failures.push("density is not unimodal about 0".to_string());
        }
    }

    let mut max_sym = zero;
    if law.is_symmetric() {
        for &y in &ys {
            max_sym = max_sym.max((law.eval_cdf(y) + law.eval_cdf(-y) - one).abs());
        }
        if max_sym > opts.symmetry_tol {
            failures.push(format!("flagged symmetric but |G(y) + G(-y) - 1| reaches {max_sym}"));
        }
    }

    if let Some(y) = find_jump(law, &ys) {
        failures.push(format!("density jumps near y = {y}"));
    }

    CheckReport {
        mass,
        max_round_trip_error: max_rt,
        max_symmetry_error: max_sym,
        failures,
    }
}

fn tail_probes<R: Real, D: PivotLaw<R> + ?Sized>(law: &D) -> (R, R) {
    let s = law.support();
    let lo = if s.lo.is_finite() {
        s.lo
    } else {
        law.eval_quantile(R::lit(1e-9)).unwrap_or(R::lit(-1e6))
    };
    let hi = if s.hi.is_finite() {
        s.hi
    } else {
        law.eval_isf(R::lit(1e-9)).unwrap_or(R::lit(1e6))
    };
    (lo, hi)
}

/// Looks for a density discontinuity between adjacent grid points by
/// repeatedly halving toward the larger jump; a genuine discontinuity keeps
/// its size while a continuous density flattens out.
fn find_jump<R: Real, D: PivotLaw<R> + ?Sized>(law: &D, ys: &[R]) -> Option<R> {
    let fmax = ys.iter().map(|&y| law.eval_density(y)).fold(R::zero(), R::max);
    if fmax <= R::zero() {
        return None;
    }
    let threshold = R::lit(1e-3) * fmax;
    for w in ys.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let (mut fa, mut fb) = (law.eval_density(a), law.eval_density(b));
        if (fb - fa).abs() <= threshold {
            continue;
        }
        for _ in 0..60 {
            let m = R::lit(0.5) * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = law.eval_density(m);
            if (fm - fa).abs() >= (fb - fm).abs() {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
        }
        if (fb - fa).abs() > threshold {
            return Some(R::lit(0.5) * (a + b));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pivot::Pivot;

    #[test]
    fn catalog_members_pass() {
        let laws = [
            Pivot::<f64>::normal(),
            Pivot::student(2.0).unwrap(),
            Pivot::student(7.5).unwrap(),
            Pivot::laplace(),
            Pivot::logistic(),
            Pivot::cauchy(),
            Pivot::neg_exponential(),
            Pivot::exponential(),
            Pivot::log_gamma(3.0).unwrap(),
            Pivot::log_gamma(0.5).unwrap(),
            Pivot::log_fisher(4.0, 9.0).unwrap(),
            Pivot::log_fisher(6.0, 6.0).unwrap(),
        ];
        for law in &laws {
            let r = self_check(law, &CheckOptions::default());
            assert!(r.passed(), "{}: {:?}", law.name(), r.failures);
        }
    }

    #[test]
    fn f32_catalog_passes() {
        for law in [Pivot::<f32>::normal(), Pivot::<f32>::log_gamma(3.0).unwrap()] {
            let r = self_check(&law, &CheckOptions::default());
            assert!(r.passed(), "{}: {:?}", law.name(), r.failures);
        }
    }
}
