//! Monte Carlo coverage of the HPD intervals, closed forms where they
//! exist, and a brute-force HPD oracle for testing the analytic intervals.
//!
//! Replications at grid point `i` are split into fixed-size chunks; chunk
//! `c` draws from a ChaCha8 stream keyed by `(seed, i, c)`, so results do
//! not depend on how rayon schedules the chunks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, HpdError, Result};
use crate::interval::{BoundDirection, Branch, Hpd};
use crate::models::{Family, ModelDescriptor};
use crate::pivot::PivotLaw;
use crate::quadrature::integrate;
use crate::{CoverageBounds, CredibleInterval, IntervalSpec, Pivot, SufficientPair};

/// Smallest replication count accepted by [`estimate_coverage`].
pub const MIN_REPS: usize = 10_000;

const CHUNK: usize = 1 << 14;

/// Runs `n_reps` independent trials for grid point `point`, each with its
/// own slice of a deterministic random stream, and returns the results in
/// trial order.
pub fn run_trials<T, F>(seed: u64, point: u32, n_reps: usize, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    let chunks = n_reps.div_ceil(CHUNK);
    let parts: Vec<Result<Vec<T>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((u64::from(point) << 32) | c as u64);
            let len = CHUNK.min(n_reps - c * CHUNK);
            (0..len).map(|_| trial(&mut rng)).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(n_reps);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// One grid point of a coverage study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub tau: f64,
    pub estimate: f64,
    pub std_err: f64,
    pub n_reps: usize,
    pub theory_bound: f64,
    pub bound_direction: BoundDirection,
    /// True for the row at the constraint boundary `τ = 0`, whose exact
    /// coverage is `boundary_value` rather than a bound.
    pub boundary_flag: bool,
    pub closed_form: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub alpha: f64,
    pub seed: u64,
    pub bounds: CoverageBounds,
    pub rows: Vec<CoverageRow>,
}

impl CoverageReport {
    pub fn boundary_rows(&self) -> impl Iterator<Item = &CoverageRow> {
        self.rows.iter().filter(|r| r.boundary_flag)
    }

    pub fn interior_rows(&self) -> impl Iterator<Item = &CoverageRow> {
        self.rows.iter().filter(|r| !r.boundary_flag)
    }
}

pub fn std_err(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Exact coverage of the exponential-location interval at `θ = τ ≥ 0`:
/// `(1 − α)(e^θ − 1)/(α + e^θ − 1)`.
pub fn closed_form_coverage_exponential(alpha: f64, theta: f64) -> Result<f64> {
    IntervalSpec::new(alpha)?;
    if !(theta >= 0.0) {
        return domain(format!("theta must be nonnegative, got {theta}"));
    }
    if theta.is_infinite() {
        return Ok(1.0 - alpha);
    }
    let em1 = theta.exp_m1();
    if em1.is_infinite() {
        return Ok(1.0 - alpha);
    }
    Ok((1.0 - alpha) * em1 / (alpha + em1))
}

/// Simulates the coverage of the HPD interval for `model` at each `τ` in
/// `tau_grid`, counting closed-interval containment of the true `τ`.
pub fn estimate_coverage(
    model: &ModelDescriptor,
    spec: IntervalSpec,
    tau_grid: &[f64],
    n_reps: usize,
    seed: u64,
) -> Result<CoverageReport> {
    if n_reps < MIN_REPS {
        return domain(format!("at least {MIN_REPS} replications required, got {n_reps}"));
    }
    if tau_grid.is_empty() {
        return domain("tau grid is empty");
    }
    if let Some(t) = tau_grid.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
        return domain(format!("tau grid values must be finite and nonnegative, got {t}"));
    }
    let hpd = Hpd::new(model.pivot(), spec)?;
    let bounds = hpd.bounds();
    let exponential = matches!(model.family(), Family::ExponentialLocation);

    let mut rows = Vec::with_capacity(tau_grid.len());
    for (i, &tau) in tau_grid.iter().enumerate() {
        let hits = run_trials(seed, i as u32, n_reps, |rng| {
            let data = model.simulate(tau, rng)?;
            let binding = model.bind(&data)?;
            Ok(hpd.interval(binding.pair)?.contains(tau))
        })
        .map_err(|e| with_context(e, tau))?;
        let covered = hits.iter().filter(|h| **h).count();
        let estimate = covered as f64 / n_reps as f64;
        let boundary_flag = tau == 0.0;
        rows.push(CoverageRow {
            tau,
            estimate,
            std_err: std_err(estimate, n_reps),
            n_reps,
            theory_bound: if boundary_flag {
                bounds.boundary_value
            } else {
                bounds.uniform_bound
            },
            bound_direction: bounds.direction,
            boundary_flag,
            closed_form: if exponential {
                Some(closed_form_coverage_exponential(spec.alpha(), tau)?)
            } else {
                None
            },
        });
    }
    Ok(CoverageReport {
        alpha: spec.alpha(),
        seed,
        bounds,
        rows,
    })
}

fn with_context(e: HpdError, tau: f64) -> HpdError {
    let at = |m: String| format!("at tau = {tau}: {m}");
    match e {
        HpdError::Domain(m) => HpdError::Domain(at(m)),
        HpdError::Convergence(m) => HpdError::Convergence(at(m)),
        HpdError::DegenerateData(m) => HpdError::DegenerateData(at(m)),
        HpdError::DegeneratePosterior(m) => HpdError::DegeneratePosterior(at(m)),
        HpdError::Registration(m) => HpdError::Registration(at(m)),
        HpdError::OracleResolution(m) => HpdError::OracleResolution(at(m)),
    }
}

/// Verdict on one report row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowVerdict {
    pub tau: f64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub rows: Vec<RowVerdict>,
}

impl Verdict {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Checks every row against the theory with `k`-standard-error slack:
/// boundary rows against the exact boundary value (two-sided), other rows
/// against the floor or ceiling (one-sided), and rows with a closed form
/// against it (two-sided, `k + 1` standard errors).
pub fn verify_bounds_with(report: &CoverageReport, k: f64) -> Verdict {
    let rows = report
        .rows
        .iter()
        .map(|r| {
            let slack = k * r.std_err;
            let (mut pass, mut detail) = if r.boundary_flag {
                (
                    (r.estimate - r.theory_bound).abs() <= slack,
                    format!("boundary {:.6} vs exact {:.6} (se {:.2e})", r.estimate, r.theory_bound, r.std_err),
                )
            } else {
                let ok = match r.bound_direction {
                    BoundDirection::Floor => r.estimate + slack >= r.theory_bound,
                    BoundDirection::Ceiling => r.estimate - slack <= r.theory_bound,
                };
                (
                    ok,
                    format!(
                        "{:.6} vs {} {:.6} (se {:.2e})",
                        r.estimate, r.bound_direction, r.theory_bound, r.std_err
                    ),
                )
            };
            if let Some(cf) = r.closed_form {
                let ok = (r.estimate - cf).abs() <= (k + 1.0) * r.std_err;
                pass &= ok;
                detail.push_str(&format!("; closed form {cf:.6}"));
            }
            RowVerdict {
                tau: r.tau,
                pass,
                detail,
            }
        })
        .collect();
    Verdict { rows }
}

/// [`verify_bounds_with`] at three standard errors.
pub fn verify_bounds(report: &CoverageReport) -> Verdict {
    verify_bounds_with(report, 3.0)
}

/// Brute-force HPD interval: discretizes the posterior density of `τ`,
/// proportional to `G′((y − a₁)/a₂)` on `[0, ∞)`, into cells of width
/// `step` (geometrically growing cells in the far tail), and collects cells
/// in order of decreasing density until they hold `1 − α` of the mass.
///
/// Independent of the analytic machinery: it uses only the density.
pub fn hpd_oracle<D: PivotLaw<f64> + ?Sized>(
    law: &D,
    pair: SufficientPair,
    spec: IntervalSpec,
    step: f64,
) -> Result<CredibleInterval> {
    if !(step > 0.0 && step.is_finite()) {
        return domain(format!("grid step must be positive, got {step}"));
    }
    let (a1, a2) = (pair.a1(), pair.a2());
    let dens = |y: f64| law.eval_density((y - a1) / a2);

    // Uniform region out to where the density is negligible, capped at
    // 80 scale units past the data.
    let peak = {
        let mut m = dens(0.0).max(dens(a1.max(0.0)));
        let probe = 2000;
        let reach = a1.max(0.0) + 80.0 * a2;
        for k in 0..=probe {
            m = m.max(dens(reach * k as f64 / probe as f64));
        }
        m
    };
    if !(peak > 0.0) {
        return Err(HpdError::OracleResolution("posterior density vanishes on the grid".into()));
    }
    let cap = a1.max(0.0) + 80.0 * a2;
    let negligible = 1e-22 * peak;
    let mut edges = vec![0.0];
    let mut y = 0.0;
    while y < cap {
        y = (y + step).min(cap);
        edges.push(y);
        if y > a1 && dens(y) < negligible {
            break;
        }
    }
    let mut width = step;
    let mut tail_ok = dens(y) < negligible;
    while !tail_ok {
        width *= 1.05;
        y += width;
        edges.push(y);
        if y > 1e15 * (1.0 + a1.abs() + a2) {
            break;
        }
        // crude remaining-mass bound for at worst 1/y² tails
        tail_ok = dens(y) * y < 1e-14 * peak * a2;
    }
    if !tail_ok {
        return Err(HpdError::OracleResolution(format!(
            "posterior tail beyond {y} is not negligible"
        )));
    }

    let cells: Vec<(f64, f64, f64, f64)> = edges
        .windows(2)
        .map(|w| {
            let (l, r) = (w[0], w[1]);
            let m = 0.5 * (l + r);
            let fm = dens(m);
            let mass = (r - l) / 6.0 * (dens(l) + 4.0 * fm + dens(r));
            (l, r, fm, mass)
        })
        .collect();
    let total: f64 = cells.iter().map(|c| c.3).sum();
    if !(total > 0.0) {
        return Err(HpdError::OracleResolution("posterior mass is zero on the grid".into()));
    }
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&i, &j| cells[j].2.total_cmp(&cells[i].2));
    let target = (1.0 - spec.alpha()) * total;
    let mut acc = 0.0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &i in &order {
        let (l, r, _, m) = cells[i];
        lo = lo.min(l);
        hi = hi.max(r);
        acc += m;
        if acc >= target {
            break;
        }
    }
    if acc < target {
        return Err(HpdError::OracleResolution("grid exhausted before collecting the mass".into()));
    }
    Ok(CredibleInterval {
        lower: lo,
        upper: hi,
        branch: if lo == 0.0 {
            Branch::BoundaryTouching
        } else {
            Branch::Interior
        },
        hpd: true,
    })
}

/// Posterior cdf of `τ` by direct quadrature of likelihood times the flat
/// truncated prior, for a location model `x = τ + σW`: the check that the
/// pivot-based formula is the actual posterior.
pub fn posterior_cdf_by_quadrature(noise: &Pivot, x: f64, sigma: f64, y: f64) -> f64 {
    let like = |tau: f64| noise.eval_density((x - tau) / sigma);
    let num = integrate(like, 0.0, y, 1e-14);
    let den = integrate(like, 0.0, f64::INFINITY, 1e-14);
    num / den
}
