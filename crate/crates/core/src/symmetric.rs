//! HPD intervals for symmetric unimodal pivot laws.
//!
//! With `F` the pivot cdf and `t = a₁/a₂`, the interval is
//! `[max(0, a₁ − d(t)a₂), a₁ + d(t)a₂]` where `d = max(d₁, d₂)`,
//! `d₁(y) = F⁻¹(1 − αF(y))` and `d₂(y) = F⁻¹(1/2 + (1−α)F(y)/2)`. The two
//! curves cross at `d₀ = F⁻¹(1/(1+α))`, which is also the threshold on `t`
//! above which the interval leaves the boundary.

use crate::error::{domain, HpdError, Result};
use crate::interval::{BoundDirection, Branch, CoverageBounds, CredibleInterval, IntervalSpec, SufficientPair};
use crate::pivot::PivotLaw;
use crate::Real;

fn require_symmetric<R: Real, D: PivotLaw<R> + ?Sized>(law: &D) -> Result<()> {
    if law.is_symmetric() {
        Ok(())
    } else {
        domain(format!("{} is not symmetric", law.name()))
    }
}

/// `d₁(y) = F⁻¹(1 − αF(y))`, decreasing in `y`.
pub fn d1<R: Real, D: PivotLaw<R> + ?Sized>(law: &D, alpha: R, y: R) -> Result<R> {
    require_symmetric(law)?;
    let q = alpha * law.cdf(y)?;
    law.isf_closed(q)
}

/// `d₂(y) = F⁻¹(1/2 + (1−α)F(y)/2)`, increasing in `y`.
pub fn d2<R: Real, D: PivotLaw<R> + ?Sized>(law: &D, alpha: R, y: R) -> Result<R> {
    require_symmetric(law)?;
    let half = R::lit(0.5);
    // upper-tail mass α/2 + (1−α)(1 − F(y))/2
    let q = half * alpha + half * (R::one() - alpha) * law.sf(y)?;
    law.isf_closed(q)
}

/// `d(y) = max(d₁(y), d₂(y))`.
pub fn d<R: Real, D: PivotLaw<R> + ?Sized>(law: &D, alpha: R, y: R) -> Result<R> {
    Ok(d1(law, alpha, y)?.max(d2(law, alpha, y)?))
}

/// Common fixed point `d₀ = F⁻¹(1/(1+α))` of `d₁` and `d₂`.
pub fn d0<R: Real, D: PivotLaw<R> + ?Sized>(law: &D, alpha: R) -> Result<R> {
    require_symmetric(law)?;
    law.isf(alpha / (R::one() + alpha))
}

/// Uniform floor `(1−α)/(1+α)`, boundary value `1/(1+α)` and limit `1 − α`.
pub fn coverage_bounds_symmetric<R: Real>(spec: IntervalSpec<R>) -> CoverageBounds<R> {
    let a = spec.alpha();
    let one = R::one();
    CoverageBounds {
        uniform_bound: (one - a) / (one + a),
        direction: BoundDirection::Floor,
        boundary_value: one / (one + a),
        limit: one - a,
    }
}

/// Coverage floor when intervals are built from a nominal law but the data
/// follow another symmetric law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobustnessEnvelope<R> {
    /// `2G₁(d₀) − 1` with `d₀` taken from the nominal law.
    pub bound: R,
    /// Whether the actual law keeps the nominal floor `(1−α)/(1+α)`.
    pub meets_floor: bool,
}

/// Slack allowed when comparing the envelope against the nominal floor,
/// which it equals analytically when the two laws coincide.
const ENVELOPE_TOL: f64 = 1e-12;

pub fn robustness_envelope<R, N, A>(nominal: &N, actual: &A, alpha: R) -> Result<RobustnessEnvelope<R>>
where
    R: Real,
    N: PivotLaw<R> + ?Sized,
    A: PivotLaw<R> + ?Sized,
{
    let spec = IntervalSpec::new(alpha)?;
    require_symmetric(actual)?;
    let d0 = d0(nominal, alpha)?;
    // 2G₁(d₀) − 1 = 1 − 2(1 − G₁(d₀)), kept in the tail for precision
    let bound = R::one() - R::lit(2.0) * actual.sf(d0)?;
    let floor = coverage_bounds_symmetric(spec).uniform_bound;
    Ok(RobustnessEnvelope {
        bound,
        meets_floor: bound >= floor - R::lit(ENVELOPE_TOL),
    })
}

/// Symmetric construction prepared for one law and level (caches `d₀`).
#[derive(Debug, Clone)]
pub struct SymmetricHpd<R, D> {
    law: D,
    spec: IntervalSpec<R>,
    d0: R,
}

impl<R: Real, D: PivotLaw<R>> SymmetricHpd<R, D> {
    pub fn new(law: D, spec: IntervalSpec<R>) -> Result<Self> {
        let d0 = d0(&law, spec.alpha())?;
        Ok(Self { law, spec, d0 })
    }

    pub fn law(&self) -> &D {
        &self.law
    }

    pub fn spec(&self) -> IntervalSpec<R> {
        self.spec
    }

    pub fn d0(&self) -> R {
        self.d0
    }

    pub fn bounds(&self) -> CoverageBounds<R> {
        coverage_bounds_symmetric(self.spec)
    }

    pub fn interval(&self, pair: SufficientPair<R>) -> Result<CredibleInterval<R>> {
        let alpha = self.spec.alpha();
        let (a1, a2) = (pair.a1(), pair.a2());
        let t = pair.t();
        let mass = self.law.cdf(t)?;
        if mass < R::mass_floor() {
            return Err(HpdError::DegeneratePosterior(format!(
                "pivot assigns mass {mass} to the constrained set at a1/a2 = {t}"
            )));
        }
        let v1 = d1(&self.law, alpha, t)?;
        let v2 = d2(&self.law, alpha, t)?;
        let dv = v1.max(v2);
        let boundary = t <= self.d0;

        // Away from d₀ the branch test must agree with which curve is larger.
        let slack = R::lit(1e-6) * (R::one() + dv.abs());
        let consistent = if boundary { v2 <= v1 + slack } else { v1 <= v2 + slack };
        if !consistent {
            return Err(HpdError::Convergence(format!(
                "d1 = {v1} and d2 = {v2} disagree with the branch test at a1/a2 = {t} (d0 = {})",
                self.d0
            )));
        }

        let upper = a1 + dv * a2;
        let lower = a1 - dv * a2;
        let hpd = self.law.is_unimodal();
        Ok(if boundary || lower <= R::zero() {
            CredibleInterval {
                lower: R::zero(),
                upper,
                branch: Branch::BoundaryTouching,
                hpd,
            }
        } else {
            CredibleInterval {
                lower,
                upper,
                branch: Branch::Interior,
                hpd,
            }
        })
    }

    /// Posterior cdf of `τ` on `[0, ∞)`: `1 − G((a₁ − y)/a₂)/G(a₁/a₂)`.
    pub fn posterior_cdf(&self, pair: SufficientPair<R>, y: R) -> Result<R> {
        posterior_cdf_symmetric(&self.law, pair, y)
    }
}

pub fn posterior_cdf_symmetric<R: Real, D: PivotLaw<R> + ?Sized>(
    law: &D,
    pair: SufficientPair<R>,
    y: R,
) -> Result<R> {
    if !(y >= R::zero()) || !y.is_finite() {
        return domain(format!("posterior cdf argument must be finite and nonnegative, got {y}"));
    }
    let denom = law.cdf(pair.t())?;
    if denom < R::mass_floor() {
        return Err(HpdError::DegeneratePosterior(format!(
            "constrained set has pivot mass {denom}"
        )));
    }
    let num = law.cdf((pair.a1() - y) / pair.a2())?;
    Ok((R::one() - num / denom).max(R::zero()))
}
