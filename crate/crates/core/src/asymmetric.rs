//! HPD intervals for unimodal pivot laws without symmetry.
//!
//! `[−γ₁(Δ), γ₂(Δ)]` is the shortest interval of `G`-mass `Δ`. The interval
//! for `τ` either touches the boundary (`[0, a₁ + a₂G⁻¹(1 − α + αG(−t))]`)
//! or is `[a₁ − a₂γ₁(Δ), a₁ + a₂γ₂(Δ)]` with `Δ = (1 − α)(1 − G(−t))`,
//! `t = a₁/a₂`. Which one fires depends on the class of `G` (mode inside or
//! at an end of the support) and, for interior modes, on the root `y₀` of
//! `U(y) = −y + γ₁((1 − α)(1 − G(−y)))`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_finite, ensure_probability, HpdError, Result};
use crate::interval::{BoundDirection, Branch, CoverageBounds, CredibleInterval, IntervalSpec, SufficientPair};
use crate::pivot::PivotLaw;
use crate::roots::brent;
use crate::Real;

/// Classes of unimodal pivot laws by where the density peaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SkewClass {
    /// `G(0) ∈ (0, 1)`: the mode is interior.
    C1,
    /// `G(0) = 0`: decreasing density on `[0, ∞)`.
    C2,
    /// `G(0) = 1`: increasing density on `(−∞, 0]`.
    C3,
}

impl std::fmt::Display for SkewClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SkewClass::C1 => "C1",
            SkewClass::C2 => "C2",
            SkewClass::C3 => "C3",
        })
    }
}

const CLASS_TOL: f64 = 1e-12;

/// Arms of the shortest interval `[−gamma1, gamma2]` with mass `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaPair<R> {
    pub gamma1: R,
    pub gamma2: R,
    pub delta: R,
}

fn skew_class_of<R: Real>(g0: R) -> SkewClass {
    if g0 <= R::lit(CLASS_TOL) {
        SkewClass::C2
    } else if g0 >= R::one() - R::lit(CLASS_TOL) {
        SkewClass::C3
    } else {
        SkewClass::C1
    }
}

fn require_unimodal<R: Real, D: PivotLaw<R> + ?Sized>(law: &D) -> Result<()> {
    if law.is_unimodal() {
        Ok(())
    } else {
        domain(format!(
            "{} is not unimodal; only symmetric laws may waive unimodality",
            law.name()
        ))
    }
}

/// Shortest interval of mass `delta` around the mode.
///
/// For an interior mode the arms satisfy `G′(−γ₁) = G′(γ₂)`; the solver runs
/// Brent on `γ₁` with `γ₂` eliminated through the mass constraint.
pub fn gamma_pair<R: Real, D: PivotLaw<R> + ?Sized>(law: &D, delta: R) -> Result<GammaPair<R>> {
    ensure_probability("delta", delta)?;
    let zero = R::zero();
    let one = R::one();
    let g0 = law.eval_cdf(zero);
    match skew_class_of(g0) {
        SkewClass::C2 => {
            return Ok(GammaPair {
                gamma1: zero,
                gamma2: law.quantile(delta)?,
                delta,
            })
        }
        SkewClass::C3 => {
            return Ok(GammaPair {
                gamma1: -law.quantile(one - delta)?,
                gamma2: zero,
                delta,
            })
        }
        SkewClass::C1 => {}
    }
    if law.is_symmetric() {
        let g = law.isf(R::lit(0.5) * (one - delta))?;
        return Ok(GammaPair {
            gamma1: g,
            gamma2: g,
            delta,
        });
    }

    // Upper-tail mass left of γ₂ once the left arm is fixed.
    let right_tail = |g1: R| (one - delta) - law.eval_cdf(-g1);
    let gamma2_of = |g1: R| -> Result<R> {
        let q = right_tail(g1);
        if q <= zero {
            Ok(law.support().hi)
        } else if q >= one {
            Ok(law.support().lo)
        } else {
            Ok(law.eval_isf(q)?.max(zero))
        }
    };
    let residual = |g1: R| -> Result<R> {
        let g2 = gamma2_of(g1)?;
        let right = if g2.is_finite() { law.eval_density(g2) } else { zero };
        Ok(law.eval_density(-g1) - right)
    };

    let lo = if g0 > one - delta {
        -law.quantile(one - delta)?
    } else {
        zero
    };
    let hi = if g0 > delta {
        -law.quantile(g0 - delta)?
    } else {
        let tiny = g0.min(one - delta) * R::epsilon();
        -law.quantile(tiny.max(R::min_positive_value()))?
    };

    let r_lo = residual(lo)?;
    let r_hi = residual(hi)?;
    let g1 = if r_lo <= zero {
        lo
    } else if r_hi >= zero {
        hi
    } else {
        brent(residual, lo, hi, R::zero())?
    };
    let g2 = gamma2_of(g1)?;
    if !g2.is_finite() {
        return Err(HpdError::Convergence(format!(
            "shortest interval of mass {delta} is unbounded"
        )));
    }
    Ok(GammaPair {
        gamma1: g1,
        gamma2: g2,
        delta,
    })
}

/// `U(y) = −y + γ₁((1 − α)(1 − G(−y)))`.
pub fn u_function<R: Real, D: PivotLaw<R> + ?Sized>(law: &D, alpha: R, y: R) -> Result<R> {
    ensure_probability("alpha", alpha)?;
    ensure_finite("y", y)?;
    let s = law.support();
    if !(-y >= s.lo && -y <= s.hi) {
        return domain(format!("-y = {} lies outside the pivot support", -y));
    }
    let delta = (R::one() - alpha) * law.eval_sf(-y);
    if delta <= R::zero() {
        return Ok(-y);
    }
    Ok(-y + gamma_pair(law, delta)?.gamma1)
}

/// Class of a law and, for an interior mode, the root `y₀` of `U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification<R> {
    pub class: SkewClass,
    pub y0: Option<R>,
    /// Exact coverage at the constraint boundary: `1 − G(−y₀)` for `C1`,
    /// 1 for `C2`, 0 for `C3`.
    pub boundary_mass: R,
}

const U_TOL: f64 = 1e-9;

pub fn classify<R: Real, D: PivotLaw<R> + ?Sized>(law: &D, alpha: R) -> Result<Classification<R>> {
    ensure_probability("alpha", alpha)?;
    require_unimodal(law)?;
    let g0 = law.eval_cdf(R::zero());
    let class = skew_class_of(g0);
    match class {
        SkewClass::C2 => {
            return Ok(Classification {
                class,
                y0: None,
                boundary_mass: R::one(),
            })
        }
        SkewClass::C3 => {
            return Ok(Classification {
                class,
                y0: None,
                boundary_mass: R::zero(),
            })
        }
        SkewClass::C1 => {}
    }

    let u = |y: R| u_function(law, alpha, y);
    let mut eps = R::lit(1e-8);
    let mut bracket = None;
    for _ in 0..8 {
        let left = -law.isf(eps)?;
        let right = -law.quantile(eps)?;
        if u(left)? > R::zero() && u(right)? < R::zero() {
            bracket = Some((left, right));
            break;
        }
        eps *= R::lit(1e-4);
        if eps < R::min_positive_value() / R::epsilon() {
            break;
        }
    }
    let (left, right) = bracket.ok_or_else(|| {
        HpdError::Convergence(format!("U does not change sign over the support of {}", law.name()))
    })?;
    let y0 = brent(u, left, right, R::zero())?;
    let residual = u(y0)?;
    if residual.abs() > R::lit(U_TOL).max(R::lit(64.0) * R::epsilon() * (R::one() + y0.abs())) {
        return Err(HpdError::Convergence(format!("|U(y0)| = {} at y0 = {y0}", residual.abs())));
    }
    Ok(Classification {
        class,
        y0: Some(y0),
        boundary_mass: law.eval_sf(-y0),
    })
}

/// Coverage bounds implied by a classification.
pub fn coverage_bounds_asymmetric<R: Real>(c: &Classification<R>, spec: IntervalSpec<R>) -> CoverageBounds<R> {
    let one = R::one();
    let level = one - spec.alpha();
    let (uniform_bound, direction) = match c.class {
        SkewClass::C1 => (level * c.boundary_mass, BoundDirection::Floor),
        SkewClass::C2 => (level, BoundDirection::Floor),
        SkewClass::C3 => (level, BoundDirection::Ceiling),
    };
    CoverageBounds {
        uniform_bound,
        direction,
        boundary_value: c.boundary_mass,
        limit: level,
    }
}

/// Skewness check `G(−γ₁(1 − z)) ≤ z/2` on `z ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewCondition<R> {
    pub holds: bool,
    pub worst_margin: R,
    pub worst_z: R,
}

pub fn check_skew_condition<R: Real, D: PivotLaw<R> + ?Sized>(law: &D, resolution: usize) -> Result<SkewCondition<R>> {
    if resolution == 0 {
        return domain("condition check needs at least one grid point");
    }
    require_unimodal(law)?;
    let half = R::lit(0.5);
    let mut worst_margin = R::neg_infinity();
    let mut worst_z = R::zero();
    for k in 1..=resolution {
        let z = R::lit(k as f64) / R::lit(resolution as f64);
        let left = if k == resolution {
            law.eval_cdf(R::zero())
        } else {
            law.eval_cdf(-gamma_pair(law, R::one() - z)?.gamma1)
        };
        let margin = left - half * z;
        if margin > worst_margin {
            worst_margin = margin;
            worst_z = z;
        }
    }
    Ok(SkewCondition {
        holds: worst_margin <= R::lit(U_TOL),
        worst_margin,
        worst_z,
    })
}

/// Asymmetric construction prepared for one law and level (caches the class
/// and `y₀`).
#[derive(Debug, Clone)]
pub struct AsymmetricHpd<R, D> {
    law: D,
    spec: IntervalSpec<R>,
    classification: Classification<R>,
}

impl<R: Real, D: PivotLaw<R>> AsymmetricHpd<R, D> {
    pub fn new(law: D, spec: IntervalSpec<R>) -> Result<Self> {
        let classification = classify(&law, spec.alpha())?;
        Ok(Self {
            law,
            spec,
            classification,
        })
    }

    pub fn law(&self) -> &D {
        &self.law
    }

    pub fn spec(&self) -> IntervalSpec<R> {
        self.spec
    }

    pub fn class(&self) -> SkewClass {
        self.classification.class
    }

    pub fn y0(&self) -> Option<R> {
        self.classification.y0
    }

    pub fn classification(&self) -> Classification<R> {
        self.classification
    }

    pub fn bounds(&self) -> CoverageBounds<R> {
        coverage_bounds_asymmetric(&self.classification, self.spec)
    }

    /// Boundary-touching formula `[0, a₁ + a₂G⁻¹(1 − α + αG(−t))]`.
    pub fn boundary_interval(&self, pair: SufficientPair<R>) -> Result<CredibleInterval<R>> {
        let tail = self.constrained_mass(pair)?;
        let upper = pair.a1() + pair.a2() * self.law.isf_closed(self.spec.alpha() * tail)?;
        Ok(CredibleInterval {
            lower: R::zero(),
            upper,
            branch: Branch::BoundaryTouching,
            hpd: true,
        })
    }

    /// Interior formula `[a₁ − a₂γ₁(Δ), a₁ + a₂γ₂(Δ)]`. The lower end may be
    /// negative when the boundary formula is the one that applies.
    pub fn interior_interval(&self, pair: SufficientPair<R>) -> Result<CredibleInterval<R>> {
        let tail = self.constrained_mass(pair)?;
        let g = gamma_pair(&self.law, (R::one() - self.spec.alpha()) * tail)?;
        Ok(CredibleInterval {
            lower: pair.a1() - pair.a2() * g.gamma1,
            upper: pair.a1() + pair.a2() * g.gamma2,
            branch: Branch::Interior,
            hpd: true,
        })
    }

    pub fn interval(&self, pair: SufficientPair<R>) -> Result<CredibleInterval<R>> {
        let t = pair.t();
        let boundary = match self.classification.class {
            SkewClass::C2 => true,
            SkewClass::C3 => false,
            SkewClass::C1 => t <= self.classification.y0.expect("C1 carries y0"),
        };
        if boundary {
            return self.boundary_interval(pair);
        }
        let interior = self.interior_interval(pair)?;
        if interior.lower <= R::zero() {
            self.boundary_interval(pair)
        } else {
            Ok(interior)
        }
    }

    /// `1 − G(−a₁/a₂)`, the pivot mass of the constrained set.
    fn constrained_mass(&self, pair: SufficientPair<R>) -> Result<R> {
        let m = self.law.sf(-pair.t())?;
        if m < R::mass_floor() {
            return Err(HpdError::DegeneratePosterior(format!(
                "constrained set has pivot mass {m} at a1/a2 = {}",
                pair.t()
            )));
        }
        Ok(m)
    }

    pub fn posterior_cdf(&self, pair: SufficientPair<R>, y: R) -> Result<R> {
        posterior_cdf_asymmetric(&self.law, pair, y)
    }
}

/// Posterior cdf of `τ` on `[0, ∞)`:
/// `[G((y − a₁)/a₂) − G(−a₁/a₂)] / [1 − G(−a₁/a₂)]`.
pub fn posterior_cdf_asymmetric<R: Real, D: PivotLaw<R> + ?Sized>(
    law: &D,
    pair: SufficientPair<R>,
    y: R,
) -> Result<R> {
    if !(y >= R::zero()) || !y.is_finite() {
        return domain(format!("posterior cdf argument must be finite and nonnegative, got {y}"));
    }
    let lo = -pair.t();
    let denom = law.sf(lo)?;
    if denom < R::mass_floor() {
        return Err(HpdError::DegeneratePosterior(format!(
            "constrained set has pivot mass {denom}"
        )));
    }
    let z = (y - pair.a1()) / pair.a2();
    let v = if z > R::zero() {
        R::one() - law.eval_sf(z) / denom
    } else {
        (law.eval_cdf(z) - law.eval_cdf(lo)) / denom
    };
    Ok(v.max(R::zero()).min(R::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pivot::Pivot;

    #[test]
    fn endpoint_classes() {
        let c3 = gamma_pair(&Pivot::<f64>::neg_exponential(), 0.9).unwrap();
        assert_eq!(c3.gamma2, 0.0);
        assert!((c3.gamma1 - 10.0_f64.ln()).abs() < 1e-14);
        let c2 = gamma_pair(&Pivot::<f64>::exponential(), 0.9).unwrap();
        assert_eq!(c2.gamma1, 0.0);
        assert!((c2.gamma2 - 10.0_f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn gumbel_pair_matches_density_condition() {
        let g = Pivot::<f64>::log_gamma(1.0).unwrap();
        let p = gamma_pair(&g, 0.9).unwrap();
        let mass = g.cdf(p.gamma2).unwrap() - g.cdf(-p.gamma1).unwrap();
        assert!((mass - 0.9).abs() < 1e-12);
        let lhs = -p.gamma1 + p.gamma1.exp();
        let rhs = p.gamma2 + (-p.gamma2).exp();
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn gamma_example_anchors() {
        let g = Pivot::<f64>::log_gamma(3.0).unwrap();
        let c = classify(&g, 0.05).unwrap();
        assert_eq!(c.class, SkewClass::C1);
        assert!((c.y0.unwrap() - 0.912_968).abs() < 1e-5);
        assert!((c.boundary_mass - 0.979_353).abs() < 1e-5);
    }

    #[test]
    fn normal_y0_is_d0() {
        let n = Pivot::<f64>::normal();
        let c = classify(&n, 0.05).unwrap();
        let d0 = crate::symmetric::d0(&n, 0.05).unwrap();
        assert!((c.y0.unwrap() - d0).abs() < 1e-10);
    }

    #[test]
    fn u_sign_and_c2() {
        let e = Pivot::<f64>::exponential();
        assert_eq!(u_function(&e, 0.05, -0.7).unwrap(), 0.7);
        assert!(u_function(&e, 0.05, 0.5).is_err());
    }

    #[test]
    fn exponential_location_interval() {
        let h = AsymmetricHpd::new(Pivot::<f64>::neg_exponential(), IntervalSpec::new(0.1).unwrap()).unwrap();
        let i = h.interval(SufficientPair::new(1.0, 1.0).unwrap()).unwrap();
        assert!((i.lower - (0.9 + 0.1 * std::f64::consts::E).ln()).abs() < 1e-14);
        assert!((i.upper - 1.0).abs() < 1e-14);
        assert!((i.lower - 0.158_565_078_740_429).abs() < 1e-12);
    }

    #[test]
    fn c3_posterior_cdf() {
        let g = Pivot::<f64>::neg_exponential();
        let p = SufficientPair::new(1.0, 1.0).unwrap();
        let v = posterior_cdf_asymmetric(&g, p, 0.5).unwrap();
        let e = |y: f64| y.exp();
        assert!((v - (e(-0.5) - e(-1.0)) / (1.0 - e(-1.0))).abs() < 1e-15);
        assert_eq!(posterior_cdf_asymmetric(&g, p, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn skew_condition_on_c3_fails_at_one() {
        let c = check_skew_condition(&Pivot::<f64>::neg_exponential(), 100).unwrap();
        assert!(!c.holds);
        assert_eq!(c.worst_z, 1.0);
        assert!((c.worst_margin - 0.5).abs() < 1e-15);
    }
}
