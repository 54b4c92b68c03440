//! Interval types shared by the symmetric and asymmetric constructions, and
//! [`Hpd`], which picks the construction from the pivot's symmetry flag.

use serde::{Deserialize, Serialize};

use crate::asymmetric::{AsymmetricHpd, SkewClass};
use crate::error::{domain, ensure_finite, ensure_probability, Result};
use crate::pivot::PivotLaw;
use crate::symmetric::SymmetricHpd;
use crate::Real;

/// Credibility specification: miscoverage `alpha` for the constraint
/// `τ(θ) ≥ 0`. General lower bounds are absorbed by the model adapters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalSpec<R> {
    alpha: R,
}

impl<R: Real> IntervalSpec<R> {
    pub fn new(alpha: R) -> Result<Self> {
        ensure_probability("alpha", alpha)?;
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> R {
        self.alpha
    }
}

/// Location and scale summaries `(a₁(x), a₂(x))` of a linear pivot
/// `(a₁ − τ)/a₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SufficientPair<R> {
    a1: R,
    a2: R,
}

impl<R: Real> SufficientPair<R> {
    pub fn new(a1: R, a2: R) -> Result<Self> {
        ensure_finite("a1", a1)?;
        ensure_finite("a2", a2)?;
        if a2 <= R::zero() {
            return domain(format!("a2 must be positive, got {a2}"));
        }
        Ok(Self { a1, a2 })
    }

    pub fn a1(&self) -> R {
        self.a1
    }

    pub fn a2(&self) -> R {
        self.a2
    }

    /// Standardized location `a₁/a₂`.
    pub fn t(&self) -> R {
        self.a1 / self.a2
    }
}

/// Which formula produced the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Lower end pinned at the constraint boundary 0.
    BoundaryTouching,
    Interior,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::BoundaryTouching => "boundary-touching",
            Branch::Interior => "interior",
        })
    }
}

/// A credible interval `[lower, upper]` for `τ`, with `0 ≤ lower ≤ upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CredibleInterval<R> {
    pub lower: R,
    pub upper: R,
    pub branch: Branch,
    /// False when the pivot density is not unimodal: the interval keeps its
    /// credibility and coverage but is no longer the shortest.
    pub hpd: bool,
}

impl<R: Real> CredibleInterval<R> {
    pub fn contains(&self, tau: R) -> bool {
        self.lower <= tau && tau <= self.upper
    }

    pub fn length(&self) -> R {
        self.upper - self.lower
    }
}

/// Whether a uniform coverage bound holds from below or from above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundDirection {
    Floor,
    Ceiling,
}

impl std::fmt::Display for BoundDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundDirection::Floor => "floor",
            BoundDirection::Ceiling => "ceiling",
        })
    }
}

/// Frequentist coverage facts for one construction: a uniform bound over
/// `τ ≥ 0`, the exact value at `τ = 0`, and the limit as `τ → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageBounds<R> {
    pub uniform_bound: R,
    pub direction: BoundDirection,
    pub boundary_value: R,
    pub limit: R,
}

/// Interval construction prepared for one pivot law and level: the symmetric
/// one when the law is flagged symmetric, the asymmetric one otherwise.
#[derive(Debug, Clone)]
pub enum Hpd<R: Real, D: PivotLaw<R>> {
    Symmetric(SymmetricHpd<R, D>),
    Asymmetric(AsymmetricHpd<R, D>),
}

impl<R: Real, D: PivotLaw<R>> Hpd<R, D> {
    pub fn new(law: D, spec: IntervalSpec<R>) -> Result<Self> {
        if law.is_symmetric() {
            SymmetricHpd::new(law, spec).map(Self::Symmetric)
        } else {
            AsymmetricHpd::new(law, spec).map(Self::Asymmetric)
        }
    }

    pub fn law(&self) -> &D {
        match self {
            Self::Symmetric(h) => h.law(),
            Self::Asymmetric(h) => h.law(),
        }
    }

    pub fn spec(&self) -> IntervalSpec<R> {
        match self {
            Self::Symmetric(h) => h.spec(),
            Self::Asymmetric(h) => h.spec(),
        }
    }

    pub fn interval(&self, pair: SufficientPair<R>) -> Result<CredibleInterval<R>> {
        match self {
            Self::Symmetric(h) => h.interval(pair),
            Self::Asymmetric(h) => h.interval(pair),
        }
    }

    pub fn posterior_cdf(&self, pair: SufficientPair<R>, y: R) -> Result<R> {
        match self {
            Self::Symmetric(h) => h.posterior_cdf(pair, y),
            Self::Asymmetric(h) => h.posterior_cdf(pair, y),
        }
    }

    pub fn bounds(&self) -> CoverageBounds<R> {
        match self {
            Self::Symmetric(h) => h.bounds(),
            Self::Asymmetric(h) => h.bounds(),
        }
    }

    /// Standardized threshold on `a₁/a₂` separating the two branches: `d₀`
    /// or `y₀`. `None` for classes where one branch always fires.
    pub fn threshold(&self) -> Option<R> {
        match self {
            Self::Symmetric(h) => Some(h.d0()),
            Self::Asymmetric(h) => h.y0(),
        }
    }

    pub fn class(&self) -> SkewClass {
        match self {
            Self::Symmetric(_) => SkewClass::C1,
            Self::Asymmetric(h) => h.class(),
        }
    }
}
