use std::fmt;
use std::sync::Arc;

use rand::RngCore;
use rand_distr::{Distribution, Open01};

use super::{self_check, CheckOptions, PivotLaw, Support};
use crate::error::{HpdError, Result};
use crate::quadrature::integrate;
use crate::Real;

type Kernel<R> = Arc<dyn Fn(R) -> R + Send + Sync>;

/// A user supplied pivot law. Only the density is required; the cdf falls
/// back to quadrature, quantiles to numeric inversion and draws to
/// inverse-cdf sampling.
///
/// Obtainable only through [`CustomPivotBuilder::register`], which runs
/// [`self_check`].
#[derive(Clone)]
pub struct CustomPivot<R> {
    name: String,
    support: Support<R>,
    symmetric: bool,
    unimodal: bool,
    density: Kernel<R>,
    cdf: Option<Kernel<R>>,
    sf: Option<Kernel<R>>,
    quantile: Option<Kernel<R>>,
}

impl<R> fmt::Debug for CustomPivot<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPivot")
            .field("name", &self.name)
            .field("symmetric", &self.symmetric)
            .field("unimodal", &self.unimodal)
            .finish_non_exhaustive()
    }
}

pub struct CustomPivotBuilder<R> {
    law: CustomPivot<R>,
    options: CheckOptions<R>,
}

impl<R: Real> CustomPivotBuilder<R> {
    pub fn new(name: impl Into<String>, density: impl Fn(R) -> R + Send + Sync + 'static) -> Self {
        Self {
            law: CustomPivot {
                name: name.into(),
                support: Support::real_line(),
                symmetric: false,
                unimodal: true,
                density: Arc::new(density),
                cdf: None,
                sf: None,
                quantile: None,
            },
            options: CheckOptions::default(),
        }
    }

    pub fn support(mut self, lo: R, hi: R) -> Self {
        self.law.support = Support { lo, hi };
        self
    }

    pub fn symmetric(mut self, yes: bool) -> Self {
        self.law.symmetric = yes;
        self
    }

    pub fn cdf(mut self, f: impl Fn(R) -> R + Send + Sync + 'static) -> Self {
        self.law.cdf = Some(Arc::new(f));
        self
    }

    pub fn sf(mut self, f: impl Fn(R) -> R + Send + Sync + 'static) -> Self {
        self.law.sf = Some(Arc::new(f));
        self
    }

    pub fn quantile(mut self, f: impl Fn(R) -> R + Send + Sync + 'static) -> Self {
        self.law.quantile = Some(Arc::new(f));
        self
    }

    /// Accept a density that is not unimodal. The interval constructions
    /// still run but label their output as not HPD.
    pub fn allow_multimodal(mut self, yes: bool) -> Self {
        self.options.allow_multimodal = yes;
        self
    }

    pub fn check_options(mut self, options: CheckOptions<R>) -> Self {
        self.options = options;
        self
    }

    /// Validates the law and returns it, or a registration error listing
    /// every failed check.
    pub fn register(mut self) -> Result<CustomPivot<R>> {
        let s = self.law.support;
        if s.lo.is_nan() || s.hi.is_nan() || s.lo >= s.hi {
            return Err(HpdError::Registration(format!(
                "{}: empty support ({}, {})",
                self.law.name, s.lo, s.hi
            )));
        }
        self.law.unimodal = !self.options.allow_multimodal;
        let report = self_check(&self.law, &self.options);
        if report.passed() {
            Ok(self.law)
        } else {
            Err(HpdError::Registration(format!(
                "{}: {}",
                self.law.name,
                report.failures.join("; ")
            )))
        }
    }
}

impl<R: Real> CustomPivot<R> {
    fn quad_tol() -> R {
        R::lit(1e-14).max(R::epsilon())
    }

    fn mass_below(&self, y: R) -> R {
        integrate(|t| (self.density)(t), self.support.lo, y, Self::quad_tol())
    }

    fn mass_above(&self, y: R) -> R {
        integrate(|t| (self.density)(t), y, self.support.hi, Self::quad_tol())
    }
}

impl<R: Real> PivotLaw<R> for CustomPivot<R> {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn support(&self) -> Support<R> {
        self.support
    }

    fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    fn is_unimodal(&self) -> bool {
        self.unimodal
    }

    fn eval_cdf(&self, y: R) -> R {
        if y <= self.support.lo {
            return R::zero();
        }
        if y >= self.support.hi {
            return R::one();
        }
        if let Some(f) = &self.cdf {
            return f(y);
        }
        if let Some(f) = &self.sf {
            return R::one() - f(y);
        }
        // integrate over the lighter side
        let split = if self.support.contains(R::zero()) {
            R::zero()
        } else {
            R::lit(0.5) * (self.support.lo.max(-R::max_value()) + self.support.hi.min(R::max_value()))
        };
        if y <= split {
            self.mass_below(y)
        } else {
            R::one() - self.mass_above(y)
        }
    }

    fn eval_sf(&self, y: R) -> R {
        if y <= self.support.lo {
            return R::one();
        }
        if y >= self.support.hi {
            return R::zero();
        }
        if let Some(f) = &self.sf {
            return f(y);
        }
        if self.cdf.is_some() || y <= R::zero() {
            return R::one() - self.eval_cdf(y);
        }
        self.mass_above(y)
    }

    fn eval_density(&self, y: R) -> R {
        if self.support.contains(y) {
            (self.density)(y)
        } else {
            R::zero()
        }
    }

    fn eval_quantile(&self, p: R) -> Result<R> {
        match &self.quantile {
            Some(q) => Ok(q(p)),
            None if p <= R::lit(0.5) => super::solve_lower_tail(self, p),
            None => super::solve_upper_tail(self, R::one() - p),
        }
    }

    fn draw(&self, rng: &mut dyn RngCore) -> R {
        let u: f64 = Open01.sample(rng);
        self.eval_quantile(R::lit(u))
            .expect("quantile inversion succeeded during registration")
    }
}
