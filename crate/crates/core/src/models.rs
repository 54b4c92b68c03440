//! Model adapters: raw observations plus a lower bound `a` become a
//! [`SufficientPair`] and the pivot law of `(τ − a₁)/a₂`.
//!
//! Every adapter also samples data for a given true `τ ≥ 0` (nuisance
//! parameters fixed by the descriptor) so coverage can be simulated.

use nalgebra::{DMatrix, DVector};
use rand::RngCore;
use rand_distr::{ChiSquared, Distribution, Exp1, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, HpdError, Result};
use crate::pivot::PivotLaw;
use crate::{CredibleInterval, Pivot, SufficientPair};

/// Symmetric noise laws for the location model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "law")]
pub enum Noise {
    Normal,
    Laplace,
    Logistic,
    Cauchy,
    Student { df: f64 },
}

impl Noise {
    fn pivot(self) -> Result<Pivot> {
        Ok(match self {
            Noise::Normal => Pivot::normal(),
            Noise::Laplace => Pivot::laplace(),
            Noise::Logistic => Pivot::logistic(),
            Noise::Cauchy => Pivot::cauchy(),
            Noise::Student { df } => Pivot::student(df)?,
        })
    }
}

/// Model families with a linear pivot.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `X = θ + σW`, `τ = θ − a`.
    Location { noise: Noise, sigma: f64 },
    /// `Y₁..Yₙ ~ N(θ₁, σ²)`, `τ = θ₁ − a`, pivot Student(n − 1).
    LocationScale { n: usize, sigma: f64 },
    /// `X ~ N_p(θ, Σ)`, `τ = wᵀθ − a`.
    MultivariateLocation { weights: Vec<f64>, covariance: DMatrix<f64> },
    /// `X₁..X_p ~ N(θᵢ, σ²)` independent of `X_{p+1} = σ√χ²_r`,
    /// `τ = wᵀθ − a`, pivot a scaled Student(r).
    MultivariateLocationScale { weights: Vec<f64>, df: f64, sigma: f64 },
    /// `X = θe^{δZ}`, `τ = log θ − log a`.
    LognormalScale { delta: f64 },
    /// `X ~ θ·Gamma(r, 1)`, `τ = log θ − log a`.
    GammaScale { shape: f64 },
    /// `Xᵢ = θᵢχ²_{νᵢ}/νᵢ` independent, `τ = log(θ₂/θ₁) − log a`.
    ScaleRatio { df1: f64, df2: f64 },
    /// `X = θ + E`, `E ~ Exp(1)`, `τ = θ − a`.
    ExponentialLocation,
    /// Multivariate Student sample `Xᵢ = θ + σZᵢ/√(χ²_d/d)` with a shared
    /// mixing variable; inference conditions on the residual configuration.
    SphericalConditional { d: f64, n: usize, sigma: f64 },
}

/// Map from a `τ`-interval to an interval for the original parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BackTransform {
    /// `η = τ + offset`.
    Shift { offset: f64 },
    /// `η = scale·e^τ`.
    Exp { scale: f64 },
}

impl BackTransform {
    pub fn apply(&self, tau: f64) -> f64 {
        match *self {
            BackTransform::Shift { offset } => tau + offset,
            BackTransform::Exp { scale } => scale * tau.exp(),
        }
    }
}

/// Interval on the parameter scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterInterval {
    pub lower: f64,
    pub upper: f64,
}

/// Result of binding data to a model.
#[derive(Debug, Clone, PartialEq)]
pub struct PivotBinding {
    pub pair: SufficientPair,
    pub pivot: Pivot,
    pub back_transform: BackTransform,
}

impl PivotBinding {
    pub fn back_transform_interval(&self, interval: &CredibleInterval) -> ParameterInterval {
        ParameterInterval {
            lower: self.back_transform.apply(interval.lower),
            upper: self.back_transform.apply(interval.upper),
        }
    }
}

/// A model family together with the lower bound `a` on its parameter of
/// interest.
#[derive(Debug, Clone)]
pub struct ModelDescriptor {
    family: Family,
    lower_bound: f64,
    pivot: Pivot,
    /// Lower Cholesky factor of the covariance (multivariate location only).
    chol: Option<DMatrix<f64>>,
}

fn positive(what: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        domain(format!("{what} must be positive and finite, got {v}"))
    }
}

fn check_weights(weights: &[f64]) -> Result<f64> {
    if weights.is_empty() || weights.iter().any(|w| !w.is_finite()) {
        return domain("weights must be a nonempty vector of finite values");
    }
    let norm2: f64 = weights.iter().map(|w| w * w).sum();
    if norm2 == 0.0 {
        return domain("weights must not all be zero");
    }
    Ok(norm2)
}

impl ModelDescriptor {
    pub fn new(family: Family, lower_bound: f64) -> Result<Self> {
        if !lower_bound.is_finite() {
            return domain(format!("lower bound must be finite, got {lower_bound}"));
        }
        let mut chol = None;
        let pivot = match &family {
            Family::Location { noise, sigma } => {
                positive("sigma", *sigma)?;
                noise.pivot()?
            }
            Family::LocationScale { n, sigma } => {
                if *n < 2 {
                    return domain(format!("location-scale needs n >= 2, got {n}"));
                }
                positive("sigma", *sigma)?;
                Pivot::student((*n - 1) as f64)?
            }
            Family::MultivariateLocation { weights, covariance } => {
                check_weights(weights)?;
                let p = weights.len();
                if covariance.nrows() != p || covariance.ncols() != p {
                    return domain(format!(
                        "covariance is {}x{} but there are {p} weights",
                        covariance.nrows(),
                        covariance.ncols()
                    ));
                }
                if (covariance - covariance.transpose()).abs().max() > 1e-12 * covariance.abs().max() {
                    return domain("covariance must be symmetric");
                }
                let c = covariance
                    .clone()
                    .cholesky()
                    .ok_or_else(|| HpdError::Domain("covariance must be positive definite".into()))?;
                chol = Some(c.l());
                Pivot::normal()
            }
            Family::MultivariateLocationScale { weights, df, sigma } => {
                let norm2 = check_weights(weights)?;
                positive("degrees of freedom", *df)?;
                positive("sigma", *sigma)?;
                Pivot::student(*df)?.scaled((norm2 / df).sqrt())?
            }
            Family::LognormalScale { delta } => {
                positive("delta", *delta)?;
                Pivot::normal()
            }
            Family::GammaScale { shape } => Pivot::log_gamma(positive("gamma shape", *shape)?)?,
            Family::ScaleRatio { df1, df2 } => {
                Pivot::log_fisher(positive("df1", *df1)?, positive("df2", *df2)?)?
            }
            Family::ExponentialLocation => Pivot::neg_exponential(),
            Family::SphericalConditional { d, n, sigma } => {
                positive("d", *d)?;
                positive("sigma", *sigma)?;
                if *n < 2 {
                    return domain(format!("spherical-conditional needs n >= 2, got {n}"));
                }
                Pivot::student(d + (*n as f64) - 1.0)?
            }
        };
        if matches!(
            family,
            Family::LognormalScale { .. } | Family::GammaScale { .. } | Family::ScaleRatio { .. }
        ) && !(lower_bound > 0.0)
        {
            return domain(format!("scale models need a positive lower bound, got {lower_bound}"));
        }
        Ok(Self {
            family,
            lower_bound,
            pivot,
            chol,
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn lower_bound(&self) -> f64 {
        self.lower_bound
    }

    /// Pivot law shared by every data set of this model.
    pub fn pivot(&self) -> Pivot {
        self.pivot
    }

    pub fn back_transform(&self) -> BackTransform {
        match self.family {
            Family::LognormalScale { .. } | Family::GammaScale { .. } | Family::ScaleRatio { .. } => {
                BackTransform::Exp {
                    scale: self.lower_bound,
                }
            }
            _ => BackTransform::Shift {
                offset: self.lower_bound,
            },
        }
    }

    /// Number of observations `bind` expects.
    pub fn data_len(&self) -> usize {
        match &self.family {
            Family::Location { .. }
            | Family::LognormalScale { .. }
            | Family::GammaScale { .. }
            | Family::ExponentialLocation => 1,
            Family::LocationScale { n, .. } | Family::SphericalConditional { n, .. } => *n,
            Family::MultivariateLocation { weights, .. } => weights.len(),
            Family::MultivariateLocationScale { weights, .. } => weights.len() + 1,
            Family::ScaleRatio { .. } => 2,
        }
    }

    pub fn bind(&self, data: &[f64]) -> Result<PivotBinding> {
        if data.len() != self.data_len() {
            return domain(format!(
                "expected {} observations, got {}",
                self.data_len(),
                data.len()
            ));
        }
        if let Some(x) = data.iter().find(|x| !x.is_finite()) {
            return domain(format!("observations must be finite, got {x}"));
        }
        let a = self.lower_bound;
        let (a1, a2) = match &self.family {
            Family::Location { sigma, .. } => (data[0] - a, *sigma),
            Family::ExponentialLocation => (data[0] - a, 1.0),
            Family::LocationScale { n, .. } => {
                let (mean, ss) = mean_and_ss(data);
                let s = (ss / (*n as f64 - 1.0)).sqrt();
                if !(s > 0.0) {
                    return Err(HpdError::DegenerateData("sample standard deviation is zero".into()));
                }
                (mean - a, s / (*n as f64).sqrt())
            }
            Family::MultivariateLocation { weights, covariance } => {
                let w = DVector::from_column_slice(weights);
                let x = DVector::from_column_slice(data);
                (w.dot(&x) - a, (w.dot(&(covariance * &w))).sqrt())
            }
            Family::MultivariateLocationScale { weights, .. } => {
                let p = weights.len();
                let s = data[p];
                if !(s > 0.0) {
                    return Err(HpdError::DegenerateData(format!(
                        "scale observation must be positive, got {s}"
                    )));
                }
                let lin: f64 = weights.iter().zip(data).map(|(w, x)| w * x).sum();
                (lin - a, s)
            }
            Family::LognormalScale { delta } => (positive_obs(data[0])?.ln() - a.ln(), *delta),
            Family::GammaScale { shape } => (positive_obs(data[0])?.ln() - shape.ln() - a.ln(), 1.0),
            Family::ScaleRatio { .. } => {
                let (x1, x2) = (positive_obs(data[0])?, positive_obs(data[1])?);
                ((x2 / x1).ln() - a.ln(), 1.0)
            }
            Family::SphericalConditional { d, n, sigma } => {
                let (mean, b) = mean_and_ss(data);
                let nf = *n as f64;
                let nu = d + nf - 1.0;
                (mean - a, ((sigma * sigma * d + b) / (nf * nu)).sqrt())
            }
        };
        Ok(PivotBinding {
            pair: SufficientPair::new(a1, a2)?,
            pivot: self.pivot,
            back_transform: self.back_transform(),
        })
    }

    /// One data set drawn at the true value `tau` (which may be negative
    /// only for probes outside the constrained set).
    pub fn simulate(&self, tau: f64, rng: &mut dyn RngCore) -> Result<Vec<f64>> {
        if !tau.is_finite() {
            return domain(format!("true tau must be finite, got {tau}"));
        }
        let a = self.lower_bound;
        let normal = |rng: &mut dyn RngCore| -> f64 { StandardNormal.sample(rng) };
        Ok(match &self.family {
            Family::Location { sigma, .. } => vec![a + tau + sigma * self.pivot.draw(rng)],
            Family::ExponentialLocation => {
                let e: f64 = Exp1.sample(rng);
                vec![a + tau + e]
            }
            Family::LocationScale { n, sigma } => (0..*n).map(|_| a + tau + sigma * normal(rng)).collect(),
            Family::MultivariateLocation { weights, .. } => {
                let w = DVector::from_column_slice(weights);
                let theta = &w * ((a + tau) / w.norm_squared());
                let chol = self.chol.as_ref().expect("factor computed at construction");
                let z = DVector::from_iterator(weights.len(), (0..weights.len()).map(|_| normal(rng)));
                (theta + chol * z).iter().copied().collect()
            }
            Family::MultivariateLocationScale { weights, df, sigma } => {
                let norm2: f64 = weights.iter().map(|w| w * w).sum();
                let scale = (a + tau) / norm2;
                let mut out: Vec<f64> = weights.iter().map(|w| w * scale + sigma * normal(rng)).collect();
                let chi: f64 = ChiSquared::new(*df).expect("validated df").sample(rng);
                out.push(sigma * chi.sqrt());
                out
            }
            Family::LognormalScale { delta } => vec![a * tau.exp() * (delta * normal(rng)).exp()],
            Family::GammaScale { shape } => {
                let g: f64 = Gamma::new(*shape, 1.0).expect("validated shape").sample(rng);
                vec![a * tau.exp() * g]
            }
            Family::ScaleRatio { df1, df2 } => {
                let c1: f64 = ChiSquared::new(*df1).expect("validated df").sample(rng);
                let c2: f64 = ChiSquared::new(*df2).expect("validated df").sample(rng);
                vec![c1 / df1, a * tau.exp() * c2 / df2]
            }
            Family::SphericalConditional { d, n, sigma } => {
                let chi: f64 = ChiSquared::new(*d).expect("validated d").sample(rng);
                let mix = sigma / (chi / d).sqrt();
                (0..*n).map(|_| a + tau + mix * normal(rng)).collect()
            }
        })
    }

    /// Residual sum of squares `B(v) = Σ(xᵢ − x̄)²`, the statistic the
    /// spherical-conditional pivot law depends on.
    pub fn residual_ss(data: &[f64]) -> f64 {
        mean_and_ss(data).1
    }
}

fn positive_obs(x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x)
    } else {
        domain(format!("scale observations must be positive, got {x}"))
    }
}

fn mean_and_ss(data: &[f64]) -> (f64, f64) {
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let ss = data.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, ss)
}
