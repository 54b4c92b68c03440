use rand::RngCore;
use rand_distr::{ChiSquared, Distribution, Exp1, Gamma, Open01, StandardNormal, StudentT};

use super::{solve_lower_tail, solve_upper_tail, PivotLaw, Support};
use crate::error::{domain, Result};
use crate::special::{
    beta_inc_with_complement, gamma_p, gamma_q, ln_beta, ln_gamma, logistic, normal_cdf,
    normal_isf, normal_pdf, normal_quantile, softplus,
};
use crate::Real;

/// Standardized (unit scale, mode 0) catalog families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family<R> {
    Normal,
    /// Student t with `df` degrees of freedom.
    Student { df: R },
    Laplace,
    Logistic,
    Cauchy,
    /// Density `eʸ` on `y ≤ 0` (increasing density, `G(0) = 1`).
    NegExponential,
    /// Density `e^{−y}` on `y ≥ 0` (decreasing density, `G(0) = 0`).
    Exponential,
    /// Law of `log r − log X`, `X ~ Gamma(r, 1)`: the gamma scale pivot
    /// `G(y) = P(Gamma(r, 1) ≥ r e^{−y})`.
    LogGamma { shape: R },
    /// Law of `log F` for `F ~ Fisher(df1, df2)`, i.e. the log ratio of two
    /// independent mean-one gammas. Mode is at 0 without further shift.
    LogFisher { df1: R, df2: R },
}

/// A catalog pivot law: a standardized family times a positive scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pivot<R> {
    family: Family<R>,
    scale: R,
}

fn positive<R: Real>(what: &str, v: R) -> Result<R> {
    if v > R::zero() && v.is_finite() {
        Ok(v)
    } else {
        domain(format!("{what} must be positive and finite, got {v}"))
    }
}

impl<R: Real> Pivot<R> {
    fn unit(family: Family<R>) -> Self {
        Self {
            family,
            scale: R::one(),
        }
    }

    pub fn normal() -> Self {
        Self::unit(Family::Normal)
    }

    pub fn student(df: R) -> Result<Self> {
        Ok(Self::unit(Family::Student {
            df: positive("degrees of freedom", df)?,
        }))
    }

    pub fn laplace() -> Self {
        Self::unit(Family::Laplace)
    }

    pub fn logistic() -> Self {
        Self::unit(Family::Logistic)
    }

    pub fn cauchy() -> Self {
        Self::unit(Family::Cauchy)
    }

    pub fn neg_exponential() -> Self {
        Self::unit(Family::NegExponential)
    }

    pub fn exponential() -> Self {
        Self::unit(Family::Exponential)
    }

    pub fn log_gamma(shape: R) -> Result<Self> {
        Ok(Self::unit(Family::LogGamma {
            shape: positive("gamma shape", shape)?,
        }))
    }

    pub fn log_fisher(df1: R, df2: R) -> Result<Self> {
        Ok(Self::unit(Family::LogFisher {
            df1: positive("numerator degrees of freedom", df1)?,
            df2: positive("denominator degrees of freedom", df2)?,
        }))
    }

    /// Same family with the scale multiplied by `factor`.
    pub fn scaled(self, factor: R) -> Result<Self> {
        let factor = positive("scale", factor)?;
        Ok(Self {
            family: self.family,
            scale: self.scale * factor,
        })
    }

    pub fn family(&self) -> Family<R> {
        self.family
    }

    pub fn scale(&self) -> R {
        self.scale
    }

    /// Shift `m` applied to the raw log statistic so the density mode sits
    /// at 0: `log r` for the gamma pivot, `log(df1/df2)` for the log-Fisher
    /// family written as `log(G₁/G₂) − m`, and 0 elsewhere.
    pub fn centering_shift(&self) -> R {
        match self.family {
            Family::LogGamma { shape } => shape.ln(),
            Family::LogFisher { df1, df2 } => (df1 / df2).ln(),
            _ => R::zero(),
        }
    }

    fn std_support(&self) -> Support<R> {
        match self.family {
            Family::NegExponential => Support {
                lo: R::neg_infinity(),
                hi: R::zero(),
            },
            Family::Exponential => Support {
                lo: R::zero(),
                hi: R::infinity(),
            },
            _ => Support::real_line(),
        }
    }

    fn std_cdf(&self, z: R) -> R {
        let one = R::one();
        let half = R::lit(0.5);
        match self.family {
            Family::Normal => normal_cdf(z),
            Family::Student { df } => {
                let tail = student_tail(df, z.abs());
                if z < R::zero() {
                    tail
                } else {
                    one - tail
                }
            }
            Family::Laplace => {
                if z < R::zero() {
                    half * z.exp()
                } else {
                    one - half * (-z).exp()
                }
            }
            Family::Logistic => logistic(z),
            Family::Cauchy => cauchy_cdf(z),
            Family::NegExponential => {
                if z < R::zero() {
                    z.exp()
                } else {
                    one
                }
            }
            Family::Exponential => {
                if z > R::zero() {
                    -(-z).exp_m1()
                } else {
                    R::zero()
                }
            }
            Family::LogGamma { shape } => gamma_q(shape, shape * (-z).exp()),
            Family::LogFisher { df1, df2 } => {
                let (k1, k2) = (half * df1, half * df2);
                let v = z + (k1 / k2).ln();
                beta_inc_with_complement(k1, k2, logistic(v), logistic(-v))
            }
        }
    }

    fn std_sf(&self, z: R) -> R {
        let half = R::lit(0.5);
        match self.family {
            Family::Normal => normal_cdf(-z),
            Family::Student { df } => {
                let tail = student_tail(df, z.abs());
                if z > R::zero() {
                    tail
                } else {
                    R::one() - tail
                }
            }
            Family::Laplace | Family::Logistic | Family::Cauchy => self.std_cdf(-z),
            Family::NegExponential => {
                if z < R::zero() {
                    -z.exp_m1()
                } else {
                    R::zero()
                }
            }
            Family::Exponential => {
                if z > R::zero() {
                    (-z).exp()
                } else {
                    R::one()
                }
            }
            Family::LogGamma { shape } => gamma_p(shape, shape * (-z).exp()),
            Family::LogFisher { df1, df2 } => {
                let (k1, k2) = (half * df1, half * df2);
                let v = z + (k1 / k2).ln();
                beta_inc_with_complement(k2, k1, logistic(-v), logistic(v))
            }
        }
    }

    fn std_density(&self, z: R) -> R {
        let half = R::lit(0.5);
        let one = R::one();
        match self.family {
            Family::Normal => normal_pdf(z),
            Family::Student { df } => {
                let ln_norm = ln_gamma(half * (df + one))
                    - ln_gamma(half * df)
                    - half * (df * R::PI()).ln();
                (ln_norm - half * (df + one) * (z * z / df).ln_1p()).exp()
            }
            Family::Laplace => half * (-z.abs()).exp(),
            Family::Logistic => {
                let e = (-z.abs()).exp();
                e / ((one + e) * (one + e))
            }
            Family::Cauchy => one / (R::PI() * (one + z * z)),
            Family::NegExponential => {
                if z <= R::zero() {
                    z.exp()
                } else {
                    R::zero()
                }
            }
            Family::Exponential => {
                if z >= R::zero() {
                    (-z).exp()
                } else {
                    R::zero()
                }
            }
            Family::LogGamma { shape } => {
                let e = (-z).exp();
                if !e.is_finite() {
                    return R::zero();
                }
                (shape * shape.ln() - ln_gamma(shape) - shape * (z + e)).exp()
            }
            Family::LogFisher { df1, df2 } => {
                let (k1, k2) = (half * df1, half * df2);
                let v = z + (k1 / k2).ln();
                (k1 * v - (k1 + k2) * softplus(v) - ln_beta(k1, k2)).exp()
            }
        }
    }

    /// Closed-form quantiles where the family has one; `None` defers to
    /// numeric inversion.
    fn std_quantile_closed_form(&self, p: R) -> Option<R> {
        let half = R::lit(0.5);
        let two = R::lit(2.0);
        let lower = p <= half;
        let tail = if lower { p } else { R::one() - p };
        let signed = |v: R| if lower { v } else { -v };
        match self.family {
            Family::Normal => Some(normal_quantile(p)),
            Family::Student { df } if df == R::one() => Some(signed(cauchy_lower_quantile(tail))),
            Family::Student { df } if df == two => {
                // t = (2p − 1)/sqrt(2p(1 − p)) written for the lower tail
                Some(signed(-(R::one() - two * tail) / (two * tail * (R::one() - tail)).sqrt()))
            }
            Family::Laplace => Some(signed((two * tail).ln())),
            Family::Logistic => Some(p.ln() - (-p).ln_1p()),
            Family::Cauchy => Some(signed(cauchy_lower_quantile(tail))),
            Family::NegExponential => Some(p.ln()),
            Family::Exponential => Some(-(-p).ln_1p()),
            _ => None,
        }
    }

    fn std_isf_closed_form(&self, q: R) -> Option<R> {
        match self.family {
            Family::Normal => Some(normal_isf(q)),
            Family::NegExponential => Some((-q).ln_1p()),
            Family::Exponential => Some(-q.ln()),
            Family::LogGamma { .. } | Family::LogFisher { .. } => None,
            Family::Student { df } if df != R::one() && df != R::lit(2.0) => None,
            // remaining closed forms are symmetric
            _ => self.std_quantile_closed_form(q).map(|v| -v),
        }
    }
}

fn student_tail<R: Real>(df: R, t_abs: R) -> R {
    // P(T > |t|) = I_{ν/(ν+t²)}(ν/2, 1/2) / 2
    let half = R::lit(0.5);
    let t2 = t_abs * t_abs;
    if !t2.is_finite() {
        return R::zero();
    }
    let denom = df + t2;
    half * beta_inc_with_complement(half * df, half, df / denom, t2 / denom)
}

fn cauchy_cdf<R: Real>(z: R) -> R {
    let one = R::one();
    if z < -one {
        (-one / z).atan() / R::PI()
    } else if z > one {
        one - (one / z).atan() / R::PI()
    } else {
        R::lit(0.5) + z.atan() / R::PI()
    }
}

fn cauchy_lower_quantile<R: Real>(p: R) -> R {
    // tan(π(p − 1/2)) = −1/tan(πp)
    -R::one() / (R::PI() * p).tan()
}

impl<R: Real> PivotLaw<R> for Pivot<R> {
    fn name(&self) -> String {
        let base = match self.family {
            Family::Normal => "normal".to_string(),
            Family::Student { df } => format!("student(df={df})"),
            Family::Laplace => "laplace".to_string(),
            Family::Logistic => "logistic".to_string(),
            Family::Cauchy => "cauchy".to_string(),
            Family::NegExponential => "neg-exponential".to_string(),
            Family::Exponential => "exponential".to_string(),
            Family::LogGamma { shape } => format!("log-gamma(r={shape})"),
            Family::LogFisher { df1, df2 } => format!("log-fisher(df1={df1}, df2={df2})"),
        };
        if self.scale == R::one() {
            base
        } else {
            format!("{base} x {}", self.scale)
        }
    }

    fn support(&self) -> Support<R> {
        let s = self.std_support();
        Support {
            lo: s.lo * self.scale,
            hi: s.hi * self.scale,
        }
    }

    fn is_symmetric(&self) -> bool {
        match self.family {
            Family::Normal
            | Family::Student { .. }
            | Family::Laplace
            | Family::Logistic
            | Family::Cauchy => true,
            Family::LogFisher { df1, df2 } => df1 == df2,
            _ => false,
        }
    }

    fn eval_cdf(&self, y: R) -> R {
        self.std_cdf(y / self.scale)
    }

    fn eval_sf(&self, y: R) -> R {
        self.std_sf(y / self.scale)
    }

    fn eval_density(&self, y: R) -> R {
        self.std_density(y / self.scale) / self.scale
    }

    fn eval_quantile(&self, p: R) -> Result<R> {
        if let Some(z) = self.std_quantile_closed_form(p) {
            return Ok(z * self.scale);
        }
        if p <= R::lit(0.5) {
            solve_lower_tail(self, p)
        } else {
            solve_upper_tail(self, R::one() - p)
        }
    }

    fn eval_isf(&self, q: R) -> Result<R> {
        if let Some(z) = self.std_isf_closed_form(q) {
            return Ok(z * self.scale);
        }
        if self.is_symmetric() {
            return self.eval_quantile(q).map(|v| -v);
        }
        if q <= R::lit(0.5) {
            solve_upper_tail(self, q)
        } else {
            solve_lower_tail(self, R::one() - q)
        }
    }

    fn draw(&self, rng: &mut dyn RngCore) -> R {
        let z: f64 = match self.family {
            Family::Normal => StandardNormal.sample(rng),
            Family::Student { df } => StudentT::new(df.to_f64_lossy())
                .expect("validated degrees of freedom")
                .sample(rng),
            Family::Laplace => {
                let u: f64 = Open01.sample(rng);
                if u < 0.5 {
                    (2.0 * u).ln()
                } else {
                    -(2.0 * (1.0 - u)).ln()
                }
            }
            Family::Logistic => {
                let u: f64 = Open01.sample(rng);
                u.ln() - (-u).ln_1p()
            }
            Family::Cauchy => {
                let u: f64 = Open01.sample(rng);
                (std::f64::consts::PI * (u - 0.5)).tan()
            }
            Family::NegExponential => {
                let e: f64 = Exp1.sample(rng);
                -e
            }
            Family::Exponential => Exp1.sample(rng),
            Family::LogGamma { shape } => {
                let r = shape.to_f64_lossy();
                let x: f64 = Gamma::new(r, 1.0).expect("validated shape").sample(rng);
                r.ln() - x.ln()
            }
            Family::LogFisher { df1, df2 } => {
                let (n1, n2) = (df1.to_f64_lossy(), df2.to_f64_lossy());
                let c1: f64 = ChiSquared::new(n1).expect("validated df").sample(rng);
                let c2: f64 = ChiSquared::new(n2).expect("validated df").sample(rng);
                (c1 / n1).ln() - (c2 / n2).ln()
            }
        };
        R::lit(z) * self.scale
    }
}
