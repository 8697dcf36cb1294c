//! Weight distributions: raw moments `V_l` of the summands and their
//! exponential generating function `H(u) = sum_k V_k u^k / k!`.
//!
//! Built-in models carry closed forms for `H`, `H'`, `H''`; the series is
//! never summed for them. A custom model only knows a finite prefix of its
//! moments and refuses to answer beyond it.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::math;
use crate::number::Number;

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Unit,
    GaussianCentered {
        v2: Number,
    },
    Gamma {
        shape: Number,
        scale: Number,
    },
    BernoulliCentered,
    Exponential,
    LogFactorial,
    Custom {
        moments: Vec<Number>,
    },
    /// `exp(-u V_1) H(u)`: the law of `W - E W`.
    Hat(Box<WeightModel>),
    /// `H(u) - u V_1`: not a distribution, only used by the asymptotics.
    Tilde(Box<WeightModel>),
}

/// Public description of a model's family and parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Unit,
    GaussianCentered { v2: f64 },
    Gamma { shape: f64, scale: f64 },
    BernoulliCentered,
    Exponential,
    LogFactorial,
    Custom,
    Hat,
    Tilde,
}

/// An immutable weight model.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightModel {
    name: String,
    kind: Kind,
}

fn positive(name: &'static str, v: &Number) -> Result<()> {
    if v.is_positive() && v.to_f64().is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {v}")))
    }
}

impl WeightModel {
    /// `W = 1`: the moments are the classical Bell polynomials.
    pub fn unit() -> Self {
        WeightModel {
            name: "unit".into(),
            kind: Kind::Unit,
        }
    }

    /// `W ~ N(0, V_2)`.
    pub fn gaussian_centered(v2: Number) -> Result<Self> {
        positive("V2", &v2)?;
        Ok(WeightModel {
            name: format!("gaussian:{v2}"),
            kind: Kind::GaussianCentered { v2 },
        })
    }

    /// Gamma law with shape `m` and scale `theta`.
    pub fn gamma(shape: Number, scale: Number) -> Result<Self> {
        positive("m", &shape)?;
        positive("theta", &scale)?;
        Ok(WeightModel {
            name: format!("gamma:{shape},{scale}"),
            kind: Kind::Gamma { shape, scale },
        })
    }

    /// `W = +-1` with probability 1/2 each.
    pub fn bernoulli_centered() -> Self {
        WeightModel {
            name: "bernoulli".into(),
            kind: Kind::BernoulliCentered,
        }
    }

    /// `W ~ Exp(1)`, `V_k = k!`.
    pub fn exponential() -> Self {
        WeightModel {
            name: "exponential".into(),
            kind: Kind::Exponential,
        }
    }

    /// `V_k = (k-1)!` for `k >= 1`.
    pub fn log_factorial() -> Self {
        WeightModel {
            name: "logfact".into(),
            kind: Kind::LogFactorial,
        }
    }

    /// Finite moment prefix `[V_0 = 1, V_1, ..., V_L]`; the horizon is `L`.
    pub fn custom(moments: Vec<Number>) -> Result<Self> {
        match moments.first() {
            Some(v0) if *v0 == Number::one() || v0.to_f64() == 1.0 => {}
            _ => return Err(Error::invalid("moments", "the list must start with V_0 = 1")),
        }
        if moments.iter().any(|v| !v.to_f64().is_finite()) {
            return Err(Error::invalid("moments", "moments must be finite"));
        }
        Ok(WeightModel {
            name: format!("custom[L={}]", moments.len() - 1),
            kind: Kind::Custom { moments },
        })
    }

    /// Model of the centered weight `W - E W`, generating function `exp(-u V_1) H(u)`.
    pub fn hat_transform(&self) -> WeightModel {
        if self.first_moment_is_zero() {
            return self.clone();
        }
        WeightModel {
            name: format!("hat({})", self.name),
            kind: Kind::Hat(Box::new(self.clone())),
        }
    }

    /// Pseudo-model with generating function `H(u) - u V_1`, governing the
    /// moments of the centered compound sum.
    pub fn tilde_transform(&self) -> WeightModel {
        if self.first_moment_is_zero() {
            return self.clone();
        }
        WeightModel {
            name: format!("tilde({})", self.name),
            kind: Kind::Tilde(Box::new(self.clone())),
        }
    }

    fn first_moment_is_zero(&self) -> bool {
        self.moment(1).map(|v| v.is_zero()).unwrap_or(false)
    }

    pub fn family(&self) -> Family {
        match &self.kind {
            Kind::Unit => Family::Unit,
            Kind::GaussianCentered { v2 } => Family::GaussianCentered { v2: v2.to_f64() },
            Kind::Gamma { shape, scale } => Family::Gamma {
                shape: shape.to_f64(),
                scale: scale.to_f64(),
            },
            Kind::BernoulliCentered => Family::BernoulliCentered,
            Kind::Exponential => Family::Exponential,
            Kind::LogFactorial => Family::LogFactorial,
            Kind::Custom { .. } => Family::Custom,
            Kind::Hat(_) => Family::Hat,
            Kind::Tilde(_) => Family::Tilde,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// True when every odd moment vanishes.
    pub fn parity_even_only(&self) -> bool {
        match &self.kind {
            Kind::GaussianCentered { .. } | Kind::BernoulliCentered => true,
            Kind::Hat(m) | Kind::Tilde(m) => m.parity_even_only(),
            _ => false,
        }
    }

    /// True for tilde models, which must never be sampled.
    pub fn is_pseudo(&self) -> bool {
        match &self.kind {
            Kind::Tilde(_) => true,
            Kind::Hat(m) => m.is_pseudo(),
            _ => false,
        }
    }

    /// True when `H` is known in closed form (not a truncated prefix).
    pub fn has_closed_form(&self) -> bool {
        match &self.kind {
            Kind::Custom { .. } => false,
            Kind::Hat(m) | Kind::Tilde(m) => m.has_closed_form(),
            _ => true,
        }
    }

    /// Largest available moment order, `None` when unbounded.
    pub fn horizon(&self) -> Option<usize> {
        match &self.kind {
            Kind::Custom { moments } => Some(moments.len() - 1),
            Kind::Hat(m) | Kind::Tilde(m) => m.horizon(),
            _ => None,
        }
    }

    /// True when every moment is an exact rational.
    pub fn is_exact(&self) -> bool {
        match &self.kind {
            Kind::GaussianCentered { v2 } => v2.is_exact(),
            Kind::Gamma { shape, scale } => shape.is_exact() && scale.is_exact(),
            Kind::Custom { moments } => moments.iter().all(Number::is_exact),
            Kind::Hat(m) | Kind::Tilde(m) => m.is_exact(),
            _ => true,
        }
    }

    /// Supremum `u_0` of the convergence interval, `None` for infinity.
    pub fn radius(&self) -> Option<f64> {
        match &self.kind {
            Kind::Gamma { scale, .. } => Some(1.0 / scale.to_f64()),
            Kind::Exponential | Kind::LogFactorial => Some(1.0),
            Kind::Hat(m) | Kind::Tilde(m) => m.radius(),
            _ => None,
        }
    }

    fn check_horizon(&self, l: usize) -> Result<()> {
        match self.horizon() {
            Some(h) if l > h => Err(Error::HorizonExceeded {
                requested: l,
                horizon: h,
            }),
            _ => Ok(()),
        }
    }

    /// Raw moment `V_l`, exact whenever the parameters are.
    pub fn moment(&self, l: usize) -> Result<Number> {
        self.check_horizon(l)?;
        if l == 0 {
            return Ok(Number::one());
        }
        Ok(match &self.kind {
            Kind::Unit => Number::one(),
            Kind::GaussianCentered { v2 } => {
                if l % 2 == 1 {
                    Number::zero()
                } else {
                    let half = (l / 2) as u32;
                    v2.powi(half).mul(&Number::from_big(double_factorial(l - 1)))
                }
            }
            Kind::Gamma { shape, scale } => {
                let mut rising = Number::one();
                for i in 0..l {
                    rising = rising.mul(&shape.add(&Number::from_int(i as i64)));
                }
                scale.powi(l as u32).mul(&rising)
            }
            Kind::BernoulliCentered => {
                if l % 2 == 1 {
                    Number::zero()
                } else {
                    Number::one()
                }
            }
            Kind::Exponential => Number::from_big(factorial(l)),
            Kind::LogFactorial => Number::from_big(factorial(l - 1)),
            Kind::Custom { moments } => moments[l].clone(),
            Kind::Hat(m) => {
                let mean = m.moment(1)?;
                let shift = mean.neg();
                let mut acc = Number::zero();
                let mut binom = BigInt::one();
                for j in 0..=l {
                    let term = m
                        .moment(j)?
                        .mul(&shift.powi((l - j) as u32))
                        .mul(&Number::from_big(binom.clone()));
                    acc = acc.add(&term);
                    binom = binom * BigInt::from(l - j) / BigInt::from(j + 1);
                }
                acc
            }
            Kind::Tilde(m) => {
                if l == 1 {
                    Number::zero()
                } else {
                    m.moment(l)?
                }
            }
        })
    }

    pub fn moment_f64(&self, l: usize) -> Result<f64> {
        Ok(self.moment(l)?.to_f64())
    }

    /// `ln V_l`; `None` when `V_l = 0`, an error when `V_l < 0`.
    ///
    /// Closed forms avoid materialising `V_l` for the factorial-growth models.
    pub fn ln_moment(&self, l: usize) -> Result<Option<f64>> {
        self.check_horizon(l)?;
        if l == 0 {
            return Ok(Some(0.0));
        }
        let v = match &self.kind {
            Kind::Unit => Some(0.0),
            Kind::GaussianCentered { v2 } => {
                if l % 2 == 1 {
                    None
                } else {
                    let h = l / 2;
                    let ln_dfact = math::ln_factorial(l) - h as f64 * math::LN_2 - math::ln_factorial(h);
                    Some(h as f64 * math::log(v2.to_f64()) + ln_dfact)
                }
            }
            Kind::Gamma { shape, scale } => {
                let m = shape.to_f64();
                Some(l as f64 * math::log(scale.to_f64()) + math::lgamma(m + l as f64) - math::lgamma(m))
            }
            Kind::BernoulliCentered => l.is_multiple_of(2).then_some(0.0),
            Kind::Exponential => Some(math::ln_factorial(l)),
            Kind::LogFactorial => Some(math::ln_factorial(l - 1)),
            Kind::Custom { .. } | Kind::Hat(_) => {
                let v = self.moment(l)?;
                if v.is_negative() {
                    return Err(Error::NegativeWeightMoment(l));
                }
                v.ln()
            }
            Kind::Tilde(m) => {
                if l == 1 {
                    None
                } else {
                    m.ln_moment(l)?
                }
            }
        };
        Ok(v)
    }

    /// `H(u)`.
    pub fn egf(&self, u: f64) -> f64 {
        self.egf_derivative(u, 0)
    }

    /// `H'(u)`.
    pub fn egf_d1(&self, u: f64) -> f64 {
        self.egf_derivative(u, 1)
    }

    /// `H''(u)`.
    pub fn egf_d2(&self, u: f64) -> f64 {
        self.egf_derivative(u, 2)
    }

    /// `H(u) - 1` without the cancellation of `egf(u) - 1` near the origin.
    pub fn egf_minus_one(&self, u: f64) -> f64 {
        match &self.kind {
            Kind::Unit => math::expm1(u),
            Kind::GaussianCentered { v2 } => math::expm1(0.5 * v2.to_f64() * u * u),
            Kind::Gamma { shape, scale } => math::expm1(-shape.to_f64() * math::log1p(-scale.to_f64() * u)),
            Kind::BernoulliCentered => {
                let s = math::sinh(0.5 * u);
                2.0 * s * s
            }
            Kind::Exponential => u / (1.0 - u),
            Kind::LogFactorial => -math::log1p(-u),
            Kind::Custom { .. } => self.egf(u) - 1.0,
            Kind::Hat(m) => {
                let v1 = m.moment_f64(1).unwrap_or(0.0);
                math::exp(-u * v1) * m.egf_minus_one(u) + math::expm1(-u * v1)
            }
            Kind::Tilde(m) => {
                let v1 = m.moment_f64(1).unwrap_or(0.0);
                m.egf_minus_one(u) - u * v1
            }
        }
    }

    fn egf_derivative(&self, u: f64, order: u8) -> f64 {
        match &self.kind {
            Kind::Unit => math::exp(u),
            Kind::GaussianCentered { v2 } => {
                let v2 = v2.to_f64();
                let h = math::exp(0.5 * v2 * u * u);
                match order {
                    0 => h,
                    1 => v2 * u * h,
                    _ => (v2 + v2 * v2 * u * u) * h,
                }
            }
            Kind::Gamma { shape, scale } => {
                let (m, t) = (shape.to_f64(), scale.to_f64());
                let base = 1.0 - t * u;
                match order {
                    0 => libm::pow(base, -m),
                    1 => m * t * libm::pow(base, -m - 1.0),
                    _ => m * (m + 1.0) * t * t * libm::pow(base, -m - 2.0),
                }
            }
            Kind::BernoulliCentered => match order {
                1 => math::sinh(u),
                _ => math::cosh(u),
            },
            Kind::Exponential => {
                let r = 1.0 / (1.0 - u);
                match order {
                    0 => r,
                    1 => r * r,
                    _ => 2.0 * r * r * r,
                }
            }
            Kind::LogFactorial => match order {
                0 => 1.0 - math::log1p(-u),
                1 => 1.0 / (1.0 - u),
                _ => 1.0 / ((1.0 - u) * (1.0 - u)),
            },
            Kind::Custom { moments } => {
                let d = order as usize;
                let mut acc = 0.0;
                let mut power = 1.0;
                for (k, v) in moments.iter().enumerate().skip(d) {
                    acc += v.to_f64() * power / math::exp(math::ln_factorial(k - d));
                    power *= u;
                }
                acc
            }
            Kind::Hat(m) => {
                let v1 = m.moment_f64(1).unwrap_or(0.0);
                let e = math::exp(-u * v1);
                let (h0, h1, h2) = (m.egf(u), m.egf_d1(u), m.egf_d2(u));
                match order {
                    0 => e * h0,
                    1 => e * (h1 - v1 * h0),
                    _ => e * (h2 - 2.0 * v1 * h1 + v1 * v1 * h0),
                }
            }
            Kind::Tilde(m) => {
                let v1 = m.moment_f64(1).unwrap_or(0.0);
                match order {
                    0 => m.egf(u) - u * v1,
                    1 => m.egf_d1(u) - v1,
                    _ => m.egf_d2(u),
                }
            }
        }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `n!!`, with `(-1)!! = 1`.
fn double_factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    let mut i = n;
    while i > 1 {
        acc *= BigInt::from(i);
        i -= 2;
    }
    acc
}
