//! The tilted law `P(Z = j) = M_j(x) u^j / (j! G(x, u))`,
//! `G(x, u) = exp{x (H(u) - 1)}`, whose local limit drives the asymptotics.

use alloc::vec::Vec;

use crate::asymptotics::solve_saddle;
use crate::error::{Error, Result};
use crate::math;
use crate::moments::{exact_sequence, LogMoments};
use crate::number::{ln_rational, Number};
use crate::weights::WeightModel;

use num_rational::BigRational;

/// Default stopping rule: retained mass at least `1 - 1e-12`.
pub const DEFAULT_MASS_TOLERANCE: f64 = 1e-12;
/// Largest support scanned before giving up.
pub const MAX_TERMS: usize = 1_000_000;
/// Mass shortfall accepted when the tail is provably negligible but rounding
/// kept the sum just below the requested level.
pub const MASS_FLOOR: f64 = 1e-10;

/// A materialised auxiliary distribution.
#[derive(Clone, Debug)]
pub struct AuxiliaryDistribution {
    model: WeightModel,
    x: f64,
    u: f64,
    log_g: f64,
    log_pmf: Vec<f64>,
    pmf: Vec<f64>,
    mass: f64,
    mean: f64,
    variance: f64,
    pmf_mean: f64,
    pmf_variance: f64,
}

impl AuxiliaryDistribution {
    pub fn model(&self) -> &WeightModel {
        &self.model
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    /// `ln G(x, u) = x (H(u) - 1)`.
    pub fn log_g(&self) -> f64 {
        self.log_g
    }

    /// Largest retained `j`.
    pub fn support_cap(&self) -> usize {
        self.pmf.len() - 1
    }

    /// `p_j`, zero beyond the retained support.
    pub fn pmf(&self, j: usize) -> f64 {
        self.pmf.get(j).copied().unwrap_or(0.0)
    }

    /// `ln p_j`; `-inf` off the lattice.
    pub fn log_pmf(&self, j: usize) -> Option<f64> {
        self.log_pmf.get(j).copied()
    }

    /// Spacing of the support: 2 when only even values carry mass.
    pub fn lattice_span(&self) -> usize {
        if self.model.parity_even_only() {
            2
        } else {
            1
        }
    }

    /// `(j, p_j)` over the retained support lattice.
    pub fn support(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.lattice_span();
        self.pmf.iter().copied().enumerate().step_by(span)
    }

    /// Retained mass `sum_{j <= cap} p_j`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `x u H'(u)`.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `x (u H'(u) + u^2 H''(u))`.
    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn sigma(&self) -> f64 {
        math::sqrt(self.variance)
    }

    /// Mean of the retained pmf, renormalised by the retained mass.
    pub fn pmf_mean(&self) -> f64 {
        self.pmf_mean
    }

    /// Variance of the retained pmf, renormalised by the retained mass.
    pub fn pmf_variance(&self) -> f64 {
        self.pmf_variance
    }
}

fn check_tilt(model: &WeightModel, x: f64, u: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid("x", "must be positive and finite"));
    }
    let radius = model.radius().unwrap_or(f64::INFINITY);
    if !(u > 0.0 && u < radius) {
        return Err(Error::OutsideRadius { u, radius });
    }
    Ok(())
}

/// Builds the pmf of `Z` from log-space moments, scanning `j = 0, 1, ...`
/// until the retained mass reaches `1 - mass_tolerance`.
pub fn build_aux(model: &WeightModel, x: f64, u: f64, mass_tolerance: f64) -> Result<AuxiliaryDistribution> {
    check_tilt(model, x, u)?;
    if !(mass_tolerance > 0.0 && mass_tolerance < 1.0) {
        return Err(Error::invalid("mass_tolerance", "must lie in (0, 1)"));
    }
    let h1 = model.egf_d1(u);
    let h2 = model.egf_d2(u);
    let mean = x * u * h1;
    let variance = x * (u * h1 + u * u * h2);
    if !(mean.is_finite() && variance.is_finite()) || mean + 40.0 * math::sqrt(variance) > MAX_TERMS as f64 {
        return Err(Error::MassNotReached {
            mass: 0.0,
            terms: MAX_TERMS,
        });
    }
    let log_g = x * model.egf_minus_one(u);
    let ln_u = math::log(u);
    let span = if model.parity_even_only() { 2 } else { 1 };
    let mut lm = LogMoments::new(model, x)?;
    let mut log_pmf = Vec::new();
    let mut pmf = Vec::new();
    let mut mass = 0.0;
    let mut last_on_lattice = f64::NEG_INFINITY;
    let target = 1.0 - mass_tolerance;
    let mut j = 0usize;
    loop {
        if j >= MAX_TERMS {
            return Err(Error::MassNotReached { mass, terms: j });
        }
        let lp = lm.ln_scaled(j)? + j as f64 * ln_u - log_g;
        let p = math::exp(lp);
        log_pmf.push(lp);
        pmf.push(p);
        mass += p;
        if j.is_multiple_of(span) {
            if mass >= target {
                break;
            }
            // past the bulk with a geometrically shrinking tail
            let ratio = math::exp(lp - last_on_lattice);
            if j as f64 > mean && ratio < 1.0 && p * ratio / (1.0 - ratio) < 1e-3 * mass_tolerance {
                if mass >= 1.0 - MASS_FLOOR {
                    break;
                }
                return Err(Error::MassNotReached { mass, terms: j + 1 });
            }
            last_on_lattice = lp;
        }
        j += 1;
    }
    let m1: f64 = pmf.iter().enumerate().map(|(j, p)| j as f64 * p).sum::<f64>() / mass;
    let m2: f64 = pmf
        .iter()
        .enumerate()
        .map(|(j, p)| (j as f64 - m1) * (j as f64 - m1) * p)
        .sum::<f64>()
        / mass;
    Ok(AuxiliaryDistribution {
        model: model.clone(),
        x,
        u,
        log_g,
        log_pmf,
        pmf,
        mass,
        mean,
        variance,
        pmf_mean: m1,
        pmf_variance: m2,
    })
}

/// `|k! G u^{-k} p_k / M_k(x) - 1|`, with `M_k` recomputed independently of
/// the pmf: exactly over rationals when the model is exact, otherwise by the
/// plain floating-point recurrence.
pub fn inversion_check(aux: &AuxiliaryDistribution, k: usize) -> Result<f64> {
    let lp = match aux.log_pmf(k) {
        Some(lp) if lp > f64::NEG_INFINITY => lp,
        _ => return Err(Error::invalid("k", "order lies outside the support")),
    };
    let lhs = math::ln_factorial(k) + aux.log_g - k as f64 * math::log(aux.u) + lp;
    let ln_mk = independent_ln_moment(&aux.model, k, aux.x)?;
    Ok(math::expm1(lhs - ln_mk).abs())
}

fn independent_ln_moment(model: &WeightModel, k: usize, x: f64) -> Result<f64> {
    if model.is_exact() {
        if let Some(xr) = BigRational::from_float(x) {
            let v = (0..=k)
                .map(|j| model.moment(j).map(|n| n.to_rational().expect("exact model")))
                .collect::<Result<Vec<_>>>()?;
            let m = exact_sequence(&v, &xr, k).pop().expect("non-empty");
            return Ok(ln_rational(&m));
        }
    }
    let m = crate::moments::moment_recurrence(model, k, &Number::Float(x))?.approx;
    if m.is_finite() && m > 0.0 {
        Ok(math::log(m))
    } else {
        crate::moments::log_moment(model, k, x)
    }
}

/// Outcome of [`local_limit_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalLimit {
    pub k: usize,
    pub x: f64,
    pub u: f64,
    pub p_k: f64,
    pub sigma: f64,
    /// `p_k sqrt(2 pi) sigma`.
    pub raw_ratio: f64,
    /// `raw_ratio` divided by the lattice span; tends to 1.
    pub ratio: f64,
}

/// Local limit ratio at the saddle: `x = chi k` and `E Z = k`.
pub fn local_limit_check(model: &WeightModel, chi: f64, k: usize) -> Result<LocalLimit> {
    let span = if model.parity_even_only() { 2 } else { 1 };
    if !k.is_multiple_of(span) {
        return Err(Error::OddOrder(k));
    }
    let s = solve_saddle(model, chi)?;
    let x = chi * k as f64;
    let u = s.u;
    let sigma = math::sqrt(x * (u * s.h1 + u * u * s.h2));
    let mut lm = LogMoments::new(model, x)?;
    let lp = lm.ln_scaled(k)? + k as f64 * math::log(u) - x * s.h_minus_one;
    let p_k = math::exp(lp);
    let raw_ratio = p_k * math::sqrt(2.0 * core::f64::consts::PI) * sigma;
    Ok(LocalLimit {
        k,
        x,
        u,
        p_k,
        sigma,
        raw_ratio,
        ratio: raw_ratio / span as f64,
    })
}

/// Sup-norm distance between `p_j` and `span * phi(j)` over the lattice
/// points within three standard deviations of the mean, relative to the sup
/// norm of the lattice density `span * phi`. `phi` is the normal density with
/// the same mean and variance.
pub fn gaussian_shape_discrepancy(aux: &AuxiliaryDistribution) -> f64 {
    let (mu, sd) = (aux.mean(), aux.sigma());
    let span = aux.lattice_span() as f64;
    let norm = span / (sd * math::sqrt(2.0 * core::f64::consts::PI));
    let mut gap = 0.0f64;
    let mut peak = 0.0f64;
    for (j, p) in aux.support().filter(|&(j, _)| (j as f64 - mu).abs() <= 3.0 * sd) {
        let z = (j as f64 - mu) / sd;
        let phi = norm * math::exp(-0.5 * z * z);
        gap = gap.max((p - phi).abs());
        peak = peak.max(phi);
    }
    if peak == 0.0 {
        f64::INFINITY
    } else {
        gap / peak
    }
}
