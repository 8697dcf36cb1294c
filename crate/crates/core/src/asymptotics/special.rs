//! Closed forms for specific weight laws, each with its own saddle equation.

use alloc::vec::Vec;

use super::{check_chi, saddle_tolerance, solve_monotone};
use crate::error::{Error, Result};
use crate::math;

/// Weight laws with a dedicated asymptotic formula.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpecialCase {
    /// `N(0, V_2)`; even orders only.
    Gaussian { v2: f64 },
    /// Gamma with shape `m` and scale `theta`.
    Gamma { shape: f64, scale: f64 },
    /// `+-1` with probability 1/2; even orders only.
    Bernoulli,
    /// `Exp(1)`.
    Exponential,
    /// `V_j = (j-1)!`.
    LogFactorial,
}

/// Principal branch of Lambert W for `z >= 0`.
pub fn lambert_w0(z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let mut w = if z < 1.0 { z / (1.0 + z) } else { math::log1p(z) * 0.75 };
    for _ in 0..100 {
        let ew = math::exp(w);
        let f = w * ew - z;
        let wp1 = w + 1.0;
        // Halley step
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 1e-16 * w.abs().max(1e-300) {
            break;
        }
    }
    w
}

fn check_inputs(k: usize, x: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("k", "order must be positive"));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid("x", "must be positive and finite"));
    }
    Ok(())
}

fn even_order(k: usize) -> Result<()> {
    if k % 2 == 1 {
        Err(Error::OddOrder(k))
    } else {
        Ok(())
    }
}

/// `ln S_k(x)` for exponential weights, where `M_k = k! S_k`.
pub fn exp_s_log_prediction(k: usize, x: f64) -> Result<f64> {
    check_inputs(k, x)?;
    let kf = k as f64;
    let chi = x / kf;
    let u = 2.0 / (2.0 + chi + math::sqrt(chi * (4.0 + chi)));
    Ok(-0.5 * math::log(2.0 * core::f64::consts::PI * kf)
        + 0.5 * (math::log1p(-u) - math::log1p(u))
        + kf * (1.0 - math::log(u) - u))
}

/// `ln T_k(x)` for factorial weights, where `M_k = k! T_k`.
pub fn logfact_t_log_prediction(k: usize, x: f64) -> Result<f64> {
    check_inputs(k, x)?;
    let kf = k as f64;
    Ok(
        0.5 * math::log(x) - 0.5 * math::log(2.0 * core::f64::consts::PI * kf * (x + kf))
            + kf * math::log1p(x / kf)
            + x * math::log1p(kf / x),
    )
}

/// `ln M_k(x)` from the closed form of `case`.
///
/// `k` is the true moment order. The exponential and factorial laws use the
/// leading Stirling term to pass from `S_k`, `T_k` to `M_k`; the even-lattice
/// laws include the factor 2 of the lattice span.
pub fn special_case_prediction(case: &SpecialCase, k: usize, x: f64) -> Result<f64> {
    check_inputs(k, x)?;
    let kf = k as f64;
    match *case {
        SpecialCase::Gaussian { v2 } => {
            even_order(k)?;
            if v2.is_nan() || v2 <= 0.0 {
                return Err(Error::invalid("V2", "must be positive"));
            }
            let half = kf / 2.0;
            let beta = lambert_w0(half / x);
            let ln_a = math::expm1(beta) / (beta * math::exp(beta)) - 2.0;
            Ok(0.5 * math::log(2.0 / (1.0 + beta)) + half * (math::log(2.0 * half * half * v2 / beta) + ln_a))
        }
        SpecialCase::Gamma { shape: m, scale: theta } => {
            if !(m > 0.0 && theta > 0.0) {
                return Err(Error::invalid("gamma", "shape and scale must be positive"));
            }
            let chi = x / kf;
            check_chi(chi)?;
            let g = |u: f64| {
                let base = 1.0 - theta * u;
                let val = u * m * theta * libm::pow(base, -m - 1.0);
                let d = m * theta * libm::pow(base, -m - 2.0) * (1.0 + m * theta * u);
                (val, d)
            };
            let mut trace = Vec::new();
            let u = solve_monotone(g, 1.0 / chi, Some(1.0 / theta), saddle_tolerance(chi), &mut trace)?;
            let tu = theta * u;
            let one_minus_pow = -math::expm1(m * math::log1p(-tu));
            Ok(0.5 * (math::log1p(-tu) - math::log1p(m * tu))
                + kf * (math::log(kf / u) - 1.0 + (1.0 - tu) / (m * tu) * one_minus_pow))
        }
        SpecialCase::Bernoulli => {
            even_order(k)?;
            let chi_half = x / (kf / 2.0);
            let g = |u: f64| {
                let (s, c) = (math::sinh(u), math::cosh(u));
                (u * s, s + u * c)
            };
            let mut trace = Vec::new();
            let u = solve_monotone(g, 2.0 / chi_half, None, saddle_tolerance(chi_half / 2.0), &mut trace)?;
            let (s, c) = (math::sinh(u), math::cosh(u));
            let ch_m1 = 2.0 * math::sinh(0.5 * u) * math::sinh(0.5 * u);
            let ln_a = ch_m1 / (u * s) - 1.0;
            Ok(math::LN_2 + 0.5 * math::log(2.0 / (2.0 + chi_half * u * u * c)) + kf * (math::log(kf / u) + ln_a))
        }
        SpecialCase::Exponential => Ok(exp_s_log_prediction(k, x)? + math::ln_stirling(k)),
        SpecialCase::LogFactorial => Ok(logfact_t_log_prediction(k, x)? + math::ln_stirling(k)),
    }
}

/// Small-intensity prediction for centered Bernoulli weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmallXPrediction {
    /// `K ln(K / (e (ln K - ln x)))` for the even order `K`.
    pub log_value: f64,
    /// `L - ln L` with `L = ln(K / x)`, the two-term root of `u sh(u) = K / x`.
    pub lambert_two_term_u: f64,
    /// False when `x <= K exp(-K^{1/16})`, below the range where the local
    /// limit argument is known to hold.
    pub admissible: bool,
}

/// Prediction for the even moment of order `k` of centered Bernoulli
/// weights when `x = o(k)`.
pub fn bernoulli_small_x_prediction(k: usize, x: f64) -> Result<SmallXPrediction> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid("x", "must be positive and finite"));
    }
    even_order(k)?;
    let kf = k as f64;
    if x >= kf {
        return Err(Error::WrongRegime { k, x });
    }
    let l = math::log(kf) - math::log(x);
    let log_value = kf * (math::log(kf) - 1.0 - math::log(l));
    let admissible = x > kf * math::exp(-libm::pow(kf, 1.0 / 16.0));
    Ok(SmallXPrediction {
        log_value,
        lambert_two_term_u: l - math::log(l),
        admissible,
    })
}
