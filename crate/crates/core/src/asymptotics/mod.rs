//! Large-order behaviour of `M_k(x)` with `x = chi k`.
//!
//! The tilt `u` solves `u H'(u) = 1 / chi`; the rate is
//! `Psi = (H - 1) / (u H') - 1 + ln H'` and the refined prediction is
//! `M_k ~ (1 + chi u^2 H'')^{-1/2} (x H'(u) exp{(H - 1)/(u H') - 1})^k`.
//! Models whose odd moments vanish put the auxiliary variable on the even
//! lattice, which doubles the local probability; the refined prediction
//! carries that factor for them.

mod special;

pub use special::{
    bernoulli_small_x_prediction, exp_s_log_prediction, lambert_w0, logfact_t_log_prediction, special_case_prediction,
    SmallXPrediction, SpecialCase,
};

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::weights::WeightModel;

/// Solution of `u H'(u) = 1 / chi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleSolution {
    pub chi: f64,
    pub u: f64,
    /// `|u H'(u) - 1/chi|`.
    pub residual: f64,
    pub h: f64,
    pub h1: f64,
    pub h2: f64,
    /// `H(u) - 1`, evaluated without cancellation.
    pub h_minus_one: f64,
}

/// A point visited by the root finder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub u: f64,
    pub g: f64,
}

/// `Psi(chi)` with the data of its saddle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateValue {
    pub chi: f64,
    pub psi: f64,
    pub saddle: SaddleSolution,
    /// `1 / sqrt(1 + chi u^2 H''(u))`.
    pub prefactor: f64,
}

/// Residual tolerance for a given `chi`.
pub fn saddle_tolerance(chi: f64) -> f64 {
    1e-12 * f64::max(1.0, 1.0 / chi)
}

fn check_model(model: &WeightModel) -> Result<()> {
    if model.has_closed_form() {
        Ok(())
    } else {
        Err(Error::TruncatedSeries(String::from(model.name())))
    }
}

fn check_chi(chi: f64) -> Result<()> {
    if chi > 0.0 && chi.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("chi", "must be positive and finite"))
    }
}

const MAX_STEPS: usize = 4000;

pub(crate) fn solve_monotone<G>(
    g: G,
    target: f64,
    radius: Option<f64>,
    tol: f64,
    trace: &mut Vec<TracePoint>,
) -> Result<f64>
where
    G: Fn(f64) -> (f64, f64),
{
    let cap = radius.map(|r| r * (1.0 - 1e-12));
    let mut eval = |u: f64| {
        let (v, d) = g(u);
        trace.push(TracePoint { u, g: v });
        (v, d)
    };
    let start = match radius {
        Some(r) => f64::min(1.0, 0.5 * r),
        None => 1.0,
    };
    let (mut lo, mut hi, mut du);
    let mut u = start;
    let mut gu = eval(u).0;
    let mut steps = 0;
    if gu < target {
        lo = u;
        loop {
            let next = match cap {
                Some(c) => {
                    if u >= c {
                        return Err(Error::SaddleUnreachable { target });
                    }
                    f64::min(u + 0.5 * (c - u), c)
                }
                None => 2.0 * u,
            };
            if !next.is_finite() || next == u {
                return Err(Error::SaddleUnreachable { target });
            }
            u = next;
            (gu, du) = eval(u);
            if !gu.is_finite() || gu >= target {
                hi = u;
                break;
            }
            lo = u;
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::SaddleUnreachable { target });
            }
        }
    } else {
        hi = u;
        loop {
            u *= 0.5;
            if u == 0.0 {
                return Err(Error::SaddleUnreachable { target });
            }
            (gu, du) = eval(u);
            if gu < target {
                lo = u;
                break;
            }
            hi = u;
        }
    }
    if !gu.is_finite() {
        u = 0.5 * (lo + hi);
        (gu, du) = eval(u);
    }
    let mut best = (u, (gu - target).abs());
    for _ in 0..MAX_STEPS {
        let res = (gu - target).abs();
        if res < best.1 {
            best = (u, res);
        }
        if res <= tol {
            return Ok(u);
        }
        if gu < target {
            lo = u;
        } else {
            hi = u;
        }
        let newton = u - (gu - target) / du;
        let next = if du > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next <= lo || next >= hi {
            break;
        }
        u = next;
        (gu, du) = eval(u);
    }
    if best.1 <= tol {
        Ok(best.0)
    } else {
        Err(Error::SaddleNotConverged {
            residual: best.1,
            tolerance: tol,
        })
    }
}

/// Root finder for `u H'(u) = 1/chi`, also returning every point it evaluated.
pub fn solve_saddle_traced(model: &WeightModel, chi: f64) -> Result<(SaddleSolution, Vec<TracePoint>)> {
    check_model(model)?;
    check_chi(chi)?;
    let target = 1.0 / chi;
    let tol = saddle_tolerance(chi);
    let mut trace = Vec::new();
    let g = |u: f64| {
        let h1 = model.egf_d1(u);
        (u * h1, h1 + u * model.egf_d2(u))
    };
    let u = solve_monotone(g, target, model.radius(), tol, &mut trace)?;
    let h1 = model.egf_d1(u);
    let sol = SaddleSolution {
        chi,
        u,
        residual: (u * h1 - target).abs(),
        h: model.egf(u),
        h1,
        h2: model.egf_d2(u),
        h_minus_one: model.egf_minus_one(u),
    };
    Ok((sol, trace))
}

/// Solves `u H'(u) = 1/chi` on `(0, u_0)`.
pub fn solve_saddle(model: &WeightModel, chi: f64) -> Result<SaddleSolution> {
    solve_saddle_traced(model, chi).map(|(s, _)| s)
}

/// `Psi(chi)` and the prefactor of the refined prediction.
pub fn rate_function(model: &WeightModel, chi: f64) -> Result<RateValue> {
    let s = solve_saddle(model, chi)?;
    let psi = s.h_minus_one / (s.u * s.h1) - 1.0 + math::log(s.h1);
    let prefactor = 1.0 / math::sqrt(1.0 + chi * s.u * s.u * s.h2);
    Ok(RateValue {
        chi,
        psi,
        saddle: s,
        prefactor,
    })
}

fn lattice_log_factor(model: &WeightModel) -> f64 {
    if model.parity_even_only() {
        math::LN_2
    } else {
        0.0
    }
}

/// `ln` of the refined prediction for `M_k(chi k)`.
pub fn refined_prediction(model: &WeightModel, k: usize, chi: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("k", "order must be positive"));
    }
    if model.parity_even_only() && k % 2 == 1 {
        return Err(Error::OddOrder(k));
    }
    let r = rate_function(model, chi)?;
    let x = chi * k as f64;
    Ok(math::log(r.prefactor) + k as f64 * (math::log(x) + r.psi) + lattice_log_factor(model))
}

/// `ln` of the leading prediction for `x / k -> infinity`: `k ln(x V_1)`, or
/// `(k/2) ln(x k V_2 / e)` when `V_1 = 0`. For `V_1 < 0` the value is the
/// log of `|M_k|`.
pub fn regime_b_prediction(model: &WeightModel, k: usize, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid("x", "must be positive and finite"));
    }
    let kf = k as f64;
    let v1 = model.moment_f64(1)?;
    if v1 != 0.0 {
        return Ok(kf * math::log(x * v1.abs()));
    }
    let v2 = model.moment_f64(2)?;
    if v2 == 0.0 {
        return Err(Error::DegenerateMoments);
    }
    Ok(0.5 * kf * (math::log(x * kf * v2.abs()) - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::Number;
    use alloc::vec;

    fn builtins() -> Vec<WeightModel> {
        vec![
            WeightModel::unit(),
            WeightModel::gaussian_centered(Number::from_int(1)).unwrap(),
            WeightModel::gamma(Number::from_int(2), Number::ratio(1, 2)).unwrap(),
            WeightModel::bernoulli_centered(),
            WeightModel::exponential(),
            WeightModel::log_factorial(),
        ]
    }

    #[test]
    fn unit_saddle_is_omega_constant() {
        let s = solve_saddle(&WeightModel::unit(), 1.0).unwrap();
        assert!((s.u - 0.567_143_290_409_783_8).abs() < 1e-12);
        // the contraction u <- exp(-u) / chi has the same fixed point
        let mut v = 0.5f64;
        for _ in 0..200 {
            v = math::exp(-v);
        }
        assert!((s.u - v).abs() < 1e-10);
    }

    #[test]
    fn exponential_saddle_closed_form() {
        for &chi in &[1e-3, 0.5, 1.0, 2.0, 1e3] {
            let s = solve_saddle(&WeightModel::gamma(Number::one(), Number::one()).unwrap(), chi).unwrap();
            let want = (2.0 + chi - math::sqrt(chi * (4.0 + chi))) / 2.0;
            assert!((s.u - want).abs() < 1e-9 * want.max(1e-3), "chi={chi}");
        }
    }

    #[test]
    fn large_chi_saddle() {
        let chi = 1e6;
        for m in builtins() {
            let v1 = m.moment_f64(1).unwrap();
            if v1 > 0.0 {
                let s = solve_saddle(&m, chi).unwrap();
                assert!((s.u * chi * v1 - 1.0).abs() < 1e-4, "{}", m.name());
                let r = rate_function(&m, chi).unwrap();
                assert!((r.psi - math::log(v1)).abs() < 1e-5, "{}", m.name());
                assert!(r.prefactor > 0.999);
            }
        }
    }

    #[test]
    fn residual_and_monotone_trace_on_grid() {
        let chis = [1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 10.0, 1e2, 1e4, 1e6];
        for m in builtins() {
            for &chi in &chis {
                let (s, mut trace) = solve_saddle_traced(&m, chi).unwrap();
                assert!(
                    s.residual <= saddle_tolerance(chi),
                    "{} chi={chi} res={}",
                    m.name(),
                    s.residual
                );
                assert!(s.u > 0.0 && m.radius().is_none_or(|r| s.u < r));
                trace.sort_by(|a, b| a.u.total_cmp(&b.u));
                trace.dedup_by(|a, b| a.u == b.u);
                for w in trace.windows(2) {
                    assert!(w[1].g > w[0].g, "{} chi={chi}", m.name());
                }
                let r = rate_function(&m, chi).unwrap();
                assert!(r.prefactor > 0.0 && r.prefactor <= 1.0 && r.psi.is_finite());
            }
        }
    }

    #[test]
    fn unit_rate_matches_exponential_form() {
        for &chi in &[0.1, 0.5, 1.0, 3.0] {
            let r = rate_function(&WeightModel::unit(), chi).unwrap();
            let u = r.saddle.u;
            let inner = u - 1.0 + 1.0 / u - 1.0 / (u * math::exp(u));
            assert!((r.psi - inner).abs() < 1e-12);
        }
    }

    #[test]
    fn refined_prediction_unit() {
        let exact = crate::moments::log_moment(&WeightModel::unit(), 200, 200.0).unwrap();
        let pred = refined_prediction(&WeightModel::unit(), 200, 1.0).unwrap();
        assert!((libm::exp(exact - pred) - 1.0).abs() < 0.02);
    }

    #[test]
    fn refined_prediction_bernoulli_and_parity() {
        let b = WeightModel::bernoulli_centered();
        let exact = crate::moments::log_moment(&b, 200, 200.0).unwrap();
        let pred = refined_prediction(&b, 200, 1.0).unwrap();
        assert!((libm::exp(exact - pred) - 1.0).abs() < 0.02);
        assert_eq!(refined_prediction(&b, 201, 1.0), Err(Error::OddOrder(201)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(solve_saddle(&WeightModel::unit(), 0.0).is_err());
        assert!(solve_saddle(&WeightModel::unit(), -1.0).is_err());
        let c = WeightModel::custom(vec![Number::one(), Number::one()]).unwrap();
        assert!(matches!(solve_saddle(&c, 1.0), Err(Error::TruncatedSeries(_))));
    }

    #[test]
    fn regime_b_examples() {
        let e = WeightModel::exponential();
        let x = 1e6;
        let exact = crate::moments::log_moment(&e, 20, x).unwrap();
        let pred = regime_b_prediction(&e, 20, x).unwrap();
        assert!(((exact - pred) / 20.0).abs() < 0.01);
        let g = WeightModel::gaussian_centered(Number::from_int(3)).unwrap();
        let k2 = 40usize;
        let want = (k2 / 2) as f64 * math::log(k2 as f64 * 5.0 * 3.0 / libm::exp(1.0));
        assert!((regime_b_prediction(&g, k2, 5.0).unwrap() - want).abs() < 1e-9);
        let h = e.hat_transform();
        let want = 0.5 * 10.0 * (math::log(7.0 * 10.0 * 1.0) - 1.0);
        assert!((regime_b_prediction(&h, 10, 7.0).unwrap() - want).abs() < 1e-9);
        let z = WeightModel::custom(vec![Number::one(), Number::zero(), Number::zero()]).unwrap();
        assert_eq!(regime_b_prediction(&z, 4, 1.0), Err(Error::DegenerateMoments));
    }
}
