//! Moments `M_k(x)` of the compound Poisson sum `sum_{j <= N} W_j`,
//! `N ~ Poisson(x)`, i.e. weighted Bell polynomials.
//!
//! The workhorse is the convolution recurrence
//! `M_k = x sum_{j=1}^{k} C(k-1, j-1) V_j M_{k-j}`, run either over exact
//! rationals or in log space. Partition enumeration is kept as an
//! independent oracle for small orders.

mod identities;
mod partitions;

pub use identities::{
    composition_identity, count_compositions, even_block_partitions, even_partition_number, exp_identity_s,
    factorial_identity_t, identity_suite, IdentityCheck,
};
pub use partitions::{profiles, PartitionProfile};

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::math;
use crate::number::{ln_rational, rational_to_f64, Number};
use crate::weights::WeightModel;

/// Largest order accepted by [`moment_partition_oracle`] and [`finite_n_moment`].
pub const ENUMERATION_CAP: usize = 25;

/// How a [`MomentValue`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Recurrence,
    PartitionOracle,
    FiniteN,
    CenteredTilde,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Recurrence => "recurrence",
            Method::PartitionOracle => "partition_oracle",
            Method::FiniteN => "finite_n",
            Method::CenteredTilde => "centered_tilde",
        }
    }
}

/// A computed moment.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentValue {
    pub k: usize,
    pub x: Number,
    /// Present when every input was an exact rational.
    pub exact: Option<BigRational>,
    /// Floating-point value (may be infinite for huge moments).
    pub approx: f64,
    /// `ln` of the value when it is positive.
    pub log_value: Option<f64>,
    pub method: Method,
}

impl MomentValue {
    fn from_exact(k: usize, x: &Number, value: BigRational, method: Method) -> Self {
        let log_value = (value > BigRational::zero()).then(|| ln_rational(&value));
        MomentValue {
            k,
            x: x.clone(),
            approx: rational_to_f64(&value),
            exact: Some(value),
            log_value,
            method,
        }
    }

    fn from_f64(k: usize, x: &Number, value: f64, method: Method) -> Self {
        MomentValue {
            k,
            x: x.clone(),
            exact: None,
            approx: value,
            log_value: (value > 0.0).then(|| math::log(value)),
            method,
        }
    }

    /// The value as a [`Number`].
    pub fn value(&self) -> Number {
        match &self.exact {
            Some(r) => Number::Exact(r.clone()),
            None => Number::Float(self.approx),
        }
    }
}

fn exact_inputs(model: &WeightModel, kmax: usize, x: &Number) -> Result<Option<(Vec<BigRational>, BigRational)>> {
    let Some(x) = x.as_exact() else { return Ok(None) };
    if !model.is_exact() {
        return Ok(None);
    }
    let mut v = Vec::with_capacity(kmax + 1);
    for j in 0..=kmax {
        match model.moment(j)? {
            Number::Exact(r) => v.push(r),
            Number::Float(_) => return Ok(None),
        }
    }
    Ok(Some((v, x.clone())))
}

/// Exact recurrence over rational moments `v[0..=kmax]`.
pub(crate) fn exact_sequence(v: &[BigRational], x: &BigRational, kmax: usize) -> Vec<BigRational> {
    let mut m = Vec::with_capacity(kmax + 1);
    m.push(BigRational::one());
    // binomial row C(k-1, .)
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=kmax {
        // unreduced running sum over a common denominator, reduced once per k
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for j in 1..=k {
            let prev: &BigRational = &m[k - j];
            if v[j].is_zero() || prev.is_zero() {
                continue;
            }
            let tn = v[j].numer() * prev.numer() * &row[j - 1];
            let td = v[j].denom() * prev.denom();
            if (&den % &td).is_zero() {
                num += tn * (&den / &td);
            } else if (&td % &den).is_zero() {
                num = num * (&td / &den) + tn;
                den = td;
            } else {
                let g = den.gcd(&td);
                num = num * (&td / &g) + tn * (&den / &g);
                den = den / g * td;
            }
        }
        m.push(x * BigRational::new(num, den));
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigInt::one());
        row = next;
    }
    m
}

fn float_sequence(model: &WeightModel, kmax: usize, x: f64) -> Result<Vec<f64>> {
    let v: Vec<f64> = (0..=kmax).map(|j| model.moment_f64(j)).collect::<Result<_>>()?;
    let mut m = Vec::with_capacity(kmax + 1);
    m.push(1.0);
    let mut row = vec![1.0f64];
    for k in 1..=kmax {
        let s: f64 = (1..=k).map(|j| row[j - 1] * v[j] * m[k - j]).sum();
        m.push(x * s);
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1.0);
        for w in row.windows(2) {
            next.push(w[0] + w[1]);
        }
        next.push(1.0);
        row = next;
    }
    Ok(m)
}

/// `M_0(x), ..., M_kmax(x)` by the recurrence; exact when `x` and the model are.
pub fn recurrence_table(model: &WeightModel, kmax: usize, x: &Number) -> Result<Vec<MomentValue>> {
    if let Some(h) = model.horizon() {
        if kmax > h {
            return Err(Error::HorizonExceeded {
                requested: kmax,
                horizon: h,
            });
        }
    }
    Ok(match exact_inputs(model, kmax, x)? {
        Some((v, xr)) => exact_sequence(&v, &xr, kmax)
            .into_iter()
            .enumerate()
            .map(|(k, m)| MomentValue::from_exact(k, x, m, Method::Recurrence))
            .collect(),
        None => float_sequence(model, kmax, x.to_f64())?
            .into_iter()
            .enumerate()
            .map(|(k, m)| MomentValue::from_f64(k, x, m, Method::Recurrence))
            .collect(),
    })
}

/// `M_k(x)` via the `O(k^2)` recurrence.
pub fn moment_recurrence(model: &WeightModel, k: usize, x: &Number) -> Result<MomentValue> {
    let mut table = recurrence_table(model, k, x)?;
    Ok(table.pop().expect("table has k + 1 entries"))
}

/// `M_k(x)` summed directly over partition profiles of `k`.
pub fn moment_partition_oracle(model: &WeightModel, k: usize, x: &Number) -> Result<MomentValue> {
    if k > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            k,
            cap: ENUMERATION_CAP,
        });
    }
    match exact_inputs(model, k, x)? {
        Some((v, xr)) => {
            let mut total = BigRational::zero();
            for p in profiles(k) {
                let mut term = BigRational::from_integer(BigInt::from(p.weight_count().clone()));
                for (size, l) in p.parts() {
                    term *= Pow::pow(&xr * &v[size], l);
                }
                total += term;
            }
            Ok(MomentValue::from_exact(k, x, total, Method::PartitionOracle))
        }
        None => {
            let xf = x.to_f64();
            let mut total = 0.0;
            for p in profiles(k) {
                let mut term = rational_to_f64(&BigRational::from_integer(BigInt::from(p.weight_count().clone())));
                for (size, l) in p.parts() {
                    term *= libm::pow(xf * model.moment_f64(size)?, l as f64);
                }
                total += term;
            }
            Ok(MomentValue::from_f64(k, x, total, Method::PartitionOracle))
        }
    }
}

/// Bell polynomial `B_k(x)`.
pub fn bell_polynomial(k: usize, x: &Number) -> Result<MomentValue> {
    moment_recurrence(&WeightModel::unit(), k, x)
}

/// Bell number `B_k(1)`, the number of set partitions of a `k`-set.
pub fn bell_number(k: usize) -> BigUint {
    let v = bell_polynomial(k, &Number::one()).expect("unit model is unbounded");
    let r = v.exact.expect("exact inputs");
    r.to_integer().to_biguint().expect("Bell numbers are positive")
}

/// Pre-limit moment `E (sum_{j<=n} a_j W_j)^k` with `P(a_j = 1) = lam / n`,
/// using the exact falling factorial `n (n-1) ... (n-|C|+1)` per profile.
pub fn finite_n_moment(model: &WeightModel, k: usize, n: u64, lam: &Number) -> Result<MomentValue> {
    if n == 0 {
        return Err(Error::invalid("n", "population size must be positive"));
    }
    if k > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            k,
            cap: ENUMERATION_CAP,
        });
    }
    let nn = Number::from_int(n as i64);
    let falling = |blocks: usize| -> BigInt {
        (0..blocks as u64).fold(BigInt::one(), |acc, i| {
            if i >= n {
                BigInt::zero()
            } else {
                acc * BigInt::from(n - i)
            }
        })
    };
    match exact_inputs(model, k, lam)? {
        Some((v, lr)) => {
            let nr = BigRational::from_integer(BigInt::from(n));
            let mut total = BigRational::zero();
            for p in profiles(k) {
                let mut term = BigRational::from_integer(BigInt::from(p.weight_count().clone()) * falling(p.blocks()));
                for (size, l) in p.parts() {
                    term *= Pow::pow(&lr * &v[size] / &nr, l);
                }
                total += term;
            }
            Ok(MomentValue::from_exact(k, lam, total, Method::FiniteN))
        }
        None => {
            let lf = lam.to_f64();
            let nf = nn.to_f64();
            let mut total = 0.0;
            for p in profiles(k) {
                let count = BigInt::from(p.weight_count().clone()) * falling(p.blocks());
                let mut term = rational_to_f64(&BigRational::from_integer(count));
                for (size, l) in p.parts() {
                    term *= libm::pow(lf * model.moment_f64(size)? / nf, l as f64);
                }
                total += term;
            }
            Ok(MomentValue::from_f64(k, lam, total, Method::FiniteN))
        }
    }
}

/// Decimal digits a float alternating sum may lose before it is recomputed exactly.
pub const CANCELLATION_DIGITS: f64 = 8.0;

/// `k`-th moment of `Upsilon - lam V_1`, by binomial expansion over the raw
/// moments. A float evaluation that cancels more than
/// [`CANCELLATION_DIGITS`] digits is redone exactly on the binary values of
/// the inputs.
pub fn centered_moment_tilde(model: &WeightModel, k: usize, lam: &Number) -> Result<MomentValue> {
    if let Some((v, lr)) = exact_inputs(model, k, lam)? {
        let value = centered_exact(&v, &lr, k);
        return Ok(MomentValue::from_exact(k, lam, value, Method::CenteredTilde));
    }
    let raw = float_sequence(model, k, lam.to_f64())?;
    let shift = -lam.to_f64() * model.moment_f64(1)?;
    let mut binom = 1.0f64;
    let mut terms = Vec::with_capacity(k + 1);
    for (r, m) in raw.iter().enumerate() {
        terms.push(binom * m * libm::pow(shift, (k - r) as f64));
        binom = binom * (k - r) as f64 / (r + 1) as f64;
    }
    let sum: f64 = terms.iter().sum();
    let largest = terms.iter().fold(0.0f64, |a, t| a.max(t.abs()));
    let lost = if largest == 0.0 {
        0.0
    } else if sum == 0.0 {
        f64::INFINITY
    } else {
        libm::log10(largest / sum.abs())
    };
    if lost <= CANCELLATION_DIGITS && sum.is_finite() {
        return Ok(MomentValue::from_f64(k, lam, sum, Method::CenteredTilde));
    }
    let lr = lam.to_rational().ok_or(Error::Cancellation { k, digits: lost })?;
    let v = (0..=k)
        .map(|j| {
            model
                .moment(j)?
                .to_rational()
                .ok_or(Error::Cancellation { k, digits: lost })
        })
        .collect::<Result<Vec<_>>>()?;
    let value = centered_exact(&v, &lr, k);
    Ok(MomentValue::from_f64(
        k,
        lam,
        rational_to_f64(&value),
        Method::CenteredTilde,
    ))
}

fn centered_exact(v: &[BigRational], lam: &BigRational, k: usize) -> BigRational {
    let raw = exact_sequence(v, lam, k);
    let shift = -(lam * &v[1]);
    let mut binom = BigInt::one();
    let mut total = BigRational::zero();
    for (r, m) in raw.iter().enumerate() {
        total += m * Pow::pow(&shift, k - r) * BigRational::from_integer(binom.clone());
        binom = binom * BigInt::from(k - r) / BigInt::from(r + 1);
    }
    total
}

/// Incrementally extended `ln M_k(x)` for a model with non-negative moments.
///
/// Works on `m_k = M_k / k!`, which obeys
/// `m_k = (x / k) sum_j (V_j / (j-1)!) m_{k-j}`, evaluated with log-sum-exp.
#[derive(Clone, Debug)]
pub struct LogMoments {
    model: WeightModel,
    ln_x: f64,
    /// `ln(V_j / (j-1)!)`, index `j >= 1` (slot 0 unused).
    coeff: Vec<f64>,
    /// `ln m_k`.
    scaled: Vec<f64>,
    scratch: Vec<f64>,
}

impl LogMoments {
    pub fn new(model: &WeightModel, x: f64) -> Result<Self> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::invalid("x", "log-space moments need a positive intensity"));
        }
        Ok(LogMoments {
            model: model.clone(),
            ln_x: math::log(x),
            coeff: vec![f64::NEG_INFINITY],
            scaled: vec![0.0],
            scratch: Vec::new(),
        })
    }

    pub fn extend_to(&mut self, kmax: usize) -> Result<()> {
        while self.coeff.len() <= kmax {
            let j = self.coeff.len();
            let c = match self.model.ln_moment(j)? {
                Some(lv) => lv - math::ln_factorial(j - 1),
                None => f64::NEG_INFINITY,
            };
            self.coeff.push(c);
        }
        while self.scaled.len() <= kmax {
            let k = self.scaled.len();
            self.scratch.clear();
            for j in 1..=k {
                self.scratch.push(self.coeff[j] + self.scaled[k - j]);
            }
            let lse = math::log_sum_exp(&self.scratch);
            self.scaled.push(self.ln_x - math::log(k as f64) + lse);
        }
        Ok(())
    }

    /// `ln(M_k / k!)`, `-inf` when `M_k = 0`.
    pub fn ln_scaled(&mut self, k: usize) -> Result<f64> {
        self.extend_to(k)?;
        Ok(self.scaled[k])
    }

    /// `ln M_k`, `-inf` when `M_k = 0`.
    pub fn ln_moment(&mut self, k: usize) -> Result<f64> {
        Ok(self.ln_scaled(k)? + math::ln_factorial(k))
    }

    pub fn len(&self) -> usize {
        self.scaled.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `ln M_k(x)` in log space; reaches orders far beyond `f64` range.
pub fn log_moment(model: &WeightModel, k: usize, x: f64) -> Result<f64> {
    LogMoments::new(model, x)?.ln_moment(k)
}

/// `ln M_0(x), ..., ln M_kmax(x)`.
pub fn log_moment_sequence(model: &WeightModel, kmax: usize, x: f64) -> Result<Vec<f64>> {
    let mut lm = LogMoments::new(model, x)?;
    lm.extend_to(kmax)?;
    (0..=kmax).map(|k| lm.ln_moment(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: i64) -> Number {
        Number::from_int(v)
    }

    #[test]
    fn recurrence_examples() {
        let unit = WeightModel::unit();
        assert_eq!(moment_recurrence(&unit, 1, &n(1)).unwrap().value(), n(1));
        assert_eq!(moment_recurrence(&unit, 4, &n(1)).unwrap().value(), n(15));
        assert_eq!(moment_recurrence(&unit, 0, &n(7)).unwrap().value(), n(1));
        // x V_2 + x^2 V_1^2 for gamma(2, 1/2): V_1 = 1, V_2 = 3/2
        let g = WeightModel::gamma(n(2), Number::ratio(1, 2)).unwrap();
        let x = Number::ratio(3, 7);
        let want = x.mul(&Number::ratio(3, 2)).add(&x.mul(&x));
        assert_eq!(moment_recurrence(&g, 2, &x).unwrap().value(), want);
    }

    #[test]
    fn oracle_examples() {
        let e = WeightModel::exponential();
        assert_eq!(moment_partition_oracle(&e, 2, &n(1)).unwrap().value(), n(3));
        let g = WeightModel::gaussian_centered(n(1)).unwrap();
        assert!(moment_partition_oracle(&g, 3, &Number::ratio(5, 3))
            .unwrap()
            .value()
            .is_zero());
        let lf = WeightModel::log_factorial();
        assert_eq!(moment_partition_oracle(&lf, 2, &n(3)).unwrap().value(), n(12));
        assert_eq!(
            moment_partition_oracle(&lf, 26, &n(1)),
            Err(Error::EnumerationCap { k: 26, cap: 25 })
        );
    }

    #[test]
    fn bell_examples() {
        assert_eq!(bell_polynomial(0, &n(3)).unwrap().value(), n(1));
        assert_eq!(bell_polynomial(5, &n(1)).unwrap().value(), n(52));
        assert_eq!(bell_polynomial(3, &n(2)).unwrap().value(), n(22));
        assert_eq!(bell_number(10), BigUint::from(115_975u32));
    }

    #[test]
    fn float_path_matches_exact_path() {
        let g = WeightModel::gamma(Number::Float(2.0), Number::Float(0.5)).unwrap();
        let ge = WeightModel::gamma(n(2), Number::ratio(1, 2)).unwrap();
        let a = moment_recurrence(&g, 12, &Number::Float(3.0)).unwrap();
        let b = moment_recurrence(&ge, 12, &n(3)).unwrap();
        assert!(a.exact.is_none() && b.exact.is_some());
        assert!((a.approx / b.approx - 1.0).abs() < 1e-13);
        let c = moment_partition_oracle(&g, 12, &Number::Float(3.0)).unwrap();
        assert!((c.approx / b.approx - 1.0).abs() < 1e-13);
    }

    #[test]
    fn custom_model_horizon_errors() {
        let c = WeightModel::custom(vec![n(1), n(1), n(1)]).unwrap();
        assert!(moment_recurrence(&c, 2, &n(1)).is_ok());
        assert_eq!(
            moment_recurrence(&c, 3, &n(1)),
            Err(Error::HorizonExceeded {
                requested: 3,
                horizon: 2
            })
        );
    }

    #[test]
    fn finite_n_examples() {
        let g = WeightModel::gamma(n(3), Number::ratio(1, 3)).unwrap();
        let lam = Number::ratio(5, 2);
        // k = 1: lam V_1
        let v1 = g.moment(1).unwrap();
        assert_eq!(finite_n_moment(&g, 1, 17, &lam).unwrap().value(), lam.mul(&v1));
        // k = 2, n = 2: lam V_2 + lam^2 V_1^2 / 2
        let v2 = g.moment(2).unwrap();
        let want = lam
            .mul(&v2)
            .add(&lam.mul(&lam).mul(&v1).mul(&v1).mul(&Number::ratio(1, 2)));
        assert_eq!(finite_n_moment(&g, 2, 2, &lam).unwrap().value(), want);
        let m = finite_n_moment(&WeightModel::unit(), 3, 1_000_000, &n(1)).unwrap();
        assert!((m.approx / 5.0 - 1.0).abs() <= 10.0 * 9.0 / 1e6);
        assert!(finite_n_moment(&g, 2, 0, &lam).is_err());
        // n < k is allowed: profiles with more blocks than n vanish
        let small = finite_n_moment(&WeightModel::unit(), 4, 1, &n(1)).unwrap();
        // only the single-block profile survives: (lam/n) * 1
        assert_eq!(small.value(), n(1));
    }

    #[test]
    fn centered_examples() {
        let unit = WeightModel::unit();
        assert!(centered_moment_tilde(&unit, 1, &n(4)).unwrap().value().is_zero());
        assert_eq!(centered_moment_tilde(&unit, 3, &n(1)).unwrap().value(), n(1));
        let e = WeightModel::exponential();
        // variance lam V_2 = 2 lam
        assert_eq!(centered_moment_tilde(&e, 2, &n(3)).unwrap().value(), n(6));
    }

    #[test]
    fn centered_float_path_recovers_from_cancellation() {
        // large lam: the alternating sum cancels heavily in floating point
        let g = WeightModel::gamma(Number::Float(2.0), Number::Float(0.5)).unwrap();
        let ge = WeightModel::gamma(n(2), Number::ratio(1, 2)).unwrap();
        let lam = 1000.0;
        let got = centered_moment_tilde(&g, 6, &Number::Float(lam)).unwrap();
        let want = centered_moment_tilde(&ge, 6, &n(1000)).unwrap();
        assert!((got.approx / want.approx - 1.0).abs() < 1e-14);
    }

    #[test]
    fn log_moment_examples() {
        let unit = WeightModel::unit();
        assert!(log_moment(&unit, 1, 1.0).unwrap().abs() < 1e-15);
        let l10 = log_moment(&unit, 10, 1.0).unwrap();
        assert!((l10 - math::log(115_975.0)).abs() < 1e-12);
        // exponential weights: 10! S_10(2)
        let s = exp_identity_s(10, &BigRational::from_integer(BigInt::from(2))).unwrap();
        let fact10 = BigRational::from_integer(BigInt::from(3_628_800));
        let want = ln_rational(&(s * fact10));
        let got = log_moment(&WeightModel::exponential(), 10, 2.0).unwrap();
        assert!((got - want).abs() < 1e-12);
        assert!(log_moment(&unit, 3, 0.0).is_err());
        let odd = log_moment(&WeightModel::bernoulli_centered(), 5, 2.0).unwrap();
        assert_eq!(odd, f64::NEG_INFINITY);
    }

    #[test]
    fn log_moment_rejects_negative_weight_moments() {
        // Exp(1) - 1 has a positive third central moment; a left-skewed custom law does not
        let c = WeightModel::custom(vec![n(1), n(0), n(1), n(-1)]).unwrap();
        assert_eq!(log_moment(&c, 3, 1.0), Err(Error::NegativeWeightMoment(3)));
    }
}
