//! Scalars that are either exact rationals or binary floating point.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::math;

/// A real parameter or result. Exact values stay exact through arithmetic
/// with other exact values; any float operand turns the result into a float.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Exact(BigRational),
    Float(f64),
}

impl Number {
    pub fn zero() -> Self {
        Number::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Number::Exact(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Number::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_big(v: BigInt) -> Self {
        Number::Exact(BigRational::from_integer(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Number::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Float(_) => None,
        }
    }

    /// Exact rational value; floats convert to their binary value without rounding.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Number::Exact(r) => Some(r.clone()),
            Number::Float(f) => BigRational::from_float(*f),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => rational_to_f64(r),
            Number::Float(f) => *f,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Number::Exact(r) => r.is_zero(),
            Number::Float(f) => *f == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Number::Exact(r) => r.is_negative(),
            Number::Float(f) => *f < 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && !self.is_negative()
    }

    /// Natural log, `None` unless the value is strictly positive.
    pub fn ln(&self) -> Option<f64> {
        if !self.is_positive() {
            return None;
        }
        match self {
            Number::Exact(r) => Some(ln_rational(r)),
            Number::Float(f) => Some(math::log(*f)),
        }
    }

    pub fn add(&self, other: &Number) -> Number {
        match (self, other) {
            (Number::Exact(a), Number::Exact(b)) => Number::Exact(a + b),
            _ => Number::Float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Number) -> Number {
        match (self, other) {
            (Number::Exact(a), Number::Exact(b)) => Number::Exact(a - b),
            _ => Number::Float(self.to_f64() - other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Number) -> Number {
        match (self, other) {
            (Number::Exact(a), Number::Exact(b)) => Number::Exact(a * b),
            _ => Number::Float(self.to_f64() * other.to_f64()),
        }
    }

    pub fn neg(&self) -> Number {
        match self {
            Number::Exact(a) => Number::Exact(-a),
            Number::Float(f) => Number::Float(-f),
        }
    }

    pub fn powi(&self, e: u32) -> Number {
        match self {
            Number::Exact(a) => Number::Exact(Pow::pow(a, e)),
            Number::Float(f) => Number::Float(libm::pow(*f, e as f64)),
        }
    }

    /// Parses `3`, `-7/2`, `0.125`, `1e6` and `2.5E-3` exactly; `inf`/`nan` are rejected.
    pub fn parse(s: &str) -> Result<Number> {
        parse_rational(s.trim())
            .map(Number::Exact)
            .ok_or_else(|| Error::Parse(s.to_string()))
    }

    /// Decimal rendering with `sig` significant digits (exact values are
    /// rounded half away from zero, floats use their shortest round-trip form).
    pub fn to_decimal(&self, sig: usize) -> String {
        match self {
            Number::Exact(r) => rational_to_decimal(r, sig),
            Number::Float(f) => format!("{f:e}"),
        }
    }
}

impl From<f64> for Number {
    fn from(v: f64) -> Self {
        Number::Float(v)
    }
}

impl From<BigRational> for Number {
    fn from(v: BigRational) -> Self {
        Number::Exact(v)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Number::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Number::Float(v) => write!(f, "{v}"),
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= Pow::pow(&ten, scale as u32);
    } else {
        value /= Pow::pow(&ten, (-scale) as u32);
    }
    Some(if neg { -value } else { value })
}

fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return math::log(v.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::INFINITY);
    math::log(top) + shift as f64 * math::LN_2
}

/// `ln(r)` for positive `r` without overflowing on huge numerators/denominators.
pub fn ln_rational(r: &BigRational) -> f64 {
    debug_assert!(r.is_positive());
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

/// Nearest float, also for values whose numerator and denominator overflow `f64`.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * math::exp(ln_rational(&r.abs()))
}

fn rational_to_decimal(r: &BigRational, sig: usize) -> String {
    let sig = sig.max(1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);
    let mut exp10 = libm::floor(ln_rational(&a) / core::f64::consts::LN_10) as i64;
    let (digits, exp10) = loop {
        let shift = sig as i64 - 1 - exp10;
        let scaled = if shift >= 0 {
            &a * BigRational::from_integer(Pow::pow(&ten, shift as u64))
        } else {
            &a / BigRational::from_integer(Pow::pow(&ten, (-shift) as u64))
        };
        let (q, rem) = scaled.numer().div_rem(scaled.denom());
        let mut n = q;
        if BigInt::from(2) * rem >= *scaled.denom() {
            n += 1;
        }
        let lower = Pow::pow(&ten, (sig - 1) as u64);
        let upper = Pow::pow(&ten, sig as u64);
        if n >= upper {
            exp10 += 1;
        } else if n < lower {
            exp10 -= 1;
        } else {
            break (n.to_string(), exp10);
        }
    };
    let body = place_decimal_point(&digits, exp10);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// `digits` is `d1 d2 ... ds` standing for `d1.d2...ds * 10^exp10`.
fn place_decimal_point(digits: &str, exp10: i64) -> String {
    let sig = digits.len() as i64;
    if (-6..40).contains(&exp10) {
        let s = if exp10 >= sig - 1 {
            let mut s = String::from(digits);
            for _ in 0..(exp10 - (sig - 1)) {
                s.push('0');
            }
            s
        } else if exp10 >= 0 {
            let cut = (exp10 + 1) as usize;
            format!("{}.{}", &digits[..cut], &digits[cut..])
        } else {
            let mut s = String::from("0.");
            for _ in 0..(-exp10 - 1) {
                s.push('0');
            }
            s.push_str(digits);
            s
        };
        trim_fraction(s)
    } else {
        let mantissa = trim_fraction(format!("{}.{}", &digits[..1], &digits[1..]));
        format!("{mantissa}e{exp10}")
    }
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integer_fraction_and_decimal_forms() {
        assert_eq!(Number::parse("3").unwrap(), Number::from_int(3));
        assert_eq!(Number::parse("-7/2").unwrap(), Number::ratio(-7, 2));
        assert_eq!(Number::parse("0.125").unwrap(), Number::ratio(1, 8));
        assert_eq!(Number::parse("1e6").unwrap(), Number::from_int(1_000_000));
        assert_eq!(Number::parse("2.5E-3").unwrap(), Number::ratio(1, 400));
        assert_eq!(Number::parse(".5").unwrap(), Number::ratio(1, 2));
        for bad in ["", "abc", "1/0", "inf", "nan", "1.2.3", "-"] {
            assert!(Number::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Number::from_int(115975).to_decimal(30), "115975");
        assert_eq!(Number::ratio(22, 3).to_decimal(5), "7.3333");
        assert_eq!(Number::ratio(2, 3).to_decimal(3), "0.667");
        assert_eq!(Number::ratio(-1, 8).to_decimal(30), "-0.125");
        assert_eq!(Number::ratio(1, 3_000_000_000).to_decimal(4), "3.333e-10");
        assert_eq!(Number::ratio(999_999, 1).to_decimal(3), "1000000");
        let big = Number::from_big(Pow::pow(&BigInt::from(10), 50u32));
        assert_eq!(big.to_decimal(30), "1e50");
    }

    #[test]
    fn ln_of_huge_rationals() {
        let big = BigRational::from_integer(Pow::pow(&BigInt::from(3), 5000u32));
        let want = 5000.0 * math::log(3.0);
        assert!((ln_rational(&big) - want).abs() < 1e-9 * want);
        let tiny = big.recip();
        assert!((rational_to_f64(&tiny)) == 0.0);
        assert!((ln_rational(&tiny) + want).abs() < 1e-9 * want);
    }
}
