//! Scalar helpers over `libm` so the crate stays usable without `std`.

pub use libm::{cosh, exp, expm1, lgamma, log, log1p, sinh, sqrt};

pub const LN_2: f64 = core::f64::consts::LN_2;
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln(n!)`. Direct products up to 170, Stirling series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 170 {
        let mut p = 1.0f64;
        for i in 2..=n {
            p *= i as f64;
        }
        return log(p);
    }
    let x = n as f64 + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
    (x - 0.5) * log(x) - x + LN_SQRT_2PI + series
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Leading Stirling term `ln(sqrt(2 pi n) (n/e)^n)`.
pub fn ln_stirling(n: usize) -> f64 {
    let x = n as f64;
    0.5 * log(x) + LN_SQRT_2PI + x * (log(x) - 1.0)
}

/// Stable `ln(sum(exp(v)))`; `-inf` entries are ignored.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let s: f64 = values.iter().map(|v| exp(v - max)).sum();
    max + log(s)
}
