//! Closed-form oracles and combinatorial checks.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::{moment_partition_oracle, moment_recurrence, profiles};
use crate::error::{Error, Result};
use crate::number::Number;
use crate::weights::WeightModel;

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

fn rational(v: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `S_k(x) = sum_{p=1}^{k} x^p / p! C(k-1, p-1)`; `k! S_k(x)` is the moment
/// for exponential weights.
pub fn exp_identity_s(k: usize, x: &BigRational) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::invalid("k", "order must be at least 1"));
    }
    let mut total = BigRational::zero();
    for p in 1..=k {
        total += Pow::pow(x, p) * rational(binomial(k - 1, p - 1)) / rational(factorial(p));
    }
    Ok(total)
}

/// `T_k(x) = x (x+1) ... (x+k-1) / k!`; `k! T_k(x)` is the moment for
/// weights `V_j = (j-1)!`.
pub fn factorial_identity_t(k: usize, x: &BigRational) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::invalid("k", "order must be at least 1"));
    }
    let mut rising = BigRational::one();
    for i in 0..k {
        rising *= x + BigRational::from_integer(BigInt::from(i));
    }
    Ok(rising / rational(factorial(k)))
}

/// Modified Bell numbers from the recurrence
/// `B(2k+2) = 1 + B(2k) + sum_{l=1}^{k} C(2k, 2l-1) B(2k+2-2l)`,
/// `B(0) = B(2) = 1`.
///
/// The recurrence reproduces 1, 4, 25, 262, 3991 for orders 2..10. These are
/// not the counts of set partitions into even blocks (see
/// [`even_block_partitions`]), which begin 1, 4, 31, 379, 6556.
pub fn even_partition_number(two_k: usize) -> Result<BigUint> {
    if two_k % 2 == 1 {
        return Err(Error::OddOrder(two_k));
    }
    let half = two_k / 2;
    let mut b: Vec<BigUint> = vec![BigUint::one(), BigUint::one()];
    for k in 1..half {
        // b[k + 1] from b[0..=k]
        let mut next = BigUint::one() + &b[k];
        for l in 1..=k {
            next += binomial(2 * k, 2 * l - 1) * &b[k + 1 - l];
        }
        b.push(next);
    }
    Ok(b[half].clone())
}

/// Number of partitions of a `2k`-set into blocks of even size, i.e. the
/// moment `M_{2k}(1)` for symmetric `+-1` weights.
pub fn even_block_partitions(two_k: usize) -> Result<BigUint> {
    if two_k % 2 == 1 {
        return Err(Error::OddOrder(two_k));
    }
    // E(n) = sum_{j odd} C(n-1, j) E(n-1-j): the block holding the first
    // element has even size j + 1.
    let mut e: Vec<BigUint> = vec![BigUint::one()];
    for n in 1..=two_k {
        let mut acc = BigUint::zero();
        let mut j = 1;
        while j < n {
            acc += binomial(n - 1, j) * &e[n - 1 - j];
            j += 2;
        }
        e.push(acc);
    }
    Ok(e[two_k].clone())
}

/// Ordered compositions of `k` into `p` positive parts, by exhaustive enumeration.
pub fn count_compositions(k: usize, p: usize) -> u64 {
    fn go(rest: usize, parts: usize) -> u64 {
        if parts == 0 {
            return u64::from(rest == 0);
        }
        (1..=rest).map(|first| go(rest - first, parts - 1)).sum()
    }
    if p == 0 {
        return u64::from(k == 0);
    }
    go(k, p)
}

/// `sum p! / prod l_i!` over profiles of `k` with exactly `p` blocks.
pub fn composition_identity(k: usize, p: usize) -> BigUint {
    let pf = factorial(p);
    profiles(k)
        .into_iter()
        .filter(|pr| pr.blocks() == p)
        .map(|pr| {
            let denom = pr.counts().iter().fold(BigUint::one(), |acc, &l| acc * factorial(l));
            &pf / denom
        })
        .sum()
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub case: String,
    pub passed: bool,
    pub detail: String,
}

/// Runs the closed-form and combinatorial identities on a fixed grid.
pub fn identity_suite() -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    let xs = [
        Number::ratio(1, 2),
        Number::one(),
        Number::from_int(3),
        Number::from_int(10),
    ];
    let exp = WeightModel::exponential();
    let lf = WeightModel::log_factorial();
    for x in &xs {
        let xr = x.as_exact().expect("grid is exact").clone();
        for k in 1..=12 {
            let kf = rational(factorial(k));
            let m = moment_recurrence(&exp, k, x).ok().and_then(|m| m.exact);
            let s = exp_identity_s(k, &xr).ok().map(|s| s * &kf);
            out.push(check("exponential_S", k, x, m, s));
            let m = moment_recurrence(&lf, k, x).ok().and_then(|m| m.exact);
            let t = factorial_identity_t(k, &xr).ok().map(|t| t * &kf);
            out.push(check("log_factorial_T", k, x, m, t));
        }
    }
    for p in 1..=8 {
        for k in p..=12 {
            let brute = BigUint::from(count_compositions(k, p));
            let sum = composition_identity(k, p);
            let closed = binomial(k - 1, p - 1);
            out.push(IdentityCheck {
                name: String::from("compositions"),
                case: format!("k={k} p={p}"),
                passed: brute == closed && sum == closed,
                detail: format!("brute={brute} profile_sum={sum} binomial={closed}"),
            });
        }
    }
    for k in 0..=10 {
        let x = Number::from_int(2);
        let a = moment_recurrence(&exp, k, &x).ok().and_then(|m| m.exact);
        let b = moment_partition_oracle(&exp, k, &x).ok().and_then(|m| m.exact);
        out.push(check("oracle_exponential", k, &x, a, b));
    }
    out
}

fn check(name: &str, k: usize, x: &Number, lhs: Option<BigRational>, rhs: Option<BigRational>) -> IdentityCheck {
    let passed = lhs.is_some() && lhs == rhs;
    let show = |v: &Option<BigRational>| match v {
        Some(r) => format!("{r}"),
        None => String::from("error"),
    };
    IdentityCheck {
        name: String::from(name),
        case: format!("k={k} x={x}"),
        passed,
        detail: format!("lhs={} rhs={}", show(&lhs), show(&rhs)),
    }
}
