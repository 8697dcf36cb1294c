//! Integer partitions of `k` written as block-size multiplicities.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

/// Multiplicities `(l_1, ..., l_k)` of a set partition's block sizes, with
/// the number of set partitions sharing that profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionProfile {
    counts: Vec<usize>,
    weight_count: BigUint,
}

impl PartitionProfile {
    /// Builds a profile from its multiplicities; `counts[i - 1]` is `l_i`.
    pub fn new(counts: Vec<usize>) -> Self {
        let weight_count = set_partition_count(&counts);
        PartitionProfile { counts, weight_count }
    }

    /// `l_i` for `i >= 1`.
    pub fn multiplicity(&self, block_size: usize) -> usize {
        self.counts.get(block_size.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `sum_i i l_i`.
    pub fn order(&self) -> usize {
        self.counts.iter().enumerate().map(|(i, l)| (i + 1) * l).sum()
    }

    /// Number of blocks `sum_i l_i`.
    pub fn blocks(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `k! / prod_i ((i!)^{l_i} l_i!)`.
    pub fn weight_count(&self) -> &BigUint {
        &self.weight_count
    }

    /// Iterator over the `(block size, multiplicity)` pairs with non-zero multiplicity.
    pub fn parts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, l)| **l > 0)
            .map(|(i, l)| (i + 1, *l))
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

fn set_partition_count(counts: &[usize]) -> BigUint {
    let k: usize = counts.iter().enumerate().map(|(i, l)| (i + 1) * l).sum();
    let mut den = BigUint::one();
    for (i, &l) in counts.iter().enumerate() {
        if l > 0 {
            den *= num_traits::Pow::pow(factorial(i + 1), l) * factorial(l);
        }
    }
    factorial(k) / den
}

/// All profiles of `k`, in lexicographic order of `(l_1, ..., l_k)`.
pub fn profiles(k: usize) -> Vec<PartitionProfile> {
    let mut out = Vec::new();
    let mut counts = vec![0usize; k];
    fill(1, k, &mut counts, &mut out);
    out
}

fn fill(size: usize, remaining: usize, counts: &mut Vec<usize>, out: &mut Vec<PartitionProfile>) {
    if remaining == 0 {
        for c in counts.iter_mut().skip(size - 1) {
            *c = 0;
        }
        out.push(PartitionProfile::new(counts.clone()));
        return;
    }
    if size > counts.len() {
        return;
    }
    for l in 0..=remaining / size {
        counts[size - 1] = l;
        fill(size + 1, remaining - l * size, counts, out);
    }
    counts[size - 1] = 0;
}
