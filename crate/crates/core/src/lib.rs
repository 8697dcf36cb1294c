//! Moments of compound Poisson sums, their large-order asymptotics, the
//! associated tilted distribution, and a random-graph degree experiment.
//!
//! Everything here is `no_std` with `alloc`; IO lives in the `cpm` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod auxdist;
pub mod error;
pub mod graphsim;
pub mod math;
pub mod moments;
pub mod number;
pub mod weights;

pub use error::{Error, Result};
pub use number::Number;
pub use weights::{Family, WeightModel};
