//! Exact and empirical value distributions of cyclotomic coefficients `a_n(k)`,
//! Ramanujan sums `c_n(m)` and the symmetric functions of primitive roots.

pub mod arith;
pub mod cyclotomic;
pub mod density;
pub mod densities_natural;
pub mod densities_prime;
pub mod empirics;
pub mod error;
pub mod partition;
pub mod ramanujan;
pub mod report;

pub use error::{Error, Result};
