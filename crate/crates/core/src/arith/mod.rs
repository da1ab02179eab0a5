//! Integer arithmetic kernel: sieving, factorisation and exact rationals.

pub mod factored;
pub mod rational;
pub mod sieve;

pub use factored::{
    divisors, euler_phi, factored_divisors, factorize, gcd_u128, is_kth_powerfree, mobius,
    FactoredNat,
};
pub use rational::{q, ExactRational};
pub use sieve::{primes_up_to, SievePack};

/// Primes `p` with `lo < p <= hi`, by trial division; for small ranges only.
pub fn small_primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo + 1..=hi).filter(|&n| is_small_prime(n)).collect()
}

pub fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Least prime strictly greater than `k`.
pub fn next_prime(k: u64) -> u64 {
    let mut n = k + 1;
    while !is_small_prime(n) {
        n += 1;
    }
    n
}
