//! Mean and value distribution of `a_n(k)` over the natural numbers.
//!
//! Densities are returned as multiples of `6/pi^2`, so a coefficient equals
//! `zeta(2)` times the density; `e_k` is the mean scaled the same way.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{factorize, q, small_primes_in, ExactRational, FactoredNat};
use crate::cyclotomic::{binom_sign, coeff_profile, CoeffProfile};
use crate::density::{Basis, DensityTable};
use crate::error::{Error, Result};
use crate::partition::for_each_partition;

/// How an [`EkValue`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EkMethod {
    Divisor,
    Partition,
}

/// Scaled mean `e_k` together with the integer `k * prod_{p<=k} (p+1) * e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EkValue {
    pub k: u64,
    pub value: ExactRational,
    pub bracket: Option<BigInt>,
    pub method: EkMethod,
}

impl EkValue {
    fn new(k: u64, value: ExactRational, method: EkMethod) -> Self {
        let scale = ExactRational::from_int(k as i64) * prime_product(k, |p| q(p as i64 + 1, 1));
        let b = scale * value.clone();
        let bracket = b.denom().eq(&BigInt::from(1)).then(|| b.numer().clone());
        EkValue { k, value, bracket, method }
    }
}

fn prime_product(k: u64, f: impl Fn(u64) -> ExactRational) -> ExactRational {
    small_primes_in(1, k).into_iter().map(f).fold(ExactRational::one(), |a, b| a * b)
}

/// `1 / prod_{p<=k} (1 + 1/p)`.
fn coprime_factor(k: u64, from: u64) -> ExactRational {
    small_primes_in(from, k).into_iter().fold(ExactRational::one(), |a, p| a * q(p as i64, p as i64 + 1))
}

/// `sum (a_d + a_dq) / d` over the profile entries accepted by `keep`.
fn weighted_sum(profile: &CoeffProfile, keep: impl Fn(u128) -> bool) -> ExactRational {
    let m: u128 = profile.entries.keys().copied().max().unwrap_or(1);
    let mut s = BigInt::zero();
    for (&d, &(a, b)) in &profile.entries {
        if keep(d) {
            s += BigInt::from(a + b) * BigInt::from(m / d);
        }
    }
    ExactRational::new(s, BigInt::from(m)).expect("m >= 1")
}

/// `e_k` from the divisors of `k * prod_{p<=k} p`.
pub fn mean_coeff(k: u64) -> Result<EkValue> {
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    if k == 1 {
        return Ok(EkValue::new(1, ExactRational::zero(), EkMethod::Divisor));
    }
    let profile = coeff_profile(k)?;
    let e = q(1, 2) * coprime_factor(k, 1) * weighted_sum(&profile, |_| true);
    Ok(EkValue::new(k, e, EkMethod::Divisor))
}

/// `e_k` for odd `k >= 3` from the odd divisors only.
pub fn mean_coeff_odd(k: u64) -> Result<ExactRational> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::domain("odd k >= 3 required"));
    }
    let profile = coeff_profile(k)?;
    Ok(q(1, 6) * coprime_factor(k, 2) * weighted_sum(&profile, |d| d % 2 == 1))
}

/// `e_k` for prime `k >= 3` from the divisors of `prod_{2<p<k} p`.
pub fn mean_coeff_prime(k: u64) -> Result<ExactRational> {
    if k < 3 || !crate::arith::is_small_prime(k) {
        return Err(Error::domain("prime k >= 3 required"));
    }
    let profile = coeff_profile(k)?;
    let keep = |d: u128| d % 2 == 1 && d % k as u128 != 0;
    Ok(q(1, 6) * coprime_factor(k - 1, 2) * weighted_sum(&profile, keep))
}

/// `e_k` as a signed sum over the partitions of `k`.
pub fn mean_coeff_partition(k: u64) -> Result<EkValue> {
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let primes = small_primes_in(1, k);
    if primes.len() > 32 {
        return Err(Error::resource("too many primes below k"));
    }
    let exps: Vec<Vec<u8>> = (0..=k)
        .map(|j| {
            primes
                .iter()
                .map(|&p| {
                    let (mut e, mut m) = (0u8, j.max(1));
                    while m % p == 0 {
                        m /= p;
                        e += 1;
                    }
                    e
                })
                .collect()
        })
        .collect();
    let np = primes.len();
    let mut acc: HashMap<u128, i64> = HashMap::new();
    let mut lo = vec![0u8; np];
    let mut hi = vec![0u8; np];
    for_each_partition(k as u32, |parts| {
        lo.copy_from_slice(&exps[parts[0].0 as usize]);
        hi.copy_from_slice(&lo);
        for &(j, _) in &parts[1..] {
            for (i, &e) in exps[j as usize].iter().enumerate() {
                lo[i] = lo[i].min(e);
                hi[i] = hi[i].max(e);
            }
        }
        let mut den: u128 = 1;
        for i in 0..np {
            match hi[i] - lo[i] {
                0 => {}
                1 => den *= primes[i] as u128 + 1,
                _ => return,
            }
            den *= (primes[i] as u128).pow(lo[i] as u32);
        }
        let (mut plus, mut minus) = (1i64, 1i64);
        for &(j, mult) in parts {
            let mut mu = 1i64;
            for (i, &e) in exps[j as usize].iter().enumerate() {
                match hi[i] - e {
                    0 => {}
                    1 => mu = -mu,
                    _ => {
                        mu = 0;
                        break;
                    }
                }
            }
            plus *= binom_sign(mu, mult as u64);
            minus *= binom_sign(-mu, mult as u64);
        }
        let eps = plus + minus;
        if eps != 0 {
            *acc.entry(den).or_insert(0) += eps;
        }
    })?;
    let mut total = ExactRational::zero();
    for (den, num) in acc {
        total = total + ExactRational::new(num, BigInt::from(den))?;
    }
    Ok(EkValue::new(k, q(1, 2) * total, EkMethod::Partition))
}

/// `zeta(2) * density(a_n(k) = v)` for every nonzero `v`, on the `6/pi^2` basis.
pub fn coeff_density(k: u64) -> Result<DensityTable> {
    let mut table = DensityTable::new(Basis::SixOverPi2);
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    if k == 1 {
        table.add(-1, &q(1, 2));
        table.add(1, &q(1, 2));
        return Ok(table);
    }
    let profile = coeff_profile(k)?;
    let f = q(1, 2) * coprime_factor(k, 1);
    for (&d, &(a, b)) in &profile.entries {
        let w = f.checked_div(&ExactRational::from_int(BigInt::from(d)))?;
        table.add(a, &w);
        table.add(b, &w);
    }
    Ok(table)
}

/// Same table for odd `k >= 3`, built from odd divisors and the doubling symmetry.
pub fn coeff_density_odd(k: u64) -> Result<DensityTable> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::domain("odd k >= 3 required"));
    }
    let profile = coeff_profile(k)?;
    let f = q(1, 2) * coprime_factor(k, 1);
    let mut table = DensityTable::new(Basis::SixOverPi2);
    for (&d, &(a, b)) in profile.entries.iter().filter(|(&d, _)| d % 2 == 1) {
        let w = f.checked_div(&ExactRational::from_int(BigInt::from(d)))?;
        let half = w.clone() * q(1, 2);
        for v in [a, b] {
            table.add(v, &w);
            table.add(-v, &half);
        }
    }
    Ok(table)
}

/// One row of the scan over Möller's two conjectured properties of `e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MollerRow {
    pub k: u64,
    pub e: ExactRational,
    /// `(-1)^k (e_k - e_{k+1}) > 0`; `None` for the last row.
    pub sign_ok: Option<bool>,
    /// `0 <= e_k <= 1/2`.
    pub range_ok: bool,
}

pub fn moller_conjecture_scan(kmax: u64) -> Result<Vec<MollerRow>> {
    if kmax == 0 || kmax > 61 {
        return Err(Error::resource("scan supports 1 <= kmax <= 61"));
    }
    let es: Vec<ExactRational> = (1..=kmax)
        .map(|k| mean_coeff_partition(k).map(|e| e.value))
        .collect::<Result<_>>()?;
    let half = q(1, 2);
    Ok(es
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let k = i as u64 + 1;
            let sign_ok = es.get(i + 1).map(|next| {
                let d = e.clone() - next.clone();
                if k % 2 == 0 {
                    d > 0
                } else {
                    d < 0
                }
            });
            MollerRow { k, e: e.clone(), sign_ok, range_ok: *e >= 0 && *e <= half }
        })
        .collect())
}

/// Density of squarefree `n` coprime to `r`, as a multiple of `6/pi^2`.
pub fn squarefree_coprime_density(r: &FactoredNat) -> ExactRational {
    r.primes().fold(ExactRational::one(), |a, p| a * q(p as i64, p as i64 + 1))
}

pub fn squarefree_coprime_density_u64(r: u64) -> Result<ExactRational> {
    Ok(squarefree_coprime_density(&factorize(r, None)?))
}
