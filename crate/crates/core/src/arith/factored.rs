//! Factored naturals and the classical multiplicative functions.

use std::fmt;

use num_integer::Integer;

use super::sieve::SievePack;
use crate::error::{Error, Result};

/// A positive integer with its prime factorisation, primes ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredNat {
    value: u128,
    factors: Vec<(u64, u32)>,
}

impl FactoredNat {
    pub fn one() -> Self {
        FactoredNat { value: 1, factors: Vec::new() }
    }

    /// Builds from `(prime, exponent)` pairs; zero exponents are dropped.
    pub fn from_factors(mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.retain(|&(_, e)| e > 0);
        factors.sort_unstable();
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            if p < 2 {
                return Err(Error::domain(format!("{p} is not a prime")));
            }
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        let mut value: u128 = 1;
        for &(p, e) in &merged {
            for _ in 0..e {
                value = value
                    .checked_mul(p as u128)
                    .ok_or_else(|| Error::resource("factored value overflows u128"))?;
            }
        }
        Ok(FactoredNat { value, factors: merged })
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    /// The value as `u64`, for callers that index tables.
    pub fn as_u64(&self) -> Option<u64> {
        u64::try_from(self.value).ok()
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn valuation(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Product of the distinct primes.
    pub fn kernel(&self) -> FactoredNat {
        FactoredNat::from_factors(self.factors.iter().map(|&(p, _)| (p, 1)).collect())
            .expect("kernel divides the value")
    }

    pub fn mul(&self, other: &FactoredNat) -> Result<FactoredNat> {
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        FactoredNat::from_factors(f)
    }

    /// `self / d`, an error unless `d` divides `self`.
    pub fn div_exact(&self, d: &FactoredNat) -> Result<FactoredNat> {
        let mut out = Vec::with_capacity(self.factors.len());
        for &(p, e) in &self.factors {
            let f = d.valuation(p);
            if f > e {
                return Err(Error::domain(format!("{} does not divide {}", d.value, self.value)));
            }
            out.push((p, e - f));
        }
        if d.factors.iter().any(|&(p, _)| self.valuation(p) == 0) {
            return Err(Error::domain(format!("{} does not divide {}", d.value, self.value)));
        }
        FactoredNat::from_factors(out)
    }

    /// `gcd(self, m)` in factored form.
    pub fn gcd_with(&self, m: u128) -> FactoredNat {
        let mut out = Vec::new();
        for &(p, e) in &self.factors {
            let mut f = 0;
            let mut r = m;
            while f < e && r % p as u128 == 0 {
                r /= p as u128;
                f += 1;
            }
            out.push((p, f));
        }
        FactoredNat::from_factors(out).expect("gcd divides the value")
    }

    pub fn divides(&self, m: u128) -> bool {
        m % self.value == 0
    }
}

impl fmt::Display for FactoredNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Prime factorisation of `n >= 1`, using the sieve when it covers `n`.
pub fn factorize(n: u64, sieve: Option<&SievePack>) -> Result<FactoredNat> {
    if n == 0 {
        return Err(Error::domain("cannot factor 0"));
    }
    let mut factors = Vec::new();
    let mut m = n;
    if let Some(s) = sieve.filter(|s| s.covers(n)) {
        while m > 1 {
            let p = s.spf(m);
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    } else {
        let mut push = |p: u64, m: &mut u64| {
            let mut e = 0;
            while *m % p == 0 {
                *m /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p, e));
            }
        };
        push(2, &mut m);
        push(3, &mut m);
        let mut p = 5u64;
        while p.saturating_mul(p) <= m {
            push(p, &mut m);
            push(p + 2, &mut m);
            p += 6;
        }
        if m > 1 {
            factors.push((m, 1));
        }
    }
    Ok(FactoredNat { value: n as u128, factors })
}

pub fn mobius(n: &FactoredNat) -> i8 {
    if n.is_squarefree() {
        if n.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

pub fn euler_phi(n: &FactoredNat) -> u128 {
    n.factors.iter().fold(1u128, |acc, &(p, e)| {
        acc * (p as u128 - 1) * (p as u128).pow(e - 1)
    })
}

/// True when no prime power `p^k` divides `n`.
pub fn is_kth_powerfree(n: &FactoredNat, k: u32) -> Result<bool> {
    if k < 2 {
        return Err(Error::domain("k-free needs k >= 2"));
    }
    Ok(n.factors.iter().all(|&(_, e)| e < k))
}

/// All divisors in ascending order.
pub fn divisors(n: &FactoredNat) -> Vec<u128> {
    let mut divs = vec![1u128];
    for &(p, e) in &n.factors {
        let len = divs.len();
        let mut pk = 1u128;
        for _ in 0..e {
            pk *= p as u128;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// All divisors in factored form, in no particular order.
pub fn factored_divisors(n: &FactoredNat) -> Vec<FactoredNat> {
    let mut divs = vec![FactoredNat::one()];
    for &(p, e) in &n.factors {
        let len = divs.len();
        for k in 1..=e {
            for i in 0..len {
                let mut f = divs[i].factors.clone();
                f.push((p, k));
                let value = divs[i].value * (p as u128).pow(k);
                divs.push(FactoredNat { value, factors: f });
            }
        }
    }
    divs
}

pub fn gcd_u128(a: u128, b: u128) -> u128 {
    a.gcd(&b)
}
