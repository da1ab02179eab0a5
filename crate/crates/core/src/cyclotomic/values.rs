use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::cyclo_coeff;
use crate::arith::{factored_divisors, next_prime, small_primes_in, FactoredNat};
use crate::error::{Error, Result};

/// Guard on the number of divisors of `k * prod_{p<=k} p` that get visited.
pub const MAX_PROFILE_DIVISORS: usize = 1 << 20;

/// Largest `k` accepted by [`value_set`].
pub const MAX_VALUE_SET_K: u64 = 53;

/// `(a_d(k), a_{dq}(k))` for every `d | k * prod_{p<=k} p`, with `q` the least prime above `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffProfile {
    pub k: u64,
    pub q: u64,
    pub entries: BTreeMap<u128, (i64, i64)>,
}

/// `k * prod_{p<=k} p` in factored form.
pub fn m_k(k: u64) -> FactoredNat {
    let mut f: Vec<(u64, u32)> = small_primes_in(1, k).into_iter().map(|p| (p, 1)).collect();
    let kf = crate::arith::factorize(k.max(1), None).expect("k >= 1");
    f.extend_from_slice(kf.factors());
    FactoredNat::from_factors(f).expect("fits in u128 for small k")
}

pub fn coeff_profile(k: u64) -> Result<CoeffProfile> {
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let m = m_k(k);
    let q = next_prime(k);
    let divs = factored_divisors(&m);
    if divs.len() > MAX_PROFILE_DIVISORS {
        return Err(Error::resource(format!("{} divisors for k = {k}", divs.len())));
    }
    let qf = FactoredNat::from_factors(vec![(q, 1)])?;
    let entries = divs
        .par_iter()
        .map(|d| {
            let a = cyclo_coeff(d, k)?;
            let b = cyclo_coeff(&d.mul(&qf)?, k)?;
            Ok((d.value(), (a, b)))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(CoeffProfile { k, q, entries })
}

/// The sets of values of `a_n(k)` over all, even and odd `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSetReport {
    pub k: u64,
    pub full_set: BTreeSet<i64>,
    pub even_set: BTreeSet<i64>,
    pub odd_set: BTreeSet<i64>,
}

impl ValueSetReport {
    /// Largest absolute value, the height bound `B(k)`.
    pub fn height(&self) -> i64 {
        self.full_set.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// Values taken only for odd `n`.
    pub fn odd_only(&self) -> BTreeSet<i64> {
        self.full_set.difference(&self.even_set).copied().collect()
    }
}

pub fn value_set(k: u64) -> Result<ValueSetReport> {
    if k == 0 || k > MAX_VALUE_SET_K {
        return Err(Error::resource(format!("value sets are computed for 1 <= k <= {MAX_VALUE_SET_K}")));
    }
    if k == 1 {
        // a_n(1) = -mu(n) for n > 1, and Φ_1 breaks the pattern of the divisor formula
        let all: BTreeSet<i64> = [-1, 0, 1].into();
        return Ok(ValueSetReport { k, full_set: all.clone(), even_set: all.clone(), odd_set: all });
    }
    let profile = coeff_profile(k)?;
    let mut even_set = BTreeSet::from([0]);
    let mut odd_set = BTreeSet::from([0]);
    for (&d, &(a, b)) in &profile.entries {
        let target = if d % 2 == 0 { &mut even_set } else { &mut odd_set };
        target.insert(a);
        target.insert(b);
    }
    let full_set = even_set.union(&odd_set).copied().collect();
    Ok(ValueSetReport { k, full_set, even_set, odd_set })
}

/// Consecutive odd primes `p1 < p2 < p3` with `p3 <= k < p1 + p2`.
pub fn bertrand_triple(k: u64) -> Result<(u64, u64, u64)> {
    if k < 13 {
        return Err(Error::domain("a prime triple of this shape exists only for k >= 13"));
    }
    let primes = small_primes_in(2, k);
    let n = primes.len();
    let (p1, p2, p3) = (primes[n - 3], primes[n - 2], primes[n - 1]);
    if p1 + p2 <= k {
        return Err(Error::internal(format!("no prime triple found for k = {k}")));
    }
    Ok((p1, p2, p3))
}

/// A pair `(n, k)` with `a_n(k) = v`, verified before it is returned.
pub fn construct_coeff_value(v: i64) -> Result<(FactoredNat, u64)> {
    let (n, k) = match v {
        0 => (FactoredNat::from_factors(vec![(2, 2)])?, 1),
        1 => (FactoredNat::from_factors(vec![(2, 1)])?, 1),
        -1 => (FactoredNat::from_factors(vec![(2, 1), (3, 1)])?, 1),
        _ => {
            let s = if v < 0 { 1 - v } else { v + 1 } as usize;
            let primes = chain_with_short_span(s)?;
            let ps = *primes.last().unwrap();
            let mut f: Vec<(u64, u32)> = primes.iter().map(|&p| (p, 1)).collect();
            if s % 2 == 0 {
                f.push((next_prime(ps), 1));
            }
            if v > 0 {
                f.push((2, 1));
            }
            (FactoredNat::from_factors(f)?, ps)
        }
    };
    let got = cyclo_coeff(&n, k)?;
    if got != v {
        return Err(Error::internal(format!("constructed a_{n}({k}) = {got}, wanted {v}")));
    }
    Ok((n, k))
}

/// `s` consecutive odd primes whose two smallest sum past the largest.
fn chain_with_short_span(s: usize) -> Result<Vec<u64>> {
    let mut hi = 64u64;
    loop {
        let odd = small_primes_in(2, hi);
        for w in odd.windows(s) {
            if w[0] + w[1] > w[s - 1] {
                return Ok(w.to_vec());
            }
        }
        if hi > 1 << 20 {
            return Err(Error::resource(format!("no prime chain of length {s} found")));
        }
        hi *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_k2() {
        let p = coeff_profile(2).unwrap();
        assert_eq!(p.q, 3);
        let e: Vec<_> = p.entries.iter().map(|(&d, &v)| (d, v)).collect();
        assert_eq!(e, vec![(1, (0, 1)), (2, (0, 1)), (4, (1, -1))]);
    }

    #[test]
    fn heights_small() {
        let b: Vec<i64> = (1..=12).map(|k| value_set(k).unwrap().height()).collect();
        assert_eq!(b, vec![1, 1, 1, 1, 1, 1, 2, 1, 1, 1, 2, 1]);
    }

    #[test]
    fn seven_minus_two_only_odd() {
        let r = value_set(7).unwrap();
        assert_eq!(r.odd_only(), BTreeSet::from([-2]));
        assert!(r.full_set.contains(&2));
    }

    #[test]
    fn triples() {
        assert_eq!(bertrand_triple(13).unwrap(), (7, 11, 13));
        assert_eq!(bertrand_triple(30).unwrap(), (19, 23, 29));
        assert!(bertrand_triple(12).is_err());
        for k in 13..=500 {
            let (p1, p2, p3) = bertrand_triple(k).unwrap();
            assert!(p3 <= k && k < p1 + p2);
        }
    }

    #[test]
    fn witnesses() {
        let (n, k) = construct_coeff_value(-2).unwrap();
        assert_eq!((n.value(), k), (105, 7));
        let (n, k) = construct_coeff_value(2).unwrap();
        assert_eq!((n.value(), k), (210, 7));
        let (n, k) = construct_coeff_value(0).unwrap();
        assert_eq!((n.value(), k), (4, 1));
    }
}
