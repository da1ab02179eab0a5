//! Deterministic scans over primes and integers, and the primitive-root oracle.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{euler_phi, factorize, gcd_u128, is_kth_powerfree, mobius, ExactRational, FactoredNat, SievePack};
use crate::cyclotomic::cyclo_coeff;
use crate::densities_prime::ValuationConstraint;
use crate::error::{Error, Result};
use crate::ramanujan::ramanujan_sum;

/// Maps a residue mod `p` into `(-p/2, p/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueConvention {
    pub p: u64,
}

impl ResidueConvention {
    pub fn map(self, x: i128) -> i64 {
        let p = self.p as i128;
        let r = x.rem_euclid(p);
        (if 2 * r <= p { r } else { r - p }) as i64
    }
}

/// Which primes a scan visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    FirstPrimes(usize),
    UpTo(u64),
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::FirstPrimes(n) => write!(f, "first {n} primes"),
            Bound::UpTo(x) => write!(f, "p <= {x}"),
        }
    }
}

/// Per-prime quantity tallied by [`scan_primes`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statistic {
    MuPMinus1,
    CPMinus1(u64),
    APMinus1(u64),
    /// Elementary symmetric function of the primitive roots, mod p.
    SkModP(u64),
    /// Power sum of the primitive roots, mod p.
    PowerSumModP(u64),
    /// Indicator that `p - r` is free of `k`-th powers.
    KfreeShift { r: i64, k: u32 },
    /// `mu_S(p - 1)` over primes whose `p - 1` has the prescribed valuations.
    Conjecture1(ValuationConstraint),
}

impl Statistic {
    pub fn id(&self) -> String {
        match self {
            Statistic::MuPMinus1 => "mu_pminus1".into(),
            Statistic::CPMinus1(k) => format!("c_pminus1(k={k})"),
            Statistic::APMinus1(k) => format!("a_pminus1(k={k})"),
            Statistic::SkModP(k) => format!("s_k_mod_p(k={k})"),
            Statistic::PowerSumModP(k) => format!("S_k_mod_p(k={k})"),
            Statistic::KfreeShift { r, k } => format!("kfree_shift(r={r},k={k})"),
            Statistic::Conjecture1(c) => format!("conjecture1({c})"),
        }
    }

    fn k(&self) -> Option<u64> {
        match self {
            Statistic::CPMinus1(k) | Statistic::APMinus1(k) | Statistic::SkModP(k) | Statistic::PowerSumModP(k) => Some(*k),
            _ => None,
        }
    }

    /// Value at prime `p`; `None` when the prime is filtered out.
    fn eval(&self, p: u64, sieve: &SievePack) -> Result<Option<i64>> {
        let n = factorize(p - 1, Some(sieve))?;
        let sign = |k: u64| if k % 2 == 0 { 1 } else { -1 };
        let rc = ResidueConvention { p };
        Ok(Some(match self {
            Statistic::MuPMinus1 => mobius(&n) as i64,
            Statistic::CPMinus1(k) => ramanujan_sum(&n, *k as u128) as i64,
            Statistic::APMinus1(k) => cyclo_coeff(&n, *k)?,
            Statistic::SkModP(k) => {
                if *k as u128 > euler_phi(&n) {
                    0
                } else if p == 2 {
                    // the single root 1, where Φ_1 is not palindromic
                    1
                } else {
                    rc.map((sign(*k) * cyclo_coeff(&n, *k)?) as i128)
                }
            }
            Statistic::PowerSumModP(k) => rc.map(ramanujan_sum(&n, *k as u128)),
            Statistic::KfreeShift { r, k } => {
                let m = (p as i128 - *r as i128).unsigned_abs() as u64;
                if m == 0 {
                    0
                } else {
                    is_kth_powerfree(&factorize(m, Some(sieve))?, *k)? as i64
                }
            }
            Statistic::Conjecture1(c) => {
                let plain = ValuationConstraint::new(
                    c.primes().iter().copied().zip(c.classes().iter().copied()).collect(),
                    false,
                )?;
                if !plain.matches(&n) {
                    return Ok(None);
                }
                let outside: Vec<(u64, u32)> =
                    n.factors().iter().copied().filter(|(q, _)| !c.primes().contains(q)).collect();
                mobius(&FactoredNat::from_factors(outside)?) as i64
            }
        }))
    }
}

/// Counts of a statistic over a deterministic population.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalReport {
    pub statistic: String,
    pub bound: String,
    pub counts: BTreeMap<i64, u64>,
    /// Members counted, equal to the sum of `counts`.
    pub total: u64,
    /// Members visited before conditioning.
    pub population: u64,
    pub condition: Option<String>,
}

impl EmpiricalReport {
    fn empty(statistic: String, bound: String, condition: Option<String>) -> Self {
        EmpiricalReport { statistic, bound, counts: BTreeMap::new(), total: 0, population: 0, condition }
    }

    fn merge(mut self, other: EmpiricalReport) -> Self {
        for (v, c) in other.counts {
            *self.counts.entry(v).or_insert(0) += c;
        }
        self.total += other.total;
        self.population += other.population;
        self
    }

    pub fn count(&self, v: i64) -> u64 {
        self.counts.get(&v).copied().unwrap_or(0)
    }

    /// `count / total` as an exact rational.
    pub fn frequency(&self, v: i64) -> ExactRational {
        ExactRational::new(self.count(v) as i64, self.total.max(1) as i64).unwrap()
    }

    pub fn frequency_f64(&self, v: i64) -> f64 {
        self.count(v) as f64 / self.total.max(1) as f64
    }

    /// `count / population`, the joint density with the condition.
    pub fn joint_frequency(&self, v: i64) -> f64 {
        self.count(v) as f64 / self.population.max(1) as f64
    }

    pub fn signed_sum(&self) -> i64 {
        self.counts.iter().map(|(&v, &c)| v * c as i64).sum()
    }

    pub fn abs_mean(&self) -> f64 {
        let s: f64 = self.counts.iter().map(|(&v, &c)| v.unsigned_abs() as f64 * c as f64).sum();
        s / self.total.max(1) as f64
    }

    /// Folds `v` and `-v` together.
    pub fn fold_abs(&self) -> EmpiricalReport {
        let mut out = self.clone();
        out.counts = BTreeMap::new();
        for (&v, &c) in &self.counts {
            *out.counts.entry(v.abs()).or_insert(0) += c;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .counts
            .iter()
            .map(|(&v, &c)| json!({"value": v, "count": c, "frequency": self.frequency(v).to_string(), "numeric": self.frequency_f64(v)}))
            .collect();
        json!({
            "statistic": self.statistic,
            "bound": self.bound,
            "condition": self.condition,
            "total": self.total,
            "population": self.population,
            "signed_sum": self.signed_sum(),
            "counts": rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("value,count,frequency\n");
        for (&v, &c) in &self.counts {
            s.push_str(&format!("{v},{c},{:.6}\n", self.frequency_f64(v)));
        }
        s
    }
}

/// A scan over primes with optional conditioning on valuations of `p - 1`.
#[derive(Clone, Debug)]
pub struct PrimeScan {
    pub bound: Bound,
    pub statistic: Statistic,
    pub condition: Option<ValuationConstraint>,
    pub threads: Option<usize>,
}

const BLOCK: usize = 4096;

impl PrimeScan {
    pub fn new(bound: Bound, statistic: Statistic) -> Self {
        PrimeScan { bound, statistic, condition: None, threads: None }
    }

    pub fn with_condition(mut self, c: ValuationConstraint) -> Self {
        self.condition = Some(c);
        self
    }

    /// Smallest sieve limit that covers the bound.
    pub fn sieve_limit(&self) -> u64 {
        match self.bound {
            Bound::FirstPrimes(n) => crate::arith::sieve::nth_prime_upper_bound(n),
            Bound::UpTo(x) => x,
        }
    }

    pub fn run(&self, sieve: &SievePack) -> Result<EmpiricalReport> {
        if self.statistic.k().is_some_and(|k| k == 0 || k > 64) {
            return Err(Error::domain("statistic order k must be in 1..=64"));
        }
        let primes: &[u64] = match self.bound {
            Bound::FirstPrimes(n) => {
                if sieve.primes().len() < n {
                    return Err(Error::domain(format!("sieve to {} holds fewer than {n} primes", sieve.limit())));
                }
                &sieve.primes()[..n]
            }
            Bound::UpTo(x) => {
                if x > sieve.limit() {
                    return Err(Error::domain(format!("bound {x} exceeds sieve limit {}", sieve.limit())));
                }
                &sieve.primes()[..sieve.prime_pi(x)]
            }
        };
        let cond_label = self.condition.as_ref().map(|c| c.to_string());
        let id = self.statistic.id();
        let bound = self.bound.to_string();
        let work = || {
            primes
                .par_chunks(BLOCK)
                .map(|block| {
                    let mut rep = EmpiricalReport::empty(id.clone(), bound.clone(), cond_label.clone());
                    for &p in block {
                        rep.population += 1;
                        if let Some(c) = &self.condition {
                            if !c.matches(&factorize(p - 1, Some(sieve))?) {
                                continue;
                            }
                        }
                        if let Some(v) = self.statistic.eval(p, sieve)? {
                            *rep.counts.entry(v).or_insert(0) += 1;
                            rep.total += 1;
                        }
                    }
                    Ok(rep)
                })
                .try_reduce(
                    || EmpiricalReport::empty(id.clone(), bound.clone(), cond_label.clone()),
                    |a, b| Ok(a.merge(b)),
                )
        };
        match self.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::resource(e.to_string()))?
                .install(work),
            None => work(),
        }
    }
}

/// Convenience scan that builds its own sieve.
pub fn scan_primes(bound: Bound, statistic: Statistic) -> Result<EmpiricalReport> {
    let scan = PrimeScan::new(bound, statistic);
    let sieve = SievePack::new(scan.sieve_limit())?;
    scan.run(&sieve)
}

/// Per-integer quantity tallied by [`scan_integers`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntStatistic {
    Ramanujan(u64),
    Coeff(u64),
}

/// Counts of `c_n(m)` or `a_n(k)` over `1 <= n <= limit`.
pub fn scan_integers(limit: u64, stat: IntStatistic, sieve: &SievePack) -> Result<EmpiricalReport> {
    if limit > sieve.limit() {
        return Err(Error::domain("limit exceeds sieve"));
    }
    let id = match stat {
        IntStatistic::Ramanujan(m) => format!("c_n(m={m})"),
        IntStatistic::Coeff(k) => format!("a_n(k={k})"),
    };
    let ns: Vec<u64> = (1..=limit).collect();
    let bound = format!("n <= {limit}");
    ns.par_chunks(BLOCK)
        .map(|block| {
            let mut rep = EmpiricalReport::empty(id.clone(), bound.clone(), None);
            for &n in block {
                let f = factorize(n, Some(sieve))?;
                let v = match stat {
                    IntStatistic::Ramanujan(m) => ramanujan_sum(&f, m as u128) as i64,
                    IntStatistic::Coeff(k) => cyclo_coeff(&f, k)?,
                };
                *rep.counts.entry(v).or_insert(0) += 1;
                rep.total += 1;
                rep.population += 1;
            }
            Ok(rep)
        })
        .try_reduce(|| EmpiricalReport::empty(id.clone(), bound.clone(), None), |a, b| Ok(a.merge(b)))
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// All primitive roots modulo the prime `p`, ascending.
pub fn primitive_roots(p: u64) -> Result<Vec<u64>> {
    if p > 1_000_000 || !crate::arith::is_small_prime(p) {
        return Err(Error::domain(format!("{p} is not a prime up to 10^6")));
    }
    if p == 2 {
        return Ok(vec![1]);
    }
    let f = factorize(p - 1, None)?;
    Ok((1..p)
        .filter(|&g| f.primes().all(|q| pow_mod(g, (p - 1) / q, p) != 1))
        .collect())
}

/// `s_1..s_kmax` and `S_1..S_kmax` of the primitive roots, reduced mod `p`.
pub fn symmetric_functions_mod_p(p: u64, kmax: usize) -> Result<(Vec<u64>, Vec<u64>)> {
    if p > 100_000 {
        return Err(Error::domain("oracle limited to p <= 10^5"));
    }
    let roots = primitive_roots(p)?;
    if kmax > roots.len() + 2 {
        return Err(Error::domain("kmax exceeds phi(p-1) + 2"));
    }
    let mut e = vec![0u64; kmax + 1];
    e[0] = 1 % p;
    for (i, &g) in roots.iter().enumerate() {
        for j in (1..=kmax.min(i + 1)).rev() {
            e[j] = (e[j] + g * e[j - 1]) % p;
        }
    }
    let power: Vec<u64> = (1..=kmax as u64)
        .map(|k| roots.iter().fold(0u64, |acc, &g| (acc + pow_mod(g, k, p)) % p))
        .collect();
    for k in 1..=kmax {
        let mut rhs: i128 = 0;
        for i in 1..=k {
            let term = e[k - i] as i128 * power[i - 1] as i128;
            rhs += if i % 2 == 1 { term } else { -term };
        }
        if (k as i128 * e[k] as i128 - rhs).rem_euclid(p as i128) != 0 {
            return Err(Error::internal(format!("Newton identity fails for p = {p}, k = {k}")));
        }
    }
    Ok((e[1..].to_vec(), power))
}

/// Number of squarefree `m <= x` coprime to `r`.
pub fn count_squarefree_coprime(x: u64, r: &FactoredNat, sieve: &SievePack) -> Result<u64> {
    if x > sieve.limit() {
        return Err(Error::domain("x exceeds sieve"));
    }
    let rv = r.value();
    Ok((1..=x).filter(|&m| sieve.mobius(m) != 0 && gcd_u128(m as u128, rv) == 1).count() as u64)
}

/// `sum_{m <= x, (m, r) = 1} mu(m)`.
pub fn mertens_coprime(x: u64, r: &FactoredNat, sieve: &SievePack) -> Result<i64> {
    if x > sieve.limit() {
        return Err(Error::domain("x exceeds sieve"));
    }
    let rv = r.value();
    Ok((1..=x).filter(|&m| gcd_u128(m as u128, rv) == 1).map(|m| sieve.mobius(m) as i64).sum())
}
