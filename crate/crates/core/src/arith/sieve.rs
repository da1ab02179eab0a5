//! Linear sieve with smallest prime factors and the Möbius function.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const DEFAULT_SIEVE_LIMIT: u64 = 20_000_000;

/// Upper bound on the bytes a sieve may allocate.
pub const DEFAULT_MEMORY_BUDGET: u64 = 3 << 30;

const CACHE_MAGIC: &[u8; 4] = b"CPD1";
pub const CACHE_ENV: &str = "CYCLODIST_CACHE";

/// Smallest prime factor and Möbius tables for `0..=limit`, plus the primes.
#[derive(Clone, Debug)]
pub struct SievePack {
    limit: u64,
    spf: Vec<u32>,
    mobius: Vec<i8>,
    primes: Vec<u64>,
}

impl SievePack {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_budget(limit, DEFAULT_MEMORY_BUDGET)
    }

    pub fn with_budget(limit: u64, budget_bytes: u64) -> Result<Self> {
        if limit > u32::MAX as u64 {
            return Err(Error::resource(format!("sieve limit {limit} exceeds 2^32")));
        }
        let need = (limit + 1) * 5 + (limit / 8 + 64) * 8;
        if need > budget_bytes {
            return Err(Error::resource(format!(
                "sieve to {limit} needs about {need} bytes, budget is {budget_bytes}"
            )));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut mobius = vec![0i8; n + 1];
        let mut primes: Vec<u64> = Vec::new();
        if n >= 1 {
            mobius[1] = 1;
        }
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mobius[i] = -1;
                primes.push(i as u64);
            }
            let si = spf[i];
            for &p in &primes {
                let p32 = p as u32;
                let m = i * p as usize;
                if p32 > si || m > n {
                    break;
                }
                spf[m] = p32;
                mobius[m] = if p32 == si { 0 } else { -mobius[i] };
            }
        }
        Ok(SievePack { limit, spf, mobius, primes })
    }

    /// Sieve large enough to hold the first `count` primes.
    pub fn for_prime_count(count: usize) -> Result<Self> {
        Self::new(nth_prime_upper_bound(count))
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Smallest prime factor of `n` for `2 <= n <= limit`.
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn mobius(&self, n: u64) -> i8 {
        self.mobius[n as usize]
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf[n as usize] as u64 == n
    }

    pub fn covers(&self, n: u64) -> bool {
        n <= self.limit
    }

    /// Number of primes not exceeding `x`.
    pub fn prime_pi(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }
}

/// An upper bound for the `n`-th prime (Rosser, valid for n >= 6).
pub fn nth_prime_upper_bound(n: usize) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
}

/// Plain sieve of Eratosthenes returning the primes up to `limit`.
pub fn primes_up_to(limit: u64) -> Result<Vec<u64>> {
    if limit > 1 << 36 {
        return Err(Error::resource(format!("prime list to {limit} is too large")));
    }
    let n = limit as usize;
    let mut composite = vec![false; n / 2 + 1];
    let mut primes = Vec::new();
    if limit >= 2 {
        primes.push(2);
    }
    let mut i = 3usize;
    while i <= n {
        if !composite[i / 2] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j / 2] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    Ok(primes)
}

fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("primes-{limit}.cpd"))
}

/// Directory from the explicit argument or the environment, if any.
pub fn resolve_cache_dir(explicit: Option<&Path>) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
}

pub fn write_prime_cache(dir: &Path, limit: u64, primes: &[u64]) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, limit);
    let mut buf = Vec::with_capacity(12 + primes.len() * 8);
    buf.extend_from_slice(CACHE_MAGIC);
    buf.extend_from_slice(&limit.to_le_bytes());
    for p in primes {
        buf.extend_from_slice(&p.to_le_bytes());
    }
    let tmp = path.with_extension("tmp");
    fs::File::create(&tmp)?.write_all(&buf)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Reads a cached prime list; `Ok(None)` when absent.
pub fn read_prime_cache(dir: &Path, limit: u64) -> Result<Option<Vec<u64>>> {
    let path = cache_path(dir, limit);
    let mut file = match fs::File::open(&path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes)?;
    if bytes.len() < 12 || &bytes[..4] != CACHE_MAGIC || (bytes.len() - 12) % 8 != 0 {
        return Err(Error::internal(format!("corrupt prime cache {}", path.display())));
    }
    let stored = u64::from_le_bytes(bytes[4..12].try_into().unwrap());
    if stored != limit {
        return Err(Error::internal(format!("prime cache {} has limit {stored}", path.display())));
    }
    let primes = bytes[12..]
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Some(primes))
}

/// Primes up to `limit`, served from and written to the cache when one is configured.
pub fn cached_primes_up_to(limit: u64, cache_dir: Option<&Path>) -> Result<Vec<u64>> {
    let Some(dir) = resolve_cache_dir(cache_dir) else {
        return primes_up_to(limit);
    };
    if let Some(p) = read_prime_cache(&dir, limit)? {
        return Ok(p);
    }
    let primes = primes_up_to(limit)?;
    write_prime_cache(&dir, limit, &primes)?;
    Ok(primes)
}
