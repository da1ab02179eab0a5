use crate::arith::{euler_phi, factored_divisors, factorize, mobius};
use crate::error::{Error, Result};

/// Largest degree for which full expansion is attempted.
pub const MAX_POLY_DEGREE: u128 = 100_000;

/// All coefficients of `Φ_n`, constant term first.
///
/// Expands `prod (X^d - 1)^mu(n/d)` by multiplying and then dividing by monic
/// binomials, with arithmetic wrapping modulo 2^128.
pub fn cyclo_poly(n: u64) -> Result<Vec<i64>> {
    let f = factorize(n, None)?;
    if euler_phi(&f) > MAX_POLY_DEGREE {
        return Err(Error::resource(format!("degree of Φ_{n} exceeds {MAX_POLY_DEGREE}")));
    }
    let mut up = Vec::new();
    let mut down = Vec::new();
    for d in factored_divisors(&f) {
        match mobius(&f.div_exact(&d)?) {
            1 => up.push(d.value() as usize),
            -1 => down.push(d.value() as usize),
            _ => {}
        }
    }
    let top: usize = up.iter().sum();
    let mut p = vec![0i128; top + 1];
    p[0] = 1;
    let mut deg = 0usize;
    for d in up {
        for i in (0..=deg + d).rev() {
            let shifted = if i >= d { p[i - d] } else { 0 };
            p[i] = shifted.wrapping_sub(p[i]);
        }
        deg += d;
    }
    for d in down {
        let qdeg = deg - d;
        let mut quot = vec![0i128; qdeg + 1];
        for i in (0..=qdeg).rev() {
            let above = if i + d <= qdeg { quot[i + d] } else { 0 };
            quot[i] = p[i + d].wrapping_add(above);
        }
        for i in 0..d {
            let qi = if i <= qdeg { quot[i] } else { 0 };
            if p[i].wrapping_add(qi) != 0 {
                return Err(Error::internal(format!("inexact division while expanding Φ_{n}")));
            }
        }
        p[..=qdeg].copy_from_slice(&quot);
        deg = qdeg;
    }
    p.truncate(deg + 1);
    p.into_iter()
        .map(|c| i64::try_from(c).map_err(|_| Error::resource("coefficient exceeds 64 bits")))
        .collect()
}

pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Horner evaluation modulo `m`.
pub fn poly_eval_mod(poly: &[i64], x: u64, m: u64) -> u64 {
    let m128 = m as i128;
    let mut acc: i128 = 0;
    for &c in poly.iter().rev() {
        acc = (acc * x as i128 + c as i128).rem_euclid(m128);
    }
    acc as u64
}
