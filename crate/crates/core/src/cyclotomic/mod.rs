//! Coefficients of cyclotomic polynomials and the sets of values they take.

mod poly;
mod values;

pub use poly::{cyclo_poly, poly_eval_mod, poly_mul, MAX_POLY_DEGREE};
pub use values::{
    bertrand_triple, coeff_profile, construct_coeff_value, value_set, CoeffProfile,
    ValueSetReport, MAX_VALUE_SET_K,
};

use crate::arith::{euler_phi, factored_divisors, factorize, mobius, FactoredNat};
use crate::error::{Error, Result};

/// `a_n(k)`, the coefficient of `X^k` in the `n`-th cyclotomic polynomial.
pub fn cyclo_coeff(n: &FactoredNat, k: u64) -> Result<i64> {
    match n.value() {
        1 => return Ok(match k {
            0 => -1,
            1 => 1,
            _ => 0,
        }),
        2 => return Ok(if k <= 1 { 1 } else { 0 }),
        _ => {}
    }
    let gamma = n.kernel();
    let t = (n.value() / gamma.value()) as u64;
    if k % t != 0 {
        return Ok(0);
    }
    let k = k / t;
    if k as u128 > euler_phi(&gamma) {
        return Ok(0);
    }
    if gamma.value() == 2 {
        return Ok(if k <= 1 { 1 } else { 0 });
    }
    grytczuk_tropak(&gamma, k)
}

pub fn cyclo_coeff_u64(n: u64, k: u64) -> Result<i64> {
    cyclo_coeff(&factorize(n, None)?, k)
}

/// Log-derivative recurrence for squarefree `n >= 3` and `k <= phi(n)`.
fn grytczuk_tropak(n: &FactoredNat, k: u64) -> Result<i64> {
    let mu_n: i128 = mobius(n) as i128;
    let small: Vec<u64> = n.primes().filter(|&p| p <= k).collect();
    let kk = k as usize;
    let mut t = vec![0i128; kk + 1];
    for (r, slot) in t.iter_mut().enumerate().skip(1) {
        let (mut mu_g, mut phi_g) = (1i128, 1i128);
        for &p in &small {
            if r as u64 % p == 0 {
                mu_g = -mu_g;
                phi_g *= p as i128 - 1;
            }
        }
        *slot = mu_n * mu_g * phi_g;
    }
    let mut b = vec![0i128; kk + 1];
    b[0] = 1;
    for j in 1..=kk {
        let mut s: i128 = 0;
        for m in 0..j {
            s = s
                .checked_add(b[m].checked_mul(t[j - m]).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
        if s % j as i128 != 0 {
            return Err(Error::internal(format!("recurrence for a_{n}({j}) is not integral")));
        }
        b[j] = -s / j as i128;
    }
    i64::try_from(b[kk]).map_err(|_| overflow())
}

fn overflow() -> Error {
    Error::resource("coefficient exceeds 64 bits")
}

/// Divisors of `n` not exceeding `bound`, factored.
fn divisors_up_to(n: &FactoredNat, bound: u64) -> Vec<FactoredNat> {
    let restricted: Vec<(u64, u32)> = n.factors().iter().copied().filter(|&(p, _)| p <= bound).collect();
    let base = FactoredNat::from_factors(restricted).expect("divides n");
    factored_divisors(&base).into_iter().filter(|d| d.value() <= bound as u128).collect()
}

/// `a_n(k)` from the truncated product of `(1 - X^d)^mu(n/d)`; an independent check.
pub fn cyclo_coeff_series(n: &FactoredNat, k: u64) -> Result<i64> {
    if n.value() < 2 {
        return cyclo_coeff(n, k);
    }
    if k > 1 << 24 {
        return Err(Error::resource("series truncation order too large"));
    }
    let kk = k as usize;
    let mut s = vec![0i128; kk + 1];
    s[0] = 1;
    for d in divisors_up_to(n, k) {
        let mu = mobius(&n.div_exact(&d)?);
        let d = d.value() as usize;
        match mu {
            1 => {
                for i in (d..=kk).rev() {
                    s[i] = s[i].wrapping_sub(s[i - d]);
                }
            }
            -1 => {
                for i in d..=kk {
                    s[i] = s[i].wrapping_add(s[i - d]);
                }
            }
            _ => {}
        }
    }
    i64::try_from(s[kk]).map_err(|_| overflow())
}

/// `a_n(k)` as a signed sum over partitions of `k` into divisors of `n`.
pub fn cyclo_coeff_partition(n: &FactoredNat, k: u64) -> Result<i64> {
    if n.value() < 2 {
        // Φ_1 = X - 1
        return Ok(match k {
            0 => -1,
            1 => 1,
            _ => 0,
        });
    }
    if k > 200 {
        return Err(Error::resource("partition formula limited to k <= 200"));
    }
    let mut parts: Vec<(u64, i64)> = Vec::new();
    for d in divisors_up_to(n, k) {
        let mu = mobius(&n.div_exact(&d)?) as i64;
        if mu != 0 {
            parts.push((d.value() as u64, mu));
        }
    }
    parts.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    Ok(partition_sum(&parts, k))
}

/// Local factor `(-1)^m binom(mu, m)` for `mu` in `{-1, 0, 1}`.
pub fn binom_sign(mu: i64, m: u64) -> i64 {
    match m {
        0 => 1,
        1 => -mu,
        _ => mu * (mu - 1) / 2,
    }
}

fn partition_sum(parts: &[(u64, i64)], rest: u64) -> i64 {
    if rest == 0 {
        return 1;
    }
    let Some((&(j, mu), tail)) = parts.split_first() else {
        return 0;
    };
    let mut total = 0;
    let mut m = 0;
    while m * j <= rest {
        let f = binom_sign(mu, m);
        if f != 0 {
            total += f * partition_sum(tail, rest - m * j);
        }
        m += 1;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramanujan::ramanujan_sum;
    use proptest::prelude::*;

    fn fac(n: u64) -> FactoredNat {
        factorize(n, None).unwrap()
    }

    #[test]
    fn small_polynomials() {
        assert_eq!(cyclo_poly(1).unwrap(), vec![-1, 1]);
        assert_eq!(cyclo_poly(2).unwrap(), vec![1, 1]);
        assert_eq!(cyclo_poly(6).unwrap(), vec![1, -1, 1]);
        assert_eq!(cyclo_poly(12).unwrap(), vec![1, 0, -1, 0, 1]);
        let p105 = cyclo_poly(105).unwrap();
        assert_eq!(p105[7], -2);
        assert_eq!(p105.len(), 49);
    }

    #[test]
    fn known_coefficients() {
        assert_eq!(cyclo_coeff_u64(105, 7).unwrap(), -2);
        assert_eq!(cyclo_coeff_u64(210, 7).unwrap(), 2);
        assert_eq!(cyclo_coeff_u64(1, 0).unwrap(), -1);
        assert_eq!(cyclo_coeff_u64(12, 2).unwrap(), -1);
        assert_eq!(cyclo_coeff_u64(12, 3).unwrap(), 0);
        assert_eq!(cyclo_coeff_u64(7, 9).unwrap(), 0);
        assert_eq!(cyclo_coeff_u64(385, 7).unwrap(), -1);
    }

    #[test]
    fn largest_coefficient_of_degree_48_polynomial() {
        // Φ_105 has exactly the two coefficients -2 at X^7 and X^41
        let p = cyclo_poly(105).unwrap();
        let minus_two: Vec<usize> = p.iter().enumerate().filter(|(_, &c)| c == -2).map(|(i, _)| i).collect();
        assert_eq!(minus_two, vec![7, 41]);
    }

    #[test]
    fn three_methods_agree_small() {
        for n in 2..=300u64 {
            let f = fac(n);
            for k in 0..=20 {
                let a = cyclo_coeff(&f, k).unwrap();
                assert_eq!(a, cyclo_coeff_series(&f, k).unwrap(), "series n={n} k={k}");
                assert_eq!(a, cyclo_coeff_partition(&f, k).unwrap(), "partition n={n} k={k}");
            }
        }
    }

    #[test]
    fn nicol_identity() {
        // (sum_{m=1}^n c_n(m) X^{m-1}) * Φ_n = (X^n - 1) Φ_n'
        for n in 1..=60u64 {
            let phi = cyclo_poly(n).unwrap();
            let c: Vec<i64> = (1..=n).map(|m| ramanujan_sum(&fac(n), m as u128) as i64).collect();
            let lhs = poly_mul(&c, &phi);
            let deriv: Vec<i64> = phi.iter().enumerate().skip(1).map(|(i, &a)| i as i64 * a).collect();
            let mut xn = vec![0i64; n as usize + 1];
            xn[0] = -1;
            xn[n as usize] = 1;
            let rhs = poly_mul(&xn, &deriv);
            let trim = |v: Vec<i64>| {
                let mut v = v;
                while v.last() == Some(&0) {
                    v.pop();
                }
                v
            };
            assert_eq!(trim(lhs), trim(rhs), "n = {n}");
        }
    }

    #[test]
    fn order_criterion() {
        // p | Φ_m(a) exactly when a has multiplicative order m modulo p
        for p in crate::arith::small_primes_in(2, 200) {
            for m in (1..p).filter(|m| (p - 1) % m == 0) {
                let poly = cyclo_poly(m).unwrap();
                for a in 1..p {
                    let mut ord = 1;
                    let mut x = a % p;
                    while x != 1 {
                        x = x * a % p;
                        ord += 1;
                    }
                    assert_eq!(poly_eval_mod(&poly, a, p) == 0, ord == m, "p={p} m={m} a={a}");
                }
            }
        }
    }

    #[test]
    fn log_derivative_recurrence() {
        for n in 2..=120u64 {
            let f = fac(n);
            let a: Vec<i64> = (0..=30).map(|k| cyclo_coeff(&f, k).unwrap()).collect();
            for k in 1..=30usize {
                let s: i128 = (0..k).map(|m| a[m] as i128 * ramanujan_sum(&f, (k - m) as u128)).sum();
                assert_eq!(-s, k as i128 * a[k] as i128, "n={n} k={k}");
            }
        }
    }

    proptest! {
        #[test]
        fn kernel_reduction(n in 2u64..5000, k in 0u64..60) {
            let f = fac(n);
            let g = f.kernel().value() as u64;
            let t = n / g;
            let expect = if k % t == 0 { cyclo_coeff_u64(g, k / t).unwrap() } else { 0 };
            prop_assert_eq!(cyclo_coeff(&f, k).unwrap(), expect);
        }

        #[test]
        fn doubling_odd(n in (1u64..5000).prop_map(|n| 2 * n + 1), k in 0u64..60) {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(cyclo_coeff_u64(2 * n, k).unwrap(), sign * cyclo_coeff_u64(n, k).unwrap());
        }

        #[test]
        fn palindromic(n in 2u64..3000, k in 0u64..40) {
            let f = fac(n);
            let phi = euler_phi(&f) as u64;
            prop_assume!(k <= phi);
            prop_assert_eq!(cyclo_coeff(&f, k).unwrap(), cyclo_coeff(&f, phi - k).unwrap());
        }

        #[test]
        fn linear_coefficient_is_minus_mu(n in 2u64..100_000) {
            let f = fac(n);
            prop_assert_eq!(cyclo_coeff(&f, 1).unwrap(), -(mobius(&f) as i64));
        }

        #[test]
        fn agrees_with_full_expansion(n in 1u64..600) {
            let poly = cyclo_poly(n).unwrap();
            let f = fac(n);
            for (k, &c) in poly.iter().enumerate() {
                prop_assert_eq!(cyclo_coeff(&f, k as u64).unwrap(), c);
            }
            prop_assert_eq!(cyclo_coeff(&f, poly.len() as u64).unwrap(), 0);
        }
    }
}
