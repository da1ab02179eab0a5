//! Ramanujan sums and their value distribution over the integers.

use crate::arith::{euler_phi, factorize, gcd_u128, mobius, q, ExactRational, FactoredNat};
use crate::density::{Basis, DensityTable};
use crate::error::{Error, Result};

/// Largest modulus accepted by the trigonometric oracle.
pub const DIRECT_ORACLE_LIMIT: u64 = 100_000;

/// `c_n(m)` by Hölder's formula.
pub fn ramanujan_sum(n: &FactoredNat, m: u128) -> i128 {
    let g = n.gcd_with(m);
    let quot = n.div_exact(&g).expect("gcd divides n");
    let mu = mobius(&quot) as i128;
    if mu == 0 {
        return 0;
    }
    mu * (euler_phi(n) / euler_phi(&quot)) as i128
}

/// `c_n(m)` as a sum of cosines over the reduced residues; an oracle for tests.
pub fn ramanujan_sum_direct(n: u64, m: u64) -> Result<i64> {
    if n == 0 || n > DIRECT_ORACLE_LIMIT {
        return Err(Error::domain(format!("direct evaluation needs 1 <= n <= {DIRECT_ORACLE_LIMIT}")));
    }
    let (mut re, mut im) = (0.0f64, 0.0f64);
    let mr = m % n;
    for k in 1..=n {
        if gcd_u128(k as u128, n as u128) != 1 {
            continue;
        }
        let r = (k as u128 * mr as u128 % n as u128) as f64;
        let theta = std::f64::consts::TAU * r / n as f64;
        re += theta.cos();
        im += theta.sin();
    }
    let rounded = re.round();
    if (re - rounded).abs() >= 0.4 || im.abs() >= 0.4 {
        return Err(Error::internal(format!("cosine sum for c_{n}({m}) is not near an integer: {re} + {im}i")));
    }
    Ok(rounded as i64)
}

/// Calls `f` with every exponent vector `e` where `0 <= e[i] <= bounds[i]`.
pub fn for_each_profile(bounds: &[u32], mut f: impl FnMut(&[u32])) {
    let mut e = vec![0u32; bounds.len()];
    loop {
        f(&e);
        let mut i = 0;
        loop {
            if i == e.len() {
                return;
            }
            if e[i] < bounds[i] {
                e[i] += 1;
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

/// `c_{q^e}(m)` when `nu = v_q(m)`, for `e <= nu + 1`.
pub fn prime_power_ramanujan(q: u64, e: u32, nu: u32) -> i128 {
    let q = q as i128;
    match e {
        0 => 1,
        e if e <= nu => q.pow(e - 1) * (q - 1),
        e if e == nu + 1 => -q.pow(nu),
        _ => 0,
    }
}

/// Natural density of `{n : c_n(m) = v}` as multiples of `6/pi^2`.
pub fn natural_density_of_ramanujan(m: &FactoredNat) -> DensityTable {
    let mut table = DensityTable::new(Basis::SixOverPi2);
    let fac = m.factors().to_vec();
    let bounds: Vec<u32> = fac.iter().map(|&(_, nu)| nu + 1).collect();
    for_each_profile(&bounds, |e| {
        let mut value: i128 = 1;
        let mut coeff = q(1, 2);
        for (i, &(p, nu)) in fac.iter().enumerate() {
            value *= prime_power_ramanujan(p, e[i], nu);
            let pe = ExactRational::from_int(p as i64).pow(e[i] as i32).unwrap();
            coeff = coeff * q(p as i64, p as i64 + 1).checked_div(&pe).unwrap();
        }
        table.add(value as i64, &coeff);
        table.add(-(value as i64), &coeff);
    });
    table
}

/// Order-`order` moment of `c_n(m)` over the integers, as a multiple of `6/pi^2`.
pub fn natural_moment(m: &FactoredNat, order: u32) -> ExactRational {
    if order % 2 == 1 {
        return ExactRational::zero();
    }
    let mut total = ExactRational::one();
    for &(p, nu) in m.factors() {
        let pr = ExactRational::from_int(p as i64);
        let mut local = ExactRational::one();
        for k in 1..=nu {
            let phi = ExactRational::from_int((p as i64).pow(k) - (p as i64).pow(k - 1));
            local = local + phi.pow(order as i32).unwrap() * pr.pow(-(k as i32)).unwrap();
        }
        local = local + pr.pow((order * nu) as i32).unwrap() * pr.pow(-(nu as i32 + 1)).unwrap();
        total = total * local * q(p as i64, p as i64 + 1);
    }
    total
}

/// Convenience wrapper factoring `m` first.
pub fn natural_density_of_ramanujan_u64(m: u64) -> Result<DensityTable> {
    Ok(natural_density_of_ramanujan(&factorize(m, None)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(n: u64, m: u64) -> i128 {
        ramanujan_sum(&factorize(n, None).unwrap(), m as u128)
    }

    #[test]
    fn small_values() {
        assert_eq!(c(1, 5), 1);
        assert_eq!(c(6, 1), 1);
        assert_eq!(c(6, 2), -1);
        assert_eq!(c(6, 3), -2);
        assert_eq!(c(6, 6), 2);
        assert_eq!(c(12, 4), -2);
        assert_eq!(c(9, 3), -3);
    }

    #[test]
    fn direct_oracle_bounds() {
        assert!(ramanujan_sum_direct(0, 1).is_err());
        assert!(ramanujan_sum_direct(DIRECT_ORACLE_LIMIT + 1, 1).is_err());
        assert_eq!(ramanujan_sum_direct(12, 4).unwrap(), -2);
    }

    #[test]
    fn density_m1_and_m2() {
        let t1 = natural_density_of_ramanujan_u64(1).unwrap();
        assert_eq!(t1.get(1), q(1, 2));
        assert_eq!(t1.get(-1), q(1, 2));
        let t2 = natural_density_of_ramanujan_u64(2).unwrap();
        assert_eq!(t2.get(1), q(1, 2));
        assert_eq!(t2.get(-1), q(1, 2));
        assert_eq!(t2.get(2), q(1, 12));
        assert_eq!(t2.get(-2), q(1, 12));
        assert_eq!(natural_moment(&factorize(2, None).unwrap(), 2), q(5, 3));
    }

    #[test]
    fn masses_equal_pi2_over_six() {
        // nonzero exactly on profiles within the vanishing bound
        for m in 1..=50u64 {
            let t = natural_density_of_ramanujan_u64(m).unwrap();
            let f = factorize(m, None).unwrap();
            let expect: ExactRational = f
                .factors()
                .iter()
                .map(|&(p, nu)| {
                    let pr = ExactRational::from_int(p as i64);
                    let mut s = ExactRational::zero();
                    for e in 0..=nu + 1 {
                        s = s + pr.pow(-(e as i32)).unwrap();
                    }
                    s * q(p as i64, p as i64 + 1)
                })
                .fold(ExactRational::one(), |a, b| a * b);
            assert_eq!(t.mass(), expect, "m = {m}");
            assert_eq!(t.mean(), ExactRational::zero());
        }
    }

    #[test]
    fn moments_match_tables() {
        for m in 1..=36u64 {
            let f = factorize(m, None).unwrap();
            let t = natural_density_of_ramanujan(&f);
            for j in 1..=3 {
                assert_eq!(t.moment(2 * j), natural_moment(&f, 2 * j), "m = {m}, order {}", 2 * j);
                assert!(t.moment(2 * j - 1).is_zero());
            }
        }
    }

    proptest! {
        #[test]
        fn holder_matches_cosines(n in 1u64..400, m in 0u64..1000) {
            prop_assert_eq!(c(n, m) as i64, ramanujan_sum_direct(n, m).unwrap());
        }

        #[test]
        fn periodic_and_gcd_invariant(n in 1u64..2000, m in 1u64..5000) {
            prop_assert_eq!(c(n, m), c(n, m + n));
            let g = gcd_u128(n as u128, m as u128) as u64;
            prop_assert_eq!(c(n, m), c(n, g));
        }

        #[test]
        fn multiplicative_in_n(a in 1u64..300, b in 1u64..300, m in 0u64..2000) {
            prop_assume!(gcd_u128(a as u128, b as u128) == 1);
            prop_assert_eq!(c(a * b, m), c(a, m) * c(b, m));
        }

        #[test]
        fn divisor_sum_identity(n in 1u64..3000, m in 1u64..3000) {
            // sum over d | n of c_d(m) is n when n | m and 0 otherwise
            let f = factorize(n, None).unwrap();
            let s: i128 = crate::arith::divisors(&f).into_iter().map(|d| c(d as u64, m)).sum();
            prop_assert_eq!(s, if m % n == 0 { n as i128 } else { 0 });
        }
    }
}
