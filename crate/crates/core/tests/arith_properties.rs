use cyclodist_core::arith::{divisors, euler_phi, factorize, gcd_u128, is_kth_powerfree, mobius, ExactRational, SievePack};
use proptest::prelude::*;

#[test]
fn sieve_agrees_with_trial_division() {
    let s = SievePack::new(100_000).unwrap();
    for n in 1..=100_000u64 {
        let f = factorize(n, None).unwrap();
        assert_eq!(f, factorize(n, Some(&s)).unwrap());
        assert_eq!(s.mobius(n), mobius(&f), "n={n}");
        if n >= 2 {
            assert_eq!(s.spf(n), f.factors()[0].0);
        }
    }
}

#[test]
fn mobius_sums_over_divisors() {
    for n in 1..=10_000u64 {
        let total: i64 = divisors(&factorize(n, None).unwrap())
            .into_iter()
            .map(|d| mobius(&factorize(d as u64, None).unwrap()) as i64)
            .sum();
        assert_eq!(total, (n == 1) as i64, "n={n}");
    }
}

#[test]
fn phi_doubling() {
    for n in 1..=10_000u64 {
        let a = euler_phi(&factorize(2 * n, None).unwrap());
        let b = euler_phi(&factorize(n, None).unwrap());
        assert_eq!(a / b, if n % 2 == 0 { 2 } else { 1 });
        assert_eq!(a % b, 0);
    }
}

#[test]
fn millionth_prime_bound() {
    let s = SievePack::new(15_485_863).unwrap();
    assert_eq!(s.primes().len(), 1_000_000);
    assert_eq!(*s.primes().last().unwrap(), 15_485_863);
}

#[test]
fn squarefree_up_to_100() {
    let c = (1..=100u64).filter(|&n| is_kth_powerfree(&factorize(n, None).unwrap(), 2).unwrap()).count();
    assert_eq!(c, 61);
}

proptest! {
    #[test]
    fn multiplicative_on_coprime(m in 1u64..=10_000, n in 1u64..=10_000) {
        prop_assume!(gcd_u128(m as u128, n as u128) == 1);
        let fm = factorize(m, None).unwrap();
        let fnn = factorize(n, None).unwrap();
        let fmn = factorize(m * n, None).unwrap();
        prop_assert_eq!(mobius(&fmn), mobius(&fm) * mobius(&fnn));
        prop_assert_eq!(euler_phi(&fmn), euler_phi(&fm) * euler_phi(&fnn));
    }

    #[test]
    fn rational_stays_reduced(ops in proptest::collection::vec((-50i64..50, 1i64..50, 0u8..4), 1..200)) {
        let mut acc = ExactRational::one();
        for (a, b, op) in ops {
            let x = ExactRational::new(a, b).unwrap();
            acc = match op {
                0 => acc + x,
                1 => acc - x,
                2 => acc * x,
                _ => acc.checked_div(&x).unwrap_or(acc),
            };
            let num = acc.numer().clone();
            let den = acc.denom().clone();
            prop_assert!(den > 0.into());
            prop_assert!(num_integer::Integer::gcd(&num, &den) == 1.into() || num == 0.into());
        }
    }
}
