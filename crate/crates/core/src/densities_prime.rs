//! Densities and averages over the primes, as exact multiples of Artin's constant.

use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::arith::{q, small_primes_in, sieve, ExactRational, FactoredNat};
use crate::cyclotomic::coeff_profile;
use crate::density::{Basis, DensityTable};
use crate::error::{Error, Result};
use crate::ramanujan::{for_each_profile, prime_power_ramanujan};

/// Largest truncation prime an Euler product may use.
pub const MAX_TRUNCATION: u64 = 400_000_000;

/// Explicit constant `c` with `pi(x) < c x / ln x` for all `x > 1`.
const PI_UPPER: f64 = 1.25506;

/// A truncated Euler product; the true constant lies within `tail_bound` of `value`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerProductConstant {
    pub value: f64,
    pub truncation_prime: u64,
    pub tail_bound: f64,
}

/// `sum_{p>P} 1/(p^(k-1)(p-1))` bounded via partial summation and the bound on pi(x).
fn tail_sum_bound(p: u64, k: u32) -> f64 {
    let pf = p as f64;
    if k == 2 {
        2.0 * PI_UPPER / ((pf - 1.0) * pf.ln())
    } else {
        1.0 / ((k as f64 - 1.0) * (pf - 1.0).powi(k as i32 - 1))
    }
}

fn euler_product(
    primes: &[u64],
    truncation: u64,
    k: u32,
    skip: impl Fn(u64) -> bool,
) -> EulerProductConstant {
    // Neumaier-compensated sum of log factors
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &p in primes.iter().take_while(|&&p| p <= truncation) {
        if skip(p) {
            continue;
        }
        let pf = p as f64;
        let x = (1.0 / (pf.powi(k as i32 - 1) * (pf - 1.0))).min(1.0);
        let term = if x >= 1.0 { f64::NEG_INFINITY } else { (-x).ln_1p() };
        if term == f64::NEG_INFINITY {
            return EulerProductConstant { value: 0.0, truncation_prime: truncation, tail_bound: 0.0 };
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    let partial = (sum + comp).exp();
    let t = tail_sum_bound(truncation, k);
    EulerProductConstant {
        value: partial * (1.0 - t / 2.0),
        truncation_prime: truncation,
        tail_bound: partial * t / 2.0 + 1e-12,
    }
}

fn truncation_for(goal: f64, k: u32) -> Result<u64> {
    let mut p: u64 = 10_000;
    while 0.5 * tail_sum_bound(p, k) + 1e-12 > goal {
        p += p / 4;
        if p > MAX_TRUNCATION {
            return Err(Error::resource(format!("precision {goal} needs primes beyond {MAX_TRUNCATION}")));
        }
    }
    Ok(p)
}

/// `A = prod_p (1 - 1/(p(p-1)))` to within `precision_goal`.
pub fn artin_constant(precision_goal: f64) -> Result<EulerProductConstant> {
    artin_constant_cached(precision_goal, None)
}

pub fn artin_constant_cached(precision_goal: f64, cache_dir: Option<&Path>) -> Result<EulerProductConstant> {
    if !(precision_goal >= 1e-8) {
        return Err(Error::domain("precision goal must be at least 1e-8"));
    }
    let p = truncation_for(precision_goal, 2)?;
    let primes = sieve::cached_primes_up_to(p, cache_dir)?;
    Ok(euler_product(&primes, p, 2, |_| false))
}

/// Numeric value of `A`, computed once.
pub fn artin_value() -> f64 {
    static A: OnceLock<f64> = OnceLock::new();
    *A.get_or_init(|| artin_constant(1e-8).expect("fixed goal is reachable").value)
}

/// Density of primes `p` with `p - r` free of `k`-th powers.
pub fn shifted_prime_kfree_density(r: i64, k: u32) -> Result<EulerProductConstant> {
    if k < 2 {
        return Err(Error::domain("k must be at least 2"));
    }
    if r == 0 {
        return Err(Error::domain("shift must be nonzero"));
    }
    let p = truncation_for(1e-7, k)?.max(1_000_000);
    let primes = sieve::primes_up_to(p)?;
    let r = r.unsigned_abs();
    Ok(euler_product(&primes, p, k, |p| r % p == 0))
}

/// Admissible exponents of a single prime in a valuation profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentClass {
    Exact(u32),
    AtLeast(u32),
    AtMost(u32),
}

impl ExponentClass {
    pub fn contains(self, e: u32) -> bool {
        match self {
            ExponentClass::Exact(x) => e == x,
            ExponentClass::AtLeast(x) => e >= x,
            ExponentClass::AtMost(x) => e <= x,
        }
    }
}

/// Prescribed valuations of `p - 1` at a set of primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationConstraint {
    primes: Vec<u64>,
    classes: Vec<ExponentClass>,
    pub squarefree_outside: bool,
}

impl ValuationConstraint {
    pub fn new(mut pairs: Vec<(u64, ExponentClass)>, squarefree_outside: bool) -> Result<Self> {
        pairs.sort_by_key(|&(p, _)| p);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::domain("constraint primes must be distinct"));
        }
        if pairs.iter().any(|&(p, _)| !crate::arith::is_small_prime(p)) {
            return Err(Error::domain("constraint keys must be primes"));
        }
        let (primes, classes) = pairs.into_iter().unzip();
        Ok(ValuationConstraint { primes, classes, squarefree_outside })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn classes(&self) -> &[ExponentClass] {
        &self.classes
    }

    /// Whether `n` (typically `p - 1`) satisfies the constraint.
    pub fn matches(&self, n: &FactoredNat) -> bool {
        for (i, &p) in self.primes.iter().enumerate() {
            if !self.classes[i].contains(n.valuation(p)) {
                return false;
            }
        }
        !self.squarefree_outside
            || n.factors().iter().all(|&(p, e)| e <= 1 || self.primes.binary_search(&p).is_ok())
    }
}

impl std::fmt::Display for ValuationConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self
            .primes
            .iter()
            .zip(&self.classes)
            .map(|(p, c)| match c {
                ExponentClass::Exact(e) => format!("nu{p}={e}"),
                ExponentClass::AtLeast(e) => format!("nu{p}>={e}"),
                ExponentClass::AtMost(e) => format!("nu{p}<={e}"),
            })
            .collect();
        if self.squarefree_outside {
            parts.push("sqf".into());
        }
        f.write_str(&parts.join(","))
    }
}

/// Density of primes with `v_q(p-1) = e`.
pub fn local_density(p: u64, e: u32) -> ExactRational {
    let qi = p as i64;
    if e == 0 {
        q(qi - 2, qi - 1)
    } else {
        ExactRational::from_int(BigInt::from(qi).pow(e)).recip().unwrap()
    }
}

fn class_density(q: u64, class: ExponentClass) -> ExactRational {
    match class {
        ExponentClass::Exact(e) => local_density(q, e),
        ExponentClass::AtLeast(0) => ExactRational::one(),
        ExponentClass::AtLeast(e) => {
            let qi = q as i64;
            ExactRational::from_int(BigInt::from(qi).pow(e - 1) * BigInt::from(qi - 1)).recip().unwrap()
        }
        ExponentClass::AtMost(e) => (0..=e).map(|f| local_density(q, f)).sum(),
    }
}

/// `1 / (1 - 1/(q(q-1)))`, the local factor divided out of `A`.
fn artin_local_inverse(q: u64) -> ExactRational {
    let qi = q as i64;
    crate::arith::q(qi * (qi - 1), qi * qi - qi - 1)
}

/// Result of [`valuation_profile_density`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileDensity {
    pub coefficient: ExactRational,
    pub basis: Basis,
    pub diagnostic: Option<String>,
}

impl ProfileDensity {
    pub fn numeric(&self) -> f64 {
        self.coefficient.to_f64() * self.basis.numeric()
    }
}

/// Density of primes whose `p - 1` satisfies the constraint.
pub fn valuation_profile_density(c: &ValuationConstraint) -> ProfileDensity {
    let mut coefficient = ExactRational::one();
    for (&p, &class) in c.primes.iter().zip(&c.classes) {
        coefficient = coefficient * class_density(p, class);
        if c.squarefree_outside {
            coefficient = coefficient * artin_local_inverse(p);
        }
    }
    let basis = if c.squarefree_outside { Basis::Artin } else { Basis::One };
    let diagnostic = coefficient
        .is_zero()
        .then(|| "constraint is satisfied by no prime beyond a finite set".to_string());
    ProfileDensity { coefficient, basis, diagnostic }
}

/// Density of the profile with exact valuations `e` at `primes`, outside part squarefree, over `A`.
fn exact_profile_weight(primes: &[u64], e: &[u32]) -> ExactRational {
    primes
        .iter()
        .zip(e)
        .fold(ExactRational::one(), |acc, (&p, &x)| acc * local_density(p, x) * artin_local_inverse(p))
}

/// Distribution of `c_{p-1}(k)` (signed) or `|c_{p-1}(k)|` over the primes.
pub fn ramanujan_prime_density(k: &FactoredNat, signed: bool) -> DensityTable {
    let mut table = DensityTable::new(Basis::Artin);
    if signed {
        table = table.conditional();
    }
    let fac = k.factors().to_vec();
    let primes: Vec<u64> = fac.iter().map(|&(p, _)| p).collect();
    let bounds: Vec<u32> = fac.iter().map(|&(_, nu)| nu + 1).collect();
    for_each_profile(&bounds, |e| {
        let w = exact_profile_weight(&primes, e);
        if w.is_zero() {
            return;
        }
        let v: i128 = fac.iter().zip(e).map(|(&(p, nu), &x)| prime_power_ramanujan(p, x, nu)).product();
        let v = v as i64;
        if signed {
            let half = w * q(1, 2);
            table.add(v, &half);
            table.add(-v, &half);
        } else {
            table.add(v.abs(), &w);
        }
    });
    table
}

/// Mean of `|c_{p-1}(k)|` over primes, as a multiple of `A`.
pub fn ramanujan_prime_mean_abs(k: &FactoredNat) -> ExactRational {
    k.factors().iter().fold(ExactRational::one(), |acc, &(p, nu)| {
        let pi = p as i64;
        acc * (ExactRational::one() + q(nu as i64 * (pi - 1) * (pi - 1), pi * pi - pi - 1))
    })
}

/// Moment of order `z` of `|c_{p-1}(k)|`, as a multiple of `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeMoment {
    pub z: f64,
    pub coefficient: Option<ExactRational>,
    pub numeric: f64,
}

pub fn ramanujan_prime_moment(k: &FactoredNat, z: f64) -> Result<PrimeMoment> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("moment order must be positive"));
    }
    if z == 1.0 {
        let c = ramanujan_prime_mean_abs(k);
        return Ok(PrimeMoment { z, numeric: c.to_f64(), coefficient: Some(c) });
    }
    let integral = z.fract() == 0.0 && z <= 256.0;
    let coefficient = integral.then(|| {
        let zi = z as i32;
        k.factors().iter().fold(ExactRational::one(), |acc, &(p, nu)| {
            let qr = ExactRational::from_int(p as i64);
            let q1 = ExactRational::from_int(p as i64 - 1);
            let one = ExactRational::one();
            let num = (qr.pow(nu as i32 * (zi - 1)).unwrap() - one.clone())
                * q1.clone()
                * (q1.pow(zi).unwrap() + qr.pow(zi - 1).unwrap() - one.clone());
            let den = ExactRational::from_int((p * p - p - 1) as i64) * (qr.pow(zi - 1).unwrap() - one.clone());
            acc * (one + num.checked_div(&den).unwrap())
        })
    });
    let numeric = match &coefficient {
        Some(c) => c.to_f64(),
        None => k.factors().iter().fold(1.0, |acc, &(p, nu)| {
            let qf = p as f64;
            let num = (qf.powf(nu as f64 * (z - 1.0)) - 1.0)
                * (qf - 1.0)
                * ((qf - 1.0).powf(z) + qf.powf(z - 1.0) - 1.0);
            acc * (1.0 + num / ((qf * qf - qf - 1.0) * (qf.powf(z - 1.0) - 1.0)))
        }),
    };
    Ok(PrimeMoment { z, coefficient, numeric })
}

/// Closed form of `s_k(p) mod p` in terms of `n = p - 1`, for `1 <= k <= 4`.
pub fn s_small_closed_form(k: u32, n: &FactoredNat) -> Result<i64> {
    let mu = |m: &FactoredNat| crate::arith::mobius(m) as i64;
    let div = |d: u64| n.div_exact(&FactoredNat::from_factors(vec![(d, 1)]).unwrap());
    let m = mu(n);
    let alpha = n.valuation(2);
    let beta = n.valuation(3);
    if alpha == 0 && k >= 2 {
        return Ok(0);
    }
    Ok(match k {
        1 => m,
        2 => match alpha {
            1 => m * (m + 1) / 2,
            _ => -mu(&div(2)?),
        },
        3 => match beta {
            0 => m * (m + 1) / 2,
            1 => m * (m - 1) / 2,
            _ => mu(&div(3)?),
        },
        4 => match (alpha, beta) {
            (1, 0) => m * (m + 1) / 2,
            (1, _) => m * (1 - m) / 2,
            (2, _) => {
                let h = mu(&div(2)?);
                h * (h + 1) / 2
            }
            _ => -mu(&n.div_exact(&FactoredNat::from_factors(vec![(2, 2)]).unwrap())?),
        },
        _ => return Err(Error::domain("closed forms exist for k = 1..4 only")),
    })
}

/// Distribution of `s_k(p) mod p` for `k <= 4`, from the closed forms.
pub fn s_small_density(k: u32) -> Result<DensityTable> {
    s_small_density_given(k, None)
}

/// Joint density of `s_k(p) = v` and a valuation condition on 2 and 3.
pub fn s_small_density_given(k: u32, filter: Option<&ValuationConstraint>) -> Result<DensityTable> {
    if filter.is_some_and(|f| f.primes().iter().any(|&p| p != 2 && p != 3)) {
        return Err(Error::domain("conditions may only involve the primes 2 and 3"));
    }
    let too_deep = |c: &ExponentClass| match *c {
        ExponentClass::Exact(x) | ExponentClass::AtLeast(x) | ExponentClass::AtMost(x) => x >= 3,
    };
    if filter.is_some_and(|f| f.classes().iter().any(too_deep)) {
        return Err(Error::domain("condition exponents must be at most 2"));
    }
    if !(1..=4).contains(&k) {
        return Err(Error::domain("k must be in 1..=4; use coeff_prime_density"));
    }
    const S: [u64; 2] = [2, 3];
    const CAP: [u32; 2] = [4, 3];
    let mut table = DensityTable::new(Basis::Artin).conditional();
    let mut failure = None;
    for_each_profile(&CAP, |e| {
        let classes: Vec<ExponentClass> = e
            .iter()
            .zip(CAP)
            .map(|(&x, cap)| if x == cap { ExponentClass::AtLeast(x) } else { ExponentClass::Exact(x) })
            .collect();
        if let Some(f) = filter {
            if !f.primes().iter().zip(f.classes()).all(|(&p, c)| c.contains(e[(p == 3) as usize])) {
                return;
            }
        }
        let pairs: Vec<(u64, ExponentClass)> = S.iter().copied().zip(classes).collect();
        let c = ValuationConstraint::new(pairs, true).expect("fixed primes");
        let w = valuation_profile_density(&c).coefficient * q(1, 2);
        if w.is_zero() {
            return;
        }
        for cofactor in [vec![], vec![(5u64, 1u32)]] {
            let eval = |a: u32, b: u32, extra: &[(u64, u32)]| {
                let mut f = vec![(2, a), (3, b)];
                f.extend_from_slice(extra);
                s_small_closed_form(k, &FactoredNat::from_factors(f).unwrap()).unwrap()
            };
            let v = eval(e[0], e[1], &cofactor);
            let mut same_sign = cofactor.clone();
            same_sign.extend([(7, 1), (11, 1)]);
            let probes = [eval(e[0] + (e[0] == CAP[0]) as u32, e[1] + (e[1] == CAP[1]) as u32, &cofactor), eval(e[0], e[1], &same_sign)];
            if probes.iter().any(|&x| x != v) {
                failure = Some(format!("s_{k} closed form not constant on profile {e:?}"));
            }
            table.add(v, &w);
        }
    });
    match failure {
        Some(msg) => Err(Error::internal(msg)),
        None => Ok(table),
    }
}

/// Conditional distribution of `a_{p-1}(k)` over primes, as multiples of `A`.
pub fn coeff_prime_density(k: u64) -> Result<(DensityTable, ExactRational)> {
    let mut table = DensityTable::new(Basis::Artin).conditional();
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    if k == 1 {
        table.add(-1, &q(1, 2));
        table.add(1, &q(1, 2));
        return Ok((table, ExactRational::zero()));
    }
    let profile = coeff_profile(k)?;
    let odd: Vec<u64> = small_primes_in(2, k);
    let c = odd.iter().fold(ExactRational::one(), |acc, &p| {
        let pi = p as i64;
        acc * q(pi * (pi - 2), pi * pi - pi - 1)
    });
    for (&d, &(a, b)) in profile.entries.iter().filter(|(&d, _)| d % 2 == 0) {
        let mut w = c.checked_div(&ExactRational::from_int(BigInt::from(d)))?;
        for &p in odd.iter().filter(|&&p| d % p as u128 == 0) {
            w = w * q(p as i64 - 1, p as i64 - 2);
        }
        table.add(a, &w);
        table.add(b, &w);
    }
    let mean = table.mean();
    Ok((table, mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;

    fn fac(n: u64) -> FactoredNat {
        factorize(n, None).unwrap()
    }

    #[test]
    fn artin_to_seven_places() {
        let a = artin_constant(1e-8).unwrap();
        assert!((a.value - 0.3739558136).abs() <= 1e-7);
        assert!(a.tail_bound <= 1e-8);
        let b = artin_constant(1e-4).unwrap();
        assert!((b.value - 0.3740).abs() <= 1e-4);
        assert!(artin_constant(1e-9).is_err());
    }

    #[test]
    fn mirsky_examples() {
        let a = shifted_prime_kfree_density(1, 2).unwrap();
        assert!((a.value - artin_value()).abs() < 1e-7);
        let c = shifted_prime_kfree_density(1, 3).unwrap();
        assert!((c.value - 0.697).abs() < 1e-3);
        let d = shifted_prime_kfree_density(2, 2).unwrap();
        assert!((d.value - 2.0 * artin_value()).abs() < 1e-7);
    }

    #[test]
    fn profile_examples() {
        let mk = |e| ValuationConstraint::new(vec![(2, ExponentClass::Exact(e))], true).unwrap();
        assert_eq!(valuation_profile_density(&mk(1)).coefficient, q(1, 1));
        assert_eq!(valuation_profile_density(&mk(2)).coefficient, q(1, 2));
        let zero = valuation_profile_density(&mk(0));
        assert!(zero.coefficient.is_zero() && zero.diagnostic.is_some());
        let plain = ValuationConstraint::new(vec![(2, ExponentClass::AtLeast(2))], false).unwrap();
        assert_eq!(valuation_profile_density(&plain).coefficient, q(1, 2));
    }

    #[test]
    fn table6_and_mean() {
        let t = ramanujan_prime_density(&fac(15), false);
        assert_eq!(t.get(1), q(9, 19));
        assert_eq!(t.get(15), q(8, 1425));
        assert_eq!(t.mass(), q(561, 475));
        assert_eq!(ramanujan_prime_mean_abs(&fac(8)), q(4, 1));
        assert_eq!(ramanujan_prime_mean_abs(&fac(1)), q(1, 1));
    }

    #[test]
    fn mean_and_moments_from_profiles() {
        for k in 1..=36u64 {
            let f = fac(k);
            let t = ramanujan_prime_density(&f, false);
            assert_eq!(t.abs_moment(1), ramanujan_prime_mean_abs(&f), "k = {k}");
            for j in 1..=3 {
                let m = ramanujan_prime_moment(&f, 2.0 * j as f64).unwrap();
                assert_eq!(m.coefficient.unwrap(), t.abs_moment(2 * j), "k = {k}, j = {j}");
            }
            let m3 = ramanujan_prime_moment(&f, 3.0).unwrap();
            assert_eq!(m3.coefficient.unwrap(), t.abs_moment(3));
            let s = ramanujan_prime_density(&f, true);
            assert!(s.mean().is_zero());
            assert_eq!(s.fold_abs().entries(), t.entries());
        }
    }

    #[test]
    fn moment_limits() {
        assert_eq!(ramanujan_prime_moment(&fac(2), 2.0).unwrap().coefficient, Some(q(3, 1)));
        assert_eq!(ramanujan_prime_moment(&fac(8), 1.0).unwrap().coefficient, Some(q(4, 1)));
        for k in [2u64, 12, 30] {
            let f = fac(k);
            let mean = ramanujan_prime_mean_abs(&f).to_f64();
            for z in [1.0 - 1e-6, 1.0 + 1e-6] {
                assert!((ramanujan_prime_moment(&f, z).unwrap().numeric - mean).abs() < 1e-4);
            }
        }
        let half = ramanujan_prime_moment(&fac(6), 1.5).unwrap();
        assert!(half.coefficient.is_none() && half.numeric > 1.0);
    }

    #[test]
    fn mean_is_multiplicative() {
        for a in 1..=36u64 {
            for b in 1..=36u64 {
                if crate::arith::gcd_u128(a as u128, b as u128) == 1 && a * b <= 36 * 36 {
                    assert_eq!(
                        ramanujan_prime_mean_abs(&fac(a * b)),
                        ramanujan_prime_mean_abs(&fac(a)) * ramanujan_prime_mean_abs(&fac(b))
                    );
                }
            }
        }
    }

    #[test]
    fn small_s_tables() {
        let s2 = s_small_density(2).unwrap();
        assert_eq!((s2.get(-1), s2.get(1)), (q(1, 4), q(3, 4)));
        let s3 = s_small_density(3).unwrap();
        assert_eq!((s3.get(-1), s3.get(1)), (q(1, 15), q(17, 30)));
        let s4 = s_small_density(4).unwrap();
        assert_eq!((s4.get(-1), s4.get(1)), (q(13, 40), q(27, 40)));
        assert!(s_small_density(5).is_err());
    }

    #[test]
    fn s_tables_follow_coeff_density() {
        for k in 1..=4u32 {
            let (a, _) = coeff_prime_density(k as u64).unwrap();
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let mut mapped = DensityTable::new(Basis::Artin).conditional();
            for (&v, c) in a.entries() {
                mapped.add(sign * v, c);
            }
            assert_eq!(s_small_density(k).unwrap(), mapped, "k = {k}");
        }
    }

    #[test]
    fn table10_rows() {
        let (t, mean) = coeff_prime_density(3).unwrap();
        assert_eq!((t.get(-1), t.get(1), mean), (q(17, 30), q(1, 15), q(-1, 2)));
        let (t, mean) = coeff_prime_density(7).unwrap();
        assert_eq!(t.get(-2), q(0, 1));
        assert_eq!(t.get(2), q(24, 3895));
        assert_eq!(mean, q(1, 190));
    }

    #[test]
    fn closed_forms_match_coefficients() {
        // s_k(p) = (-1)^k a_{p-1}(k) when k < phi(p-1), reduced mod p
        for p in small_primes_in(10, 3000) {
            let n = fac(p - 1);
            for k in 1..=4u32 {
                let a = crate::cyclotomic::cyclo_coeff(&n, k as u64).unwrap();
                let sign = if k % 2 == 0 { 1 } else { -1 };
                assert_eq!(s_small_closed_form(k, &n).unwrap(), sign * a, "p = {p}, k = {k}");
            }
        }
    }
}
