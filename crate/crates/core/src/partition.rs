//! Integer partitions in multiplicity form.

use crate::error::{Error, Result};

/// Upper limit on the number of partitions a single enumeration may visit.
pub const MAX_PARTITIONS: u64 = 2_000_000;

/// Number of partitions of `n` via Euler's pentagonal recurrence.
pub fn partition_count(n: u32) -> u128 {
    let n = n as usize;
    let mut p = vec![0i128; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut s = 0i128;
        let mut j = 1i64;
        loop {
            let g1 = (j * (3 * j - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            s += sign * p[m - g1];
            let g2 = (j * (3 * j + 1) / 2) as usize;
            if g2 <= m {
                s += sign * p[m - g2];
            }
            j += 1;
        }
        p[m] = s;
    }
    p[n] as u128
}

/// Visits each partition of `n` as `(part, multiplicity)` pairs with parts descending.
pub fn for_each_partition(n: u32, mut f: impl FnMut(&[(u32, u32)])) -> Result<()> {
    let count = partition_count(n);
    if count > MAX_PARTITIONS as u128 {
        return Err(Error::resource(format!("{n} has {count} partitions, limit is {MAX_PARTITIONS}")));
    }
    let mut stack: Vec<(u32, u32)> = Vec::new();
    recurse(n, n, &mut stack, &mut f);
    Ok(())
}

fn recurse(rest: u32, max_part: u32, stack: &mut Vec<(u32, u32)>, f: &mut impl FnMut(&[(u32, u32)])) {
    if rest == 0 {
        f(stack);
        return;
    }
    for part in (1..=max_part.min(rest)).rev() {
        for mult in (1..=rest / part).rev() {
            stack.push((part, mult));
            recurse(rest - part * mult, part - 1, stack, f);
            stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let c: Vec<u128> = (0..=10).map(partition_count).collect();
        assert_eq!(c, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partition_count(61), 1_121_505);
        assert_eq!(partition_count(100), 190_569_292);
    }

    #[test]
    fn enumeration_matches_count() {
        for n in 0..=30 {
            let mut seen = 0u128;
            for_each_partition(n, |p| {
                assert_eq!(p.iter().map(|&(a, m)| a * m).sum::<u32>(), n);
                assert!(p.windows(2).all(|w| w[0].0 > w[1].0));
                seen += 1;
            })
            .unwrap();
            assert_eq!(seen, partition_count(n));
        }
    }

    #[test]
    fn budget() {
        assert!(for_each_partition(80, |_| {}).is_err());
    }
}
