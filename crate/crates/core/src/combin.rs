//! `k`-combinations of `0..m` in colexicographic order, with ranking and
//! unranking so a scan can be cut into contiguous ranges.

use crate::binom::binomial_u128;

/// `C(m, k)` saturated to `u64::MAX`.
pub fn count(m: usize, k: usize) -> u64 {
    binomial_u128(m as u64, k as u64)
        .and_then(|c| u64::try_from(c).ok())
        .unwrap_or(u64::MAX)
}

/// The combination of colex rank `rank` (ascending indices).
pub fn unrank(rank: u64, m: usize, k: usize) -> Vec<usize> {
    debug_assert!(rank < count(m, k));
    let mut rank = rank;
    let mut out = vec![0; k];
    let mut hi = m;
    for i in (0..k).rev() {
        // largest c < hi with C(c, i + 1) <= rank
        let mut c = hi - 1;
        while count(c, i + 1) > rank {
            c -= 1;
        }
        out[i] = c;
        rank -= count(c, i + 1);
        hi = c;
    }
    out
}

pub fn rank(comb: &[usize]) -> u64 {
    comb.iter().enumerate().map(|(i, &c)| count(c, i + 1)).sum()
}

/// Advances to the colex successor; returns `false` after the last one.
pub fn next(comb: &mut [usize], m: usize) -> bool {
    let k = comb.len();
    for i in 0..k {
        let limit = if i + 1 < k { comb[i + 1] } else { m };
        if comb[i] + 1 < limit {
            comb[i] += 1;
            for (j, c) in comb.iter_mut().enumerate().take(i) {
                *c = j;
            }
            return true;
        }
    }
    false
}

/// Splits `0..total` into at most `parts` contiguous ranges.
pub fn split_ranges(total: u64, parts: u64) -> Vec<(u64, u64)> {
    let parts = parts.clamp(1, total.max(1));
    let step = total.div_ceil(parts);
    (0..parts)
        .map(|p| (p * step, ((p + 1) * step).min(total)))
        .filter(|(a, b)| a < b)
        .collect()
}

/// Calls `visit` on every combination with rank in `start..end`.
pub fn for_each_in_range(m: usize, k: usize, start: u64, end: u64, mut visit: impl FnMut(&[usize])) {
    if start >= end {
        return;
    }
    let mut comb = unrank(start, m, k);
    let mut r = start;
    loop {
        visit(&comb);
        r += 1;
        if r >= end || !next(&mut comb, m) {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_order_and_ranks() {
        let mut all = Vec::new();
        let mut c = vec![0, 1];
        loop {
            all.push(c.clone());
            if !next(&mut c, 4) {
                break;
            }
        }
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]
        );
        for (r, comb) in all.iter().enumerate() {
            assert_eq!(rank(comb), r as u64);
            assert_eq!(&unrank(r as u64, 4, 2), comb);
        }
    }

    #[test]
    fn ranges_cover_everything_once() {
        for (m, k) in [(7, 3), (10, 0), (5, 5), (15, 11)] {
            let total = count(m, k);
            let mut seen = Vec::new();
            for (a, b) in split_ranges(total, 7) {
                for_each_in_range(m, k, a, b, |c| seen.push(rank(c)));
            }
            assert_eq!(seen, (0..total).collect::<Vec<_>>());
        }
    }
}
