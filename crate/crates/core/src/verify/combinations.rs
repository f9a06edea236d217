//! Colexicographic ranking of k-subsets and range-restricted enumeration.
//!
//! A combination `c_0 < c_1 < ... < c_{k-1}` of pool indices has colex rank
//! `sum_i C(c_i, i + 1)`. Combinations sharing their top elements
//! `c_i, ..., c_{k-1}` form a contiguous block of `C(c_i, i)` ranks, which
//! is what lets [`walk`] skip whole blocks once a monotone property holds.

use std::ops::{ControlFlow, Range};

use crate::error::{Result, ZnError};
use crate::zn::ResidueSet;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        let Some(next) = acc.checked_mul((n - i) as u128) else {
            return u128::MAX;
        };
        acc = next / (i + 1) as u128;
    }
    acc
}

/// Pascal table for `C(i, j)`, `i < rows`, `j <= cols`, saturating.
#[derive(Debug, Clone)]
pub struct Binomials {
    cols: usize,
    table: Vec<u128>,
}

impl Binomials {
    pub fn new(rows: usize, cols: usize) -> Self {
        let width = cols + 1;
        let mut table = vec![0u128; rows.max(1) * width];
        for i in 0..rows {
            table[i * width] = 1;
            for j in 1..=cols.min(i) {
                let above = table[(i - 1) * width + j];
                let diag = table[(i - 1) * width + j - 1];
                table[i * width + j] = above.saturating_add(diag);
            }
        }
        Binomials { cols, table }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u128 {
        if j > self.cols {
            return binomial(i as u64, j as u64);
        }
        self.table[i * (self.cols + 1) + j]
    }
}

/// The combination of pool indices with colex rank `rank`.
pub fn unrank_colex(pool_len: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut c = vec![0usize; k];
    let mut hi = pool_len;
    for i in (0..k).rev() {
        // largest v in [i, hi) with C(v, i + 1) <= rank
        let (mut lo, mut up) = (i, hi);
        while up - lo > 1 {
            let mid = (lo + up) / 2;
            if binomial(mid as u64, (i + 1) as u64) <= rank {
                lo = mid;
            } else {
                up = mid;
            }
        }
        c[i] = lo;
        rank -= binomial(lo as u64, (i + 1) as u64);
        hi = lo;
    }
    c
}

pub fn rank_colex(c: &[usize]) -> u128 {
    c.iter()
        .enumerate()
        .map(|(i, &v)| binomial(v as u64, (i + 1) as u64))
        .sum()
}

/// Advances `c` to its colex successor; false when `c` was the last.
pub fn colex_next(c: &mut [usize], pool_len: usize) -> Option<usize> {
    let k = c.len();
    for j in 0..k {
        let limit = if j + 1 < k { c[j + 1] } else { pool_len };
        if c[j] + 1 < limit {
            c[j] += 1;
            for (l, slot) in c.iter_mut().enumerate().take(j) {
                *slot = l;
            }
            return Some(j);
        }
    }
    None
}

pub(crate) fn check_range(total: u128, range: &Range<u64>) -> Result<()> {
    if range.start > range.end || range.end as u128 > total {
        return Err(ZnError::RankOutOfRange {
            start: range.start,
            end: range.end,
            total,
        });
    }
    Ok(())
}

/// Stream of `size`-subsets of a pool whose colex rank lies in a range.
pub struct SubsetStream<'a> {
    pool: &'a ResidueSet,
    current: Vec<usize>,
    remaining: u64,
}

impl Iterator for SubsetStream<'_> {
    type Item = ResidueSet;

    fn next(&mut self) -> Option<ResidueSet> {
        if self.remaining == 0 {
            return None;
        }
        let elements = self.current.iter().map(|&i| self.pool.elements()[i]).collect();
        let out = ResidueSet::from_sorted_unchecked(self.pool.modulus(), elements);
        self.remaining -= 1;
        if self.remaining > 0 {
            colex_next(&mut self.current, self.pool.len());
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

/// The `size`-subsets of `pool` with colex rank in `ranks`, in rank order.
pub fn enumerate_subsets(pool: &ResidueSet, size: usize, ranks: Range<u64>) -> Result<SubsetStream<'_>> {
    if size > pool.len() {
        return Err(ZnError::KOutOfRange { k: size, size: pool.len() });
    }
    let total = binomial(pool.len() as u64, size as u64);
    check_range(total, &ranks)?;
    Ok(SubsetStream {
        pool,
        current: unrank_colex(pool.len(), size, ranks.start as u128),
        remaining: ranks.end - ranks.start,
    })
}

/// Incremental evaluation of a property over growing prefixes.
///
/// Levels are built from the top element of a combination downwards;
/// `saturated` must be monotone: once true for a level, the property holds
/// for every combination containing that level's elements.
pub trait PrefixEval: Sync {
    type Level: Clone + Send;
    fn root(&self) -> Self::Level;
    fn extend(&self, parent: &Self::Level, pool_index: usize, out: &mut Self::Level);
    fn saturated(&self, level: &Self::Level) -> bool;
    fn passes(&self, leaf: &Self::Level) -> bool;
}

/// Evaluates a single combination from scratch.
pub fn eval_combination<E: PrefixEval>(eval: &E, combo: &[usize]) -> bool {
    let mut level = eval.root();
    let mut next = level.clone();
    for &i in combo.iter().rev() {
        eval.extend(&level, i, &mut next);
        std::mem::swap(&mut level, &mut next);
    }
    eval.passes(&level)
}

/// Visits every `k`-combination of `0..pool_len` with colex rank in `ranks`,
/// reusing prefix levels between neighbours and skipping blocks whose
/// shared top elements already saturate. Returns the number of
/// combinations covered; `on_fail` sees each failing combination and may
/// stop the walk.
pub fn walk<E, F>(eval: &E, pool_len: usize, k: usize, ranks: Range<u64>, mut on_fail: F) -> u64
where
    E: PrefixEval,
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if ranks.start >= ranks.end {
        return 0;
    }
    if k == 0 {
        let root = eval.root();
        if !eval.passes(&root) {
            let _ = on_fail(&[]);
        }
        return 1;
    }
    let binom = Binomials::new(pool_len + 1, k);
    let end = ranks.end;
    let mut rank = ranks.start;
    let mut c = unrank_colex(pool_len, k, rank as u128);
    let mut levels = vec![eval.root(); k + 1];
    let mut dirty = k;
    let mut covered = 0u64;
    loop {
        let mut skipped = false;
        let mut i = dirty;
        while i > 0 {
            i -= 1;
            let (lo, hi) = levels.split_at_mut(i + 1);
            eval.extend(&hi[0], c[i], &mut lo[i]);
            if i > 0 && eval.saturated(&lo[i]) {
                let inner: u128 = (0..i).map(|l| binom.get(c[l], l + 1)).sum();
                let block = binom.get(c[i], i);
                let take = (block - inner).min((end - rank) as u128) as u64;
                rank += take;
                covered += take;
                for l in 0..i {
                    c[l] = c[i] - i + l;
                }
                skipped = true;
                break;
            }
        }
        if !skipped {
            rank += 1;
            covered += 1;
            if !eval.passes(&levels[0]) && on_fail(&c).is_break() {
                return covered;
            }
        }
        if rank >= end {
            return covered;
        }
        match colex_next(&mut c, pool_len) {
            Some(j) => dirty = j + 1,
            None => return covered,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zn::Modulus;

    fn pool(n: u64, xs: &[u32]) -> ResidueSet {
        ResidueSet::new(Modulus::new(n).unwrap(), xs.to_vec()).unwrap()
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(20, 11), 167_960);
        assert_eq!(binomial(36, 13), 2_310_789_600);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(1000, 500), u128::MAX);
        let t = Binomials::new(40, 40);
        for i in 0..40 {
            for j in 0..=40 {
                assert_eq!(t.get(i, j), binomial(i as u64, j as u64));
            }
        }
    }

    #[test]
    fn stream_examples() {
        let p = pool(5, &[1, 2, 3]);
        let got: Vec<String> = enumerate_subsets(&p, 2, 0..3).unwrap().map(|s| s.literal()).collect();
        assert_eq!(got, vec!["1,2", "1,3", "2,3"]);
        let p = pool(5, &[1, 2, 3, 4]);
        let got: Vec<String> = enumerate_subsets(&p, 2, 0..1).unwrap().map(|s| s.literal()).collect();
        assert_eq!(got, vec!["1,2"]);
        assert!(enumerate_subsets(&p, 2, 0..7).is_err());
        assert!(enumerate_subsets(&p, 5, 0..0).is_err());
    }

    #[test]
    fn twenty_choose_eleven_count() {
        let p = pool(25, &(1..=20).collect::<Vec<_>>());
        assert_eq!(enumerate_subsets(&p, 11, 0..167_960).unwrap().count(), 167_960);
    }

    #[test]
    fn rank_roundtrip_and_partition() {
        let (n, k) = (9usize, 4usize);
        let total = binomial(n as u64, k as u64) as u64;
        for r in 0..total {
            let c = unrank_colex(n, k, r as u128);
            assert_eq!(rank_colex(&c), r as u128);
        }
        let p = pool(11, &(1..=9).collect::<Vec<_>>());
        let whole: Vec<_> = enumerate_subsets(&p, k, 0..total).unwrap().collect();
        let mut parts = Vec::new();
        for (a, b) in [(0, 17), (17, 60), (60, total)] {
            parts.extend(enumerate_subsets(&p, k, a..b).unwrap());
        }
        assert_eq!(whole, parts);
    }

    /// Property: sum of chosen indices is at least `threshold`. Monotone in
    /// the set, so block skipping must not change the failure set.
    struct SumAtLeast(usize);

    impl PrefixEval for SumAtLeast {
        type Level = usize;
        fn root(&self) -> usize {
            0
        }
        fn extend(&self, parent: &usize, i: usize, out: &mut usize) {
            *out = parent + i;
        }
        fn saturated(&self, l: &usize) -> bool {
            *l >= self.0
        }
        fn passes(&self, l: &usize) -> bool {
            *l >= self.0
        }
    }

    #[test]
    fn walk_matches_plain_enumeration() {
        let (n, k) = (12usize, 5usize);
        let total = binomial(n as u64, k as u64) as u64;
        for threshold in [0, 10, 25, 40, 100] {
            let eval = SumAtLeast(threshold);
            for (a, b) in [(0, total), (3, 400), (17, 18), (500, total)] {
                let mut fails = Vec::new();
                let covered = walk(&eval, n, k, a..b, |c| {
                    fails.push(c.to_vec());
                    ControlFlow::Continue(())
                });
                assert_eq!(covered, b - a);
                let expected: Vec<Vec<usize>> = (a..b)
                    .map(|r| unrank_colex(n, k, r as u128))
                    .filter(|c| c.iter().sum::<usize>() < threshold)
                    .collect();
                assert_eq!(fails, expected, "threshold {threshold} range {a}..{b}");
            }
        }
    }
}
