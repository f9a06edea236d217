//! Word-level kernels over little-endian bit vectors.
//!
//! Bit `i` of a vector lives in word `i / 64` at position `i % 64`. Vectors
//! of logical length `n` keep every bit at position `>= n` cleared.

pub const WORD_BITS: usize = 64;

#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[inline]
fn low_mask(len: usize) -> u64 {
    if len >= WORD_BITS {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// 64 bits of `src` starting at the signed bit position `pos`; positions
/// outside the vector read as zero.
#[inline]
fn read64(src: &[u64], pos: i64) -> u64 {
    if pos < 0 {
        let back = (-pos) as usize;
        if back >= WORD_BITS {
            return 0;
        }
        return src.first().copied().unwrap_or(0) << back;
    }
    let pos = pos as usize;
    let i = pos / WORD_BITS;
    let o = pos % WORD_BITS;
    let lo = src.get(i).copied().unwrap_or(0);
    if o == 0 {
        lo
    } else {
        (lo >> o) | (src.get(i + 1).copied().unwrap_or(0) << (WORD_BITS - o))
    }
}

/// ORs `len` bits of `src` starting at `src_start` into `dst` starting at
/// `dst_start`.
pub fn or_bits(dst: &mut [u64], dst_start: usize, src: &[u64], src_start: usize, len: usize) {
    if len == 0 {
        return;
    }
    let dst_end = dst_start + len;
    let delta = dst_start as i64 - src_start as i64;
    let first = dst_start / WORD_BITS;
    let last = (dst_end - 1) / WORD_BITS;
    for (w, word) in dst[first..=last].iter_mut().enumerate() {
        let base = (first + w) * WORD_BITS;
        let lo = dst_start.max(base) - base;
        let hi = dst_end.min(base + WORD_BITS) - base;
        let mask = low_mask(hi) & !low_mask(lo);
        *word |= read64(src, base as i64 - delta) & mask;
    }
}

/// `dst |= rotate(src, x)` where rotation moves bit `i` to bit `(i + x) mod n`.
pub fn or_rotated(dst: &mut [u64], src: &[u64], n: usize, x: usize) {
    debug_assert!(x < n);
    if x == 0 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= *s;
        }
        return;
    }
    or_bits(dst, x, src, 0, n - x);
    or_bits(dst, 0, src, n - x, x);
}

/// Number of set bits of `rotate(src, x) & !base`.
pub fn count_rotated_outside(src: &[u64], base: &[u64], n: usize, x: usize, scratch: &mut Vec<u64>) -> usize {
    scratch.clear();
    scratch.resize(src.len(), 0);
    or_rotated(scratch, src, n, x);
    scratch
        .iter()
        .zip(base)
        .map(|(r, b)| (r & !b).count_ones() as usize)
        .sum()
}

#[inline]
pub fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub fn test_bit(words: &[u64], i: usize) -> bool {
    words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
}

#[inline]
pub fn set_bit(words: &mut [u64], i: usize) {
    words[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
}

#[inline]
pub fn clear_bit(words: &mut [u64], i: usize) {
    words[i / WORD_BITS] &= !(1u64 << (i % WORD_BITS));
}

/// True when every one of the first `n` bits is set.
pub fn is_full(words: &[u64], n: usize) -> bool {
    let full_words = n / WORD_BITS;
    if words[..full_words].iter().any(|&w| w != u64::MAX) {
        return false;
    }
    let rem = n % WORD_BITS;
    rem == 0 || words[full_words] == low_mask(rem)
}

/// Iterator over the indices of set bits, ascending.
pub fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + tz)
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_rotate(bits: &[bool], x: usize) -> Vec<bool> {
        let n = bits.len();
        let mut out = vec![false; n];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                out[(i + x) % n] = true;
            }
        }
        out
    }

    fn pack(bits: &[bool]) -> Vec<u64> {
        let mut w = vec![0u64; words_for(bits.len())];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                set_bit(&mut w, i);
            }
        }
        w
    }

    #[test]
    fn rotate_matches_naive_across_word_boundaries() {
        for n in [1usize, 2, 63, 64, 65, 127, 128, 129, 200] {
            let bits: Vec<bool> = (0..n).map(|i| (i * 7 + i / 3) % 5 < 2).collect();
            let packed = pack(&bits);
            for x in 0..n {
                let mut dst = vec![0u64; packed.len()];
                or_rotated(&mut dst, &packed, n, x);
                assert_eq!(dst, pack(&naive_rotate(&bits, x)), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn full_detection() {
        for n in [1usize, 5, 64, 65, 130] {
            let mut w = vec![0u64; words_for(n)];
            for i in 0..n {
                assert!(!is_full(&w, n));
                set_bit(&mut w, i);
            }
            assert!(is_full(&w, n));
            assert_eq!(ones(&w).count(), n);
        }
    }
}
