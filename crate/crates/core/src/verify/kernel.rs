//! Bit-row kernels for the campaign inner loops.
//!
//! `u64` rows serve moduli up to 64; `Vec<u64>` rows serve the rest. The
//! `sums` module stays the reference: every kernel here is cross-checked
//! against it in tests.

use crate::bits;
use crate::verify::combinations::PrefixEval;

pub trait Row: Clone + Send + Sync {
    fn empty(n: usize) -> Self;
    fn set(&mut self, i: usize);
    fn test(&self, i: usize) -> bool;
    fn assign(&mut self, other: &Self);
    /// `self |= rotate(src, x)`.
    fn or_rotated(&mut self, src: &Self, n: usize, x: usize);
    fn is_full(&self, n: usize) -> bool;
    fn count(&self) -> usize;
    /// `|rotate(self, x) \ self|`.
    fn lambda(&self, n: usize, x: usize) -> usize;
}

#[inline]
fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
fn rot(v: u64, n: usize, x: usize) -> u64 {
    if x == 0 {
        v
    } else {
        ((v << x) | (v >> (n - x))) & mask(n)
    }
}

impl Row for u64 {
    #[inline]
    fn empty(n: usize) -> Self {
        debug_assert!(n <= 64);
        0
    }
    #[inline]
    fn set(&mut self, i: usize) {
        *self |= 1 << i;
    }
    #[inline]
    fn test(&self, i: usize) -> bool {
        self >> i & 1 == 1
    }
    #[inline]
    fn assign(&mut self, other: &Self) {
        *self = *other;
    }
    #[inline]
    fn or_rotated(&mut self, src: &Self, n: usize, x: usize) {
        *self |= rot(*src, n, x);
    }
    #[inline]
    fn is_full(&self, n: usize) -> bool {
        *self == mask(n)
    }
    #[inline]
    fn count(&self) -> usize {
        self.count_ones() as usize
    }
    #[inline]
    fn lambda(&self, n: usize, x: usize) -> usize {
        (rot(*self, n, x) & !*self).count_ones() as usize
    }
}

impl Row for Vec<u64> {
    fn empty(n: usize) -> Self {
        vec![0; bits::words_for(n)]
    }
    fn set(&mut self, i: usize) {
        bits::set_bit(self, i);
    }
    fn test(&self, i: usize) -> bool {
        bits::test_bit(self, i)
    }
    fn assign(&mut self, other: &Self) {
        self.copy_from_slice(other);
    }
    fn or_rotated(&mut self, src: &Self, n: usize, x: usize) {
        bits::or_rotated(self, src, n, x);
    }
    fn is_full(&self, n: usize) -> bool {
        bits::is_full(self, n)
    }
    fn count(&self) -> usize {
        bits::popcount(self)
    }
    fn lambda(&self, n: usize, x: usize) -> usize {
        let mut scratch = Vec::new();
        bits::count_rotated_outside(self, self, n, x, &mut scratch)
    }
}

/// Builds a row from residues.
pub fn row_of<R: Row>(n: usize, residues: impl IntoIterator<Item = u32>) -> R {
    let mut r = R::empty(n);
    for x in residues {
        r.set(x as usize);
    }
    r
}

/// `S_A^0` of a residue list.
pub fn closure0<R: Row>(n: usize, residues: impl IntoIterator<Item = u32>) -> R {
    let mut b = R::empty(n);
    b.set(0);
    let mut prev = b.clone();
    for x in residues {
        prev.assign(&b);
        b.or_rotated(&prev, n, x as usize);
    }
    b
}

/// Completeness of subsets of a pool of units, where `⟨A⟩ = Z_n` for every
/// nonempty subset. A level is `(S^0, 0 ∈ S)`.
pub struct UnitCompleteness {
    pub n: usize,
    pub pool: Vec<u32>,
}

impl<R: Row> PrefixEval for Typed<UnitCompleteness, R> {
    type Level = (R, bool);

    fn root(&self) -> (R, bool) {
        let mut r = R::empty(self.inner.n);
        r.set(0);
        (r, false)
    }

    #[inline]
    fn extend(&self, parent: &(R, bool), i: usize, out: &mut (R, bool)) {
        let n = self.inner.n;
        let x = self.inner.pool[i] as usize;
        let neg = if x == 0 { 0 } else { n - x };
        out.1 = parent.1 || x == 0 || parent.0.test(neg);
        out.0.assign(&parent.0);
        out.0.or_rotated(&parent.0, n, x);
    }

    #[inline]
    fn saturated(&self, level: &(R, bool)) -> bool {
        level.1 && level.0.is_full(self.inner.n)
    }

    #[inline]
    fn passes(&self, leaf: &(R, bool)) -> bool {
        self.saturated(leaf)
    }
}

/// `|k∧A| = n` over subsets of a pool. A level holds the layers `D[0..=k]`.
/// For fixed `k` the property is monotone under adding elements.
pub struct KFoldFull {
    pub n: usize,
    pub k: usize,
    pub pool: Vec<u32>,
}

impl<R: Row> PrefixEval for Typed<KFoldFull, R> {
    type Level = Vec<R>;

    fn root(&self) -> Vec<R> {
        let mut layers = vec![R::empty(self.inner.n); self.inner.k + 1];
        layers[0].set(0);
        layers
    }

    #[inline]
    fn extend(&self, parent: &Vec<R>, i: usize, out: &mut Vec<R>) {
        let n = self.inner.n;
        let x = self.inner.pool[i] as usize;
        out[0].assign(&parent[0]);
        for j in 1..=self.inner.k {
            out[j].assign(&parent[j]);
            out[j].or_rotated(&parent[j - 1], n, x);
        }
    }

    #[inline]
    fn saturated(&self, level: &Vec<R>) -> bool {
        level[self.inner.k].is_full(self.inner.n)
    }

    #[inline]
    fn passes(&self, leaf: &Vec<R>) -> bool {
        self.saturated(leaf)
    }
}

/// An evaluator bound to a row representation.
pub struct Typed<E, R> {
    pub inner: E,
    _row: std::marker::PhantomData<fn() -> R>,
}

impl<E, R> Typed<E, R> {
    pub fn new(inner: E) -> Self {
        Typed {
            inner,
            _row: std::marker::PhantomData,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sums;
    use crate::verify::combinations::eval_combination;
    use crate::zn::{units, Modulus, ResidueSet, ZnSet};

    fn row_set<R: Row>(r: &R, n: usize) -> Vec<u32> {
        (0..n).filter(|&i| r.test(i)).map(|i| i as u32).collect()
    }

    fn check_rows<R: Row>(n: usize) {
        let m = Modulus::new(n as u64).unwrap();
        let members: Vec<u32> = (0..n as u32).filter(|x| (x * 7 + 3) % 5 < 2).collect();
        let row: R = row_of(n, members.iter().copied());
        let zs = ZnSet::from_residues(m, members.iter().copied()).unwrap();
        for x in 0..n {
            let mut r = R::empty(n);
            r.or_rotated(&row, n, x);
            assert_eq!(row_set(&r, n), zs.shift(x as u32).unwrap().to_vec());
            assert_eq!(row.lambda(n, x), sums::lambda(&zs, x as u32).unwrap());
        }
        let a = ResidueSet::new(m, members.iter().copied().filter(|&x| x != 0).take(6).collect()).unwrap();
        let c: R = closure0(n, a.elements().iter().copied());
        assert_eq!(row_set(&c, n), sums::subset_sums(&a).s0.to_vec());
    }

    #[test]
    fn rows_agree_with_sums_module() {
        for n in [2, 5, 31, 63, 64] {
            check_rows::<u64>(n);
            check_rows::<Vec<u64>>(n);
        }
        for n in [65, 100, 130] {
            check_rows::<Vec<u64>>(n);
        }
    }

    #[test]
    fn evaluators_agree_with_sums_module() {
        for n in [5u64, 7, 9, 12, 13, 70] {
            let m = Modulus::new(n).unwrap();
            let pool = units(m);
            let comp_u = Typed::<_, u64>::new(UnitCompleteness { n: n as usize, pool: pool.elements().to_vec() });
            let comp_v = Typed::<_, Vec<u64>>::new(UnitCompleteness { n: n as usize, pool: pool.elements().to_vec() });
            for k in 1..=3usize {
                let kf = Typed::<_, Vec<u64>>::new(KFoldFull { n: n as usize, k, pool: pool.elements().to_vec() });
                for size in k..=pool.len().min(k + 3) {
                    let combos: Vec<Vec<usize>> = (0..crate::verify::combinations::binomial(pool.len() as u64, size as u64).min(300))
                        .map(|r| crate::verify::combinations::unrank_colex(pool.len(), size, r))
                        .collect();
                    for c in combos {
                        let a = ResidueSet::new(m, c.iter().map(|&i| pool.elements()[i]).collect()).unwrap();
                        let complete = sums::is_complete(&a).unwrap();
                        if n <= 64 {
                            assert_eq!(eval_combination(&comp_u, &c), complete);
                        }
                        assert_eq!(eval_combination(&comp_v, &c), complete);
                        let full = sums::k_fold_sums(&a, k).unwrap().is_full();
                        assert_eq!(eval_combination(&kf, &c), full);
                    }
                }
            }
        }
    }
}
