//! Sumsets, subset-sum closures, restricted k-fold sums and Olson's λ.

use serde::Serialize;

use crate::bits;
use crate::error::{Result, ZnError};
use crate::zn::{subgroup_generated, ResidueSet, ZnSet};

/// The two subset-sum closures of a set `A`.
///
/// `s` holds the sums of nonempty subsets of distinct elements; `s0` is
/// `s ∪ {0}`. Whether `0` belongs to `s` cannot be read off `s0`, so the
/// pair is kept together.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosurePair {
    pub s: ZnSet,
    pub s0: ZnSet,
}

impl ClosurePair {
    /// True when some nonempty subset sums to zero.
    pub fn zero_reachable(&self) -> bool {
        self.s.contains(0)
    }
}

/// `X + Y`, the union of the translates `X + y` over `y ∈ Y`.
pub fn sumset(x: &ZnSet, y: &ZnSet) -> Result<ZnSet> {
    if x.modulus() != y.modulus() {
        return Err(ZnError::ModulusMismatch(x.n(), y.n()));
    }
    let n = x.modulus().usize();
    let mut out = ZnSet::empty(x.modulus());
    for t in y.iter() {
        bits::or_rotated(out.words_mut(), x.words(), n, t as usize);
        if out.is_full() {
            break;
        }
    }
    Ok(out)
}

/// `S_A` and `S_A^0`, folding the elements of `A` in ascending order.
///
/// `S_A^0` is the fold `B <- B ∪ (B + x)` from `{0}`. `S_A` follows the
/// recurrence `N <- N ∪ (N + x) ∪ {x}` from `∅`; since `N ∪ {0} = B` holds
/// after every step, only the zero bit of `N` is carried separately.
pub fn subset_sums(a: &ResidueSet) -> ClosurePair {
    let modulus = a.modulus();
    let n = modulus.usize();
    let mut s0 = ZnSet::empty(modulus);
    bits::set_bit(s0.words_mut(), 0);
    let mut scratch = s0.words().to_vec();
    let mut zero_in_s = false;
    for &x in a.elements() {
        // 0 ∈ N + x  <=>  -x ∈ N, and 0 ∈ {x} <=> x = 0
        let neg = modulus.neg(x);
        zero_in_s = zero_in_s || x == 0 || s0.contains(neg);
        scratch.copy_from_slice(s0.words());
        bits::or_rotated(s0.words_mut(), &scratch, n, x as usize);
        if zero_in_s && s0.is_full() {
            break;
        }
    }
    let mut s = s0.clone();
    if !zero_in_s {
        bits::clear_bit(s.words_mut(), 0);
    }
    ClosurePair { s, s0 }
}

/// Every layer `D[0..=k]` of the restricted-sum DP: `D[j]` is `j∧A'` for
/// the full set `A' = A` once all elements are folded.
pub fn k_fold_layers(a: &ResidueSet, k: usize) -> Result<Vec<ZnSet>> {
    if k > a.len() {
        return Err(ZnError::KOutOfRange { k, size: a.len() });
    }
    let modulus = a.modulus();
    let n = modulus.usize();
    let mut layers = vec![ZnSet::empty(modulus); k + 1];
    bits::set_bit(layers[0].words_mut(), 0);
    for (i, &x) in a.elements().iter().enumerate() {
        let top = k.min(i + 1);
        for j in (1..=top).rev() {
            let (lower, upper) = layers.split_at_mut(j);
            bits::or_rotated(upper[0].words_mut(), lower[j - 1].words(), n, x as usize);
        }
    }
    Ok(layers)
}

/// `k∧A`: sums of exactly `k` distinct elements of `A`.
pub fn k_fold_sums(a: &ResidueSet, k: usize) -> Result<ZnSet> {
    Ok(k_fold_layers(a, k)?.pop().expect("k + 1 >= 1 layers"))
}

/// `λ_B(x) = |(B + x) \ B|`.
pub fn lambda(b: &ZnSet, x: u32) -> Result<usize> {
    let x = b.modulus().residue(x as u64)?;
    let mut scratch = Vec::new();
    Ok(bits::count_rotated_outside(
        b.words(),
        b.words(),
        b.modulus().usize(),
        x as usize,
        &mut scratch,
    ))
}

/// `λ_B(x)` for every residue `x`, indexed by `x`.
pub fn lambda_profile(b: &ZnSet) -> Vec<usize> {
    let n = b.modulus().usize();
    let mut scratch = Vec::new();
    (0..n)
        .map(|x| bits::count_rotated_outside(b.words(), b.words(), n, x, &mut scratch))
        .collect()
}

/// `S_A = ⟨A⟩`.
pub fn is_complete(a: &ResidueSet) -> Result<bool> {
    let target = subgroup_generated(a)?;
    Ok(subset_sums(a).s == target)
}
