//! Residues and dense subsets of Z_n.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Result, ZnError};

/// Largest modulus accepted anywhere in the crate.
pub const MAX_MODULUS: u32 = 1 << 24;

/// The order `n` of the cyclic group Z_n, with `2 <= n <= 2^24`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(ZnError::ModulusTooSmall(n));
        }
        if n > MAX_MODULUS as u64 {
            return Err(ZnError::ModulusTooLarge(n));
        }
        Ok(Modulus(n as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn usize(self) -> usize {
        self.0 as usize
    }

    /// Checks that `x` is a residue of this modulus.
    pub fn residue(self, x: u64) -> Result<u32> {
        if x < self.0 as u64 {
            Ok(x as u32)
        } else {
            Err(ZnError::ResidueOutOfRange { residue: x, n: self.0 })
        }
    }

    #[inline]
    pub fn add(self, x: u32, y: u32) -> u32 {
        let s = x as u64 + y as u64;
        (s % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, x: u32) -> u32 {
        if x == 0 {
            0
        } else {
            self.0 - x
        }
    }

    #[inline]
    pub fn is_unit(self, x: u32) -> bool {
        gcd(x as u64, self.0 as u64) == 1
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Euler's totient by trial division.
pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

/// A subset of Z_n stored as a length-`n` bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZnSet {
    modulus: Modulus,
    words: Vec<u64>,
}

impl ZnSet {
    pub fn empty(modulus: Modulus) -> Self {
        ZnSet {
            modulus,
            words: vec![0; bits::words_for(modulus.usize())],
        }
    }

    pub fn full(modulus: Modulus) -> Self {
        let mut s = Self::empty(modulus);
        let n = modulus.usize();
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        let rem = n % bits::WORD_BITS;
        if rem != 0 {
            *s.words.last_mut().unwrap() = (1u64 << rem) - 1;
        }
        s
    }

    pub fn singleton(modulus: Modulus, x: u32) -> Result<Self> {
        let x = modulus.residue(x as u64)?;
        let mut s = Self::empty(modulus);
        bits::set_bit(&mut s.words, x as usize);
        Ok(s)
    }

    /// Builds a set from residues; repeated residues are absorbed.
    pub fn from_residues<I: IntoIterator<Item = u32>>(modulus: Modulus, residues: I) -> Result<Self> {
        let mut s = Self::empty(modulus);
        for x in residues {
            let x = modulus.residue(x as u64)?;
            bits::set_bit(&mut s.words, x as usize);
        }
        Ok(s)
    }

    pub(crate) fn from_words(modulus: Modulus, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), bits::words_for(modulus.usize()));
        ZnSet { modulus, words }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.modulus.get()
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub fn len(&self) -> usize {
        bits::popcount(&self.words)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        bits::is_full(&self.words, self.modulus.usize())
    }

    pub fn contains(&self, x: u32) -> bool {
        x < self.n() && bits::test_bit(&self.words, x as usize)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        bits::ones(&self.words).map(|i| i as u32)
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn to_residue_set(&self) -> ResidueSet {
        ResidueSet {
            modulus: self.modulus,
            elements: self.to_vec(),
        }
    }

    fn check_same(&self, other: &ZnSet) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(ZnError::ModulusMismatch(self.n(), other.n()));
        }
        Ok(())
    }

    fn zip_with(&self, other: &ZnSet, f: impl Fn(u64, u64) -> u64) -> Result<ZnSet> {
        self.check_same(other)?;
        let words = self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect();
        Ok(ZnSet::from_words(self.modulus, words))
    }

    pub fn union(&self, other: &ZnSet) -> Result<ZnSet> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &ZnSet) -> Result<ZnSet> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &ZnSet) -> Result<ZnSet> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &ZnSet) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0))
    }

    /// The translate `S + x`, computed as a rotation of the bit vector.
    pub fn shift(&self, x: u32) -> Result<ZnSet> {
        let x = self.modulus.residue(x as u64)?;
        let mut out = ZnSet::empty(self.modulus);
        bits::or_rotated(&mut out.words, &self.words, self.modulus.usize(), x as usize);
        Ok(out)
    }

    /// `{-s : s in S}`.
    pub fn negate(&self) -> ZnSet {
        let mut out = ZnSet::empty(self.modulus);
        for s in self.iter() {
            bits::set_bit(&mut out.words, self.modulus.neg(s) as usize);
        }
        out
    }

    /// Comma-separated ascending literal, e.g. `"0,2,4"`.
    pub fn literal(&self) -> String {
        join_literal(self.iter())
    }
}

impl fmt::Debug for ZnSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZnSet(n={}, {{{}}})", self.n(), self.literal())
    }
}

#[derive(Serialize, Deserialize)]
struct SetRepr {
    n: u64,
    elements: Vec<u32>,
}

impl Serialize for ZnSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SetRepr {
            n: self.n() as u64,
            elements: self.to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ZnSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SetRepr::deserialize(deserializer)?;
        let m = Modulus::new(repr.n).map_err(serde::de::Error::custom)?;
        ZnSet::from_residues(m, repr.elements).map_err(serde::de::Error::custom)
    }
}

fn join_literal(it: impl Iterator<Item = u32>) -> String {
    let mut out = String::new();
    for (i, x) in it.enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&x.to_string());
    }
    out
}

/// An explicit set of distinct residues, kept in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueSet {
    modulus: Modulus,
    elements: Vec<u32>,
}

impl ResidueSet {
    /// Sorts the input; repeated residues are rejected rather than merged.
    pub fn new(modulus: Modulus, mut elements: Vec<u32>) -> Result<Self> {
        for &x in &elements {
            modulus.residue(x as u64)?;
        }
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(ZnError::DuplicateResidue(w[0]));
        }
        Ok(ResidueSet { modulus, elements })
    }

    pub fn empty(modulus: Modulus) -> Self {
        ResidueSet {
            modulus,
            elements: Vec::new(),
        }
    }

    /// Caller guarantees `elements` is strictly increasing and in range.
    pub(crate) fn from_sorted_unchecked(modulus: Modulus, elements: Vec<u32>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements.last().is_none_or(|&x| x < modulus.get()));
        ResidueSet { modulus, elements }
    }

    /// Parses `"x1,x2,..."`. The empty string is the empty set.
    pub fn parse_literal(modulus: Modulus, literal: &str) -> Result<Self> {
        let literal = literal.trim();
        if literal.is_empty() {
            return Ok(Self::empty(modulus));
        }
        let mut elements = Vec::new();
        for part in literal.split(',') {
            let x: u64 = part
                .parse()
                .map_err(|_| ZnError::MalformedLiteral(literal.to_string()))?;
            elements.push(modulus.residue(x)?);
        }
        Self::new(modulus, elements)
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.modulus.get()
    }

    #[inline]
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Every element is coprime with `n`.
    pub fn is_unit_set(&self) -> bool {
        self.elements.iter().all(|&x| self.modulus.is_unit(x))
    }

    /// `A ∩ (-A) = ∅`. Fails whenever `0` or `n/2` is present.
    pub fn is_antisymmetric(&self) -> bool {
        self.elements.iter().all(|&x| !self.contains(self.modulus.neg(x)))
    }

    pub fn to_zn_set(&self) -> ZnSet {
        let mut s = ZnSet::empty(self.modulus);
        for &x in &self.elements {
            bits::set_bit(s.words_mut(), x as usize);
        }
        s
    }

    pub fn without(&self, x: u32) -> ResidueSet {
        ResidueSet {
            modulus: self.modulus,
            elements: self.elements.iter().copied().filter(|&e| e != x).collect(),
        }
    }

    /// Adds `x`; a no-op when already present.
    pub fn with(&self, x: u32) -> Result<ResidueSet> {
        let x = self.modulus.residue(x as u64)?;
        let mut elements = self.elements.clone();
        if let Err(pos) = elements.binary_search(&x) {
            elements.insert(pos, x);
        }
        Ok(ResidueSet {
            modulus: self.modulus,
            elements,
        })
    }

    pub fn literal(&self) -> String {
        join_literal(self.elements.iter().copied())
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

impl Serialize for ResidueSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SetRepr {
            n: self.n() as u64,
            elements: self.elements.clone(),
        }
        .serialize(serializer)
    }
}

/// The units of Z_n in ascending order.
pub fn units(modulus: Modulus) -> ResidueSet {
    let elements = (1..modulus.get()).filter(|&x| modulus.is_unit(x)).collect();
    ResidueSet::from_sorted_unchecked(modulus, elements)
}

/// `⟨A⟩ = d·Z_n` where `d = gcd(n, a_1, ..., a_k)`.
pub fn subgroup_generated(a: &ResidueSet) -> Result<ZnSet> {
    if a.is_empty() {
        return Err(ZnError::EmptySet);
    }
    let n = a.n() as u64;
    let d = a.elements().iter().fold(n, |g, &x| gcd(g, x as u64));
    ZnSet::from_residues(a.modulus(), (0..n).step_by(d as usize).map(|x| x as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn set(n: u64, xs: &[u32]) -> ZnSet {
        ZnSet::from_residues(m(n), xs.iter().copied()).unwrap()
    }

    fn rs(n: u64, xs: &[u32]) -> ResidueSet {
        ResidueSet::new(m(n), xs.to_vec()).unwrap()
    }

    #[test]
    fn modulus_bounds() {
        assert_eq!(Modulus::new(1), Err(ZnError::ModulusTooSmall(1)));
        assert_eq!(Modulus::new(0), Err(ZnError::ModulusTooSmall(0)));
        assert!(Modulus::new(1 << 24).is_ok());
        assert_eq!(Modulus::new((1 << 24) + 1), Err(ZnError::ModulusTooLarge((1 << 24) + 1)));
    }

    #[test]
    fn units_examples() {
        assert_eq!(units(m(5)).elements(), &[1, 2, 3, 4]);
        assert_eq!(units(m(8)).elements(), &[1, 3, 5, 7]);
        assert_eq!(units(m(2)).elements(), &[1]);
    }

    #[test]
    fn units_count_is_phi_and_multiplicative() {
        for n in 2..=2000u64 {
            let direct = (1..n).filter(|&x| gcd(x, n) == 1).count() as u64;
            assert_eq!(units(m(n)).len() as u64, direct);
            assert_eq!(euler_phi(n), direct);
        }
        for (a, b) in [(4u64, 9u64), (7, 15), (16, 25), (8, 1249)] {
            assert_eq!(units(m(a * b)).len(), units(m(a)).len() * units(m(b)).len());
        }
    }

    #[test]
    fn shift_examples() {
        assert_eq!(set(7, &[0, 1, 2]).shift(3).unwrap(), set(7, &[3, 4, 5]));
        assert!(ZnSet::empty(m(6)).shift(4).unwrap().is_empty());
        let full = ZnSet::full(m(5));
        assert_eq!(full.shift(2).unwrap(), full);
        assert!(set(7, &[1]).shift(7).is_err());
    }

    #[test]
    fn negate_examples() {
        assert_eq!(set(11, &[1, 2, 3]).negate(), set(11, &[8, 9, 10]));
        assert_eq!(set(9, &[0]).negate(), set(9, &[0]));
        assert_eq!(set(5, &[1, 4]).negate(), set(5, &[1, 4]));
    }

    #[test]
    fn subgroup_examples() {
        assert_eq!(subgroup_generated(&rs(8, &[2, 4])).unwrap(), set(8, &[0, 2, 4, 6]));
        assert_eq!(subgroup_generated(&rs(7, &[1])).unwrap(), ZnSet::full(m(7)));
        assert_eq!(subgroup_generated(&rs(9, &[6])).unwrap(), set(9, &[0, 3, 6]));
        assert_eq!(subgroup_generated(&rs(9, &[0])).unwrap(), set(9, &[0]));
        assert_eq!(subgroup_generated(&ResidueSet::empty(m(9))), Err(ZnError::EmptySet));
    }

    #[test]
    fn residue_set_rejects_duplicates_and_sorts() {
        assert_eq!(ResidueSet::new(m(7), vec![3, 1, 3]), Err(ZnError::DuplicateResidue(3)));
        assert_eq!(rs(7, &[5, 1, 3]).elements(), &[1, 3, 5]);
        assert!(matches!(
            ResidueSet::new(m(7), vec![7]),
            Err(ZnError::ResidueOutOfRange { residue: 7, n: 7 })
        ));
    }

    #[test]
    fn literal_parsing() {
        let a = ResidueSet::parse_literal(m(11), "9,1,2").unwrap();
        assert_eq!(a.literal(), "1,2,9");
        assert!(ResidueSet::parse_literal(m(11), "").unwrap().is_empty());
        assert!(matches!(
            ResidueSet::parse_literal(m(11), "1,,2"),
            Err(ZnError::MalformedLiteral(_))
        ));
        assert!(ResidueSet::parse_literal(m(11), "1, 2").is_err());
        assert!(ResidueSet::parse_literal(m(11), "1,1").is_err());
    }

    #[test]
    fn flags() {
        assert!(rs(11, &[1, 2, 3]).is_antisymmetric());
        assert!(!rs(11, &[1, 10]).is_antisymmetric());
        assert!(!rs(8, &[4]).is_antisymmetric());
        assert!(rs(8, &[1, 3]).is_unit_set());
        assert!(!rs(8, &[2, 3]).is_unit_set());
    }

    #[test]
    fn json_shape() {
        let s = set(8, &[0, 2, 4, 6]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"n":8,"elements":[0,2,4,6]}"#);
        let back: ZnSet = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<ZnSet>(r#"{"n":8,"elements":[9]}"#).is_err());
    }
}
