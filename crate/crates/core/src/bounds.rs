//! Completeness thresholds and displayed bounds, in integer arithmetic only.
//!
//! Every square-root comparison is squared out, so boundary cases such as
//! `4p - 4` being a perfect square are decided exactly.

use serde::Serialize;

use crate::error::{Result, ZnError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    /// least `m` with `(m-1)^2 > 4(n-4)`
    MainTheorem,
    /// least `m` with `m^2 >= 4n-4`
    Olson,
    /// least `m` with `m^2 >= 4n-4`, the set size in the k-fold conjecture
    ConjectureSize,
    /// least `k` with `k^2 >= n-1`
    ConjectureK,
}

impl ThresholdKind {
    pub const ALL: [ThresholdKind; 4] = [
        ThresholdKind::MainTheorem,
        ThresholdKind::Olson,
        ThresholdKind::ConjectureSize,
        ThresholdKind::ConjectureK,
    ];

    /// The defining integer inequality evaluated at `value`.
    pub fn satisfied_by(self, n: u64, value: u64) -> bool {
        let v = value as u128;
        let n = n as u128;
        match self {
            ThresholdKind::MainTheorem => v >= 1 && (v - 1) * (v - 1) > 4 * (n - 4),
            ThresholdKind::Olson | ThresholdKind::ConjectureSize => v * v >= 4 * n - 4,
            ThresholdKind::ConjectureK => v * v >= n - 1,
        }
    }

    fn min_n(self) -> u64 {
        match self {
            ThresholdKind::MainTheorem => 5,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThresholdResult {
    pub n: u64,
    pub kind: ThresholdKind,
    pub value: u64,
}

/// Least `r` with `r^2 >= v`.
pub fn ceil_sqrt(v: u64) -> u64 {
    let r = v.isqrt();
    if r * r == v {
        r
    } else {
        r + 1
    }
}

pub fn threshold(kind: ThresholdKind, n: u64) -> Result<ThresholdResult> {
    if n < kind.min_n() {
        return Err(ZnError::Precondition(format!(
            "{kind:?} threshold requires n >= {}, got {n}",
            kind.min_n()
        )));
    }
    let value = match kind {
        // (m-1)^2 > 4(n-4)  <=>  m - 1 >= isqrt(4(n-4)) + 1
        ThresholdKind::MainTheorem => (4 * (n - 4)).isqrt() + 2,
        ThresholdKind::Olson | ThresholdKind::ConjectureSize => ceil_sqrt(4 * n - 4),
        ThresholdKind::ConjectureK => ceil_sqrt(n - 1),
    };
    Ok(ThresholdResult { n, kind, value })
}

/// Smallest set size at which every unit subset of Z_n is asserted complete.
pub fn main_threshold(n: u64) -> Result<u64> {
    threshold(ThresholdKind::MainTheorem, n).map(|t| t.value)
}

/// Olson's prime-modulus threshold; primality is not checked.
pub fn olson_threshold(p: u64) -> Result<u64> {
    threshold(ThresholdKind::Olson, p).map(|t| t.value)
}

/// `(k, min_size)` for the k-fold conjecture at `n`.
pub fn conjecture_params(n: u64) -> Result<(u64, u64)> {
    let k = threshold(ThresholdKind::ConjectureK, n)?.value;
    let size = threshold(ThresholdKind::ConjectureSize, n)?.value;
    Ok((k, size))
}

/// `min(n, |X| + |Y| - 1)`.
pub fn chowla_bound(n: u64, sx: u64, sy: u64) -> Result<u64> {
    if sx == 0 || sy == 0 || sx > n || sy > n {
        return Err(ZnError::Precondition(format!(
            "set sizes must lie in [1, {n}], got {sx} and {sy}"
        )));
    }
    Ok(n.min(sx + sy - 1))
}

/// Right side of the subset-sum lower bound, doubled: `min(n + 2, 6 + a(a-1))`.
pub fn mainlemma_rhs_doubled(n: u64, a: u64) -> Result<u64> {
    if a < 2 {
        return Err(ZnError::Precondition(format!("|A| >= 2 required, got {a}")));
    }
    Ok((n + 2).min(6 + a * (a - 1)))
}

/// `2|S_A^0| >= min(n + 2, 6 + a(a-1))`.
pub fn mainlemma_bound_holds(n: u64, a: u64, s0_size: u64) -> Result<bool> {
    Ok(2 * s0_size >= mainlemma_rhs_doubled(n, a)?)
}

fn check_lamb_pre(a: u64, b: u64) -> Result<()> {
    if a < 3 || b < 1 {
        return Err(ZnError::Precondition(format!("a >= 3 and b >= 1 required, got a={a} b={b}")));
    }
    Ok(())
}

/// Sides of `α·b > a(b - a + 3)`, the cleared form of `α > a - a(a-3)/b`.
pub fn lamb_bound_sides(a: u64, b: u64, alpha: u64) -> Result<(i128, i128)> {
    check_lamb_pre(a, b)?;
    let (a, b, alpha) = (a as i128, b as i128, alpha as i128);
    Ok((alpha * b, a * (b - a + 3)))
}

/// The strict bound on `max λ_B` over an antisymmetric unit set, exactly as
/// stated; it is known to fail on concrete instances.
pub fn lamb_bound_holds(a: u64, b: u64, alpha: u64) -> Result<bool> {
    let (lhs, rhs) = lamb_bound_sides(a, b, alpha)?;
    Ok(lhs > rhs)
}

/// Whether the corollary `α >= a - 1` is claimed for `(a, b)`: `2b >= a(a-3)`.
pub fn plus_bound_applies(a: u64, b: u64) -> bool {
    2 * b >= a * a.saturating_sub(3)
}

pub fn plus_bound_holds(a: u64, b: u64, alpha: u64) -> Result<bool> {
    check_lamb_pre(a, b)?;
    Ok(alpha + 1 >= a)
}

/// Doubled form of the size test used to split the main proof:
/// `6 + h(h-1) < n + 2` with `h = ⌊k/2⌋`.
pub fn half_split_holds(n: u64, k: u64) -> bool {
    let h = k / 2;
    6 + h * h.saturating_sub(1) < n + 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_threshold_examples() {
        assert_eq!(main_threshold(5).unwrap(), 4);
        assert_eq!(main_threshold(100).unwrap(), 21);
        assert_eq!(main_threshold(8).unwrap(), 6);
        assert!(main_threshold(4).is_err());
    }

    #[test]
    fn olson_examples() {
        assert_eq!(olson_threshold(5).unwrap(), 4);
        assert_eq!(olson_threshold(2).unwrap(), 2);
        assert_eq!(olson_threshold(101).unwrap(), 20);
        assert!(olson_threshold(1).is_err());
    }

    #[test]
    fn chowla_examples() {
        assert_eq!(chowla_bound(5, 2, 2).unwrap(), 3);
        assert_eq!(chowla_bound(5, 3, 3).unwrap(), 5);
        assert_eq!(chowla_bound(12, 1, 1).unwrap(), 1);
        assert!(chowla_bound(5, 0, 1).is_err());
        assert!(chowla_bound(5, 6, 1).is_err());
    }

    #[test]
    fn mainlemma_examples() {
        assert!(mainlemma_bound_holds(7, 2, 4).unwrap());
        assert!(mainlemma_bound_holds(5, 2, 4).unwrap());
        assert!(!mainlemma_bound_holds(7, 2, 3).unwrap());
        assert!(mainlemma_bound_holds(7, 1, 3).is_err());
    }

    #[test]
    fn lamb_examples() {
        assert!(!lamb_bound_holds(3, 5, 3).unwrap());
        assert!(lamb_bound_holds(3, 5, 4).unwrap());
        assert!(lamb_bound_holds(4, 100, 4).unwrap());
        assert!(lamb_bound_holds(2, 5, 4).is_err());
        assert!(lamb_bound_holds(3, 0, 4).is_err());
        // b - a + 3 negative: the bound is below zero
        assert!(lamb_bound_holds(10, 2, 0).unwrap());
    }

    #[test]
    fn conjecture_examples() {
        assert_eq!(conjecture_params(10).unwrap(), (3, 6));
        assert_eq!(conjecture_params(2).unwrap(), (1, 2));
        assert_eq!(conjecture_params(26).unwrap(), (5, 10));
        assert!(conjecture_params(1).is_err());
    }

    #[test]
    fn least_witness_property() {
        for n in 2..=20_000u64 {
            for kind in ThresholdKind::ALL {
                let Ok(t) = threshold(kind, n) else {
                    assert!(n < 5 && kind == ThresholdKind::MainTheorem);
                    continue;
                };
                assert!(kind.satisfied_by(n, t.value), "{kind:?} n={n}");
                assert!(t.value == 0 || !kind.satisfied_by(n, t.value - 1), "{kind:?} n={n}");
            }
        }
    }

    #[test]
    fn main_threshold_tracks_radical() {
        // m = floor(1 + 2 sqrt(n-4)) + 1, unless 1 + 2 sqrt(n-4) is an integer
        // in which case the strict inequality still gives floor + 1.
        for n in 5..=50_000u64 {
            let m = main_threshold(n).unwrap();
            let floor_radical = 1 + (4 * (n - 4)).isqrt();
            assert!(m == floor_radical + 1 || m == floor_radical + 2, "n={n}");
        }
    }

    #[test]
    fn half_split() {
        assert!(!half_split_holds(5, 4));
        assert!(half_split_holds(13, 5));
    }
}
