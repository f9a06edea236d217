//! Step-by-step replays of the two central proofs on concrete instances.

use serde::Serialize;

use super::partition::antisymmetric_partition;
use crate::bounds;
use crate::error::{Result, ZnError};
use crate::sums::{is_complete, lambda, lambda_profile, subset_sums, sumset};
use crate::zn::{Modulus, ResidueSet, ZnSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "proof", rename_all = "snake_case")]
pub enum ProofTrace {
    Main(MainProofTrace),
    LemmaEh(LemmaEhTrace),
}

/// The odd case: one element `y` of `A1` moves to `A2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddCase {
    pub a: usize,
    /// `|B|` with `B = S_{A2}^0`.
    pub b: usize,
    pub y: u32,
    pub lambda_y: usize,
    pub c1: ResidueSet,
    pub c2: ResidueSet,
    pub s0_c1: usize,
    pub s0_c2: usize,
    /// `|S_{C2}^0| = |B| + λ_B(y)`.
    pub adjoin_identity_holds: bool,
    pub mainlemma_c1_holds: bool,
    pub pair_sum: usize,
    pub pair_bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainProofTrace {
    pub n: u32,
    pub k: usize,
    pub parity: &'static str,
    /// False when `A` is complete, so the disjoint-closure bound has no premise.
    pub incomplete: bool,
    pub a1: ResidueSet,
    pub a2: ResidueSet,
    pub s0_a1: usize,
    pub s0_a2: usize,
    pub mainlemma_a1_holds: bool,
    pub mainlemma_a2_holds: bool,
    /// `6 + h(h-1)` with `h = ⌊k/2⌋`.
    pub half_split_lhs: u64,
    /// `n + 2`.
    pub half_split_rhs: u64,
    pub half_split_holds: bool,
    pub pair_sum: usize,
    pub pair_bound: u64,
    pub pair_bound_holds: bool,
    pub odd: Option<OddCase>,
}

fn s0(a: &ResidueSet) -> usize {
    subset_sums(a).s0.len()
}

/// Replays the completeness proof: partition, closure sizes, the half-split
/// inequality and, for odd `k`, the transfer of the `λ`-maximizing `y`.
pub fn replay_main_proof(a: &ResidueSet) -> Result<MainProofTrace> {
    let m = a.modulus();
    let n = m.get() as u64;
    let k = a.len();
    if k < 4 {
        return Err(ZnError::Precondition(format!("replay needs |A| >= 4, got {k}")));
    }
    let (a1, a2) = antisymmetric_partition(a)?;
    let (s0_a1, s0_a2) = (s0(&a1), s0(&a2));
    let h = (k / 2) as u64;
    let pair_sum = s0_a1 + s0_a2;
    let odd = if k % 2 == 1 {
        let b = subset_sums(&a2).s0;
        let profile = lambda_profile(&b);
        let y = *a1
            .elements()
            .iter()
            .max_by(|&&x, &&z| profile[x as usize].cmp(&profile[z as usize]).then(z.cmp(&x)))
            .expect("A1 nonempty");
        let c1 = a1.without(y);
        let c2 = a2.with(y)?;
        let (s0_c1, s0_c2) = (s0(&c1), s0(&c2));
        let lambda_y = profile[y as usize];
        Some(OddCase {
            a: c1.len(),
            b: b.len(),
            y,
            lambda_y,
            adjoin_identity_holds: s0_c2 == b.len() + lambda_y,
            mainlemma_c1_holds: bounds::mainlemma_bound_holds(n, c1.len() as u64, s0_c1 as u64)?,
            pair_sum: s0_c1 + s0_c2,
            pair_bound_holds: (s0_c1 + s0_c2) as u64 <= n + 1,
            c1,
            c2,
            s0_c1,
            s0_c2,
        })
    } else {
        None
    };
    Ok(MainProofTrace {
        n: m.get(),
        k,
        parity: if k.is_multiple_of(2) { "even" } else { "odd" },
        incomplete: !is_complete(a)?,
        mainlemma_a1_holds: bounds::mainlemma_bound_holds(n, a1.len() as u64, s0_a1 as u64)?,
        mainlemma_a2_holds: bounds::mainlemma_bound_holds(n, a2.len() as u64, s0_a2 as u64)?,
        a1,
        a2,
        s0_a1,
        s0_a2,
        half_split_lhs: 6 + h * (h - 1),
        half_split_rhs: n + 2,
        half_split_holds: bounds::half_split_holds(n, k as u64),
        pair_sum,
        pair_bound: n + 1,
        pair_bound_holds: pair_sum as u64 <= n + 1,
        odd,
    })
}

/// A rational `num / den`, kept unreduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: i128,
    pub den: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaEhTrace {
    pub n: u32,
    pub a: ResidueSet,
    pub b: ResidueSet,
    /// `A ∪ (-A) ∪ {0}`.
    pub a_star: ResidueSet,
    pub t: u64,
    pub m: u64,
    pub r: u64,
    /// `C_j = jA*` for `j = 1..=m+1`.
    pub c_layers: Vec<ResidueSet>,
    /// `|C_j| >= min(n, 2ja + 1)` for each layer.
    pub growth_holds: Vec<bool>,
    pub c: ResidueSet,
    pub e: ResidueSet,
    pub lambda_sum: u64,
    pub alpha: u64,
    /// `α(m+1)(ma+r)`.
    pub upper_integer: u64,
    /// `α(t+a)^2 / (4a)`.
    pub upper_rational: Ratio,
    /// `b(t - b + 1)`.
    pub lower: i128,
    pub lower_holds: bool,
    pub upper_integer_holds: bool,
    pub upper_rational_holds: bool,
    pub integer_within_rational: bool,
    /// `lower <= upper_rational`: the inequality the proof derives.
    pub chain_holds: bool,
}

/// Replays the proof of the `λ` lower bound for antisymmetric unit `A`
/// (`a >= 3`) and nonempty `B` with `2b <= n + 2`, using `t = 2b - 3`.
pub fn replay_lemma_eh(a: &ResidueSet, b: &ZnSet) -> Result<LemmaEhTrace> {
    let md: Modulus = a.modulus();
    if b.modulus() != md {
        return Err(ZnError::ModulusMismatch(md.get(), b.n()));
    }
    let n = md.get() as u64;
    let (al, bl) = (a.len() as u64, b.len() as u64);
    if al < 3 || !a.is_unit_set() || !a.is_antisymmetric() {
        return Err(ZnError::Precondition("A must be an antisymmetric unit set with at least 3 elements".into()));
    }
    if bl == 0 || 2 * bl > n + 2 {
        return Err(ZnError::Precondition(format!("need 1 <= b and 2b <= n + 2, got b = {bl}")));
    }
    let t = 2 * bl as i64 - 3;
    if t >= n as i64 {
        return Err(ZnError::Precondition(format!("t = {t} is not below n = {n}")));
    }
    if t + 1 < 2 * al as i64 + 1 {
        return Err(ZnError::Precondition(format!("t + 1 = {} is below |A*| = {}", t + 1, 2 * al + 1)));
    }
    let t = t as u64;
    let (m, r) = (t / (2 * al), t % (2 * al));

    let mut star: Vec<u32> = a.elements().iter().flat_map(|&x| [x, md.neg(x)]).collect();
    star.push(0);
    star.sort_unstable();
    let a_star = ResidueSet::new(md, star)?;
    let star_set = a_star.to_zn_set();

    let mut layers = vec![star_set.clone()];
    for _ in 1..=m {
        let next = sumset(layers.last().unwrap(), &star_set)?;
        layers.push(next);
    }
    let growth_holds: Vec<bool> = layers
        .iter()
        .enumerate()
        .map(|(i, c)| c.len() as u64 >= n.min(2 * (i as u64 + 1) * al + 1))
        .collect();

    // C meets C_j in min(2ja + 1, t + 1) residues, lowest new residues first
    let mut c = ZnSet::empty(md);
    for (i, layer) in layers.iter().enumerate() {
        let target = (2 * (i as u64 + 1) * al + 1).min(t + 1) as usize;
        for x in layer.iter() {
            if c.len() >= target {
                break;
            }
            if !c.contains(x) {
                c = c.union(&ZnSet::singleton(md, x)?)?;
            }
        }
        if c.len() < target {
            return Err(ZnError::Precondition(format!("layer {} has too few residues", i + 1)));
        }
    }
    let e = c.difference(&ZnSet::singleton(md, 0)?)?;

    let mut lambda_sum = 0u64;
    for x in e.iter() {
        lambda_sum += lambda(b, x)? as u64;
    }
    let mut alpha = 0u64;
    for &x in a.elements() {
        alpha = alpha.max(lambda(b, x)? as u64);
    }
    let upper_integer = alpha * (m + 1) * (m * al + r);
    let ta = (t + al) as i128;
    let upper_rational = Ratio {
        num: alpha as i128 * ta * ta,
        den: 4 * al as i128,
    };
    let lower = bl as i128 * (t as i128 - bl as i128 + 1);
    let le_rational = |v: i128| v * upper_rational.den <= upper_rational.num;

    Ok(LemmaEhTrace {
        n: md.get(),
        a: a.clone(),
        b: b.to_residue_set(),
        a_star,
        t,
        m,
        r,
        c_layers: layers.iter().map(ZnSet::to_residue_set).collect(),
        growth_holds,
        c: c.to_residue_set(),
        e: e.to_residue_set(),
        lambda_sum,
        alpha,
        upper_integer,
        upper_rational,
        lower,
        lower_holds: lambda_sum as i128 >= lower,
        upper_integer_holds: lambda_sum <= upper_integer,
        upper_rational_holds: le_rational(lambda_sum as i128),
        integer_within_rational: le_rational(upper_integer as i128),
        chain_holds: le_rational(lower),
    })
}
