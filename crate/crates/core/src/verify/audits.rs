//! Auditors for the lemmas and displayed inequalities behind the theorem.
//!
//! Each auditor has an exhaustive generator (an integer index space
//! decoded into instances) and a sampled generator. Hypotheses of the
//! audited claim are enforced by the generators, so every failure is a
//! genuine counterexample to the claim as stated.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use super::kernel::{row_of, Row};
use super::report::{claim, AuditReport, Partial, Relation, Witness};
use super::{base_params, run_indexed, run_sampled, CampaignConfig, Mode, Timer};
use crate::bounds;
use crate::error::{Result, ZnError};
use crate::sums::{is_complete, lambda_profile, subset_sums, sumset};
use crate::zn::{units, Modulus, ResidueSet, ZnSet};

fn pow2(e: u32) -> u128 {
    if e >= 127 {
        u128::MAX
    } else {
        1u128 << e
    }
}

fn pow3(e: u32) -> u128 {
    3u128.checked_pow(e).unwrap_or(u128::MAX)
}

/// Residues `offset + j` for each set bit `j` of `mask`.
fn mask_residues(mask: u64, offset: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() + offset);
        m &= m - 1;
    }
    out
}

fn pick_from(universe: &[u32], mask: u64) -> Vec<u32> {
    mask_residues(mask, 0).into_iter().map(|j| universe[j as usize]).collect()
}

fn random_subset(rng: &mut ChaCha8Rng, universe: &[u32], size: usize) -> Vec<u32> {
    let mut out: Vec<u32> = sample(rng, universe.len(), size).into_iter().map(|i| universe[i]).collect();
    out.sort_unstable();
    out
}

fn rs(m: Modulus, elements: Vec<u32>) -> ResidueSet {
    ResidueSet::from_sorted_unchecked(m, elements)
}

/// Pairs `{x, -x}` of units with `x < -x`; empty for `n = 2`.
fn unit_pairs(m: Modulus) -> Vec<(u32, u32)> {
    units(m)
        .elements()
        .iter()
        .filter(|&&x| x < m.neg(x))
        .map(|&x| (x, m.neg(x)))
        .collect()
}

/// Decodes a base-3 digit string over the pairs: 0 skips the pair, 1 takes
/// the smaller residue, 2 the larger.
fn antisymmetric_from_index(pairs: &[(u32, u32)], mut index: u128) -> Vec<u32> {
    let mut out = Vec::new();
    for &(lo, hi) in pairs {
        match index % 3 {
            1 => out.push(lo),
            2 => out.push(hi),
            _ => {}
        }
        index /= 3;
    }
    out.sort_unstable();
    out
}

fn random_antisymmetric(rng: &mut ChaCha8Rng, pairs: &[(u32, u32)], size: usize) -> Vec<u32> {
    let mut out: Vec<u32> = sample(rng, pairs.len(), size)
        .into_iter()
        .map(|i| if rng.random::<bool>() { pairs[i].0 } else { pairs[i].1 })
        .collect();
    out.sort_unstable();
    out
}

/// Number of antisymmetric unit sets with at least `min` elements.
fn antisymmetric_count(p: u32, min: u32) -> u128 {
    let below: u128 = (0..min.min(p + 1))
        .map(|s| super::combinations::binomial(p as u64, s as u64) << s)
        .sum();
    pow3(p) - below
}

fn report(check: &str, m: Modulus, cfg: &CampaignConfig, params: Vec<(&str, Value)>, partial: Partial, timer: Timer) -> AuditReport {
    let mut all = base_params(cfg);
    for (k, v) in params {
        all.insert(k.to_string(), v);
    }
    AuditReport::from_partial(check, m.get(), all, partial, cfg.mode.seed(), timer.ms())
}

// ---------------------------------------------------------------------------
// Chowla

fn chowla_instance(x: &ZnSet, y: &ZnSet, p: &mut Partial) {
    let n = x.n() as u64;
    let sum = sumset(x, y).expect("same modulus").len() as i128;
    let bound = bounds::chowla_bound(n, x.len() as u64, y.len() as u64).expect("nonempty sets") as i128;
    if sum < bound {
        p.violations.push(
            Witness::new(x.n(), claim::CHOWLA, Relation::Ge, sum, bound)
                .with_set("X", &x.to_vec())
                .with_set("Y", &y.to_vec()),
        );
    }
}

/// `|X + Y| >= min(n, |X| + |Y| - 1)` for nonempty `X` and `Y ∋ 0` whose
/// other elements are units.
pub fn audit_chowla(n: u64, cfg: &CampaignConfig) -> Result<AuditReport> {
    let timer = Timer::start();
    let m = Modulus::new(n)?;
    let u = units(m);
    let phi = u.len() as u32;
    let partial = match cfg.mode {
        Mode::Exhaustive => {
            if n > 64 {
                return Err(ZnError::BudgetExceeded { count: u128::MAX, limit: cfg.budget.limit });
            }
            let ys = pow2(phi);
            let total = (pow2(n as u32) - 1).saturating_mul(ys);
            run_indexed(cfg, total, |range, p| {
                for idx in range {
                    let (xi, yi) = ((idx as u128 / ys) as u64 + 1, (idx as u128 % ys) as u64);
                    let x = ZnSet::from_residues(m, mask_residues(xi, 0)).unwrap();
                    let mut y_el = pick_from(u.elements(), yi);
                    y_el.push(0);
                    let y = ZnSet::from_residues(m, y_el).unwrap();
                    chowla_instance(&x, &y, p);
                    p.tested += 1;
                }
            })?
        }
        Mode::Sampled { .. } => {
            let all: Vec<u32> = (0..m.get()).collect();
            run_sampled(cfg, m.get(), |rng, p| {
                let xs = rng.random_range(1..=m.usize());
                let x = ZnSet::from_residues(m, random_subset(rng, &all, xs)).unwrap();
                let ysz = rng.random_range(0..=u.len());
                let mut y_el = random_subset(rng, u.elements(), ysz);
                y_el.push(0);
                let y = ZnSet::from_residues(m, y_el).unwrap();
                chowla_instance(&x, &y, p);
            })?
        }
    };
    Ok(report("audit-chowla", m, cfg, vec![("phi", Value::from(phi))], partial, timer))
}

// ---------------------------------------------------------------------------
// Olson identities

/// The closure identities for removing `y ∈ Y` and adjoining `z ∉ Y`.
fn olson_y_instance(m: Modulus, y_el: &[u32], zs: &[u32], p: &mut Partial) {
    let ys = rs(m, y_el.to_vec());
    let b = subset_sums(&ys).s0;
    let lam = lambda_profile(&b);
    let b_len = b.len() as i128;
    for &y in y_el {
        let rhs = subset_sums(&ys.without(y)).s0.len() as i128 + lam[y as usize] as i128;
        p.bump("eq1_checks", 1);
        if b_len < rhs {
            p.violations.push(
                Witness::new(m.get(), claim::EQ1, Relation::Ge, b_len, rhs)
                    .with_set("Y", y_el)
                    .with_residue("y", y),
            );
        }
    }
    for &z in zs {
        let lhs = subset_sums(&ys.with(z).unwrap()).s0.len() as i128;
        let rhs = b_len + lam[z as usize] as i128;
        p.bump("eq2_checks", 1);
        if lhs != rhs {
            p.violations.push(
                Witness::new(m.get(), claim::EQ2, Relation::Eq, lhs, rhs)
                    .with_set("Y", y_el)
                    .with_residue("z", z),
            );
        }
    }
}

/// Symmetry and subadditivity of `λ_B` over all residues. Returns the profile.
fn olson_b_instance(b: &ZnSet, p: &mut Partial) -> Vec<usize> {
    let m = b.modulus();
    let n = m.get();
    let lam = lambda_profile(b);
    let b_el = b.to_vec();
    for x in 0..n {
        let (l, r) = (lam[x as usize] as i128, lam[m.neg(x) as usize] as i128);
        if l != r {
            p.violations.push(
                Witness::new(n, claim::EQ3, Relation::Eq, l, r)
                    .with_set("B", &b_el)
                    .with_residue("x", x),
            );
        }
    }
    p.bump("eq3_checks", n as u64);
    for x in 0..n {
        for y in 0..n {
            let l = lam[m.add(x, y) as usize] as i128;
            let r = (lam[x as usize] + lam[y as usize]) as i128;
            if l > r {
                p.violations.push(
                    Witness::new(n, claim::EQ4, Relation::Le, l, r)
                        .with_set("B", &b_el)
                        .with_residue("x", x)
                        .with_residue("y", y),
                );
            }
        }
    }
    p.bump("eq4_checks", n as u64 * n as u64);
    lam
}

fn olson_c_check(n: u32, b_el: &[u32], c_el: &[u32], sum: i128, p: &mut Partial) {
    let bl = b_el.len() as i128;
    let rhs = bl * (c_el.len() as i128 - bl + 1);
    p.bump("eq5_checks", 1);
    if sum < rhs {
        p.violations.push(
            Witness::new(n, claim::EQ5, Relation::Ge, sum, rhs)
                .with_set("B", b_el)
                .with_set("C", c_el),
        );
    }
}

/// Olson's closure identities and the symmetry, subadditivity and sum
/// bound for `λ_B`.
///
/// Exhaustive mode enumerates every nonempty `Y ⊆ Z_n \ {0}` (all `y`, all
/// `z ∉ Y`) followed by every nonempty `B ⊆ Z_n` (all `x, y`, and every
/// nonempty `C ⊆ Z_n \ {0}`). Each sampled trial draws one `Y` and one `B`.
pub fn audit_olson_identities(n: u64, cfg: &CampaignConfig) -> Result<AuditReport> {
    let timer = Timer::start();
    let m = Modulus::new(n)?;
    let nn = m.get();
    let partial = match cfg.mode {
        Mode::Exhaustive => {
            if n > 40 {
                return Err(ZnError::BudgetExceeded { count: u128::MAX, limit: cfg.budget.limit });
            }
            let ny = pow2(nn - 1) - 1;
            let nb = pow2(nn) - 1;
            cfg.budget.check(ny + nb.saturating_mul(pow2(nn - 1)))?;
            run_indexed(cfg, ny + nb, |range, p| {
                for idx in range {
                    if (idx as u128) < ny {
                        let y_el = mask_residues(idx + 1, 1);
                        let zs: Vec<u32> = (0..nn).filter(|z| !y_el.contains(z)).collect();
                        olson_y_instance(m, &y_el, &zs, p);
                    } else {
                        let b_mask = idx - ny as u64 + 1;
                        let b_el = mask_residues(b_mask, 0);
                        let b = ZnSet::from_residues(m, b_el.iter().copied()).unwrap();
                        let lam = olson_b_instance(&b, p);
                        // sums over C ⊆ {1..n-1} by lowest-bit recurrence
                        let cs = 1usize << (nn - 1);
                        let mut sums = vec![0i128; cs];
                        for c in 1..cs {
                            let low = c.trailing_zeros() as usize;
                            sums[c] = sums[c & (c - 1)] + lam[low + 1] as i128;
                            olson_c_check(nn, &b_el, &mask_residues(c as u64, 1), sums[c], p);
                        }
                    }
                    p.tested += 1;
                }
            })?
        }
        Mode::Sampled { .. } => {
            let nonzero: Vec<u32> = (1..nn).collect();
            let all: Vec<u32> = (0..nn).collect();
            let y_cap = (nn as usize - 1).min(3 * (nn as u64).isqrt() as usize + 3);
            run_sampled(cfg, nn, |rng, p| {
                let ysz = rng.random_range(1..=y_cap);
                let y_el = random_subset(rng, &nonzero, ysz);
                let outside: Vec<u32> = all.iter().copied().filter(|z| y_el.binary_search(z).is_err()).collect();
                let zs = random_subset(rng, &outside, outside.len().min(8));
                olson_y_instance(m, &y_el, &zs, p);

                let bsz = rng.random_range(1..=nn as usize);
                let b_el = random_subset(rng, &all, bsz);
                let b = ZnSet::from_residues(m, b_el.iter().copied()).unwrap();
                let lam = olson_b_instance(&b, p);
                for _ in 0..4 {
                    let csz = rng.random_range(1..=nonzero.len());
                    let c_el = random_subset(rng, &nonzero, csz);
                    let sum: i128 = c_el.iter().map(|&x| lam[x as usize] as i128).sum();
                    olson_c_check(nn, &b_el, &c_el, sum, p);
                }
            })?
        }
    };
    Ok(report("audit-olson", m, cfg, vec![], partial, timer))
}

// ---------------------------------------------------------------------------
// Lemma on max λ over an antisymmetric unit set

fn lemma_eh_instance<R: Row>(n: u32, a_el: &[u32], b_row: &R, b_el: &[u32], p: &mut Partial) {
    let (a, b) = (a_el.len() as u64, b_el.len() as u64);
    let alpha = a_el.iter().map(|&x| b_row.lambda(n as usize, x as usize)).max().unwrap_or(0) as u64;
    let (lhs, rhs) = bounds::lamb_bound_sides(a, b, alpha).expect("a >= 3, b >= 1");
    if lhs <= rhs {
        p.findings.push(
            Witness::new(n, claim::EQ6, Relation::Gt, lhs, rhs)
                .with_set("A", a_el)
                .with_set("B", b_el),
        );
        if b >= a + 2 {
            p.bump("eq6_failures_b_at_least_a_plus_2", 1);
        }
    }
    if bounds::plus_bound_applies(a, b) {
        p.bump("eq7_checks", 1);
        if !bounds::plus_bound_holds(a, b, alpha).expect("a >= 3, b >= 1") {
            p.findings.push(
                Witness::new(n, claim::EQ7, Relation::Ge, alpha as i128, a as i128 - 1)
                    .with_set("A", a_el)
                    .with_set("B", b_el),
            );
            if b >= a + 2 {
                p.bump("eq7_failures_b_at_least_a_plus_2", 1);
            } else {
                p.bump("eq7_failures_b_below_a_plus_2", 1);
            }
        }
    }
}

fn lemma_eh_sampled<R: Row>(cfg: &CampaignConfig, m: Modulus, pairs: &[(u32, u32)], b_max: usize) -> Result<Partial> {
    let all: Vec<u32> = (0..m.get()).collect();
    run_sampled(cfg, m.get(), |rng, p| {
        let asz = rng.random_range(3..=pairs.len());
        let a_el = random_antisymmetric(rng, pairs, asz);
        let bsz = rng.random_range(1..=b_max);
        let b_el = random_subset(rng, &all, bsz);
        let b_row: R = row_of(m.usize(), b_el.iter().copied());
        lemma_eh_instance(m.get(), &a_el, &b_row, &b_el, p);
    })
}

/// Evaluates `α = max_{x∈A} λ_B(x)` against the strict bound
/// `α > a - a(a-3)/b` and, when `2b >= a(a-3)`, against `α >= a - 1`, over
/// antisymmetric unit sets `A` with `a >= 3` and nonempty `B` with
/// `2b <= n + 2`.
///
/// Both bounds fail on concrete instances, so failures are recorded as
/// findings rather than violations. Counters split the failures by whether
/// `b >= a + 2`.
pub fn audit_lemma_eh(n: u64, cfg: &CampaignConfig) -> Result<AuditReport> {
    let timer = Timer::start();
    let m = Modulus::new(n)?;
    let pairs = unit_pairs(m);
    let b_max = (m.usize() + 2) / 2;
    let mut params = vec![("b_max", Value::from(b_max))];
    let vacuous = pairs.len() < 3;
    params.push(("vacuous", Value::from(vacuous)));
    let partial = if vacuous {
        cfg.trials()?;
        Partial::new(cfg.max_witnesses)
    } else {
        match cfg.mode {
            Mode::Exhaustive => {
                if n > 63 {
                    return Err(ZnError::BudgetExceeded { count: u128::MAX, limit: cfg.budget.limit });
                }
                let a_sets: Vec<Vec<u32>> = (0..pow3(pairs.len() as u32))
                    .map(|i| antisymmetric_from_index(&pairs, i))
                    .filter(|a| a.len() >= 3)
                    .collect();
                let per_a = (pow2(m.get()) - 1) as u64;
                let total = (a_sets.len() as u128).saturating_mul(per_a as u128);
                run_indexed(cfg, total, |range, p| {
                    for idx in range {
                        let b_mask = idx % per_a + 1;
                        if b_mask.count_ones() as usize > b_max {
                            continue;
                        }
                        let a_el = &a_sets[(idx / per_a) as usize];
                        lemma_eh_instance(m.get(), a_el, &b_mask, &mask_residues(b_mask, 0), p);
                        p.tested += 1;
                    }
                })?
            }
            Mode::Sampled { .. } if m.usize() <= 64 => lemma_eh_sampled::<u64>(cfg, m, &pairs, b_max)?,
            Mode::Sampled { .. } => lemma_eh_sampled::<Vec<u64>>(cfg, m, &pairs, b_max)?,
        }
    };
    Ok(report("audit-lemma-eh", m, cfg, params, partial, timer))
}

// ---------------------------------------------------------------------------
// Subset-sum lower bound for antisymmetric unit sets

fn mainlemma_instance(m: Modulus, a_el: Vec<u32>, p: &mut Partial) {
    let a = rs(m, a_el);
    let s0 = subset_sums(&a).s0.len() as u64;
    let rhs = bounds::mainlemma_rhs_doubled(m.get() as u64, a.len() as u64).expect("|A| >= 2");
    if 2 * s0 < rhs {
        p.violations.push(
            Witness::new(m.get(), claim::MAINLEMMA, Relation::Ge, 2 * s0 as i128, rhs as i128)
                .with_set("A", a.elements()),
        );
    }
}

/// `2|S_A^0| >= min(n + 2, 6 + a(a-1))` for antisymmetric unit sets with
/// `a >= 2`.
pub fn audit_mainlemma(n: u64, cfg: &CampaignConfig) -> Result<AuditReport> {
    let timer = Timer::start();
    let m = Modulus::new(n)?;
    let pairs = unit_pairs(m);
    let vacuous = pairs.len() < 2;
    let partial = if vacuous {
        cfg.trials()?;
        Partial::new(cfg.max_witnesses)
    } else {
        match cfg.mode {
            Mode::Exhaustive => {
                let total = pow3(pairs.len() as u32);
                let partial = run_indexed(cfg, total, |range, p| {
                    for idx in range {
                        let a_el = antisymmetric_from_index(&pairs, idx as u128);
                        if a_el.len() >= 2 {
                            mainlemma_instance(m, a_el, p);
                            p.tested += 1;
                        }
                    }
                })?;
                debug_assert_eq!(partial.tested as u128, antisymmetric_count(pairs.len() as u32, 2));
                partial
            }
            Mode::Sampled { .. } => run_sampled(cfg, m.get(), |rng, p| {
                let asz = rng.random_range(2..=pairs.len());
                mainlemma_instance(m, random_antisymmetric(rng, &pairs, asz), p);
            })?,
        }
    };
    Ok(report("audit-mainlemma", m, cfg, vec![("vacuous", Value::from(vacuous))], partial, timer))
}

// ---------------------------------------------------------------------------
// Disjoint-closure inequality for incomplete sets

fn final_ineq_pairs(m: Modulus, a_el: &[u32], exhaustive_pairs: bool, rng: Option<&mut ChaCha8Rng>, p: &mut Partial) {
    let a = a_el.len();
    let n = m.get();
    let check = |x_mask: usize, y_mask: usize, sizes: &dyn Fn(usize) -> i128, p: &mut Partial| {
        let lhs = sizes(x_mask) + sizes(y_mask);
        p.bump("pairs_checked", 1);
        if lhs > n as i128 + 1 {
            let pick = |mask: usize| -> Vec<u32> { (0..a).filter(|i| mask >> i & 1 == 1).map(|i| a_el[i]).collect() };
            p.violations.push(
                Witness::new(n, claim::EQ8, Relation::Le, lhs, n as i128 + 1)
                    .with_set("A", a_el)
                    .with_set("X", &pick(x_mask))
                    .with_set("Y", &pick(y_mask)),
            );
        }
    };
    let s0_of = |mask: usize| -> i128 {
        let el: Vec<u32> = (0..a).filter(|i| mask >> i & 1 == 1).map(|i| a_el[i]).collect();
        subset_sums(&rs(m, el)).s0.len() as i128
    };
    if exhaustive_pairs {
        let sizes: Vec<i128> = (0..1usize << a).map(s0_of).collect();
        let lookup = |mask: usize| sizes[mask];
        // each element goes to X, Y, or neither
        for code in 0..3usize.pow(a as u32) {
            let (mut x, mut y, mut c) = (0usize, 0usize, code);
            for i in 0..a {
                match c % 3 {
                    1 => x |= 1 << i,
                    2 => y |= 1 << i,
                    _ => {}
                }
                c /= 3;
            }
            if x != 0 && y != 0 {
                check(x, y, &lookup, p);
            }
        }
    } else if let Some(rng) = rng {
        for _ in 0..64 {
            let (mut x, mut y) = (0usize, 0usize);
            for i in 0..a {
                match rng.random_range(0..3) {
                    1 => x |= 1 << i,
                    2 => y |= 1 << i,
                    _ => {}
                }
            }
            if x != 0 && y != 0 {
                check(x, y, &s0_of, p);
            }
        }
    }
}

/// For incomplete unit sets `A` and disjoint nonempty `X, Y ⊆ A`:
/// `|S_X^0| + |S_Y^0| <= n + 1`.
///
/// Exhaustive mode visits every nonempty unit set; `instances_tested`
/// counts those sets, and `pairs_checked` the `(X, Y)` pairs.
pub fn audit_final_inequality(n: u64, cfg: &CampaignConfig) -> Result<AuditReport> {
    let timer = Timer::start();
    let m = Modulus::new(n)?;
    let u = units(m);
    let partial = match cfg.mode {
        Mode::Exhaustive => {
            if u.len() > 40 {
                return Err(ZnError::BudgetExceeded { count: pow2(u.len() as u32), limit: cfg.budget.limit });
            }
            run_indexed(cfg, pow2(u.len() as u32) - 1, |range, p| {
                for idx in range {
                    let a_el = pick_from(u.elements(), idx + 1);
                    if !is_complete(&rs(m, a_el.clone())).unwrap() {
                        p.bump("incomplete_sets", 1);
                        final_ineq_pairs(m, &a_el, true, None, p);
                    }
                    p.tested += 1;
                }
            })?
        }
        Mode::Sampled { .. } => run_sampled(cfg, m.get(), |rng, p| {
            let asz = rng.random_range(1..=u.len());
            let a_el = random_subset(rng, u.elements(), asz);
            if !is_complete(&rs(m, a_el.clone())).unwrap() {
                p.bump("incomplete_sets", 1);
                let small = a_el.len() <= 10;
                final_ineq_pairs(m, &a_el, small, Some(rng), p);
            }
        })?,
    };
    Ok(report("audit-final-ineq", m, cfg, vec![("phi", Value::from(u.len()))], partial, timer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Exec;

    fn ex() -> CampaignConfig {
        CampaignConfig::exhaustive()
    }

    #[test]
    fn chowla_exhaustive_counts() {
        for n in 2..=9u64 {
            let r = audit_chowla(n, &ex()).unwrap();
            let phi = units(Modulus::new(n).unwrap()).len() as u32;
            assert_eq!(r.instances_tested as u128, (pow2(n as u32) - 1) * pow2(phi));
            assert_eq!(r.violation_count(), 0, "n={n}");
        }
    }

    #[test]
    fn olson_exhaustive_small() {
        for n in 2..=6u64 {
            let r = audit_olson_identities(n, &ex()).unwrap();
            assert_eq!(r.instances_tested as u128, pow2(n as u32 - 1) - 1 + pow2(n as u32) - 1);
            assert_eq!(r.violation_count(), 0, "n={n}");
        }
    }

    #[test]
    fn lemma_eh_known_finding() {
        let r = audit_lemma_eh(11, &ex()).unwrap();
        let hit = r.findings.iter().any(|w| {
            w.claim == claim::EQ6 && w.sets["A"] == [1, 2, 3] && w.sets["B"] == [0, 1, 2, 3, 4] && w.lhs == 15 && w.rhs == 15
        });
        assert!(hit);
        assert_eq!(r.violation_count(), 0);
        for w in r.findings.iter().take(50) {
            assert!(w.revalidate().unwrap(), "{w:?}");
        }
        // the degenerate B = {0} instance
        assert!(r.findings.iter().any(|w| w.claim == claim::EQ6 && w.sets["B"] == [0] && w.lhs == 1 && w.rhs == 3));
    }

    #[test]
    fn lemma_eh_instance_count() {
        let n = 11u64;
        let r = audit_lemma_eh(n, &ex()).unwrap();
        let per_b: u128 = (1..=6u64).map(|b| crate::verify::combinations::binomial(11, b)).sum();
        assert_eq!(r.instances_tested as u128, antisymmetric_count(5, 3) * per_b);
    }

    #[test]
    fn mainlemma_small() {
        for n in 3..=13u64 {
            let r = audit_mainlemma(n, &ex()).unwrap();
            let p = unit_pairs(Modulus::new(n).unwrap()).len() as u32;
            if p >= 2 {
                assert_eq!(r.instances_tested as u128, antisymmetric_count(p, 2));
            }
            assert_eq!(r.violation_count(), 0, "n={n}");
        }
    }

    #[test]
    fn final_ineq_small() {
        for n in 2..=9u64 {
            let r = audit_final_inequality(n, &ex()).unwrap();
            assert_eq!(r.violation_count(), 0);
        }
        let r = audit_final_inequality(5, &ex()).unwrap();
        assert_eq!(r.instances_tested, 15);
    }

    #[test]
    fn sampled_runs_are_reproducible_across_jobs() {
        let base = CampaignConfig::sampled(700, 42);
        let a = audit_olson_identities(37, &base).unwrap().without_timing();
        let b = audit_olson_identities(37, &base.clone().with_exec(Exec::with_jobs(3))).unwrap().without_timing();
        assert_eq!(a, b);
        assert_eq!(a.instances_tested, 700);
        let c = audit_lemma_eh(23, &base).unwrap().without_timing();
        let d = audit_lemma_eh(23, &base.clone().with_exec(Exec::with_jobs(4))).unwrap().without_timing();
        assert_eq!(c, d);
    }

    #[test]
    fn sampled_large_moduli() {
        let cfg = CampaignConfig::sampled(40, 7);
        assert_eq!(audit_chowla(300, &cfg).unwrap().violation_count(), 0);
        assert_eq!(audit_olson_identities(100, &cfg).unwrap().violation_count(), 0);
        assert_eq!(audit_mainlemma(101, &cfg).unwrap().violation_count(), 0);
        assert_eq!(audit_final_inequality(60, &cfg).unwrap().violation_count(), 0);
        let r = audit_lemma_eh(97, &cfg).unwrap();
        assert_eq!(r.instances_tested, 40);
    }
}
