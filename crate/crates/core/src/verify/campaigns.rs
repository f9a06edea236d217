use std::ops::ControlFlow;

use rand::seq::index::sample;
use serde_json::Value;

use super::combinations::{binomial, check_range, eval_combination, walk, PrefixEval};
use super::kernel::{KFoldFull, Typed, UnitCompleteness};
use super::report::{claim, AuditReport, Partial, Relation, Witness};
use super::{base_params, run_sampled, Budget, CampaignConfig, Mode, Timer};
use crate::bounds;
use crate::error::{Result, ZnError};
use crate::sums::{k_fold_sums, subset_sums};
use crate::zn::{subgroup_generated, units, Modulus, ResidueSet};

fn pick(pool: &ResidueSet, combo: &[usize]) -> ResidueSet {
    ResidueSet::from_sorted_unchecked(pool.modulus(), combo.iter().map(|&i| pool.elements()[i]).collect())
}

/// Enumerates (or samples) `size`-subsets of `pool`, reporting each
/// combination the evaluator rejects through `witness`.
fn subset_campaign<E, W>(
    cfg: &CampaignConfig,
    pool: &ResidueSet,
    size: usize,
    eval: &E,
    witness: W,
) -> Result<Partial>
where
    E: PrefixEval,
    W: Fn(&ResidueSet) -> Witness + Sync,
{
    let n = pool.n();
    match cfg.mode {
        Mode::Exhaustive => {
            let total = binomial(pool.len() as u64, size as u64);
            let range = match &cfg.rank_range {
                Some(r) => r.clone(),
                None => 0..u64::try_from(total).map_err(|_| ZnError::BudgetExceeded {
                    count: total,
                    limit: cfg.budget.limit,
                })?,
            };
            check_range(total, &range)?;
            cfg.budget.check((range.end - range.start) as u128)?;
            let cap = cfg.max_witnesses;
            Ok(cfg.exec.fold_chunks(
                range.clone(),
                cfg.exec.chunk_for(range.end - range.start),
                || Partial::new(cap),
                |chunk| {
                    let mut p = Partial::new(cap);
                    p.tested = walk(eval, pool.len(), size, chunk, |c| {
                        p.violations.push(witness(&pick(pool, c)));
                        ControlFlow::Continue(())
                    });
                    p
                },
                Partial::merge,
            ))
        }
        Mode::Sampled { .. } => run_sampled(cfg, n, |rng, p| {
            let mut combo = sample(rng, pool.len(), size).into_vec();
            combo.sort_unstable();
            if !eval_combination(eval, &combo) {
                p.violations.push(witness(&pick(pool, &combo)));
            }
        }),
    }
}

fn theorem_witness(a: &ResidueSet) -> Witness {
    let s = subset_sums(a).s.len() as i128;
    let target = subgroup_generated(a).map(|g| g.len() as i128).unwrap_or(0);
    Witness::new(a.n(), claim::THEOREM, Relation::Eq, s, target).with_set("A", a.elements())
}

fn conjecture_witness(a: &ResidueSet, k: usize) -> Witness {
    let size = k_fold_sums(a, k).map(|s| s.len() as i128).unwrap_or(-1);
    Witness::new(a.n(), claim::CONJECTURE, Relation::Eq, size, a.n() as i128).with_set("A", a.elements())
}

/// Checks completeness of every unit subset of Z_n of the threshold size.
/// Larger unit sets follow because completeness of unit sets is preserved
/// under adding elements.
pub fn verify_theorem(n: u64, cfg: &CampaignConfig) -> Result<AuditReport> {
    let timer = Timer::start();
    let threshold = bounds::main_threshold(n)?;
    cfg.trials()?;
    let m = Modulus::new(n)?;
    let pool = units(m);
    let mut params = base_params(cfg);
    params.insert("threshold".into(), Value::from(threshold));
    params.insert("phi".into(), Value::from(pool.len()));
    if let Some(r) = &cfg.rank_range {
        params.insert("rank_range".into(), Value::from(format!("{}:{}", r.start, r.end)));
    }
    let size = threshold as usize;
    let vacuous = size > pool.len();
    params.insert("vacuous".into(), Value::from(vacuous));
    let partial = if vacuous {
        Partial::new(cfg.max_witnesses)
    } else {
        let inner = UnitCompleteness {
            n: m.usize(),
            pool: pool.elements().to_vec(),
        };
        if m.usize() <= 64 {
            subset_campaign(cfg, &pool, size, &Typed::<_, u64>::new(inner), theorem_witness)?
        } else {
            subset_campaign(cfg, &pool, size, &Typed::<_, Vec<u64>>::new(inner), theorem_witness)?
        }
    };
    Ok(AuditReport::from_partial("verify-theorem", m.get(), params, partial, cfg.mode.seed(), timer.ms()))
}

/// Checks `|k∧A| = n` for unit sets `A` of the conjectured size. A modulus
/// with too few units yields a report flagged `vacuous`.
pub fn check_conjecture(n: u64, cfg: &CampaignConfig) -> Result<AuditReport> {
    let timer = Timer::start();
    if n < 5 {
        return Err(ZnError::Precondition(format!("conjecture campaign requires n >= 5, got {n}")));
    }
    cfg.trials()?;
    let (k, size) = bounds::conjecture_params(n)?;
    let m = Modulus::new(n)?;
    let pool = units(m);
    let mut params = base_params(cfg);
    params.insert("k".into(), Value::from(k));
    params.insert("size".into(), Value::from(size));
    params.insert("phi".into(), Value::from(pool.len()));
    if let Some(r) = &cfg.rank_range {
        params.insert("rank_range".into(), Value::from(format!("{}:{}", r.start, r.end)));
    }
    let (k, size) = (k as usize, size as usize);
    let vacuous = size > pool.len();
    params.insert("vacuous".into(), Value::from(vacuous));
    let partial = if vacuous {
        Partial::new(cfg.max_witnesses)
    } else {
        let inner = KFoldFull {
            n: m.usize(),
            k,
            pool: pool.elements().to_vec(),
        };
        let witness = |a: &ResidueSet| conjecture_witness(a, k);
        if m.usize() <= 64 {
            subset_campaign(cfg, &pool, size, &Typed::<_, u64>::new(inner), witness)?
        } else {
            subset_campaign(cfg, &pool, size, &Typed::<_, Vec<u64>>::new(inner), witness)?
        }
    };
    Ok(AuditReport::from_partial("verify-conjecture", m.get(), params, partial, cfg.mode.seed(), timer.ms()))
}

/// The largest size of an incomplete unit subset of Z_n, with the first
/// such subset in colex order. Sizes are searched downwards from `φ(n)`.
pub fn max_incomplete_size(n: u64, budget: &Budget) -> Result<(usize, ResidueSet)> {
    let m = Modulus::new(n)?;
    let pool = units(m);
    let inner = || UnitCompleteness {
        n: m.usize(),
        pool: pool.elements().to_vec(),
    };
    for size in (1..=pool.len()).rev() {
        let count = binomial(pool.len() as u64, size as u64);
        budget.check(count)?;
        let mut found = None;
        let mut on_fail = |c: &[usize]| {
            found = Some(pick(&pool, c));
            ControlFlow::Break(())
        };
        let total = count as u64;
        if m.usize() <= 64 {
            walk(&Typed::<_, u64>::new(inner()), pool.len(), size, 0..total, &mut on_fail);
        } else {
            walk(&Typed::<_, Vec<u64>>::new(inner()), pool.len(), size, 0..total, &mut on_fail);
        }
        if let Some(a) = found {
            return Ok((size, a));
        }
    }
    Err(ZnError::Precondition(format!("no incomplete unit subset of Z_{n}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sums::is_complete;
    use crate::verify::combinations::enumerate_subsets;
    use crate::verify::Exec;

    #[test]
    fn theorem_small_cases() {
        let r = verify_theorem(5, &CampaignConfig::exhaustive()).unwrap();
        assert_eq!((r.instances_tested, r.violation_count()), (1, 0));
        let r = verify_theorem(7, &CampaignConfig::exhaustive()).unwrap();
        assert_eq!(r.params["threshold"], 5);
        assert_eq!((r.instances_tested, r.violation_count()), (6, 0));
        let r = verify_theorem(9, &CampaignConfig::exhaustive()).unwrap();
        assert_eq!(r.violation_count(), 0);
        let r = verify_theorem(8, &CampaignConfig::exhaustive()).unwrap();
        assert_eq!(r.params["vacuous"], true);
        assert!(verify_theorem(4, &CampaignConfig::exhaustive()).is_err());
        assert!(verify_theorem(11, &CampaignConfig::sampled(0, 1)).is_err());
    }

    #[test]
    fn rank_ranges_partition_the_space() {
        let whole = verify_theorem(13, &CampaignConfig::exhaustive()).unwrap();
        assert_eq!(whole.instances_tested, 495);
        let a = verify_theorem(13, &CampaignConfig::exhaustive().with_rank_range(0..200)).unwrap();
        let b = verify_theorem(13, &CampaignConfig::exhaustive().with_rank_range(200..495)).unwrap();
        assert_eq!(a.instances_tested + b.instances_tested, 495);
        assert!(verify_theorem(13, &CampaignConfig::exhaustive().with_rank_range(0..496)).is_err());
    }

    /// Below the threshold incomplete sets exist; the walker must report
    /// exactly the ones `is_complete` rejects, pruning or not.
    #[test]
    fn pruned_walk_matches_reference_below_threshold() {
        for n in [11u64, 13, 15, 20, 21] {
            let m = Modulus::new(n).unwrap();
            let pool = units(m);
            let inner = UnitCompleteness { n: n as usize, pool: pool.elements().to_vec() };
            let eval = Typed::<_, u64>::new(inner);
            for size in 1..=pool.len() {
                let cfg = CampaignConfig::exhaustive().with_exec(Exec::with_jobs(3));
                let got = subset_campaign(&cfg, &pool, size, &eval, theorem_witness).unwrap();
                let total = binomial(pool.len() as u64, size as u64) as u64;
                let expected: Vec<Witness> = enumerate_subsets(&pool, size, 0..total)
                    .unwrap()
                    .filter(|a| !is_complete(a).unwrap())
                    .map(|a| theorem_witness(&a))
                    .collect();
                assert_eq!(got.tested, total);
                assert_eq!(got.violations.total(), expected.len() as u64, "n={n} size={size}");
                let (items, _) = got.violations.into_parts();
                let mut expected = expected;
                expected.sort();
                expected.truncate(items.len());
                assert_eq!(items, expected);
            }
        }
    }

    #[test]
    fn conjecture_small_cases() {
        let r = check_conjecture(5, &CampaignConfig::exhaustive()).unwrap();
        assert_eq!((r.instances_tested, r.violation_count()), (1, 0));
        assert_eq!(r.params["k"], 2);
        let r = check_conjecture(7, &CampaignConfig::exhaustive()).unwrap();
        assert_eq!(r.instances_tested, 6);
        assert_eq!(r.params["k"], 3);
        let r = check_conjecture(6, &CampaignConfig::exhaustive()).unwrap();
        assert_eq!(r.params["vacuous"], true);
        assert_eq!(r.instances_tested, 0);
        assert!(check_conjecture(4, &CampaignConfig::exhaustive()).is_err());
    }

    #[test]
    fn max_incomplete_examples() {
        let b = Budget::default();
        let (s, w) = max_incomplete_size(5, &b).unwrap();
        assert_eq!((s, w.literal().as_str()), (2, "1,2"));
        let (s, w) = max_incomplete_size(4, &b).unwrap();
        assert_eq!((s, w.literal().as_str()), (2, "1,3"));
        let (s, w) = max_incomplete_size(3, &b).unwrap();
        assert_eq!((s, w.literal().as_str()), (1, "1"));
        assert!(!is_complete(&max_incomplete_size(31, &b).unwrap().1).unwrap());
        let tight = Budget { limit: 10, allow_override: false };
        assert!(matches!(max_incomplete_size(31, &tight), Err(ZnError::BudgetExceeded { .. })));
    }

    #[test]
    fn budget_refusal() {
        let cfg = CampaignConfig::exhaustive().with_budget(Budget { limit: 100, allow_override: false });
        assert!(matches!(verify_theorem(13, &cfg), Err(ZnError::BudgetExceeded { count: 495, limit: 100 })));
        let cfg = cfg.with_budget(Budget { limit: 100, allow_override: true });
        assert!(verify_theorem(13, &cfg).is_ok());
    }
}
