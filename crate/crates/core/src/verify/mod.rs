//! Verification campaigns: exhaustive and sampled checks of the
//! completeness theorem and the k-fold conjecture, auditors for the
//! supporting lemmas, and step-by-step proof replays.

mod audits;
mod campaigns;
pub mod combinations;
mod exec;
pub mod kernel;
mod partition;
mod replay;
pub mod report;

use std::collections::BTreeMap;
use std::ops::Range;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

pub use audits::{audit_chowla, audit_final_inequality, audit_lemma_eh, audit_mainlemma, audit_olson_identities};
pub use campaigns::{check_conjecture, max_incomplete_size, verify_theorem};
pub use combinations::{enumerate_subsets, SubsetStream};
pub use exec::Exec;
pub use partition::antisymmetric_partition;
pub use replay::{replay_lemma_eh, replay_main_proof, LemmaEhTrace, MainProofTrace, ProofTrace};
pub use report::{claim, AuditReport, Relation, Witness};

use crate::error::{Result, ZnError};
use report::Partial;

/// Default ceiling on the size of an exhaustive enumeration.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// Trials per sampling chunk. Fixed so that substreams do not depend on
/// the number of workers.
pub const SAMPLE_CHUNK: u64 = 256;

pub const DEFAULT_MAX_WITNESSES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled { .. } => "sampled",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Mode::Exhaustive => None,
            Mode::Sampled { seed, .. } => Some(*seed),
        }
    }
}

/// Guard on exhaustive enumeration size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub limit: u128,
    pub allow_override: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            limit: DEFAULT_BUDGET,
            allow_override: false,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            limit: DEFAULT_BUDGET,
            allow_override: true,
        }
    }

    pub fn check(&self, count: u128) -> Result<()> {
        if count > self.limit && !self.allow_override {
            return Err(ZnError::BudgetExceeded {
                count,
                limit: self.limit,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignConfig {
    pub mode: Mode,
    pub exec: Exec,
    pub budget: Budget,
    pub max_witnesses: usize,
    /// Restricts exhaustive subset campaigns to a colex rank window.
    pub rank_range: Option<Range<u64>>,
}

impl CampaignConfig {
    pub fn exhaustive() -> Self {
        CampaignConfig {
            mode: Mode::Exhaustive,
            exec: Exec::sequential(),
            budget: Budget::default(),
            max_witnesses: DEFAULT_MAX_WITNESSES,
            rank_range: None,
        }
    }

    pub fn sampled(trials: u64, seed: u64) -> Self {
        CampaignConfig {
            mode: Mode::Sampled { trials, seed },
            ..Self::exhaustive()
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_rank_range(mut self, range: Range<u64>) -> Self {
        self.rank_range = Some(range);
        self
    }

    pub(crate) fn trials(&self) -> Result<u64> {
        match self.mode {
            Mode::Sampled { trials: 0, .. } => Err(ZnError::Precondition("sampled mode needs trials >= 1".into())),
            Mode::Sampled { trials, .. } => Ok(trials),
            Mode::Exhaustive => Ok(0),
        }
    }
}

/// The random substream for the sampling chunk starting at trial `start`.
pub fn chunk_rng(seed: u64, n: u32, start: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(start);
    rng
}

/// Runs a sampled campaign: `trial(rng, partial)` is called once per trial.
pub(crate) fn run_sampled<F>(cfg: &CampaignConfig, n: u32, trial: F) -> Result<Partial>
where
    F: Fn(&mut ChaCha8Rng, &mut Partial) + Sync,
{
    let trials = cfg.trials()?;
    let seed = cfg.mode.seed().unwrap_or(0);
    let cap = cfg.max_witnesses;
    Ok(cfg.exec.fold_chunks(
        0..trials,
        SAMPLE_CHUNK,
        || Partial::new(cap),
        |range| {
            let mut rng = chunk_rng(seed, n, range.start);
            let mut p = Partial::new(cap);
            for _ in range {
                trial(&mut rng, &mut p);
                p.tested += 1;
            }
            p
        },
        Partial::merge,
    ))
}

/// Runs an exhaustive campaign over the index space `0..total`, after the
/// budget check.
pub(crate) fn run_indexed<F>(cfg: &CampaignConfig, total: u128, chunk_fn: F) -> Result<Partial>
where
    F: Fn(Range<u64>, &mut Partial) + Sync,
{
    cfg.budget.check(total)?;
    let total = u64::try_from(total).map_err(|_| ZnError::BudgetExceeded {
        count: total,
        limit: u64::MAX as u128,
    })?;
    let cap = cfg.max_witnesses;
    Ok(cfg.exec.fold_chunks(
        0..total,
        cfg.exec.chunk_for(total),
        || Partial::new(cap),
        |range| {
            let mut p = Partial::new(cap);
            chunk_fn(range, &mut p);
            p
        },
        Partial::merge,
    ))
}

pub(crate) struct Timer(Instant);

impl Timer {
    pub fn start() -> Self {
        Timer(Instant::now())
    }
    pub fn ms(&self) -> u64 {
        self.0.elapsed().as_millis() as u64
    }
}

pub(crate) fn base_params(cfg: &CampaignConfig) -> BTreeMap<String, Value> {
    let mut p = BTreeMap::new();
    p.insert("mode".into(), Value::from(cfg.mode.name()));
    if let Mode::Sampled { trials, .. } = cfg.mode {
        p.insert("trials".into(), Value::from(trials));
    }
    p
}
