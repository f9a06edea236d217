//! Audit reports, witnesses, and witness re-validation.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::bounds;
use crate::error::{Result, ZnError};
use crate::sums::{k_fold_sums, lambda, subset_sums, sumset};
use crate::zn::{subgroup_generated, Modulus, ResidueSet, ZnSet};

/// How a claim's two sides are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Eq,
    Ge,
    Le,
    Gt,
}

impl Relation {
    pub fn holds(self, lhs: i128, rhs: i128) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Le => lhs <= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "==",
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Gt => ">",
        }
    }
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

/// Identifiers of every claim a witness can refer to.
pub mod claim {
    pub const THEOREM: &str = "thm1";
    pub const CONJECTURE: &str = "conj2";
    pub const CHOWLA: &str = "chowla";
    pub const EQ1: &str = "eq1";
    pub const EQ2: &str = "eq2";
    pub const EQ3: &str = "eq3";
    pub const EQ4: &str = "eq4";
    pub const EQ5: &str = "eq5";
    pub const EQ6: &str = "eq6";
    pub const EQ7: &str = "eq7";
    pub const MAINLEMMA: &str = "lemma8";
    pub const EQ8: &str = "eq8";
}

/// A concrete instance together with the evaluated sides of a claim.
///
/// Scalars such as `x` or `y` are stored as one-element sets so that every
/// field is a set literal over `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub n: u32,
    pub claim: String,
    pub sets: BTreeMap<String, Vec<u32>>,
    pub lhs: i128,
    pub rhs: i128,
    pub relation: Relation,
}

impl Witness {
    pub fn new(n: u32, claim: &str, relation: Relation, lhs: i128, rhs: i128) -> Self {
        Witness {
            n,
            claim: claim.to_string(),
            sets: BTreeMap::new(),
            lhs,
            rhs,
            relation,
        }
    }

    pub fn with_set(mut self, name: &str, elements: &[u32]) -> Self {
        let mut v = elements.to_vec();
        v.sort_unstable();
        self.sets.insert(name.to_string(), v);
        self
    }

    pub fn with_residue(self, name: &str, x: u32) -> Self {
        self.with_set(name, &[x])
    }

    pub fn set_literal(&self, name: &str) -> Option<String> {
        self.sets.get(name).map(|v| {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        })
    }

    pub fn holds(&self) -> bool {
        self.relation.holds(self.lhs, self.rhs)
    }

    /// Recomputes both sides from the stored sets and checks that they match
    /// the stored values and that the claim fails on them.
    pub fn revalidate(&self) -> Result<bool> {
        let (lhs, rhs, relation) = recompute(self)?;
        Ok(lhs == self.lhs && rhs == self.rhs && relation == self.relation && !relation.holds(lhs, rhs))
    }
}

impl Ord for Witness {
    /// Canonical order: claim, modulus, then named sets by (size, elements).
    fn cmp(&self, other: &Self) -> Ordering {
        self.claim
            .cmp(&other.claim)
            .then(self.n.cmp(&other.n))
            .then_with(|| {
                let key = |w: &Witness| {
                    w.sets
                        .iter()
                        .map(|(k, v)| (k.clone(), v.len(), v.clone()))
                        .collect::<Vec<_>>()
                };
                key(self).cmp(&key(other))
            })
            .then(self.lhs.cmp(&other.lhs))
            .then(self.rhs.cmp(&other.rhs))
            .then(self.relation.cmp(&other.relation))
    }
}

impl PartialOrd for Witness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let sets: BTreeMap<&str, String> = self
            .sets
            .keys()
            .map(|k| (k.as_str(), self.set_literal(k).unwrap()))
            .collect();
        let mut map = s.serialize_map(Some(6))?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("claim", &self.claim)?;
        map.serialize_entry("sets", &sets)?;
        map.serialize_entry("lhs", &(self.lhs as i64))?;
        map.serialize_entry("rhs", &(self.rhs as i64))?;
        map.serialize_entry("relation", &self.relation)?;
        map.end()
    }
}

fn get_set(w: &Witness, m: Modulus, name: &str) -> Result<ResidueSet> {
    let v = w
        .sets
        .get(name)
        .ok_or_else(|| ZnError::Precondition(format!("witness for {} lacks set {name}", w.claim)))?;
    ResidueSet::new(m, v.clone())
}

fn get_residue(w: &Witness, m: Modulus, name: &str) -> Result<u32> {
    let s = get_set(w, m, name)?;
    match s.elements() {
        [x] => Ok(*x),
        _ => Err(ZnError::Precondition(format!("witness field {name} is not a single residue"))),
    }
}

fn s0_size(a: &ResidueSet) -> i128 {
    subset_sums(a).s0.len() as i128
}

fn max_lambda(b: &ZnSet, a: &ResidueSet) -> Result<u64> {
    let mut best = 0;
    for &x in a.elements() {
        best = best.max(lambda(b, x)? as u64);
    }
    Ok(best)
}

/// Evaluates a witness's claim from its stored sets via the `sums` module.
pub fn recompute(w: &Witness) -> Result<(i128, i128, Relation)> {
    let m = Modulus::new(w.n as u64)?;
    let n = w.n as i128;
    Ok(match w.claim.as_str() {
        claim::THEOREM => {
            let a = get_set(w, m, "A")?;
            let s = subset_sums(&a).s.len() as i128;
            (s, subgroup_generated(&a)?.len() as i128, Relation::Eq)
        }
        claim::CONJECTURE => {
            let a = get_set(w, m, "A")?;
            let (k, _) = bounds::conjecture_params(w.n as u64)?;
            (k_fold_sums(&a, k as usize)?.len() as i128, n, Relation::Eq)
        }
        claim::CHOWLA => {
            let x = get_set(w, m, "X")?.to_zn_set();
            let y = get_set(w, m, "Y")?.to_zn_set();
            let bound = bounds::chowla_bound(w.n as u64, x.len() as u64, y.len() as u64)?;
            (sumset(&x, &y)?.len() as i128, bound as i128, Relation::Ge)
        }
        claim::EQ1 => {
            let ys = get_set(w, m, "Y")?;
            let y = get_residue(w, m, "y")?;
            let b = subset_sums(&ys).s0;
            let rhs = s0_size(&ys.without(y)) + lambda(&b, y)? as i128;
            (b.len() as i128, rhs, Relation::Ge)
        }
        claim::EQ2 => {
            let ys = get_set(w, m, "Y")?;
            let z = get_residue(w, m, "z")?;
            let b = subset_sums(&ys).s0;
            let lhs = s0_size(&ys.with(z)?);
            (lhs, b.len() as i128 + lambda(&b, z)? as i128, Relation::Eq)
        }
        claim::EQ3 => {
            let b = get_set(w, m, "B")?.to_zn_set();
            let x = get_residue(w, m, "x")?;
            (lambda(&b, x)? as i128, lambda(&b, m.neg(x))? as i128, Relation::Eq)
        }
        claim::EQ4 => {
            let b = get_set(w, m, "B")?.to_zn_set();
            let x = get_residue(w, m, "x")?;
            let y = get_residue(w, m, "y")?;
            let lhs = lambda(&b, m.add(x, y))? as i128;
            (lhs, lambda(&b, x)? as i128 + lambda(&b, y)? as i128, Relation::Le)
        }
        claim::EQ5 => {
            let b = get_set(w, m, "B")?.to_zn_set();
            let c = get_set(w, m, "C")?;
            let mut sum = 0i128;
            for &x in c.elements() {
                sum += lambda(&b, x)? as i128;
            }
            let bl = b.len() as i128;
            (sum, bl * (c.len() as i128 - bl + 1), Relation::Ge)
        }
        claim::EQ6 => {
            let a = get_set(w, m, "A")?;
            let b = get_set(w, m, "B")?.to_zn_set();
            let alpha = max_lambda(&b, &a)?;
            let (lhs, rhs) = bounds::lamb_bound_sides(a.len() as u64, b.len() as u64, alpha)?;
            (lhs, rhs, Relation::Gt)
        }
        claim::EQ7 => {
            let a = get_set(w, m, "A")?;
            let b = get_set(w, m, "B")?.to_zn_set();
            let alpha = max_lambda(&b, &a)?;
            (alpha as i128, a.len() as i128 - 1, Relation::Ge)
        }
        claim::MAINLEMMA => {
            let a = get_set(w, m, "A")?;
            let rhs = bounds::mainlemma_rhs_doubled(w.n as u64, a.len() as u64)?;
            (2 * s0_size(&a), rhs as i128, Relation::Ge)
        }
        claim::EQ8 => {
            let x = get_set(w, m, "X")?;
            let y = get_set(w, m, "Y")?;
            (s0_size(&x) + s0_size(&y), n + 1, Relation::Le)
        }
        other => return Err(ZnError::Precondition(format!("unknown claim id {other:?}"))),
    })
}

/// Witnesses for one outcome class: exact per-claim totals plus the
/// canonically smallest `cap` witnesses of each claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessBag {
    cap: usize,
    items: Vec<Witness>,
    totals: BTreeMap<String, u64>,
}

impl WitnessBag {
    pub fn new(cap: usize) -> Self {
        WitnessBag {
            cap,
            items: Vec::new(),
            totals: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, w: Witness) {
        *self.totals.entry(w.claim.clone()).or_default() += 1;
        self.items.push(w);
        if self.items.len() > 4 * self.cap.max(64) {
            self.compact();
        }
    }

    fn compact(&mut self) {
        self.items.sort();
        self.items.dedup();
        let cap = self.cap;
        let mut kept: BTreeMap<String, usize> = BTreeMap::new();
        self.items.retain(|w| {
            let c = kept.entry(w.claim.clone()).or_default();
            *c += 1;
            *c <= cap
        });
    }

    /// Associative and commutative: the result depends only on the union.
    pub fn merge(mut self, other: WitnessBag) -> WitnessBag {
        for (k, v) in other.totals {
            *self.totals.entry(k).or_default() += v;
        }
        self.items.extend(other.items);
        self.compact();
        self
    }

    pub fn total(&self) -> u64 {
        self.totals.values().sum()
    }

    pub fn into_parts(mut self) -> (Vec<Witness>, BTreeMap<String, u64>) {
        self.compact();
        (self.items, self.totals)
    }
}

/// Mergeable result of one chunk of a campaign.
#[derive(Debug, Clone)]
pub struct Partial {
    pub tested: u64,
    pub violations: WitnessBag,
    pub findings: WitnessBag,
    pub counters: BTreeMap<&'static str, u64>,
}

impl Partial {
    pub fn new(cap: usize) -> Self {
        Partial {
            tested: 0,
            violations: WitnessBag::new(cap),
            findings: WitnessBag::new(cap),
            counters: BTreeMap::new(),
        }
    }

    pub fn bump(&mut self, key: &'static str, by: u64) {
        *self.counters.entry(key).or_default() += by;
    }

    pub fn merge(mut self, other: Partial) -> Partial {
        self.tested += other.tested;
        self.violations = self.violations.merge(other.violations);
        self.findings = self.findings.merge(other.findings);
        for (k, v) in other.counters {
            *self.counters.entry(k).or_default() += v;
        }
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub violations: BTreeMap<String, u64>,
    pub findings: BTreeMap<String, u64>,
}

/// Outcome of one verification campaign at one modulus.
///
/// `violations` fail the run; `findings` are recorded deviations from
/// bounds that are known not to hold as printed. Both lists are truncated
/// to the canonical first `cap` witnesses per claim; `totals` holds the
/// exact counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub check: String,
    pub n: u32,
    pub params: BTreeMap<String, Value>,
    pub instances_tested: u64,
    pub violations: Vec<Witness>,
    pub findings: Vec<Witness>,
    pub totals: Totals,
    pub seed: Option<u64>,
    pub elapsed_ms: u64,
}

impl AuditReport {
    pub(crate) fn from_partial(
        check: &str,
        n: u32,
        mut params: BTreeMap<String, Value>,
        partial: Partial,
        seed: Option<u64>,
        elapsed_ms: u64,
    ) -> Self {
        let (violations, vt) = partial.violations.into_parts();
        let (findings, ft) = partial.findings.into_parts();
        for (k, v) in partial.counters {
            params.insert(k.to_string(), Value::from(v));
        }
        AuditReport {
            check: check.to_string(),
            n,
            params,
            instances_tested: partial.tested,
            violations,
            findings,
            totals: Totals {
                violations: vt,
                findings: ft,
            },
            seed,
            elapsed_ms,
        }
    }

    pub fn violation_count(&self) -> u64 {
        self.totals.violations.values().sum()
    }

    pub fn finding_count(&self) -> u64 {
        self.totals.findings.values().sum()
    }

    pub fn has_violations(&self) -> bool {
        self.violation_count() > 0
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// The report with the timing field zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> AuditReport {
        AuditReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}
