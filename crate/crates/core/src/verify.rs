//! Verification campaigns: each [`Check`] is a machine-checkable property of
//! the labeled poset, evaluated exhaustively or on a seeded sample of
//! intervals. Reports are deterministic for a fixed configuration and do
//! not depend on the worker count.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{self, Family, InstanceSpec, RookPoset};
use crate::mutation::Mutation;
use crate::poset::{Chain, Length2Shape, DEFAULT_CHAIN_CUTOFF};
use crate::rook::{self, EdgeLabel, RookElement};

/// Witnesses kept per check; tallies keep counting past this.
pub const WITNESS_CAP: usize = 100;

/// Default number of intervals drawn by a sampled campaign.
pub const DEFAULT_SAMPLE_COUNT: u64 = 20_000;

/// Default ceiling on the number of intervals one campaign may visit.
pub const DEFAULT_INTERVAL_BUDGET: u64 = 3_000_000;

const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// Exactly one weakly increasing maximal chain, and it is the lex-first one.
    ElUnique,
    /// The lex-first maximal chain is weakly increasing.
    LexFirstIncreasing,
    /// In a length-2 diamond the other chain repeats one lex-first label on
    /// the opposite edge.
    DiamondLabels,
    /// Every length-2 interval has 3 or 4 elements.
    ChainOrDiamond,
    /// Both length formulas agree and ranks match the expected grading.
    LengthFormulas,
    /// The closure of the generating moves equals the poset order.
    OrderEquivalence,
    /// Möbius values on rank-level slices lie in {-1, 0, 1}.
    MobiusRange,
    /// `mu = (-1)^length * #(strictly decreasing maximal chains)`.
    MobiusDescending,
    /// The permutation slice matches `S_n` with transposition labels.
    EdelmanRestriction,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::ElUnique,
        Check::LexFirstIncreasing,
        Check::DiamondLabels,
        Check::ChainOrDiamond,
        Check::LengthFormulas,
        Check::OrderEquivalence,
        Check::MobiusRange,
        Check::MobiusDescending,
        Check::EdelmanRestriction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::ElUnique => "el-unique",
            Check::LexFirstIncreasing => "lex-first-increasing",
            Check::DiamondLabels => "diamond-labels",
            Check::ChainOrDiamond => "chain-or-diamond",
            Check::LengthFormulas => "length-formulas",
            Check::OrderEquivalence => "order-equivalence",
            Check::MobiusRange => "mobius-range",
            Check::MobiusDescending => "mobius-descending",
            Check::EdelmanRestriction => "edelman-restriction",
        }
    }

    fn needs_labels(self) -> bool {
        matches!(
            self,
            Check::ElUnique
                | Check::LexFirstIncreasing
                | Check::DiamondLabels
                | Check::MobiusDescending
        )
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses a comma-separated list of check names or groups: `el`,
/// `length2`, `mobius`, `all`, or any single check name.
pub fn parse_checks(s: &str) -> Result<BTreeSet<Check>> {
    let mut out = BTreeSet::new();
    for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match token {
            "all" => out.extend(Check::ALL),
            "el" => out.extend([Check::ElUnique, Check::LexFirstIncreasing]),
            "length2" => out.extend([Check::ChainOrDiamond, Check::DiamondLabels]),
            "mobius" => out.extend([Check::MobiusRange, Check::MobiusDescending]),
            "lex-first" => {
                out.insert(Check::LexFirstIncreasing);
            }
            "diamond" => {
                out.insert(Check::DiamondLabels);
            }
            "lengths" => {
                out.insert(Check::LengthFormulas);
            }
            "order" => {
                out.insert(Check::OrderEquivalence);
            }
            "edelman" => {
                out.insert(Check::EdelmanRestriction);
            }
            other => {
                let check = Check::ALL
                    .into_iter()
                    .find(|c| c.name() == other)
                    .ok_or_else(|| Error::Parse(format!("unknown check {other:?}")))?;
                out.insert(check);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("no checks selected".into()));
    }
    Ok(out)
}

/// Which intervals `[x, y]` with `x < y` a campaign visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scope {
    AllIntervals,
    /// Uniform draws, with replacement, from all pairs `x < y`.
    SampledIntervals { count: u64, seed: u64 },
    Length2Only,
    BoundedLength { max_length: u32 },
}

impl FromStr for Scope {
    type Err = Error;

    /// `all`, `length2`, `maxlen:K`, `sample:COUNT[:SEED]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad scope {s:?}"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        match parts.as_slice() {
            ["all"] => Ok(Scope::AllIntervals),
            ["length2"] => Ok(Scope::Length2Only),
            ["maxlen", k] => Ok(Scope::BoundedLength {
                max_length: u32::try_from(num(k)?).map_err(|_| bad())?,
            }),
            ["sample", count] => Scope::sampled(num(count)?, 0),
            ["sample", count, seed] => Scope::sampled(num(count)?, num(seed)?),
            _ => Err(bad()),
        }
    }
}

impl Scope {
    pub fn sampled(count: u64, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::Parse("sample count must be at least 1".into()));
        }
        Ok(Scope::SampledIntervals { count, seed })
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::AllIntervals => f.write_str("all"),
            Scope::SampledIntervals { count, seed } => write!(f, "sample:{count}:{seed}"),
            Scope::Length2Only => f.write_str("length2"),
            Scope::BoundedLength { max_length } => write!(f, "maxlen:{max_length}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub instance: InstanceSpec,
    pub scope: Scope,
    pub checks: BTreeSet<Check>,
    /// Worker threads; 0 lets the pool decide. Not part of the report.
    pub threads: usize,
    pub interval_budget: u64,
    pub bound: usize,
    pub mutation: Option<Mutation>,
}

impl CampaignConfig {
    /// All checks over all intervals for `n <= 4`, a 20,000-interval sample
    /// (seed 0) above that.
    pub fn new(instance: InstanceSpec) -> Self {
        let scope = if instance.n() <= 4 {
            Scope::AllIntervals
        } else {
            Scope::SampledIntervals {
                count: DEFAULT_SAMPLE_COUNT,
                seed: 0,
            }
        };
        CampaignConfig {
            instance,
            scope,
            checks: Check::ALL.into_iter().collect(),
            threads: 0,
            interval_budget: DEFAULT_INTERVAL_BUDGET,
            bound: instances::DEFAULT_BOUND,
            mutation: None,
        }
    }

    pub fn with_scope(mut self, scope: Scope) -> Self {
        self.scope = scope;
        self
    }

    pub fn with_checks<I: IntoIterator<Item = Check>>(mut self, checks: I) -> Self {
        self.checks = checks.into_iter().collect();
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_mutation(mut self, mutation: Mutation) -> Self {
        self.mutation = Some(mutation);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub check: Check,
    pub status: Status,
    pub evaluated: u64,
    pub passed: u64,
    pub failed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessChain {
    pub vertices: Vec<RookElement>,
    pub labels: Vec<EdgeLabel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub check: Check,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bottom: Option<RookElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub top: Option<RookElement>,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<WitnessChain>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CampaignStats {
    pub elements: u64,
    pub cover_edges: u64,
    pub comparable_pairs: u64,
    pub intervals_examined: u64,
    pub length2_chains: u64,
    pub length2_diamonds: u64,
    /// Intervals whose unique increasing chain is strictly increasing.
    pub unique_increasing_strict: u64,
    /// Intervals whose unique increasing chain repeats a label.
    pub unique_increasing_weak_only: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub instance: InstanceSpec,
    pub scope: Scope,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation: Option<Mutation>,
    pub interval_budget: u64,
    pub passed: bool,
    pub checks: Vec<CheckTally>,
    pub stats: CampaignStats,
    pub witnesses: Vec<Witness>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn tally(&self, check: Check) -> Option<&CheckTally> {
        self.checks.iter().find(|t| t.check == check)
    }

    pub fn failures(&self, check: Check) -> u64 {
        self.tally(check).map_or(0, |t| t.failed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Aligned plain-text summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "instance   {}", self.instance);
        let _ = writeln!(out, "scope      {}", self.scope);
        if let Some(m) = &self.mutation {
            let _ = writeln!(out, "mutation   {m}");
        }
        let _ = writeln!(
            out,
            "poset      {} elements, {} covers, {} comparable pairs",
            self.stats.elements, self.stats.cover_edges, self.stats.comparable_pairs
        );
        let _ = writeln!(out, "intervals  {}", self.stats.intervals_examined);
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<22} {:>10} {:>10} {:>8}  status",
            "check", "evaluated", "passed", "failed"
        );
        for t in &self.checks {
            let status = match t.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "skipped",
            };
            let _ = write!(
                out,
                "{:<22} {:>10} {:>10} {:>8}  {status}",
                t.check.name(),
                t.evaluated,
                t.passed,
                t.failed
            );
            if let Some(note) = &t.note {
                let _ = write!(out, " ({note})");
            }
            let _ = writeln!(out);
        }
        let s = &self.stats;
        if s.unique_increasing_strict + s.unique_increasing_weak_only > 0 {
            let _ = writeln!(
                out,
                "\nunique increasing chains: {} strictly increasing, {} with a repeated label",
                s.unique_increasing_strict, s.unique_increasing_weak_only
            );
        }
        if s.length2_chains + s.length2_diamonds > 0 {
            let _ = writeln!(
                out,
                "length-2 intervals: {} chains, {} diamonds",
                s.length2_chains, s.length2_diamonds
            );
        }
        for w in self.witnesses.iter().take(10) {
            let ends = match (&w.bottom, &w.top) {
                (Some(b), Some(t)) => format!(" [{b}, {t}]"),
                (Some(b), None) => format!(" {b}"),
                _ => String::new(),
            };
            let _ = writeln!(out, "witness {}{ends}: {}", w.check, w.detail);
        }
        let _ = writeln!(
            out,
            "\n{} in {:.2}s",
            if self.passed { "PASSED" } else { "FAILED" },
            self.elapsed.as_secs_f64()
        );
        out
    }
}

/// Builds the instance named by `config`, applies its mutation if any, and
/// runs the campaign.
pub fn run_campaign(config: &CampaignConfig) -> Result<VerificationReport> {
    let poset = config.instance.build(config.bound)?;
    let poset = match &config.mutation {
        Some(m) => m.apply(&poset)?,
        None => poset,
    };
    run_on_poset(config, &poset)
}

/// Runs the configured checks against an already built poset.
pub fn run_on_poset(config: &CampaignConfig, poset: &RookPoset) -> Result<VerificationReport> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::Parse(format!("thread pool: {e}")))?;
    let mut campaign = Campaign::new(config, poset);
    pool.install(|| campaign.run())?;
    Ok(campaign.finish(start.elapsed()))
}

/// EL conditions on every interval of `scope`.
pub fn verify_el(
    instance: InstanceSpec,
    poset: &RookPoset,
    scope: Scope,
) -> Result<VerificationReport> {
    let config = CampaignConfig::new(instance)
        .with_scope(scope)
        .with_checks([Check::ElUnique, Check::LexFirstIncreasing]);
    run_on_poset(&config, poset)
}

/// Chain-or-diamond and the diamond label identity on every length-2
/// interval.
pub fn verify_length2(instance: InstanceSpec, poset: &RookPoset) -> Result<VerificationReport> {
    let config = CampaignConfig::new(instance)
        .with_scope(Scope::Length2Only)
        .with_checks([Check::ChainOrDiamond, Check::DiamondLabels]);
    run_on_poset(&config, poset)
}

/// Generator closure against the built order of `R_n`.
pub fn verify_order_equivalence(n: usize) -> Result<VerificationReport> {
    let instance = InstanceSpec::rook(n)?;
    let config = CampaignConfig::new(instance).with_checks([Check::OrderEquivalence]);
    run_campaign(&config)
}

/// The selected Möbius checks on every interval of the instance.
pub fn verify_mobius(
    instance: InstanceSpec,
    poset: &RookPoset,
    checks: &[Check],
) -> Result<VerificationReport> {
    let config = CampaignConfig::new(instance)
        .with_scope(Scope::AllIntervals)
        .with_checks(checks.iter().copied().filter(|c| {
            matches!(c, Check::MobiusRange | Check::MobiusDescending)
        }));
    run_on_poset(&config, poset)
}

struct Campaign<'a> {
    config: &'a CampaignConfig,
    poset: &'a RookPoset,
    labeled: bool,
    tallies: Vec<CheckTally>,
    witnesses: Vec<Witness>,
    stats: CampaignStats,
}

#[derive(Default)]
struct Outcome {
    results: Vec<(Check, std::result::Result<(), Witness>)>,
    strict: Option<bool>,
    shape: Option<Length2Shape>,
}

impl<'a> Campaign<'a> {
    fn new(config: &'a CampaignConfig, poset: &'a RookPoset) -> Self {
        let labeled = (0..poset.len()).all(|i| poset.up_covers(i).iter().all(|e| e.label.is_some()));
        let tallies = config
            .checks
            .iter()
            .map(|&check| CheckTally {
                check,
                status: Status::Pass,
                evaluated: 0,
                passed: 0,
                failed: 0,
                note: None,
            })
            .collect();
        Campaign {
            config,
            poset,
            labeled,
            tallies,
            witnesses: Vec::new(),
            stats: CampaignStats {
                elements: poset.len() as u64,
                cover_edges: poset.edge_count() as u64,
                ..CampaignStats::default()
            },
        }
    }

    fn enabled(&self, check: Check) -> bool {
        self.config.checks.contains(&check)
    }

    fn skip(&mut self, check: Check, note: &str) {
        if let Some(t) = self.tallies.iter_mut().find(|t| t.check == check) {
            t.status = Status::Skipped;
            t.note = Some(note.to_owned());
        }
    }

    fn record(&mut self, check: Check, result: std::result::Result<(), Witness>) {
        let Some(t) = self.tallies.iter_mut().find(|t| t.check == check) else {
            return;
        };
        t.evaluated += 1;
        match result {
            Ok(()) => t.passed += 1,
            Err(w) => {
                t.failed += 1;
                let kept = self.witnesses.iter().filter(|x| x.check == check).count();
                if kept < WITNESS_CAP {
                    self.witnesses.push(w);
                }
            }
        }
    }

    fn run(&mut self) -> Result<()> {
        for check in Check::ALL {
            if self.enabled(check) && check.needs_labels() && !self.labeled {
                self.skip(check, "poset has unlabeled covers");
            }
        }
        self.stats.comparable_pairs = self.poset.count_strict_pairs();
        if self.enabled(Check::LengthFormulas) {
            self.check_lengths();
        }
        if self.enabled(Check::OrderEquivalence) {
            self.check_order()?;
        }
        if self.enabled(Check::EdelmanRestriction) {
            self.check_edelman()?;
        }
        if self.enabled(Check::MobiusRange) && self.config.instance.family() == Family::Rook {
            self.check_mobius_range_on_slices()?;
        }
        if self.interval_checks().next().is_some() {
            self.run_intervals()?;
        }
        Ok(())
    }

    fn interval_checks(&self) -> impl Iterator<Item = Check> + '_ {
        let rook_family = self.config.instance.family() == Family::Rook;
        [
            Check::ElUnique,
            Check::LexFirstIncreasing,
            Check::DiamondLabels,
            Check::ChainOrDiamond,
            Check::MobiusRange,
            Check::MobiusDescending,
        ]
        .into_iter()
        .filter(move |&c| self.enabled(c))
        .filter(move |&c| !(c.needs_labels() && !self.labeled))
        .filter(move |&c| !(c == Check::MobiusRange && rook_family))
    }

    fn finish(mut self, elapsed: Duration) -> VerificationReport {
        for t in &mut self.tallies {
            if t.status != Status::Skipped && t.failed > 0 {
                t.status = Status::Fail;
            }
        }
        self.witnesses.sort_by_key(|w| w.check);
        let passed = self.tallies.iter().all(|t| t.status != Status::Fail);
        VerificationReport {
            instance: self.config.instance,
            scope: self.config.scope,
            mutation: self.config.mutation,
            interval_budget: self.config.interval_budget,
            passed,
            checks: self.tallies,
            stats: self.stats,
            witnesses: self.witnesses,
            elapsed,
        }
    }

    fn witness(&self, check: Check, bottom: usize, top: Option<usize>, detail: String) -> Witness {
        Witness {
            check,
            bottom: Some(self.poset.element(bottom).clone()),
            top: top.map(|t| self.poset.element(t).clone()),
            detail,
            chains: Vec::new(),
        }
    }

    fn witness_chain(&self, chain: &Chain) -> WitnessChain {
        WitnessChain {
            vertices: chain
                .vertices
                .iter()
                .map(|&v| self.poset.element(v).clone())
                .collect(),
            labels: chain.labels.clone(),
        }
    }

    fn check_lengths(&mut self) {
        let family = self.config.instance.family();
        let base = (0..self.poset.len())
            .map(|i| self.poset.element(i).length_by_inversions())
            .min()
            .unwrap_or(0);
        for i in 0..self.poset.len() {
            let x = self.poset.element(i);
            let by_coinv = x.length_by_coinversions();
            let by_inv = x.length_by_inversions();
            let expected = match family {
                Family::Rook => by_inv,
                Family::Symmetric => x.inv(),
                Family::RookRankLevel => by_inv - base,
            };
            let rank = self.poset.rank(i) as usize;
            let bad_edge = self
                .poset
                .up_covers(i)
                .iter()
                .find(|e| self.poset.rank(e.target) != self.poset.rank(i) + 1);
            let result = if by_coinv != by_inv {
                Err(format!("length formulas disagree: {by_coinv} vs {by_inv}"))
            } else if rank != expected {
                Err(format!("rank {rank}, expected {expected}"))
            } else if let Some(e) = bad_edge {
                Err(format!(
                    "cover to {} jumps from rank {} to {}",
                    self.poset.element(e.target),
                    rank,
                    self.poset.rank(e.target)
                ))
            } else {
                Ok(())
            };
            let result = result.map_err(|d| self.witness(Check::LengthFormulas, i, None, d));
            self.record(Check::LengthFormulas, result);
        }
    }

    fn check_order(&mut self) -> Result<()> {
        let n = self.config.instance.n();
        let universe = rook::enumerate(n, self.config.bound.max(n))?;
        let closure = generator_closure(&universe);
        let local: std::collections::HashMap<&RookElement, usize> =
            universe.iter().enumerate().map(|(i, x)| (x, i)).collect();
        // Positions of the poset's elements inside the universe.
        let mut positions = Vec::with_capacity(self.poset.len());
        for x in self.poset.elements() {
            positions.push(*local.get(x).ok_or_else(|| Error::InvalidElement {
                entries: x.entries().iter().map(|&v| u32::from(v)).collect(),
                reason: "not an element of R_n".into(),
            })?);
        }
        let mut outcomes = Vec::new();
        for (i, &pi) in positions.iter().enumerate() {
            let up = self.poset.up_set(i);
            for (j, &pj) in positions.iter().enumerate() {
                let generated = closure[pi].contains(pj);
                let ordered = up.contains(j);
                outcomes.push(if generated == ordered {
                    Ok(())
                } else {
                    Err(self.witness(
                        Check::OrderEquivalence,
                        i,
                        Some(j),
                        format!("generator closure says {generated}, poset order says {ordered}"),
                    ))
                });
            }
        }
        for r in outcomes {
            self.record(Check::OrderEquivalence, r);
        }
        Ok(())
    }

    fn check_edelman(&mut self) -> Result<()> {
        let spec = self.config.instance;
        let n = spec.n();
        let bound = self.config.bound.max(n);
        let (slice, reference) = match spec.family() {
            Family::Rook => (
                self.poset.subposet(RookElement::is_permutation)?,
                instances::build_symmetric(n, bound)?,
            ),
            Family::Symmetric => (
                instances::build_rook(n, bound)?.subposet(RookElement::is_permutation)?,
                self.poset.subposet(|_| true)?,
            ),
            Family::RookRankLevel if spec.k() == Some(n) => (
                self.poset.subposet(|_| true)?,
                instances::build_symmetric(n, bound)?,
            ),
            Family::RookRankLevel => {
                self.skip(Check::EdelmanRestriction, "slice contains no permutations");
                return Ok(());
            }
        };
        let mut results = Vec::new();
        for w in 0..reference.len() {
            let element = reference.element(w);
            let result = match slice.index_of(element) {
                None => Err("missing from the permutation slice".to_owned()),
                Some(s) => {
                    let covers = |p: &RookPoset, i: usize| {
                        let mut v: Vec<(RookElement, Option<EdgeLabel>)> = p
                            .up_covers(i)
                            .iter()
                            .map(|e| (p.element(e.target).clone(), e.label))
                            .collect();
                        v.sort();
                        v
                    };
                    if slice.rank(s) != reference.rank(w) {
                        Err(format!(
                            "rank {} in the slice, {} in S_n",
                            slice.rank(s),
                            reference.rank(w)
                        ))
                    } else if covers(&slice, s) != covers(&reference, w) {
                        Err("labeled covers differ".to_owned())
                    } else {
                        Ok(())
                    }
                }
            };
            results.push(result.map_err(|detail| Witness {
                check: Check::EdelmanRestriction,
                bottom: Some(element.clone()),
                top: None,
                detail,
                chains: Vec::new(),
            }));
        }
        if slice.len() != reference.len() {
            results.push(Err(Witness {
                check: Check::EdelmanRestriction,
                bottom: None,
                top: None,
                detail: format!("slice has {} elements, S_n has {}", slice.len(), reference.len()),
                chains: Vec::new(),
            }));
        }
        for r in results {
            self.record(Check::EdelmanRestriction, r);
        }
        Ok(())
    }

    fn check_mobius_range_on_slices(&mut self) -> Result<()> {
        let n = self.config.instance.n();
        let mut results = Vec::new();
        for k in 0..=n {
            let slice = self.poset.subposet(|x| x.matrix_rank() == k)?;
            let table = slice.mobius_table();
            for (x, y, mu) in table.iter() {
                results.push(if (-1..=1).contains(&mu) {
                    Ok(())
                } else {
                    Err(Witness {
                        check: Check::MobiusRange,
                        bottom: Some(slice.element(x).clone()),
                        top: Some(slice.element(y).clone()),
                        detail: format!("mu = {mu} on the rank-{k} slice"),
                        chains: Vec::new(),
                    })
                });
            }
        }
        for r in results {
            self.record(Check::MobiusRange, r);
        }
        Ok(())
    }

    fn scope_pairs(&self) -> Result<Vec<(usize, usize)>> {
        let p = self.poset;
        let budget = self.config.interval_budget;
        let over = |intervals: u64| Error::ScopeTooLarge { intervals, budget };
        match self.config.scope {
            Scope::SampledIntervals { count, seed } => {
                if count > budget {
                    return Err(over(count));
                }
                let sizes: Vec<u64> = (0..p.len())
                    .map(|x| p.up_set(x).count_ones(..) as u64 - 1)
                    .collect();
                let total: u64 = sizes.iter().sum();
                if total == 0 {
                    return Ok(Vec::new());
                }
                let mut prefix = Vec::with_capacity(sizes.len());
                let mut acc = 0u64;
                for s in &sizes {
                    acc += s;
                    prefix.push(acc);
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut out = Vec::with_capacity(count as usize);
                for _ in 0..count {
                    let r = rng.gen_range(0..total);
                    let x = prefix.partition_point(|&c| c <= r);
                    let offset = r - if x == 0 { 0 } else { prefix[x - 1] };
                    let y = p
                        .up_set(x)
                        .ones()
                        .filter(|&y| y != x)
                        .nth(offset as usize)
                        .expect("offset is below the up-set size");
                    out.push((x, y));
                }
                Ok(out)
            }
            scope => {
                let keep = |x: usize, y: usize| {
                    let len = p.rank(y).saturating_sub(p.rank(x));
                    match scope {
                        Scope::Length2Only => len == 2,
                        Scope::BoundedLength { max_length } => len <= max_length,
                        _ => true,
                    }
                };
                let mut count = 0u64;
                for x in 0..p.len() {
                    count += p.up_set(x).ones().filter(|&y| y != x && keep(x, y)).count() as u64;
                }
                if count > budget {
                    return Err(over(count));
                }
                let mut out = Vec::with_capacity(count as usize);
                for x in 0..p.len() {
                    out.extend(p.up_set(x).ones().filter(|&y| y != x && keep(x, y)).map(|y| (x, y)));
                }
                Ok(out)
            }
        }
    }

    fn run_intervals(&mut self) -> Result<()> {
        let pairs = self.scope_pairs()?;
        let checks: Vec<Check> = self.interval_checks().collect();
        for chunk in pairs.chunks(CHUNK) {
            let outcomes: Vec<Outcome> = chunk
                .par_iter()
                .map(|&(x, y)| self.evaluate(x, y, &checks))
                .collect();
            for outcome in outcomes {
                self.stats.intervals_examined += 1;
                match outcome.strict {
                    Some(true) => self.stats.unique_increasing_strict += 1,
                    Some(false) => self.stats.unique_increasing_weak_only += 1,
                    None => {}
                }
                match outcome.shape {
                    Some(Length2Shape::Chain) => self.stats.length2_chains += 1,
                    Some(Length2Shape::Diamond) => self.stats.length2_diamonds += 1,
                    None => {}
                }
                for (check, result) in outcome.results {
                    self.record(check, result);
                }
            }
        }
        Ok(())
    }

    fn evaluate(&self, x: usize, y: usize, checks: &[Check]) -> Outcome {
        let p = self.poset;
        let mut out = Outcome::default();
        let on = |c: Check| checks.contains(&c);
        let iv = match p.interval(x, y) {
            Ok(iv) => iv,
            Err(e) => {
                for &c in checks {
                    out.results.push((c, Err(self.witness(c, x, Some(y), e.to_string()))));
                }
                return out;
            }
        };
        let length = p.interval_length(&iv);

        if on(Check::ElUnique) || on(Check::LexFirstIncreasing) {
            let lex_first = p.lex_first_chain(&iv);
            let increasing = p.count_increasing_chains(&iv);
            let lex_ok = matches!(&lex_first, Ok(c) if c.is_weakly_increasing());
            if on(Check::LexFirstIncreasing) {
                let result = if lex_ok {
                    Ok(())
                } else {
                    let mut w = self.witness(
                        Check::LexFirstIncreasing,
                        x,
                        Some(y),
                        match &lex_first {
                            Ok(_) => "lex-first chain is not weakly increasing".to_owned(),
                            Err(e) => e.to_string(),
                        },
                    );
                    if let Ok(c) = &lex_first {
                        w.chains.push(self.witness_chain(c));
                    }
                    Err(w)
                };
                out.results.push((Check::LexFirstIncreasing, result));
            }
            if on(Check::ElUnique) {
                let result = match (&increasing, lex_ok) {
                    (Ok(1), true) => Ok(()),
                    (count, _) => {
                        let detail = match count {
                            Ok(c) => format!("{c} weakly increasing maximal chains; lex-first increasing: {lex_ok}"),
                            Err(e) => e.to_string(),
                        };
                        let mut w = self.witness(Check::ElUnique, x, Some(y), detail);
                        if let Ok(chains) = p.all_maximal_chains(&iv, DEFAULT_CHAIN_CUTOFF.min(10_000)) {
                            w.chains.extend(
                                chains
                                    .iter()
                                    .filter(|c| c.is_weakly_increasing())
                                    .take(5)
                                    .map(|c| self.witness_chain(c)),
                            );
                        }
                        Err(w)
                    }
                };
                out.results.push((Check::ElUnique, result));
            }
            if let (Ok(1), Ok(c)) = (&increasing, &lex_first) {
                if lex_ok {
                    out.strict = Some(c.is_strictly_increasing());
                }
            }
        }

        if length == 2 && (on(Check::ChainOrDiamond) || on(Check::DiamondLabels)) {
            let shape = p.classify_length2(&iv);
            if on(Check::ChainOrDiamond) {
                let result = shape
                    .as_ref()
                    .map(|_| ())
                    .map_err(|e| self.witness(Check::ChainOrDiamond, x, Some(y), e.to_string()));
                out.results.push((Check::ChainOrDiamond, result));
            }
            if let Ok(s) = shape {
                out.shape = Some(s);
            }
            if on(Check::DiamondLabels) && matches!(shape, Ok(Length2Shape::Diamond)) {
                out.results.push((Check::DiamondLabels, self.diamond_labels(&iv)));
            }
        }

        if on(Check::MobiusDescending) {
            let mu = p.mobius_over(&iv).last().map_or(0, |&(_, m)| m);
            let result = match p.count_strictly_decreasing_chains(&iv) {
                Ok(count) => {
                    let sign = if length.is_multiple_of(2) { 1 } else { -1 };
                    if i128::from(mu) == sign * count as i128 {
                        Ok(())
                    } else {
                        Err(format!(
                            "mu = {mu}, but {count} strictly decreasing chains of length {length}"
                        ))
                    }
                }
                Err(e) => Err(e.to_string()),
            };
            out.results.push((
                Check::MobiusDescending,
                result.map_err(|d| self.witness(Check::MobiusDescending, x, Some(y), d)),
            ));
        }

        if on(Check::MobiusRange) {
            let mu = p.mobius_over(&iv).last().map_or(0, |&(_, m)| m);
            let result = if (-1..=1).contains(&mu) {
                Ok(())
            } else {
                Err(self.witness(Check::MobiusRange, x, Some(y), format!("mu = {mu}")))
            };
            out.results.push((Check::MobiusRange, result));
        }
        out
    }

    /// For a diamond `x0 < {x1, x1'} < x2` with lex-first chain through
    /// `x1`: `F(x0, x1') = F(x1, x2)` or `F(x1', x2) = F(x0, x1)`.
    fn diamond_labels(&self, iv: &crate::poset::Interval) -> std::result::Result<(), Witness> {
        let p = self.poset;
        let (x0, x2) = (iv.bottom(), iv.top());
        let fail = |detail: String, chains: Vec<WitnessChain>| {
            let mut w = self.witness(Check::DiamondLabels, x0, Some(x2), detail);
            w.chains = chains;
            w
        };
        let lex_first = p.lex_first_chain(iv).map_err(|e| fail(e.to_string(), Vec::new()))?;
        let x1 = lex_first.vertices[1];
        let other = iv
            .members()
            .iter()
            .copied()
            .find(|&m| m != x0 && m != x2 && m != x1)
            .ok_or_else(|| fail("diamond without a second middle element".into(), Vec::new()))?;
        let label = |a: usize, b: usize| p.edge_label(a, b);
        let (f01, f12) = (label(x0, x1), label(x1, x2));
        let (g01, g12) = (label(x0, other), label(other, x2));
        if g01.is_some() && (g01 == f12 || g12 == f01) && g12.is_some() {
            Ok(())
        } else {
            let other_chain = Chain {
                vertices: vec![x0, other, x2],
                labels: g01.into_iter().chain(g12).collect(),
            };
            Err(fail(
                "no label of the other chain repeats on the opposite edge".into(),
                vec![self.witness_chain(&lex_first), self.witness_chain(&other_chain)],
            ))
        }
    }
}

/// Reflexive-transitive closure of the generating moves over `universe`
/// (which must be closed under them). Row `i` holds everything reachable
/// from `universe[i]`.
pub fn generator_closure(universe: &[RookElement]) -> Vec<FixedBitSet> {
    let index: std::collections::HashMap<&RookElement, usize> =
        universe.iter().enumerate().map(|(i, x)| (x, i)).collect();
    // Every move raises the length, so descending length is a reverse
    // topological order.
    let mut order: Vec<usize> = (0..universe.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(universe[i].length_by_inversions()));
    let mut rows: Vec<FixedBitSet> = vec![FixedBitSet::new(); universe.len()];
    for i in order {
        let mut row = FixedBitSet::with_capacity(universe.len());
        row.insert(i);
        for next in universe[i].generator_relations() {
            if let Some(&j) = index.get(&next) {
                row.union_with(&rows[j]);
            }
        }
        rows[i] = row;
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_lists() {
        let all = parse_checks("all").unwrap();
        assert_eq!(all.len(), Check::ALL.len());
        let some = parse_checks("el,length2,mobius-range").unwrap();
        assert_eq!(
            some.into_iter().collect::<Vec<_>>(),
            vec![
                Check::ElUnique,
                Check::LexFirstIncreasing,
                Check::DiamondLabels,
                Check::ChainOrDiamond,
                Check::MobiusRange
            ]
        );
        assert!(parse_checks("bogus").is_err());
        assert!(parse_checks("").is_err());
    }

    #[test]
    fn scopes() {
        assert_eq!("all".parse::<Scope>().unwrap(), Scope::AllIntervals);
        assert_eq!(
            "sample:100:7".parse::<Scope>().unwrap(),
            Scope::SampledIntervals { count: 100, seed: 7 }
        );
        assert_eq!("maxlen:3".parse::<Scope>().unwrap(), Scope::BoundedLength { max_length: 3 });
        assert!("sample:0".parse::<Scope>().is_err());
        assert!("some".parse::<Scope>().is_err());
        for s in ["all", "length2", "maxlen:2", "sample:5:1"] {
            assert_eq!(s.parse::<Scope>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn small_campaign_passes() {
        let config = CampaignConfig::new(InstanceSpec::rook(2).unwrap()).with_threads(1);
        let report = run_campaign(&config).unwrap();
        assert!(report.passed, "{}", report.to_text());
        assert_eq!(report.stats.comparable_pairs, 19);
        assert_eq!(report.stats.intervals_examined, 19);
        assert!(report.witnesses.is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let mut config = CampaignConfig::new(InstanceSpec::rook(3).unwrap());
        config.interval_budget = 10;
        assert!(matches!(run_campaign(&config), Err(Error::ScopeTooLarge { .. })));
    }

    #[test]
    fn order_equivalence_small() {
        for n in 1..=2 {
            let report = verify_order_equivalence(n).unwrap();
            assert!(report.passed);
        }
        let r2 = verify_order_equivalence(2).unwrap();
        assert_eq!(r2.tally(Check::OrderEquivalence).unwrap().evaluated, 49);
    }

    #[test]
    fn edelman_skipped_below_full_rank() {
        let config = CampaignConfig::new(InstanceSpec::rook_rank_level(3, 1).unwrap())
            .with_checks([Check::EdelmanRestriction]);
        let report = run_campaign(&config).unwrap();
        assert_eq!(report.tally(Check::EdelmanRestriction).unwrap().status, Status::Skipped);
        assert!(report.passed);
    }
}
