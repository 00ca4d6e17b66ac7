//! The pattern-growth search: frequent singletons first, then a recursive
//! depth-first search over I- and S-extensions guarded by the depth and
//! width pruning strategies enabled in [`MinerConfig`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{
    build_singletons, extend_within, scan_extensions_with, table_pes, table_peuo, table_tpuo,
    ScanOptions, ScanScratch, UoTable,
};
use crate::error::{Error, Result};
use crate::model::{ExtensionKind, ItemId, Pattern, QSequenceDatabase};
use crate::occupancy::{Thresholds, UO_TOLERANCE};

/// The seven pruning strategies, numbered as they are usually referred to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Drop items whose support is below `minsup`.
    FrequentItems = 1,
    /// Depth: `PEUO(t) < minuo`.
    Peuo = 2,
    /// Width: `RSUO(i) < minuo`.
    Rsuo = 3,
    /// Depth: `TPUO(t) < minuo`.
    Tpuo = 4,
    /// Width: `TSUO(i) < minuo`.
    Tsuo = 5,
    /// Depth: `PES(t) < minsup`.
    Pes = 6,
    /// Width: `RSS(i) < minsup`.
    Rss = 7,
}

impl Strategy {
    pub const ALL: [Strategy; 7] = [
        Strategy::FrequentItems,
        Strategy::Peuo,
        Strategy::Rsuo,
        Strategy::Tpuo,
        Strategy::Tsuo,
        Strategy::Pes,
        Strategy::Rss,
    ];

    pub fn number(self) -> usize {
        self as usize
    }

    fn bit(self) -> u8 {
        1 << (self as u8 - 1)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct StrategySet(u8);

impl StrategySet {
    pub const NONE: StrategySet = StrategySet(0);

    pub fn of(strategies: &[Strategy]) -> Self {
        StrategySet(strategies.iter().fold(0, |acc, s| acc | s.bit()))
    }

    pub fn contains(self, s: Strategy) -> bool {
        self.0 & s.bit() != 0
    }

    pub fn with(self, s: Strategy) -> Self {
        StrategySet(self.0 | s.bit())
    }

    pub fn without(self, s: Strategy) -> Self {
        StrategySet(self.0 & !s.bit())
    }
}

impl fmt::Display for StrategySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = Strategy::ALL
            .iter()
            .filter(|s| self.contains(**s))
            .map(|s| format!("s{}", s.number()))
            .collect();
        f.write_str(&names.join(","))
    }
}

/// The four benchmark configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Simple,
    Peuo,
    Tpuo,
    Pes,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Simple, Variant::Peuo, Variant::Tpuo, Variant::Pes];

    pub fn strategies(self) -> StrategySet {
        use Strategy::*;
        match self {
            Variant::Simple => StrategySet::of(&[Peuo, Rsuo]),
            Variant::Peuo => StrategySet::of(&[FrequentItems, Peuo, Rsuo]),
            Variant::Tpuo => StrategySet::of(&[FrequentItems, Tpuo, Tsuo]),
            Variant::Pes => StrategySet::of(&[FrequentItems, Peuo, Rsuo, Pes, Rss]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Simple => "simple",
            Variant::Peuo => "peuo",
            Variant::Tpuo => "tpuo",
            Variant::Pes => "pes",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "simple" => Ok(Variant::Simple),
            "peuo" => Ok(Variant::Peuo),
            "tpuo" => Ok(Variant::Tpuo),
            "pes" => Ok(Variant::Pes),
            other => Err(format!(
                "unknown variant `{other}` (expected simple, peuo, tpuo or pes)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinerConfig {
    pub variant: Variant,
    pub strategies: StrategySet,
    /// Maximum number of items in a pattern; `None` is unbounded.
    pub max_pattern_length: Option<usize>,
    /// Worker threads for the top-level subtrees; 1 runs inline.
    pub threads: usize,
}

impl MinerConfig {
    pub fn new(variant: Variant) -> Self {
        MinerConfig {
            variant,
            strategies: variant.strategies(),
            max_pattern_length: None,
            threads: 1,
        }
    }

    pub fn with_strategies(mut self, strategies: StrategySet) -> Self {
        self.strategies = strategies;
        self
    }

    /// `0` means unbounded.
    pub fn with_max_pattern_length(mut self, max: usize) -> Self {
        self.max_pattern_length = (max > 0).then_some(max);
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }
}

impl Default for MinerConfig {
    fn default() -> Self {
        Self::new(Variant::Pes)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MiningStats {
    /// UO-Tables constructed, singletons included.
    pub candidates: u64,
    pub huosps: usize,
    /// Pruning events per strategy number. Strategy 1 counts removed items,
    /// depth strategies count abandoned prefixes, width strategies count dropped candidates.
    pub pruned_by_strategy: BTreeMap<usize, u64>,
    pub wall_time_ms: f64,
    pub peak_patterns_alive: usize,
}

impl MiningStats {
    pub fn pruned(&self, s: Strategy) -> u64 {
        self.pruned_by_strategy
            .get(&s.number())
            .copied()
            .unwrap_or(0)
    }

    fn bump(&mut self, s: Strategy) {
        *self.pruned_by_strategy.entry(s.number()).or_default() += 1;
    }

    fn absorb(&mut self, other: MiningStats) {
        self.candidates += other.candidates;
        for (k, v) in other.pruned_by_strategy {
            *self.pruned_by_strategy.entry(k).or_default() += v;
        }
        self.peak_patterns_alive = self.peak_patterns_alive.max(other.peak_patterns_alive);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HuospEntry {
    pub pattern: Pattern,
    pub support: usize,
    pub utility_occupancy: f64,
}

/// Mined patterns in canonical order (itemset count, then lexicographic).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultSet {
    entries: Vec<HuospEntry>,
}

impl ResultSet {
    pub fn from_entries(mut entries: Vec<HuospEntry>) -> Self {
        entries.sort_by(|a, b| a.pattern.cmp(&b.pattern));
        entries.dedup_by(|a, b| a.pattern == b.pattern);
        ResultSet { entries }
    }

    pub fn entries(&self) -> &[HuospEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, pattern: &Pattern) -> Option<&HuospEntry> {
        self.entries
            .binary_search_by(|e| e.pattern.cmp(pattern))
            .ok()
            .map(|i| &self.entries[i])
    }

    /// Describes the first few differences against `other`, or `None` if the
    /// sets agree on patterns and supports and occupancies are within `tol`.
    pub fn difference(
        &self,
        other: &ResultSet,
        tol: f64,
        db: &QSequenceDatabase,
    ) -> Option<String> {
        let mut lines = Vec::new();
        for e in &self.entries {
            match other.get(&e.pattern) {
                None => lines.push(format!("only in left: {}", db.display(&e.pattern))),
                Some(o) if o.support != e.support => lines.push(format!(
                    "{}: support {} vs {}",
                    db.display(&e.pattern),
                    e.support,
                    o.support
                )),
                Some(o) if (o.utility_occupancy - e.utility_occupancy).abs() > tol => {
                    lines.push(format!(
                        "{}: uo {} vs {}",
                        db.display(&e.pattern),
                        e.utility_occupancy,
                        o.utility_occupancy
                    ))
                }
                Some(_) => {}
            }
        }
        for o in &other.entries {
            if self.get(&o.pattern).is_none() {
                lines.push(format!("only in right: {}", db.display(&o.pattern)));
            }
        }
        if lines.is_empty() {
            None
        } else {
            let total = lines.len();
            lines.truncate(10);
            if total > 10 {
                lines.push(format!("... {} more", total - 10));
            }
            Some(lines.join("\n"))
        }
    }
}

/// Per-item count of containing sequences (each sequence counted once).
pub fn count_item_supports(db: &QSequenceDatabase) -> BTreeMap<ItemId, usize> {
    let mut last_seen = vec![usize::MAX; db.item_count()];
    let mut counts: BTreeMap<ItemId, usize> = BTreeMap::new();
    for (si, s) in db.sequences().iter().enumerate() {
        for set in s.itemsets() {
            for q in set.items() {
                if last_seen[q.item.index()] != si {
                    last_seen[q.item.index()] = si;
                    *counts.entry(q.item).or_default() += 1;
                }
            }
        }
    }
    counts
}

/// Mines every pattern with `sup >= minsup` and `uo >= minuo`.
pub fn mine(
    db: &QSequenceDatabase,
    thresholds: &Thresholds,
    config: &MinerConfig,
) -> Result<(ResultSet, MiningStats)> {
    if !db.is_empty() && thresholds.min_support() > db.len() {
        return Err(Error::InvalidThresholds(format!(
            "minimum support {} exceeds the {} sequences of the database",
            thresholds.min_support(),
            db.len()
        )));
    }
    let started = Instant::now();
    let mut stats = MiningStats::default();
    let minsup = thresholds.min_support();
    let strategies = config.strategies;

    let supports = count_item_supports(db);
    let (roots, allowed): (Vec<ItemId>, Option<Vec<bool>>) =
        if strategies.contains(Strategy::FrequentItems) {
            let mut mask = vec![false; db.item_count()];
            let mut frequent = Vec::new();
            for (&it, &sup) in &supports {
                if sup >= minsup {
                    mask[it.index()] = true;
                    frequent.push(it);
                } else {
                    stats.bump(Strategy::FrequentItems);
                }
            }
            (frequent, Some(mask))
        } else {
            (supports.keys().copied().collect(), None)
        };

    let singletons = build_singletons(db, &roots);
    stats.candidates += singletons.len() as u64;
    stats.peak_patterns_alive = singletons.len();

    let ctx = Context {
        db,
        thresholds,
        config,
        allowed: allowed.as_deref(),
    };

    let run = |table: &UoTable| -> (Vec<HuospEntry>, MiningStats) {
        let mut search = Search::new(&ctx, singletons.len());
        if table.sup >= minsup {
            search.consider(table);
        }
        search.into_parts()
    };

    let outputs: Vec<(Vec<HuospEntry>, MiningStats)> = if config.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
        pool.install(|| singletons.par_iter().map(run).collect())
    } else {
        singletons.iter().map(run).collect()
    };

    let mut found = Vec::new();
    for (entries, sub) in outputs {
        found.extend(entries);
        stats.absorb(sub);
    }
    let results = ResultSet::from_entries(found);
    stats.huosps = results.len();
    stats.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok((results, stats))
}

struct Context<'a> {
    db: &'a QSequenceDatabase,
    thresholds: &'a Thresholds,
    config: &'a MinerConfig,
    allowed: Option<&'a [bool]>,
}

struct Search<'c, 'a> {
    ctx: &'c Context<'a>,
    scratch: ScanScratch,
    found: Vec<HuospEntry>,
    candidates: u64,
    pruned: [u64; 7],
    peak: usize,
    alive: usize,
}

impl<'c, 'a> Search<'c, 'a> {
    fn new(ctx: &'c Context<'a>, alive: usize) -> Self {
        Search {
            ctx,
            scratch: ScanScratch::new(ctx.db.item_count()),
            found: Vec::new(),
            candidates: 0,
            pruned: [0; 7],
            peak: 0,
            alive,
        }
    }

    fn bump(&mut self, s: Strategy) {
        self.pruned[s.number() - 1] += 1;
    }

    fn into_parts(self) -> (Vec<HuospEntry>, MiningStats) {
        let mut stats = MiningStats {
            candidates: self.candidates,
            peak_patterns_alive: self.peak,
            ..MiningStats::default()
        };
        for s in Strategy::ALL {
            let n = self.pruned[s.number() - 1];
            if n > 0 {
                stats.pruned_by_strategy.insert(s.number(), n);
            }
        }
        (self.found, stats)
    }

    fn below_uo(&self, bound: f64) -> bool {
        bound < self.ctx.thresholds.min_uo() - UO_TOLERANCE
    }

    /// Emits `table` if it qualifies and searches below it. Caller guarantees `sup >= minsup`.
    fn consider(&mut self, table: &UoTable) {
        if self.ctx.thresholds.meets_uo(table.uo) {
            self.found.push(HuospEntry {
                pattern: table.prefix.clone(),
                support: table.sup,
                utility_occupancy: table.uo,
            });
        }
        self.search(table);
    }

    fn search(&mut self, table: &UoTable) {
        let ctx = self.ctx;
        let minsup = ctx.thresholds.min_support();
        let strategies = ctx.config.strategies;

        if let Some(max) = ctx.config.max_pattern_length {
            if table.prefix.item_count() >= max {
                return;
            }
        }

        if strategies.contains(Strategy::Pes) && table_pes(table) < minsup {
            self.bump(Strategy::Pes);
            return;
        }
        if strategies.contains(Strategy::Peuo) && self.below_uo(table_peuo(table, minsup)) {
            self.bump(Strategy::Peuo);
            return;
        }
        if strategies.contains(Strategy::Tpuo) && self.below_uo(table_tpuo(table, minsup)) {
            self.bump(Strategy::Tpuo);
            return;
        }

        let opts = ScanOptions {
            allowed: ctx.allowed,
            top_k: strategies.contains(Strategy::Tsuo).then_some(minsup),
        };
        let candidates = scan_extensions_with(&mut self.scratch, table, ctx.db, opts);

        let mut survivors: Vec<(ExtensionKind, ItemId, Vec<u32>)> = Vec::new();
        for (list, kind) in [
            (candidates.i_list, ExtensionKind::I),
            (candidates.s_list, ExtensionKind::S),
        ] {
            for (item, agg) in list {
                if strategies.contains(Strategy::Rss) && agg.rss < minsup {
                    self.bump(Strategy::Rss);
                    continue;
                }
                if strategies.contains(Strategy::Rsuo) && self.below_uo(agg.rsuo(minsup)) {
                    self.bump(Strategy::Rsuo);
                    continue;
                }
                if strategies.contains(Strategy::Tsuo)
                    && agg.tsuo(minsup).is_some_and(|v| self.below_uo(v))
                {
                    self.bump(Strategy::Tsuo);
                    continue;
                }
                survivors.push((kind, item, agg.groups));
            }
        }
        survivors.sort_unstable_by_key(|&(kind, item, _)| (kind, item));

        for (kind, item, groups) in survivors {
            let child = extend_within(table, item, kind, ctx.db, &groups)
                .expect("scanned candidates occur in the projection");
            self.candidates += 1;
            self.alive += 1;
            self.peak = self.peak.max(self.alive);
            if child.sup >= minsup {
                self.consider(&child);
            }
            self.alive -= 1;
        }
    }
}
