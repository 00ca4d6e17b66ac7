//! UOL-Chains and UO-Tables: the per-pattern occurrence index that lets a
//! child pattern's occupancy and bounds be computed from its parent in one
//! pass over the parent's chain.
//!
//! An element sits at one ending itemset `tid` of the pattern in one
//! sequence and stores the best utility among occurrences whose last item is
//! exactly at `tid`, divided by `u(s)`. Its `ruo` is the utility left after
//! the pattern's last item at that position (rest of the itemset plus all
//! later itemsets), read from the sequence's precomputed suffix array.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::model::{ExtensionKind, ItemId, Pattern, QSequence, QSequenceDatabase};
use crate::topk::TopK;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UolElement {
    /// 1-based itemset index of the pattern's last item.
    pub tid: u32,
    pub uo: f64,
    pub ruo: f64,
    utility: f64,
    slot: u32,
}

impl UolElement {
    /// Absolute utility of the best occurrence ending at `tid`.
    pub fn utility(&self) -> f64 {
        self.utility
    }

    /// `uo + ruo` when something remains after this position, otherwise 0.
    pub fn peuo(&self) -> f64 {
        if self.ruo > 0.0 {
            self.uo + self.ruo
        } else {
            0.0
        }
    }
}

/// Elements of one sequence; the `next` link of each element is array adjacency.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SequenceGroup {
    /// Index of the sequence in the database.
    pub seq: u32,
    pub sid: u64,
    start: u32,
    end: u32,
}

impl SequenceGroup {
    fn range(&self) -> Range<usize> {
        self.start as usize..self.end as usize
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct UolChain {
    groups: Vec<SequenceGroup>,
    elements: Vec<UolElement>,
}

impl UolChain {
    pub fn groups(&self) -> &[SequenceGroup] {
        &self.groups
    }

    pub fn elements(&self, group: &SequenceGroup) -> &[UolElement] {
        &self.elements[group.range()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SequenceGroup, &[UolElement])> + '_ {
        self.groups
            .iter()
            .map(move |g| (g, &self.elements[g.range()]))
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    fn open_group(&mut self, seq: usize, s: &QSequence) {
        let at = self.elements.len() as u32;
        self.groups.push(SequenceGroup {
            seq: seq as u32,
            sid: s.sid(),
            start: at,
            end: at,
        });
    }

    fn push(&mut self, s: &QSequence, tid: usize, slot: usize, utility: f64) {
        let su = s.utility();
        self.elements.push(UolElement {
            tid: tid as u32,
            uo: utility / su,
            ruo: s.remaining_after_slot(slot) / su,
            utility,
            slot: slot as u32,
        });
        self.groups.last_mut().expect("group opened").end += 1;
    }

    /// Drops the last group if nothing was pushed into it.
    fn close_group(&mut self) {
        if let Some(g) = self.groups.last() {
            if g.start == g.end {
                self.groups.pop();
            }
        }
    }
}

/// Per-pattern summary: support, total occupancy, and the chain itself.
#[derive(Clone, Debug, PartialEq)]
pub struct UoTable {
    pub prefix: Pattern,
    pub sup: usize,
    pub uo: f64,
    pub uoc: UolChain,
}

impl UoTable {
    fn from_chain(prefix: Pattern, uoc: UolChain, db: &QSequenceDatabase) -> Self {
        let sup = uoc.groups.len();
        let mut sum = 0.0;
        for (g, elems) in uoc.iter() {
            let best = elems.iter().map(|e| e.utility).fold(f64::MIN, f64::max);
            sum += best / db.sequences()[g.seq as usize].utility();
        }
        let uo = if sup == 0 { 0.0 } else { sum / sup as f64 };
        UoTable {
            prefix,
            sup,
            uo,
            uoc,
        }
    }

    /// Per-sequence PEUO values in chain order.
    pub fn sequence_peuo(&self) -> impl Iterator<Item = f64> + '_ {
        self.uoc.iter().map(|(_, elems)| group_peuo(elems))
    }
}

fn group_peuo(elems: &[UolElement]) -> f64 {
    elems.iter().map(UolElement::peuo).fold(0.0, f64::max)
}

/// `PEUO(t)` over the chain.
pub fn table_peuo(table: &UoTable, min_support: usize) -> f64 {
    table.sequence_peuo().sum::<f64>() / min_support as f64
}

/// `TPUO(t)`: only the `min_support` largest per-sequence values count.
pub fn table_tpuo(table: &UoTable, min_support: usize) -> f64 {
    let mut top = TopK::new(min_support);
    for v in table.sequence_peuo() {
        top.push(v);
    }
    top.sum() / min_support as f64
}

/// `PES(t)`: sequences with a positive per-sequence PEUO.
pub fn table_pes(table: &UoTable) -> usize {
    table.sequence_peuo().filter(|&v| v > 0.0).count()
}

/// Builds one table per requested item in a single database pass.
pub fn build_singletons(db: &QSequenceDatabase, items: &[ItemId]) -> Vec<UoTable> {
    let mut which = vec![usize::MAX; db.item_count()];
    for (k, it) in items.iter().enumerate() {
        which[it.index()] = k;
    }
    let mut chains: Vec<UolChain> = vec![UolChain::default(); items.len()];
    for (si, s) in db.sequences().iter().enumerate() {
        for p in 0..s.len() {
            for slot in s.slots(p) {
                let k = which[s.slot_item(slot).index()];
                if k == usize::MAX {
                    continue;
                }
                let chain = &mut chains[k];
                if chain.groups.last().map(|g| g.seq as usize) != Some(si) {
                    chain.open_group(si, s);
                }
                chain.push(s, p + 1, slot, s.slot_utility(slot));
            }
        }
    }
    items
        .iter()
        .zip(chains)
        .map(|(&it, chain)| UoTable::from_chain(Pattern::singleton(it), chain, db))
        .collect()
}

/// Width-pruning aggregates of one candidate item, accumulated once per sequence.
#[derive(Clone, Debug)]
pub struct CandidateAggregate {
    /// `RSS`: number of sequences whose parent PES indicator is 1.
    pub rss: usize,
    /// Sum of the parent's per-sequence PEUO; `RSUO = rsuo_sum / minsup`.
    pub rsuo_sum: f64,
    /// The `minsup` largest parent per-sequence PEUO values, when requested.
    pub tsuo_top: Option<TopK>,
    /// Indices of the parent's chain groups in which the item can extend.
    pub groups: Vec<u32>,
}

impl CandidateAggregate {
    pub fn rsuo(&self, min_support: usize) -> f64 {
        self.rsuo_sum / min_support as f64
    }

    pub fn tsuo(&self, min_support: usize) -> Option<f64> {
        self.tsuo_top.as_ref().map(|t| t.sum() / min_support as f64)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ExtensionCandidates {
    /// In first-seen order.
    pub i_list: Vec<(ItemId, CandidateAggregate)>,
    /// In first-seen order.
    pub s_list: Vec<(ItemId, CandidateAggregate)>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ScanOptions<'a> {
    /// Items allowed as extensions, indexed by item id. `None` allows all.
    pub allowed: Option<&'a [bool]>,
    /// Track the top-k parent PEUO values per candidate (for TSUO).
    pub top_k: Option<usize>,
}

/// Reusable per-item bookkeeping for [`scan_extensions_with`].
#[derive(Clone, Debug)]
pub struct ScanScratch {
    seen_i: Vec<u32>,
    seen_s: Vec<u32>,
    pos_i: Vec<u32>,
    pos_s: Vec<u32>,
    stamp: u32,
}

impl ScanScratch {
    pub fn new(item_count: usize) -> Self {
        ScanScratch {
            seen_i: vec![0; item_count],
            seen_s: vec![0; item_count],
            pos_i: vec![u32::MAX; item_count],
            pos_s: vec![u32::MAX; item_count],
            stamp: 0,
        }
    }

    fn next_stamp(&mut self) -> u32 {
        if self.stamp == u32::MAX {
            self.seen_i.fill(0);
            self.seen_s.fill(0);
            self.stamp = 0;
        }
        self.stamp += 1;
        self.stamp
    }
}

struct Accumulator<'a> {
    seen: &'a mut [u32],
    pos: &'a mut [u32],
    list: Vec<(ItemId, CandidateAggregate)>,
}

impl Accumulator<'_> {
    fn add(&mut self, item: ItemId, stamp: u32, group: u32, peuo: f64, top_k: Option<usize>) {
        let i = item.index();
        if self.seen[i] == stamp {
            return;
        }
        self.seen[i] = stamp;
        let at = self.pos[i];
        let agg = if at == u32::MAX {
            self.pos[i] = self.list.len() as u32;
            self.list.push((
                item,
                CandidateAggregate {
                    rss: 0,
                    rsuo_sum: 0.0,
                    tsuo_top: top_k.map(TopK::new),
                    groups: Vec::new(),
                },
            ));
            &mut self.list.last_mut().expect("just pushed").1
        } else {
            &mut self.list[at as usize].1
        };
        agg.groups.push(group);
        agg.rsuo_sum += peuo;
        if peuo > 0.0 {
            agg.rss += 1;
        }
        if let Some(top) = agg.tsuo_top.as_mut() {
            top.push(peuo);
        }
    }

    fn finish(self) -> Vec<(ItemId, CandidateAggregate)> {
        let Accumulator { pos, list, .. } = self;
        for (it, _) in &list {
            pos[it.index()] = u32::MAX;
        }
        list
    }
}

/// Scans the projected database of `table.prefix` for I- and S-extension items.
pub fn scan_extensions(
    table: &UoTable,
    db: &QSequenceDatabase,
    opts: ScanOptions<'_>,
) -> ExtensionCandidates {
    scan_extensions_with(&mut ScanScratch::new(db.item_count()), table, db, opts)
}

pub fn scan_extensions_with(
    scratch: &mut ScanScratch,
    table: &UoTable,
    db: &QSequenceDatabase,
    opts: ScanOptions<'_>,
) -> ExtensionCandidates {
    let allowed = |it: ItemId| opts.allowed.is_none_or(|mask| mask[it.index()]);
    let mut stamps = Vec::with_capacity(table.uoc.groups.len());
    for _ in 0..table.uoc.groups.len() {
        stamps.push(scratch.next_stamp());
    }
    let ScanScratch {
        seen_i,
        seen_s,
        pos_i,
        pos_s,
        ..
    } = scratch;
    let mut ie = Accumulator {
        seen: seen_i,
        pos: pos_i,
        list: Vec::new(),
    };
    let mut se = Accumulator {
        seen: seen_s,
        pos: pos_s,
        list: Vec::new(),
    };

    for (gi, ((g, elems), stamp)) in table.uoc.iter().zip(stamps).enumerate() {
        let gi = gi as u32;
        let s = &db.sequences()[g.seq as usize];
        let peuo = group_peuo(elems);
        for e in elems {
            if e.ruo <= 0.0 {
                continue;
            }
            let end = s.slots(e.tid as usize - 1).end;
            for slot in e.slot as usize + 1..end {
                let it = s.slot_item(slot);
                if allowed(it) {
                    ie.add(it, stamp, gi, peuo, opts.top_k);
                }
            }
        }
        // Elements are ordered by tid: every later itemset of the first one is reachable.
        let first = elems[0].tid as usize;
        if first < s.len() {
            let from = s.slots(first).start;
            for &it in s.slot_items(from..s.item_count()) {
                if allowed(it) {
                    se.add(it, stamp, gi, peuo, opts.top_k);
                }
            }
        }
    }

    ExtensionCandidates {
        i_list: ie.finish(),
        s_list: se.finish(),
    }
}

/// Builds the table of `<t (+) item>` (I) or `<t (x) item>` (S) from the parent's chain.
pub fn extend(
    table: &UoTable,
    item: ItemId,
    kind: ExtensionKind,
    db: &QSequenceDatabase,
) -> Result<UoTable> {
    let all: Vec<u32> = (0..table.uoc.groups.len() as u32).collect();
    extend_within(table, item, kind, db, &all)
}

/// Like [`extend`], visiting only the listed parent groups (ascending), such
/// as the `groups` a scan recorded for the candidate.
pub fn extend_within(
    table: &UoTable,
    item: ItemId,
    kind: ExtensionKind,
    db: &QSequenceDatabase,
    groups: &[u32],
) -> Result<UoTable> {
    let prefix = table.prefix.extend(item, kind)?;
    let mut chain = UolChain::default();
    for &gi in groups {
        let g = &table.uoc.groups[gi as usize];
        let elems = table.uoc.elements(g);
        let s = &db.sequences()[g.seq as usize];
        chain.open_group(g.seq as usize, s);
        match kind {
            ExtensionKind::I => {
                for e in elems {
                    let p = e.tid as usize - 1;
                    let range = s.slots(p);
                    let after = e.slot as usize + 1..range.end;
                    if let Ok(k) = s.slot_items(after.clone()).binary_search(&item) {
                        let slot = after.start + k;
                        chain.push(s, e.tid as usize, slot, e.utility + s.slot_utility(slot));
                    }
                }
            }
            ExtensionKind::S => {
                let first = elems[0].tid;
                let mut next = 0;
                let mut best = f64::MIN;
                for &(_, q, slot) in s.item_positions(item) {
                    if q < first {
                        continue;
                    }
                    // Parent elements ending strictly before itemset q (0-based q is 1-based q + 1).
                    while next < elems.len() && elems[next].tid <= q {
                        best = best.max(elems[next].utility);
                        next += 1;
                    }
                    let slot = slot as usize;
                    chain.push(s, q as usize + 1, slot, best + s.slot_utility(slot));
                }
            }
        }
        chain.close_group();
    }
    if chain.groups.is_empty() {
        return Err(Error::IllegalExtension(format!(
            "{} does not occur after the prefix",
            db.item(item)
        )));
    }
    Ok(UoTable::from_chain(prefix, chain, db))
}
