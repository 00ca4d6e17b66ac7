//! Quantitative sequence databases and the definition-level utility and
//! support computations everything else is checked against.
//!
//! Items are interned per database: [`ItemId`] is the rank of the item in the
//! global item order, so comparing ids compares items. Every sequence also
//! carries a flattened view (one slot per q-item, in itemset order) with the
//! per-slot utility and the utility remaining after each slot, which the
//! occupancy bounds and the chain structures read in O(1).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::Range;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An item identifier as it appears in input files.
///
/// Ids made only of ASCII digits compare numerically and sort before all
/// other ids; everything else compares lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Item(String);

impl Item {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty()
            || id
                .chars()
                .any(|c| c.is_whitespace() || c == '[' || c == ']')
        {
            return Err(Error::InvalidItem(id));
        }
        Ok(Item(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn is_numeric(&self) -> bool {
        self.0.bytes().all(|b| b.is_ascii_digit())
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_numeric(), other.is_numeric()) {
            (true, true) => {
                let a = self.0.trim_start_matches('0');
                let b = other.0.trim_start_matches('0');
                a.len()
                    .cmp(&b.len())
                    .then_with(|| a.cmp(b))
                    .then_with(|| self.0.cmp(&other.0))
            }
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Dense per-database item handle. Ordering of ids equals the global item order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ItemId(pub u32);

impl ItemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// How lookups of items missing from the utility table behave.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LookupMode {
    #[default]
    Strict,
    /// Missing items get external utility 1; declared sequence utilities that
    /// disagree with the computed ones are logged and overridden.
    Permissive,
}

/// Per-unit profit of each item.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExternalUtilityTable {
    entries: BTreeMap<Item, f64>,
    mode: LookupMode,
}

impl ExternalUtilityTable {
    pub fn new(mode: LookupMode) -> Self {
        ExternalUtilityTable {
            entries: BTreeMap::new(),
            mode,
        }
    }

    /// A table without entries where every item is worth 1 per unit.
    pub fn unit() -> Self {
        Self::new(LookupMode::Permissive)
    }

    pub fn insert(&mut self, item: Item, utility: f64) -> Result<()> {
        if !(utility.is_finite() && utility > 0.0) {
            return Err(Error::InvalidUtility {
                item: item.0,
                value: utility,
            });
        }
        self.entries.insert(item, utility);
        Ok(())
    }

    pub fn get(&self, item: &Item) -> Result<f64> {
        match (self.entries.get(item), self.mode) {
            (Some(&u), _) => Ok(u),
            (None, LookupMode::Permissive) => Ok(1.0),
            (None, LookupMode::Strict) => Err(Error::UnknownItem(item.0.clone())),
        }
    }

    pub fn mode(&self) -> LookupMode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: LookupMode) {
        self.mode = mode;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Item, f64)> + '_ {
        self.entries.iter().map(|(k, &v)| (k, v))
    }
}

/// `u(i, c) = q(i, c) * p(i)`.
pub fn item_utility(item: &Item, quantity: u32, utable: &ExternalUtilityTable) -> Result<f64> {
    Ok(f64::from(quantity) * utable.get(item)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QItem {
    pub item: ItemId,
    pub quantity: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QItemset {
    items: Vec<QItem>,
}

impl QItemset {
    pub fn items(&self) -> &[QItem] {
        &self.items
    }
}

/// Flattened q-items of one sequence.
#[derive(Clone, Debug, PartialEq)]
struct Flat {
    items: Vec<ItemId>,
    utilities: Vec<f64>,
    /// `remaining[k]` is the utility of all slots after `k`.
    remaining: Vec<f64>,
    /// Slot range of itemset `p` (0-based) is `starts[p]..starts[p + 1]`.
    starts: Vec<usize>,
    /// `(item, itemset, slot)` for every slot, sorted.
    by_item: Vec<(ItemId, u32, u32)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QSequence {
    sid: u64,
    itemsets: Vec<QItemset>,
    su: f64,
    flat: Flat,
}

impl QSequence {
    pub fn sid(&self) -> u64 {
        self.sid
    }

    pub fn itemsets(&self) -> &[QItemset] {
        &self.itemsets
    }

    /// Cached total utility `u(s)`.
    pub fn utility(&self) -> f64 {
        self.su
    }

    /// Number of itemsets `l`.
    pub fn len(&self) -> usize {
        self.itemsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.itemsets.is_empty()
    }

    pub fn item_count(&self) -> usize {
        self.flat.items.len()
    }

    pub(crate) fn slots(&self, itemset: usize) -> Range<usize> {
        self.flat.starts[itemset]..self.flat.starts[itemset + 1]
    }

    pub(crate) fn slot_item(&self, slot: usize) -> ItemId {
        self.flat.items[slot]
    }

    pub(crate) fn slot_items(&self, range: Range<usize>) -> &[ItemId] {
        &self.flat.items[range]
    }

    pub(crate) fn slot_utility(&self, slot: usize) -> f64 {
        self.flat.utilities[slot]
    }

    pub(crate) fn remaining_after_slot(&self, slot: usize) -> f64 {
        self.flat.remaining[slot]
    }

    /// Utility of all itemsets after `itemset` (0-based).
    pub(crate) fn suffix_after_itemset(&self, itemset: usize) -> f64 {
        self.flat.remaining[self.flat.starts[itemset + 1] - 1]
    }

    /// Slot holding `item` inside `itemset` (0-based), if any.
    pub(crate) fn find_slot(&self, itemset: usize, item: ItemId) -> Option<usize> {
        let range = self.slots(itemset);
        let start = range.start;
        self.flat.items[range]
            .binary_search(&item)
            .ok()
            .map(|k| start + k)
    }

    /// `(item, itemset, slot)` entries of `item`, by ascending itemset (0-based).
    pub(crate) fn item_positions(&self, item: ItemId) -> &[(ItemId, u32, u32)] {
        let v = &self.flat.by_item;
        let lo = v.partition_point(|e| e.0 < item);
        let hi = lo + v[lo..].partition_point(|e| e.0 == item);
        &v[lo..hi]
    }

    pub fn contains_item(&self, item: ItemId) -> bool {
        !self.item_positions(item).is_empty()
    }
}

/// A quantitative sequence database with its item dictionary.
#[derive(Clone, Debug, PartialEq)]
pub struct QSequenceDatabase {
    sequences: Vec<QSequence>,
    utable: ExternalUtilityTable,
    items: Vec<Item>,
    unit_utilities: Vec<f64>,
    index: HashMap<Item, ItemId>,
    total_utility: f64,
}

impl QSequenceDatabase {
    pub fn builder(utable: ExternalUtilityTable) -> DatabaseBuilder {
        DatabaseBuilder {
            mismatch: utable.mode(),
            utable,
            raw: Vec::new(),
        }
    }

    pub fn empty() -> Self {
        Self::builder(ExternalUtilityTable::unit())
            .build()
            .expect("empty database is valid")
    }

    pub fn sequences(&self) -> &[QSequence] {
        &self.sequences
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn utility_table(&self) -> &ExternalUtilityTable {
        &self.utable
    }

    /// Cached `u(D)`.
    pub fn total_utility(&self) -> f64 {
        self.total_utility
    }

    /// Number of distinct items known to the database (sequences and utility table).
    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn item(&self, id: ItemId) -> &Item {
        &self.items[id.index()]
    }

    pub fn item_id(&self, item: &str) -> Result<ItemId> {
        let key = Item::new(item)?;
        self.index
            .get(&key)
            .copied()
            .ok_or_else(|| Error::UnknownItem(item.to_string()))
    }

    pub fn unit_utility(&self, id: ItemId) -> f64 {
        self.unit_utilities[id.index()]
    }

    /// Items occurring in at least one sequence, ascending.
    pub fn occurring_items(&self) -> Vec<ItemId> {
        let mut seen = vec![false; self.items.len()];
        for s in &self.sequences {
            for &it in &s.flat.items {
                seen[it.index()] = true;
            }
        }
        (0..self.items.len())
            .filter(|&i| seen[i])
            .map(|i| ItemId(i as u32))
            .collect()
    }

    pub fn longest_sequence_items(&self) -> usize {
        self.sequences
            .iter()
            .map(QSequence::item_count)
            .max()
            .unwrap_or(0)
    }

    /// Builds a pattern from item names, e.g. `db.pattern(&[&["a", "b"], &["c"]])`.
    pub fn pattern(&self, itemsets: &[&[&str]]) -> Result<Pattern> {
        let ids = itemsets
            .iter()
            .map(|set| {
                let mut ids = set
                    .iter()
                    .map(|name| self.item_id(name))
                    .collect::<Result<Vec<_>>>()?;
                ids.sort_unstable();
                Ok(ids)
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(ids)
    }

    pub fn display<'a>(&'a self, pattern: &'a Pattern) -> PatternDisplay<'a> {
        PatternDisplay { db: self, pattern }
    }

    /// Rebuilds the database with every external utility multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let mut utable = ExternalUtilityTable::new(self.utable.mode());
        for (id, item) in self.items.iter().enumerate() {
            utable.insert(item.clone(), self.unit_utilities[id] * factor)?;
        }
        let mut builder = Self::builder(utable);
        for s in &self.sequences {
            builder.push(s.sid, self.raw_itemsets(s), None);
        }
        builder.build()
    }

    /// Rebuilds the database with sequences in the given order.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let mut builder = Self::builder(self.utable.clone());
        for &i in order {
            let s = &self.sequences[i];
            builder.push(s.sid, self.raw_itemsets(s), None);
        }
        builder.build()
    }

    pub fn raw_itemsets(&self, s: &QSequence) -> Vec<Vec<(Item, u32)>> {
        s.itemsets
            .iter()
            .map(|set| {
                set.items
                    .iter()
                    .map(|q| (self.item(q.item).clone(), q.quantity))
                    .collect()
            })
            .collect()
    }
}

type RawSequence = (u64, Vec<Vec<(Item, u32)>>, Option<f64>);

pub struct DatabaseBuilder {
    utable: ExternalUtilityTable,
    mismatch: LookupMode,
    raw: Vec<RawSequence>,
}

impl DatabaseBuilder {
    /// Whether a declared sequence utility that disagrees with the computed
    /// one is an error (`Strict`) or a warning (`Permissive`). Defaults to the
    /// utility table's lookup mode.
    pub fn mismatch_policy(&mut self, mode: LookupMode) -> &mut Self {
        self.mismatch = mode;
        self
    }

    /// Adds a sequence; `declared` is an optional stated total utility to cross-check.
    pub fn push(
        &mut self,
        sid: u64,
        itemsets: Vec<Vec<(Item, u32)>>,
        declared: Option<f64>,
    ) -> &mut Self {
        self.raw.push((sid, itemsets, declared));
        self
    }

    /// Convenience for tests and examples: items given by name.
    pub fn push_named(&mut self, sid: u64, itemsets: &[&[(&str, u32)]]) -> Result<&mut Self> {
        let sets = itemsets
            .iter()
            .map(|set| {
                set.iter()
                    .map(|&(name, q)| Ok((Item::new(name)?, q)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.push(sid, sets, None))
    }

    pub fn build(self) -> Result<QSequenceDatabase> {
        let DatabaseBuilder {
            utable,
            mismatch,
            raw,
        } = self;

        let mut names: Vec<Item> = utable.entries.keys().cloned().collect();
        for (_, sets, _) in &raw {
            for set in sets {
                names.extend(set.iter().map(|(it, _)| it.clone()));
            }
        }
        names.sort();
        names.dedup();
        let index: HashMap<Item, ItemId> = names
            .iter()
            .enumerate()
            .map(|(i, it)| (it.clone(), ItemId(i as u32)))
            .collect();
        let unit_utilities = names
            .iter()
            .map(|it| utable.get(it))
            .collect::<Result<Vec<_>>>()?;

        let mut sids = HashSet::new();
        let mut sequences = Vec::with_capacity(raw.len());
        for (sid, sets, declared) in raw {
            if !sids.insert(sid) {
                return Err(Error::DuplicateSid(sid));
            }
            let seq = build_sequence(sid, sets, &index, &unit_utilities)?;
            if let Some(declared) = declared {
                if (declared - seq.su).abs() > 1e-6 * seq.su.max(1.0) {
                    match mismatch {
                        LookupMode::Strict => {
                            return Err(Error::UtilityMismatch {
                                sid,
                                declared,
                                computed: seq.su,
                            })
                        }
                        LookupMode::Permissive => warn!(
                            "sequence {sid}: declared utility {declared} differs from computed {}; using computed",
                            seq.su
                        ),
                    }
                }
            }
            sequences.push(seq);
        }
        let total_utility = sequences.iter().map(|s| s.su).sum();
        Ok(QSequenceDatabase {
            sequences,
            utable,
            items: names,
            unit_utilities,
            index,
            total_utility,
        })
    }
}

fn build_sequence(
    sid: u64,
    sets: Vec<Vec<(Item, u32)>>,
    index: &HashMap<Item, ItemId>,
    unit_utilities: &[f64],
) -> Result<QSequence> {
    let invalid = |reason: String| Error::InvalidSequence { sid, reason };
    if sets.is_empty() {
        return Err(invalid("sequence has no itemsets".into()));
    }
    let mut itemsets = Vec::with_capacity(sets.len());
    let mut flat = Flat {
        items: Vec::new(),
        utilities: Vec::new(),
        remaining: Vec::new(),
        starts: vec![0],
        by_item: Vec::new(),
    };
    for (p, set) in sets.into_iter().enumerate() {
        if set.is_empty() {
            return Err(invalid(format!("itemset {} is empty", p + 1)));
        }
        let mut items = Vec::with_capacity(set.len());
        for (item, quantity) in set {
            if quantity == 0 {
                return Err(invalid(format!("item `{item}` has quantity 0")));
            }
            items.push(QItem {
                item: index[&item],
                quantity,
            });
        }
        items.sort_unstable_by_key(|q| q.item);
        if let Some(w) = items.windows(2).find(|w| w[0].item == w[1].item) {
            let dup = w[0].item;
            let name = index
                .iter()
                .find(|(_, &v)| v == dup)
                .map(|(k, _)| k.to_string());
            return Err(invalid(format!(
                "item `{}` repeated in itemset {}",
                name.unwrap_or_default(),
                p + 1
            )));
        }
        for q in &items {
            flat.by_item
                .push((q.item, p as u32, flat.items.len() as u32));
            flat.items.push(q.item);
            flat.utilities
                .push(f64::from(q.quantity) * unit_utilities[q.item.index()]);
        }
        flat.starts.push(flat.items.len());
        itemsets.push(QItemset { items });
    }
    flat.by_item.sort_unstable();
    let n = flat.items.len();
    flat.remaining = vec![0.0; n];
    for k in (0..n.saturating_sub(1)).rev() {
        flat.remaining[k] = flat.remaining[k + 1] + flat.utilities[k + 1];
    }
    let su = flat.remaining[0] + flat.utilities[0];
    Ok(QSequence {
        sid,
        itemsets,
        su,
        flat,
    })
}

/// Recomputes `u(s)` from quantities and the database's utility table, bypassing the cache.
pub fn sequence_utility(s: &QSequence, db: &QSequenceDatabase) -> Result<f64> {
    let mut total = 0.0;
    for set in &s.itemsets {
        for q in &set.items {
            total += item_utility(db.item(q.item), q.quantity, &db.utable)?;
        }
    }
    Ok(total)
}

/// `u(D)`, summed over the cached sequence utilities.
pub fn database_utility(db: &QSequenceDatabase) -> f64 {
    db.sequences.iter().map(QSequence::utility).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExtensionKind {
    /// Item appended to the last itemset.
    I,
    /// Item appended as a new itemset.
    S,
}

/// A sequential pattern: itemsets of items without quantities.
///
/// Ordered by number of itemsets, then lexicographically itemset by itemset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    itemsets: Vec<Vec<ItemId>>,
}

impl Pattern {
    pub fn new(itemsets: Vec<Vec<ItemId>>) -> Result<Self> {
        if itemsets.is_empty() {
            return Err(Error::InvalidPattern("pattern has no itemsets".into()));
        }
        for set in &itemsets {
            if set.is_empty() {
                return Err(Error::InvalidPattern("empty itemset".into()));
            }
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidPattern(
                    "itemset items must be strictly ascending".into(),
                ));
            }
        }
        Ok(Pattern { itemsets })
    }

    pub fn singleton(item: ItemId) -> Self {
        Pattern {
            itemsets: vec![vec![item]],
        }
    }

    pub fn itemsets(&self) -> &[Vec<ItemId>] {
        &self.itemsets
    }

    pub fn itemset_count(&self) -> usize {
        self.itemsets.len()
    }

    pub fn item_count(&self) -> usize {
        self.itemsets.iter().map(Vec::len).sum()
    }

    pub fn last_item(&self) -> ItemId {
        *self
            .itemsets
            .last()
            .and_then(|s| s.last())
            .expect("patterns are non-empty")
    }

    pub fn items(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.itemsets.iter().flatten().copied()
    }

    /// `<t (+) i>` or `<t (x) i>`. I-extensions must append an item greater
    /// than the current last item.
    pub fn extend(&self, item: ItemId, kind: ExtensionKind) -> Result<Pattern> {
        let mut itemsets = self.itemsets.clone();
        match kind {
            ExtensionKind::I => {
                if item <= self.last_item() {
                    return Err(Error::IllegalExtension(
                        "I-extension item must follow the last item".into(),
                    ));
                }
                itemsets.last_mut().expect("non-empty").push(item);
            }
            ExtensionKind::S => itemsets.push(vec![item]),
        }
        Ok(Pattern { itemsets })
    }

    /// If `self` is `generator` extended by one item, the kind of that extension.
    pub fn extension_kind_from(&self, generator: &Pattern) -> Option<ExtensionKind> {
        let n = generator.itemsets.len();
        if self.itemsets.len() == n + 1 {
            let last = &self.itemsets[n];
            (self.itemsets[..n] == generator.itemsets[..] && last.len() == 1)
                .then_some(ExtensionKind::S)
        } else if self.itemsets.len() == n {
            let (last, mine) = self.itemsets.split_last().expect("non-empty");
            let (glast, theirs) = generator.itemsets.split_last().expect("non-empty");
            (mine == theirs && last.len() == glast.len() + 1 && last[..glast.len()] == glast[..])
                .then_some(ExtensionKind::I)
        } else {
            None
        }
    }

    /// The pattern this one was grown from, or `None` for a single item.
    pub fn generator(&self) -> Option<Pattern> {
        let mut itemsets = self.itemsets.clone();
        let last = itemsets.last_mut().expect("non-empty");
        if last.len() > 1 {
            last.pop();
        } else if itemsets.len() > 1 {
            itemsets.pop();
        } else {
            return None;
        }
        Some(Pattern { itemsets })
    }
}

impl Ord for Pattern {
    fn cmp(&self, other: &Self) -> Ordering {
        self.itemsets
            .len()
            .cmp(&other.itemsets.len())
            .then_with(|| self.itemsets.cmp(&other.itemsets))
    }
}

impl PartialOrd for Pattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders a pattern in the SPMF-like file notation: `a b -1 c -1`.
pub struct PatternDisplay<'a> {
    db: &'a QSequenceDatabase,
    pattern: &'a Pattern,
}

impl fmt::Display for PatternDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, set) in self.pattern.itemsets.iter().enumerate() {
            if j > 0 {
                f.write_str(" ")?;
            }
            for &it in set {
                write!(f, "{} ", self.db.item(it))?;
            }
            f.write_str("-1")?;
        }
        Ok(())
    }
}

/// One match of a pattern inside a sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct Occurrence {
    /// 1-based itemset index per pattern itemset, strictly increasing.
    pub positions: Vec<usize>,
    pub utility: f64,
}

impl Occurrence {
    pub fn last_position(&self) -> usize {
        *self.positions.last().expect("non-empty")
    }
}

/// Every distinct occurrence of `t` in `s`.
pub fn find_occurrences(t: &Pattern, s: &QSequence) -> Vec<Occurrence> {
    fn matched_utility(s: &QSequence, itemset: usize, want: &[ItemId]) -> Option<f64> {
        want.iter()
            .map(|&it| s.find_slot(itemset, it).map(|slot| s.slot_utility(slot)))
            .sum()
    }

    fn walk(
        t: &Pattern,
        s: &QSequence,
        j: usize,
        from: usize,
        positions: &mut Vec<usize>,
        utility: f64,
        out: &mut Vec<Occurrence>,
    ) {
        if j == t.itemsets.len() {
            out.push(Occurrence {
                positions: positions.clone(),
                utility,
            });
            return;
        }
        for p in from..s.len() {
            if let Some(u) = matched_utility(s, p, &t.itemsets[j]) {
                positions.push(p + 1);
                walk(t, s, j + 1, p + 1, positions, utility + u, out);
                positions.pop();
            }
        }
    }

    let mut out = Vec::new();
    walk(
        t,
        s,
        0,
        0,
        &mut Vec::with_capacity(t.itemsets.len()),
        0.0,
        &mut out,
    );
    out
}

/// `u(t, s)`: the best occurrence utility.
pub fn pattern_utility(t: &Pattern, s: &QSequence) -> Result<f64> {
    find_occurrences(t, s)
        .into_iter()
        .map(|o| o.utility)
        .reduce(f64::max)
        .ok_or(Error::NoOccurrence)
}

/// Containment test by greedy earliest matching.
pub fn contains(t: &Pattern, s: &QSequence) -> bool {
    let mut p = 0;
    for set in &t.itemsets {
        loop {
            if p >= s.len() {
                return false;
            }
            let hit = set.iter().all(|&it| s.find_slot(p, it).is_some());
            p += 1;
            if hit {
                break;
            }
        }
    }
    true
}

pub fn support(t: &Pattern, db: &QSequenceDatabase) -> usize {
    db.sequences.iter().filter(|s| contains(t, s)).count()
}
