//! Exhaustive reference miner for small databases.
//!
//! Patterns are grown by every I- and S-extension over the items that occur
//! in the database and abandoned only when their support falls below
//! `minsup`. Every value is computed from the occurrence-level definitions
//! in [`crate::model`] and [`crate::occupancy`], never from chains or bounds.

use crate::datagen::Prng;
use crate::error::{Error, Result};
use crate::miner::{HuospEntry, ResultSet};
use crate::model::{
    support, ExtensionKind, ExternalUtilityTable, Item, LookupMode, Pattern, QSequenceDatabase,
};
use crate::occupancy::{peuo_values, uo_total, Thresholds};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_sequences: usize,
    pub max_distinct_items: usize,
    /// Itemsets per sequence.
    pub max_sequence_length: usize,
    /// Items per pattern.
    pub max_pattern_length: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_sequences: 10,
            max_distinct_items: 7,
            max_sequence_length: 8,
            max_pattern_length: 6,
        }
    }
}

impl OracleLimits {
    pub fn check(&self, db: &QSequenceDatabase) -> Result<()> {
        if [
            self.max_sequences,
            self.max_distinct_items,
            self.max_sequence_length,
            self.max_pattern_length,
        ]
        .contains(&0)
        {
            return Err(Error::InvalidParams(
                "oracle limits must be positive".into(),
            ));
        }
        if db.len() > self.max_sequences {
            return Err(Error::LimitsExceeded(format!(
                "{} sequences, at most {} allowed",
                db.len(),
                self.max_sequences
            )));
        }
        let items = db.occurring_items().len();
        if items > self.max_distinct_items {
            return Err(Error::LimitsExceeded(format!(
                "{items} distinct items, at most {} allowed",
                self.max_distinct_items
            )));
        }
        if let Some(s) = db
            .sequences()
            .iter()
            .find(|s| s.len() > self.max_sequence_length)
        {
            return Err(Error::LimitsExceeded(format!(
                "sequence {} has {} itemsets, at most {} allowed",
                s.sid(),
                s.len(),
                self.max_sequence_length
            )));
        }
        Ok(())
    }
}

/// A frequent pattern with the reference values the theorem checks need.
#[derive(Clone, Debug, PartialEq)]
pub struct EnumeratedPattern {
    pub pattern: Pattern,
    pub support: usize,
    pub utility_occupancy: f64,
    /// `(sequence index, PEUO(t, s))` for every sequence containing the pattern.
    pub peuo_values: Vec<(usize, f64)>,
}

/// Every pattern with support at least `min_support`, in canonical order.
pub fn oracle_enumerate(
    db: &QSequenceDatabase,
    min_support: usize,
    limits: &OracleLimits,
) -> Result<Vec<EnumeratedPattern>> {
    limits.check(db)?;
    let min_support = min_support.max(1);
    let items = db.occurring_items();
    let mut out = Vec::new();
    let mut stack: Vec<Pattern> = items.iter().rev().map(|&i| Pattern::singleton(i)).collect();
    while let Some(t) = stack.pop() {
        let sup = support(&t, db);
        if sup < min_support {
            continue;
        }
        out.push(EnumeratedPattern {
            utility_occupancy: uo_total(&t, db)?,
            peuo_values: peuo_values(&t, db)?,
            support: sup,
            pattern: t.clone(),
        });
        if t.item_count() >= limits.max_pattern_length {
            continue;
        }
        for &item in items.iter().rev() {
            stack.push(t.extend(item, ExtensionKind::S)?);
            if item > t.last_item() {
                stack.push(t.extend(item, ExtensionKind::I)?);
            }
        }
    }
    out.sort_by(|a, b| a.pattern.cmp(&b.pattern));
    Ok(out)
}

/// The high utility-occupancy patterns by direct application of the definition.
pub fn oracle_mine(
    db: &QSequenceDatabase,
    thresholds: &Thresholds,
    limits: &OracleLimits,
) -> Result<ResultSet> {
    let entries = oracle_enumerate(db, thresholds.min_support(), limits)?
        .into_iter()
        .filter(|e| thresholds.meets_uo(e.utility_occupancy))
        .map(|e| HuospEntry {
            pattern: e.pattern,
            support: e.support,
            utility_occupancy: e.utility_occupancy,
        })
        .collect();
    Ok(ResultSet::from_entries(entries))
}

/// Shape of the small databases used by equivalence and property tests.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomDbParams {
    pub min_sequences: usize,
    pub sequences: usize,
    pub items: usize,
    pub max_itemsets: usize,
    pub max_itemset_size: usize,
    pub max_quantity: u32,
    pub max_utility: u32,
}

impl Default for RandomDbParams {
    fn default() -> Self {
        RandomDbParams {
            min_sequences: 1,
            sequences: 8,
            items: 5,
            max_itemsets: 5,
            max_itemset_size: 3,
            max_quantity: 5,
            max_utility: 5,
        }
    }
}

/// A seeded random database; item names are `a`, `b`, ... Sequence counts,
/// itemset counts and sizes are uniform up to the given maxima.
pub fn random_database(seed: u64, params: &RandomDbParams) -> Result<QSequenceDatabase> {
    if params.items == 0 || params.items > 26 || params.max_itemsets == 0 {
        return Err(Error::InvalidParams(
            "random database needs 1..=26 items".into(),
        ));
    }
    if params.min_sequences == 0 || params.min_sequences > params.sequences {
        return Err(Error::InvalidParams(
            "random database needs 1 <= min_sequences <= sequences".into(),
        ));
    }
    if params.max_itemset_size == 0 || params.max_quantity == 0 || params.max_utility == 0 {
        return Err(Error::InvalidParams(
            "random database maxima must be positive".into(),
        ));
    }
    let mut rng = Prng::new(seed);
    let names: Vec<Item> = (0..params.items)
        .map(|i| Item::new(((b'a' + i as u8) as char).to_string()))
        .collect::<Result<_>>()?;
    let mut utable = ExternalUtilityTable::new(LookupMode::Strict);
    for name in &names {
        utable.insert(
            name.clone(),
            rng.between(1, params.max_utility.into()) as f64,
        )?;
    }
    let mut builder = QSequenceDatabase::builder(utable);
    let n = rng.between(params.min_sequences as u64, params.sequences as u64);
    let size_cap = params.max_itemset_size.min(params.items) as u64;
    for sid in 1..=n {
        let len = rng.between(1, params.max_itemsets as u64);
        let mut sets = Vec::new();
        for _ in 0..len {
            let size = rng.between(1, size_cap) as usize;
            let mut picked = vec![false; params.items];
            let mut set = Vec::new();
            while set.len() < size {
                let i = rng.below(params.items as u64) as usize;
                if !picked[i] {
                    picked[i] = true;
                    set.push(i);
                }
            }
            set.sort_unstable();
            sets.push(
                set.into_iter()
                    .map(|i| {
                        (
                            names[i].clone(),
                            rng.between(1, params.max_quantity.into()) as u32,
                        )
                    })
                    .collect(),
            );
        }
        builder.push(sid, sets, None);
    }
    builder.build()
}
