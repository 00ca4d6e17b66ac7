//! Definition-level utility occupancy and the six upper bounds, computed
//! straight from occurrence enumeration. Slow, but it is the ground truth
//! the chain structures and the miner are tested against.
//!
//! Positions are 1-based itemset indices. The remaining utility occupancy at
//! position `p` counts the items of itemset `p` that come after the pattern's
//! last item plus every later itemset, so it bounds what both I- and
//! S-extensions can still add.

use crate::error::{Error, Result};
use crate::model::{contains, find_occurrences, Occurrence, Pattern, QSequence, QSequenceDatabase};

/// Slack on occupancy comparisons absorbing floating-point accumulation.
pub const UO_TOLERANCE: f64 = 1e-9;

/// Mining thresholds. Support is always held as an absolute sequence count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    min_support: usize,
    min_support_rel: Option<f64>,
    min_uo: f64,
}

impl Thresholds {
    pub fn absolute(min_support: usize, min_uo: f64, db_len: usize) -> Result<Self> {
        if min_support == 0 {
            return Err(Error::InvalidThresholds(
                "minimum support must be at least 1".into(),
            ));
        }
        if db_len > 0 && min_support > db_len {
            return Err(Error::InvalidThresholds(format!(
                "minimum support {min_support} exceeds the {db_len} sequences of the database"
            )));
        }
        check_min_uo(min_uo)?;
        Ok(Thresholds {
            min_support,
            min_support_rel: None,
            min_uo,
        })
    }

    /// `minsup = ceil(rel * |D|)`, at least 1.
    pub fn relative(rel: f64, min_uo: f64, db_len: usize) -> Result<Self> {
        if !(rel > 0.0 && rel <= 1.0) {
            return Err(Error::InvalidThresholds(format!(
                "relative minimum support {rel} outside (0, 1]"
            )));
        }
        check_min_uo(min_uo)?;
        let abs = ((rel * db_len as f64).ceil() as usize).max(1);
        Ok(Thresholds {
            min_support: abs,
            min_support_rel: Some(rel),
            min_uo,
        })
    }

    pub fn min_support(&self) -> usize {
        self.min_support
    }

    pub fn min_support_rel(&self) -> Option<f64> {
        self.min_support_rel
    }

    pub fn min_uo(&self) -> f64 {
        self.min_uo
    }

    pub fn meets_uo(&self, uo: f64) -> bool {
        uo >= self.min_uo - UO_TOLERANCE
    }
}

fn check_min_uo(min_uo: f64) -> Result<()> {
    if min_uo > 0.0 && min_uo <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidThresholds(format!(
            "minimum utility occupancy {min_uo} outside the valid range (0, 1]"
        )))
    }
}

fn denominator(s: &QSequence) -> Result<f64> {
    let su = s.utility();
    if su > 0.0 {
        Ok(su)
    } else {
        Err(Error::ZeroUtilitySequence(s.sid()))
    }
}

fn check_position(s: &QSequence, p: usize) -> Result<()> {
    if (1..=s.len()).contains(&p) {
        Ok(())
    } else {
        Err(Error::PositionOutOfRange {
            position: p,
            len: s.len(),
        })
    }
}

/// `uo(t, s) = u(t, s) / u(s)`.
pub fn uo_in_sequence(t: &Pattern, s: &QSequence) -> Result<f64> {
    let su = denominator(s)?;
    best_within(&find_occurrences(t, s), s.len())
        .map(|u| u / su)
        .ok_or(Error::NoOccurrence)
}

fn best_within(occurrences: &[Occurrence], p: usize) -> Option<f64> {
    occurrences
        .iter()
        .filter(|o| o.last_position() <= p)
        .map(|o| o.utility)
        .reduce(f64::max)
}

/// Best utility among occurrences lying inside the first `p` itemsets, over `u(s)`.
pub fn uo_at_position(t: &Pattern, s: &QSequence, p: usize) -> Result<f64> {
    check_position(s, p)?;
    let su = denominator(s)?;
    best_within(&find_occurrences(t, s), p)
        .map(|u| u / su)
        .ok_or(Error::NoOccurrence)
}

/// Average of `uo(t, s)` over the sequences containing `t`.
pub fn uo_total(t: &Pattern, db: &QSequenceDatabase) -> Result<f64> {
    let mut sum = 0.0;
    let mut sup = 0usize;
    for s in db.sequences() {
        let occ = find_occurrences(t, s);
        if let Some(best) = best_within(&occ, s.len()) {
            sum += best / denominator(s)?;
            sup += 1;
        }
    }
    if sup == 0 {
        return Err(Error::NoOccurrence);
    }
    Ok(sum / sup as f64)
}

fn remaining_utility(t: &Pattern, s: &QSequence, p: usize) -> f64 {
    let last = t.last_item();
    let idx = p - 1;
    let inside: f64 = s
        .slots(idx)
        .filter(|&slot| s.slot_item(slot) > last)
        .map(|slot| s.slot_utility(slot))
        .sum();
    inside + s.suffix_after_itemset(idx)
}

/// Remaining utility occupancy at position `p`: utility of the items of
/// itemset `p` ordered after `t`'s last item, plus all later itemsets, over `u(s)`.
pub fn ruo_at_position(t: &Pattern, s: &QSequence, p: usize) -> Result<f64> {
    check_position(s, p)?;
    let su = denominator(s)?;
    Ok(remaining_utility(t, s, p) / su)
}

fn peuo_from(occurrences: &[Occurrence], t: &Pattern, s: &QSequence, p: usize) -> Result<f64> {
    let su = denominator(s)?;
    let uo = best_within(occurrences, p).ok_or(Error::NoOccurrence)? / su;
    let ruo = remaining_utility(t, s, p) / su;
    Ok(if ruo > 0.0 { uo + ruo } else { 0.0 })
}

/// `PEUO(t, s, p)`: `uo(t, s, p) + ruo(t, s, p)` when something remains, else 0.
pub fn peuo_at(t: &Pattern, s: &QSequence, p: usize) -> Result<f64> {
    check_position(s, p)?;
    peuo_from(&find_occurrences(t, s), t, s, p)
}

/// `PEUO(t, s)`: maximum of `PEUO(t, s, p)` over the positions where an occurrence ends.
pub fn peuo_in_sequence(t: &Pattern, s: &QSequence) -> Result<f64> {
    let occ = find_occurrences(t, s);
    if occ.is_empty() {
        return Err(Error::NoOccurrence);
    }
    let mut ends: Vec<usize> = occ.iter().map(Occurrence::last_position).collect();
    ends.sort_unstable();
    ends.dedup();
    let mut best = 0.0f64;
    for p in ends {
        best = best.max(peuo_from(&occ, t, s, p)?);
    }
    Ok(best)
}

/// `(sequence index, PEUO(t, s))` for every sequence containing `t`, in database order.
pub fn peuo_values(t: &Pattern, db: &QSequenceDatabase) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    for (i, s) in db.sequences().iter().enumerate() {
        match peuo_in_sequence(t, s) {
            Ok(v) => out.push((i, v)),
            Err(Error::NoOccurrence) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// `PEUO(t) = sum of PEUO(t, s) / minsup`.
pub fn peuo_total(t: &Pattern, db: &QSequenceDatabase, min_support: usize) -> Result<f64> {
    let values = peuo_values(t, db)?;
    if values.is_empty() {
        return Err(Error::NoOccurrence);
    }
    Ok(values.iter().map(|&(_, v)| v).sum::<f64>() / min_support as f64)
}

/// Sum of the `min_support` largest values divided by `min_support`.
/// Fewer values than that are summed in full.
pub fn top_average(values: &[f64], min_support: usize) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.iter().take(min_support).sum::<f64>() / min_support as f64
}

pub fn tpuo_total(t: &Pattern, db: &QSequenceDatabase, min_support: usize) -> Result<f64> {
    let values: Vec<f64> = peuo_values(t, db)?.into_iter().map(|(_, v)| v).collect();
    if values.is_empty() {
        return Err(Error::NoOccurrence);
    }
    Ok(top_average(&values, min_support))
}

fn check_generator(t: &Pattern, l: &Pattern) -> Result<()> {
    t.extension_kind_from(l)
        .map(|_| ())
        .ok_or(Error::NotAGenerator)
}

/// The generator's per-sequence PEUO, restricted to sequences that also contain `t`.
fn generator_values(t: &Pattern, l: &Pattern, db: &QSequenceDatabase) -> Result<Vec<f64>> {
    check_generator(t, l)?;
    let mut out = Vec::new();
    for s in db.sequences() {
        if contains(t, s) {
            out.push(peuo_in_sequence(l, s)?);
        }
    }
    Ok(out)
}

/// `RSUO(t)` with `l` the generator of `t`.
pub fn rsuo_total(
    t: &Pattern,
    l: &Pattern,
    db: &QSequenceDatabase,
    min_support: usize,
) -> Result<f64> {
    Ok(generator_values(t, l, db)?.iter().sum::<f64>() / min_support as f64)
}

/// `TSUO(t)`: top-`minsup` analogue of [`rsuo_total`].
pub fn tsuo_total(
    t: &Pattern,
    l: &Pattern,
    db: &QSequenceDatabase,
    min_support: usize,
) -> Result<f64> {
    Ok(top_average(&generator_values(t, l, db)?, min_support))
}

/// `PES(t)`: sequences containing `t` in which some matched position still has remaining utility.
/// Zero when `t` occurs nowhere.
pub fn pes_total(t: &Pattern, db: &QSequenceDatabase) -> Result<usize> {
    Ok(peuo_values(t, db)?
        .iter()
        .filter(|&&(_, v)| v > 0.0)
        .count())
}

/// `RSS(t)`: the generator's PES indicator summed over sequences containing `t`.
pub fn rss_total(t: &Pattern, l: &Pattern, db: &QSequenceDatabase) -> Result<usize> {
    Ok(generator_values(t, l, db)?
        .iter()
        .filter(|&&v| v > 0.0)
        .count())
}
