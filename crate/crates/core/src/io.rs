//! Text formats: q-sequence databases, utility tables, result files and
//! benchmark statistics.
//!
//! A q-sequence line looks like
//!
//! ```text
//! b[2] d[1] -1 g[1] -1 f[1] -1 -2 SUtility:11
//! ```
//!
//! Items carry their quantity in brackets, `-1` closes an itemset, `-2`
//! closes the sequence and the optional `SUtility:` annotation is checked
//! against the computed sequence utility. Blank lines and lines starting
//! with `#` or `@` are skipped.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::miner::{MiningStats, ResultSet, Strategy, Variant};
use crate::model::{ExternalUtilityTable, Item, LookupMode, QSequenceDatabase};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn is_skipped(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#') || t.starts_with('@')
}

/// Whitespace-separated tokens with their 1-based character column.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> + '_ {
    let mut rest = line;
    let mut col = 1;
    std::iter::from_fn(move || {
        let skipped = rest.len() - rest.trim_start().len();
        col += rest[..skipped].chars().count();
        rest = &rest[skipped..];
        if rest.is_empty() {
            return None;
        }
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let (tok, tail) = rest.split_at(end);
        let at = col;
        col += tok.chars().count();
        rest = tail;
        Some((at, tok))
    })
}

/// Reads `ITEMID <TAB> POSNUMBER` lines.
pub fn parse_utable_str(text: &str, mode: LookupMode) -> Result<ExternalUtilityTable> {
    let mut table = ExternalUtilityTable::new(mode);
    let mut seen = std::collections::HashSet::new();
    for (n, line) in text.lines().enumerate() {
        let lineno = n + 1;
        if is_skipped(line) {
            continue;
        }
        let toks: Vec<(usize, &str)> = tokens(line).collect();
        let [(_, id), (col, value)] = toks[..] else {
            return Err(Error::parse(lineno, 1, "expected `ITEMID <TAB> UTILITY`"));
        };
        let item = Item::new(id).map_err(|e| Error::parse(lineno, 1, e.to_string()))?;
        let utility: f64 = value
            .parse()
            .map_err(|_| Error::parse(lineno, col, format!("`{value}` is not a number")))?;
        if !seen.insert(item.clone()) {
            return Err(Error::parse(lineno, 1, format!("item `{id}` listed twice")));
        }
        table
            .insert(item, utility)
            .map_err(|e| Error::parse(lineno, col, e.to_string()))?;
    }
    Ok(table)
}

pub fn parse_utable(path: &Path, mode: LookupMode) -> Result<ExternalUtilityTable> {
    parse_utable_str(&read(path)?, mode)
}

pub fn format_utable(table: &ExternalUtilityTable) -> String {
    let mut out = String::new();
    for (item, p) in table.iter() {
        writeln!(out, "{item}\t{p}").expect("writing to a String");
    }
    out
}

pub fn write_utable(table: &ExternalUtilityTable, path: &Path) -> Result<()> {
    write(path, &format_utable(table))
}

fn parse_qitem(tok: &str, lineno: usize, col: usize) -> Result<(Item, u32)> {
    let open = tok.find('[').ok_or_else(|| {
        Error::parse(lineno, col, format!("expected ITEM[QUANTITY], got `{tok}`"))
    })?;
    if !tok.ends_with(']') || open == 0 {
        return Err(Error::parse(
            lineno,
            col,
            format!("expected ITEM[QUANTITY], got `{tok}`"),
        ));
    }
    let item = Item::new(&tok[..open]).map_err(|e| Error::parse(lineno, col, e.to_string()))?;
    let qcol = col + tok[..=open].chars().count();
    let digits = &tok[open + 1..tok.len() - 1];
    let quantity: u32 = digits.parse().ok().filter(|&q| q > 0).ok_or_else(|| {
        Error::parse(
            lineno,
            qcol,
            format!("quantity `{digits}` is not a positive integer"),
        )
    })?;
    Ok((item, quantity))
}

type ParsedLine = (Vec<Vec<(Item, u32)>>, Option<f64>);

fn parse_sequence_line(line: &str, lineno: usize) -> Result<ParsedLine> {
    let mut itemsets = Vec::new();
    let mut current: Vec<(Item, u32)> = Vec::new();
    let mut declared = None;
    let mut closed = false;
    for (col, tok) in tokens(line) {
        if closed {
            let value = tok
                .strip_prefix("SUtility:")
                .ok_or_else(|| Error::parse(lineno, col, format!("unexpected `{tok}` after -2")))?;
            if declared.is_some() {
                return Err(Error::parse(lineno, col, "SUtility given twice"));
            }
            let v: f64 = value
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite() && *v >= 0.0)
                .ok_or_else(|| {
                    Error::parse(lineno, col + 9, format!("`{value}` is not a utility"))
                })?;
            declared = Some(v);
            continue;
        }
        match tok {
            "-1" => {
                if current.is_empty() {
                    return Err(Error::parse(lineno, col, "empty itemset"));
                }
                itemsets.push(std::mem::take(&mut current));
            }
            "-2" => {
                if !current.is_empty() {
                    return Err(Error::parse(
                        lineno,
                        col,
                        "itemset not closed by -1 before -2",
                    ));
                }
                if itemsets.is_empty() {
                    return Err(Error::parse(lineno, col, "sequence has no itemsets"));
                }
                closed = true;
            }
            _ => current.push(parse_qitem(tok, lineno, col)?),
        }
    }
    if !closed {
        let col = line.trim_end().chars().count() + 1;
        return Err(Error::parse(lineno, col, "sequence not terminated by -2"));
    }
    Ok((itemsets, declared))
}

/// Parses a q-sequence file. Without a utility table every external utility
/// is 1, so quantities act as utilities directly. `mode` governs unknown
/// items and declared-utility mismatches.
pub fn parse_qdb_str(
    text: &str,
    utable: Option<ExternalUtilityTable>,
    mode: LookupMode,
) -> Result<QSequenceDatabase> {
    let utable = match utable {
        Some(mut t) => {
            t.set_mode(mode);
            t
        }
        None => ExternalUtilityTable::unit(),
    };
    let mut builder = QSequenceDatabase::builder(utable);
    builder.mismatch_policy(mode);
    let mut sid = 0u64;
    for (n, line) in text.lines().enumerate() {
        if is_skipped(line) {
            continue;
        }
        let (itemsets, declared) = parse_sequence_line(line, n + 1)?;
        sid += 1;
        builder.push(sid, itemsets, declared);
    }
    builder.build()
}

pub fn parse_qdb(
    qdb_path: &Path,
    utable_path: Option<&Path>,
    mode: LookupMode,
) -> Result<QSequenceDatabase> {
    let utable = utable_path.map(|p| parse_utable(p, mode)).transpose()?;
    parse_qdb_str(&read(qdb_path)?, utable, mode)
}

fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Canonical serialization: items in database order within each itemset and
/// the computed sequence utility as `SUtility`.
pub fn format_qdb(db: &QSequenceDatabase) -> String {
    let mut out = String::new();
    for s in db.sequences() {
        for set in s.itemsets() {
            for (k, q) in set.items().iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                write!(out, "{}[{}]", db.item(q.item), q.quantity).expect("writing to a String");
            }
            out.push_str(" -1 ");
        }
        writeln!(out, "-2 SUtility:{}", format_number(s.utility())).expect("writing to a String");
    }
    out
}

pub fn write_qdb(db: &QSequenceDatabase, path: &Path) -> Result<()> {
    write(path, &format_qdb(db))
}

/// One line per pattern, `a b -1 c -1 -2 #SUP: 2 #UO: 0.760000`, after a
/// header comment.
pub fn format_results(rs: &ResultSet, db: &QSequenceDatabase) -> String {
    let mut out = format!(
        "# {} patterns: ITEMS -1 ... -2 #SUP: support #UO: utility occupancy\n",
        rs.len()
    );
    for e in rs.entries() {
        writeln!(
            out,
            "{} -2 #SUP: {} #UO: {:.6}",
            db.display(&e.pattern),
            e.support,
            e.utility_occupancy
        )
        .expect("writing to a String");
    }
    out
}

pub fn write_results(rs: &ResultSet, db: &QSequenceDatabase, path: &Path) -> Result<()> {
    write(path, &format_results(rs, db))
}

/// A benchmark record: one mining run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub variant: Variant,
    pub minsup: usize,
    pub minuo: f64,
    pub candidates: u64,
    pub huosps: usize,
    pub ms: f64,
    /// Pruning events for strategies 1 to 7.
    pub pruned: [u64; 7],
    pub peak_patterns_alive: usize,
}

impl StatsRow {
    pub fn new(variant: Variant, minsup: usize, minuo: f64, stats: &MiningStats) -> Self {
        StatsRow {
            variant,
            minsup,
            minuo,
            candidates: stats.candidates,
            huosps: stats.huosps,
            ms: stats.wall_time_ms,
            pruned: Strategy::ALL.map(|s| stats.pruned(s)),
            peak_patterns_alive: stats.peak_patterns_alive,
        }
    }
}

pub const STATS_CSV_HEADER: &str =
    "variant,minsup,minuo,candidates,huosps,ms,pruned_s1,pruned_s2,pruned_s3,pruned_s4,pruned_s5,pruned_s6,pruned_s7,peak_patterns_alive";

pub fn format_stats_csv(rows: &[StatsRow]) -> String {
    let mut out = String::from(STATS_CSV_HEADER);
    out.push('\n');
    for r in rows {
        write!(
            out,
            "{},{},{},{},{},{:.3}",
            r.variant, r.minsup, r.minuo, r.candidates, r.huosps, r.ms
        )
        .expect("writing to a String");
        for p in r.pruned {
            write!(out, ",{p}").expect("writing to a String");
        }
        writeln!(out, ",{}", r.peak_patterns_alive).expect("writing to a String");
    }
    out
}

pub fn format_stats_json(rows: &[StatsRow]) -> String {
    serde_json::to_string_pretty(rows).expect("stats rows serialize") + "\n"
}

pub fn write_stats(rows: &[StatsRow], path: &Path, as_csv: bool) -> Result<()> {
    let text = if as_csv {
        format_stats_csv(rows)
    } else {
        format_stats_json(rows)
    };
    write(path, &text)
}
