//! Seeded synthetic quantitative sequence databases.
//!
//! # Random number generation
//!
//! All randomness comes from xoshiro256** seeded through SplitMix64
//! (`Xoshiro256StarStar::seed_from_u64`). Derived draws are fixed so that
//! another implementation can reproduce files byte for byte:
//!
//! * `below(n)`: rejection sampling on the raw 64-bit output. Values at or
//!   above `2^64 - (2^64 mod n)` are redrawn, the rest are reduced mod `n`.
//! * `unit()`: the top 53 bits of one output, times `2^-53`, in `[0, 1)`.
//! * `poisson(lambda)`: Knuth's multiplication method, applied to chunks of
//!   at most 500 of the mean and summed so `exp(-lambda)` never underflows.
//! * `zipf`: the cumulative weights `1/k^s` for ranks `k = 1..=n` are built
//!   once; a draw is `unit() * total` located by binary search.
//!
//! # Generation order
//!
//! External utilities for items `1..=n_items` come first, one `below` draw
//! each. Then, per sequence: the itemset count `1 + poisson(avg_itemsets - 1)`,
//! and per itemset the size `1 + poisson(avg_items - 1)` capped at `n_items`,
//! then distinct items drawn by `zipf` (duplicates redrawn), then one
//! quantity per item in ascending item order.

use std::fmt::Write as _;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::error::{Error, Result};
use crate::io::{parse_qdb_str, parse_utable_str};
use crate::model::{LookupMode, QSequenceDatabase};

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub n_sequences: usize,
    pub n_items: usize,
    pub avg_itemsets_per_sequence: f64,
    pub avg_items_per_itemset: f64,
    pub quantity_max: u32,
    pub utility_max: u32,
    /// Zipf exponent of item popularity; `0` is uniform.
    pub zipf_exponent: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n_sequences: 1000,
            n_items: 1000,
            avg_itemsets_per_sequence: 9.0,
            avg_items_per_itemset: 3.0,
            quantity_max: 5,
            utility_max: 10,
            zipf_exponent: 1.0,
            seed: 42,
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        if self.n_sequences == 0 {
            return bad("number of sequences must be positive");
        }
        if self.n_items == 0 || self.n_items > u32::MAX as usize {
            return bad("number of items must be positive");
        }
        if !(self.avg_itemsets_per_sequence >= 1.0 && self.avg_itemsets_per_sequence.is_finite()) {
            return bad("average itemsets per sequence must be at least 1");
        }
        if !(self.avg_items_per_itemset >= 1.0 && self.avg_items_per_itemset.is_finite()) {
            return bad("average items per itemset must be at least 1");
        }
        if self.quantity_max == 0 || self.utility_max == 0 {
            return bad("quantity and utility maxima must be at least 1");
        }
        if !(self.zipf_exponent >= 0.0 && self.zipf_exponent.is_finite()) {
            return bad("zipf exponent must be non-negative");
        }
        Ok(())
    }
}

/// The generator described in the module docs.
pub struct Prng(Xoshiro256StarStar);

impl Prng {
    pub fn new(seed: u64) -> Self {
        Prng(Xoshiro256StarStar::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - (u64::MAX % n + 1) % n;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % n;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn between(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn poisson(&mut self, lambda: f64) -> u64 {
        const CHUNK: f64 = 500.0;
        let mut rest = lambda.max(0.0);
        let mut total = 0;
        while rest > 0.0 {
            let l = rest.min(CHUNK);
            rest -= l;
            let limit = (-l).exp();
            let mut p = 1.0;
            let mut k = 0u64;
            loop {
                p *= self.unit();
                if p <= limit {
                    break;
                }
                k += 1;
            }
            total += k;
        }
        total
    }
}

/// Ranks `0..n` drawn with probability proportional to `1/(rank+1)^s`.
pub struct Zipf {
    cumulative: Vec<f64>,
}

impl Zipf {
    pub fn new(n: usize, exponent: f64) -> Self {
        let mut acc = 0.0;
        let cumulative = (1..=n)
            .map(|k| {
                acc += (k as f64).powf(-exponent);
                acc
            })
            .collect();
        Zipf { cumulative }
    }

    pub fn sample(&self, rng: &mut Prng) -> usize {
        let total = *self.cumulative.last().expect("non-empty alphabet");
        let x = rng.unit() * total;
        self.cumulative
            .partition_point(|&c| c <= x)
            .min(self.cumulative.len() - 1)
    }
}

/// The generated files as text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generated {
    pub qdb: String,
    pub utable: String,
}

impl Generated {
    /// Parses the generated text back, in strict mode.
    pub fn database(&self) -> Result<QSequenceDatabase> {
        let utable = parse_utable_str(&self.utable, LookupMode::Strict)?;
        parse_qdb_str(&self.qdb, Some(utable), LookupMode::Strict)
    }
}

/// Produces a q-sequence file and a matching utility table.
pub fn generate(params: &GenParams) -> Result<Generated> {
    params.validate()?;
    let mut rng = Prng::new(params.seed);
    let n = params.n_items;

    let utilities: Vec<u64> = (0..n)
        .map(|_| rng.between(1, params.utility_max.into()))
        .collect();
    let mut utable = String::with_capacity(n * 8);
    for (i, p) in utilities.iter().enumerate() {
        writeln!(utable, "{}\t{}", i + 1, p).expect("writing to a String");
    }

    let zipf = Zipf::new(n, params.zipf_exponent);
    let mut qdb = String::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut taken = vec![false; n];
    for _ in 0..params.n_sequences {
        let itemsets = 1 + rng.poisson(params.avg_itemsets_per_sequence - 1.0);
        let mut su = 0u64;
        for j in 0..itemsets {
            let size = (1 + rng.poisson(params.avg_items_per_itemset - 1.0)).min(n as u64) as usize;
            chosen.clear();
            while chosen.len() < size {
                let rank = zipf.sample(&mut rng);
                if !taken[rank] {
                    taken[rank] = true;
                    chosen.push(rank);
                }
            }
            chosen.sort_unstable();
            for (k, &rank) in chosen.iter().enumerate() {
                taken[rank] = false;
                let q = rng.between(1, params.quantity_max.into());
                su += q * utilities[rank];
                if k > 0 {
                    qdb.push(' ');
                }
                write!(qdb, "{}[{}]", rank + 1, q).expect("writing to a String");
            }
            qdb.push_str(if j + 1 == itemsets { " -1 -2" } else { " -1 " });
        }
        writeln!(qdb, " SUtility:{su}").expect("writing to a String");
    }
    Ok(Generated { qdb, utable })
}
