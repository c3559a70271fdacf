//! Deterministic train/dev/test partitioning.
//!
//! Sizes are `floor(N * r_i)`; the one or two records lost to rounding go
//! one each to train, dev, test in that order (parts with a zero ratio are
//! skipped). With shuffling on, record indices are permuted by a
//! Fisher-Yates pass driven by SplitMix64, so a given seed produces the
//! same partition on every platform. Records keep their input order inside
//! each partition.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::{Corpus, CorpusError, Record};

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("ratios must sum to 1, got {0}")]
    BadRatio(String),
    #[error("cannot partition an empty corpus")]
    EmptyCorpus,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Train/dev/test ratios as exact rationals over a common denominator,
/// plus the shuffle seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionSpec {
    parts: [u64; 3],
    denominator: u64,
    pub seed: u64,
    pub shuffle: bool,
}

impl PartitionSpec {
    /// `parts / denominator` must sum to exactly one.
    pub fn new(parts: [u64; 3], denominator: u64, seed: u64) -> Result<Self, PartitionError> {
        let sum: u128 = parts.iter().map(|&p| p as u128).sum();
        if denominator == 0 || sum != denominator as u128 {
            return Err(PartitionError::BadRatio(format!(
                "{}/{d} + {}/{d} + {}/{d}",
                parts[0],
                parts[1],
                parts[2],
                d = denominator
            )));
        }
        Ok(PartitionSpec {
            parts,
            denominator,
            seed,
            shuffle: true,
        })
    }

    /// Integer weights, normalized by their sum ("8:1:1").
    pub fn from_weights(weights: [u64; 3], seed: u64) -> Result<Self, PartitionError> {
        let sum = weights.iter().try_fold(0u64, |acc, &w| acc.checked_add(w));
        match sum {
            Some(sum) if sum > 0 => Self::new(weights, sum, seed),
            _ => Err(PartitionError::BadRatio(format!("{weights:?}"))),
        }
    }

    pub fn with_shuffle(mut self, shuffle: bool) -> Self {
        self.shuffle = shuffle;
        self
    }

    /// Partition sizes for `n` records.
    pub fn sizes(&self, n: usize) -> [usize; 3] {
        let mut sizes = self
            .parts
            .map(|p| (n as u128 * p as u128 / self.denominator as u128) as usize);
        let mut leftover = n - sizes.iter().sum::<usize>();
        for (size, &part) in sizes.iter_mut().zip(&self.parts) {
            if leftover == 0 {
                break;
            }
            if part > 0 {
                *size += 1;
                leftover -= 1;
            }
        }
        debug_assert_eq!(leftover, 0);
        sizes
    }
}

impl Default for PartitionSpec {
    fn default() -> Self {
        PartitionSpec::from_weights([8, 1, 1], 42).expect("valid default")
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{d}:{}/{d}:{}/{d}",
            self.parts[0],
            self.parts[1],
            self.parts[2],
            d = self.denominator
        )
    }
}

/// Parses the ratio part only; the seed defaults to 42.
///
/// All-integer triples are weights ("8:1:1"). Decimal triples
/// ("0.8:0.1:0.1") must sum to exactly one. `:` and `,` both separate.
impl FromStr for PartitionSpec {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PartitionError::BadRatio(s.to_owned());
        let fields: Vec<&str> = s.split([':', ',']).map(str::trim).collect();
        let [a, b, c] = fields.as_slice() else {
            return Err(bad());
        };
        let fields = [*a, *b, *c];
        if fields.iter().all(|f| !f.contains('.')) {
            let weights = fields.map(|f| f.parse::<u64>());
            let [Ok(a), Ok(b), Ok(c)] = weights else {
                return Err(bad());
            };
            return Self::from_weights([a, b, c], 42);
        }
        let scale = fields
            .iter()
            .map(|f| f.split_once('.').map_or(0, |(_, frac)| frac.len()))
            .max()
            .unwrap_or(0);
        if scale > 18 {
            return Err(bad());
        }
        let mut parts = [0u64; 3];
        for (part, field) in parts.iter_mut().zip(fields) {
            let (int, frac) = field.split_once('.').unwrap_or((field, ""));
            let digits = format!("{int}{frac:0<scale$}");
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            *part = digits.parse().map_err(|_| bad())?;
        }
        Self::new(parts, 10u64.pow(scale as u32), 42)
    }
}

/// SplitMix64, used as the shuffle's random stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` by rejection, `bound > 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        // 2^64 mod bound; outputs under this value would bias the modulo
        let reject_under = bound.wrapping_neg() % bound;
        loop {
            let r = self.next_u64();
            if r >= reject_under {
                return r % bound;
            }
        }
    }
}

/// Fisher-Yates shuffle driven by SplitMix64.
pub fn shuffle<T>(items: &mut [T], seed: u64) {
    let mut rng = SplitMix64::new(seed);
    for i in (1..items.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

/// Assigns each of `n` indices to train/dev/test. Each list is sorted.
pub fn partition_indices(n: usize, spec: &PartitionSpec) -> [Vec<usize>; 3] {
    let mut order: Vec<usize> = (0..n).collect();
    if spec.shuffle {
        shuffle(&mut order, spec.seed);
    }
    let [train, dev, _] = spec.sizes(n);
    let mut parts = [
        order[..train].to_vec(),
        order[train..train + dev].to_vec(),
        order[train + dev..].to_vec(),
    ];
    for p in &mut parts {
        p.sort_unstable();
    }
    parts
}

/// Splits a corpus into (train, dev, test).
pub fn split_corpus(
    corpus: &Corpus,
    spec: &PartitionSpec,
) -> Result<(Corpus, Corpus, Corpus), PartitionError> {
    if corpus.is_empty() {
        return Err(PartitionError::EmptyCorpus);
    }
    let records = corpus.records();
    let pick = |idx: &[usize]| -> Result<Corpus, CorpusError> {
        Corpus::from_records(idx.iter().map(|&i| records[i].clone()))
    };
    let [train, dev, test] = partition_indices(records.len(), spec);
    Ok((pick(&train)?, pick(&dev)?, pick(&test)?))
}

/// Convenience for callers that hold plain records.
pub fn split_records(
    records: Vec<Record>,
    spec: &PartitionSpec,
) -> Result<[Vec<Record>; 3], PartitionError> {
    if records.is_empty() {
        return Err(PartitionError::EmptyCorpus);
    }
    let [train, dev, test] = partition_indices(records.len(), spec);
    let mut slots: Vec<Option<Record>> = records.into_iter().map(Some).collect();
    let mut take = |idx: Vec<usize>| {
        idx.into_iter()
            .map(|i| slots[i].take().expect("disjoint"))
            .collect()
    };
    Ok([take(train), take(dev), take(test)])
}
