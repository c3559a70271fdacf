//! Corpus BLEU with the 13a tokenizer, matching the standard scorer's
//! defaults (4-gram, exponential smoothing, closest-length brevity penalty).

use std::collections::HashMap;
use std::sync::OnceLock;

use regex::Regex;
use serde::Serialize;

use super::{EvalInstance, MetricError};

pub const MAX_ORDER: usize = 4;

/// Configuration string recorded alongside every BLEU score.
pub const BLEU_SIGNATURE: &str = "nrefs:var|case:mixed|eff:no|tok:13a|smooth:exp|version:2.6.0";

fn python_whitespace(c: char) -> bool {
    c.is_whitespace() || matches!(c, '\u{1c}'..='\u{1f}')
}

/// mteval-v13a tokenization.
pub fn tokenize_13a(line: &str) -> String {
    static RULES: OnceLock<[(Regex, &'static str); 4]> = OnceLock::new();
    let rules = RULES.get_or_init(|| {
        [
            (Regex::new(r"([\{-~\[-`\x20-&\(-\+:-@/])").unwrap(), " $1 "),
            (Regex::new(r"([^0-9])([\.,])").unwrap(), "$1 $2 "),
            (Regex::new(r"([\.,])([^0-9])").unwrap(), " $1 $2"),
            (Regex::new(r"([0-9])(-)").unwrap(), "$1 $2 "),
        ]
    });

    let mut line = line
        .replace("<skipped>", "")
        .replace("-\n", "")
        .replace('\n', " ");
    if line.contains('&') {
        line = line
            .replace("&quot;", "\"")
            .replace("&amp;", "&")
            .replace("&lt;", "<")
            .replace("&gt;", ">");
    }
    let mut line = format!(" {line} ");
    for (re, rep) in rules {
        line = re.replace_all(&line, *rep).into_owned();
    }
    line.split(python_whitespace)
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn tokens(text: &str) -> Vec<String> {
    tokenize_13a(text.trim_end_matches(python_whitespace))
        .split(' ')
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

fn ngram_counts(tokens: &[String]) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    for n in 1..=MAX_ORDER {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Sufficient statistics, summed over a corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BleuStats {
    pub sys_len: usize,
    pub ref_len: usize,
    pub correct: [usize; MAX_ORDER],
    pub total: [usize; MAX_ORDER],
}

impl BleuStats {
    /// Statistics of one hypothesis against its references.
    pub fn segment<S: AsRef<str>>(hypothesis: &str, references: &[S]) -> Self {
        let hyp = tokens(hypothesis);
        let refs: Vec<Vec<String>> = references.iter().map(|r| tokens(r.as_ref())).collect();

        let mut max_ref: HashMap<&[String], usize> = HashMap::new();
        for r in &refs {
            for (gram, c) in ngram_counts(r) {
                let e = max_ref.entry(gram).or_insert(0);
                *e = (*e).max(c);
            }
        }
        // closest reference length, shorter wins ties
        let ref_len = refs
            .iter()
            .map(Vec::len)
            .min_by_key(|&l| (l.abs_diff(hyp.len()), l))
            .unwrap_or(0);

        let mut stats = BleuStats {
            sys_len: hyp.len(),
            ref_len,
            ..Default::default()
        };
        for (gram, c) in ngram_counts(&hyp) {
            let n = gram.len() - 1;
            stats.total[n] += c;
            stats.correct[n] += c.min(max_ref.get(gram).copied().unwrap_or(0));
        }
        stats
    }

    pub fn add(&mut self, other: &BleuStats) {
        self.sys_len += other.sys_len;
        self.ref_len += other.ref_len;
        for n in 0..MAX_ORDER {
            self.correct[n] += other.correct[n];
            self.total[n] += other.total[n];
        }
    }

    pub fn brevity_penalty(&self) -> f64 {
        if self.sys_len >= self.ref_len {
            1.0
        } else if self.sys_len == 0 {
            0.0
        } else {
            (1.0 - self.ref_len as f64 / self.sys_len as f64).exp()
        }
    }

    /// Score in [0, 100].
    pub fn score(&self) -> f64 {
        if self.correct.iter().all(|&c| c == 0) {
            return 0.0;
        }
        let mut precisions = [0.0f64; MAX_ORDER];
        let mut smooth = 1.0;
        for ((p, &correct), &total) in precisions.iter_mut().zip(&self.correct).zip(&self.total) {
            if total == 0 {
                break;
            }
            *p = if correct == 0 {
                smooth *= 2.0;
                100.0 / (smooth * total as f64)
            } else {
                100.0 * correct as f64 / total as f64
            };
        }
        let log_sum: f64 = precisions
            .iter()
            .map(|&p| if p == 0.0 { -9_999_999_999.0 } else { p.ln() })
            .sum();
        self.brevity_penalty() * (log_sum / MAX_ORDER as f64).exp()
    }
}

/// Corpus BLEU over hypotheses scored against their reference lists.
pub fn corpus_bleu(instances: &[EvalInstance]) -> Result<f64, MetricError> {
    if instances.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let mut stats = BleuStats::default();
    for inst in instances {
        stats.add(&BleuStats::segment(inst.hypothesis(), inst.references()));
    }
    Ok(stats.score())
}
