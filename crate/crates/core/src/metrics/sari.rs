//! SARI: add-F1, keep-F1 and deletion precision over 1..4-grams.
//!
//! Follows the tensor2tensor formulation: n-grams are sets, reference
//! n-grams are weighted by the share of references containing them,
//! 0/0 counts as 1, and the corpus score is the mean of sentence scores.
//! Text is 13a-tokenized and lowercased first.

use std::collections::{HashMap, HashSet};

use super::bleu::tokenize_13a;
use super::{EvalInstance, MetricError};

pub const MAX_GRAM: usize = 4;

/// Per-sentence components, each in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SariComponents {
    pub add: f64,
    pub keep: f64,
    pub delete: f64,
}

impl SariComponents {
    pub fn score(&self) -> f64 {
        (self.add + self.keep + self.delete) / 3.0
    }
}

fn words(text: &str) -> Vec<String> {
    tokenize_13a(text.trim_end())
        .to_lowercase()
        .split(' ')
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

fn grams(tokens: &[String], n: usize) -> HashSet<&[String]> {
    tokens.windows(n).collect()
}

fn f1(tp: f64, selected: f64, relevant: f64) -> f64 {
    let precision = if selected > 0.0 { tp / selected } else { 1.0 };
    let recall = if relevant > 0.0 { tp / relevant } else { 1.0 };
    if precision > 0.0 && recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

/// SARI components for one source/prediction pair.
pub fn sentence_sari<S: AsRef<str>>(
    source: &str,
    prediction: &str,
    references: &[S],
) -> SariComponents {
    let src = words(source);
    let pred = words(prediction);
    let refs: Vec<Vec<String>> = references.iter().map(|r| words(r.as_ref())).collect();

    let mut total = SariComponents {
        add: 0.0,
        keep: 0.0,
        delete: 0.0,
    };
    for n in 1..=MAX_GRAM {
        let s = grams(&src, n);
        let p = grams(&pred, n);
        let mut weight: HashMap<&[String], f64> = HashMap::new();
        let mut nonempty = 0usize;
        for r in &refs {
            let g = grams(r, n);
            if !g.is_empty() {
                nonempty += 1;
                for gram in g {
                    *weight.entry(gram).or_insert(0.0) += 1.0;
                }
            }
        }
        for w in weight.values_mut() {
            *w /= nonempty as f64;
        }
        let w = |g: &[String]| weight.get(g).copied().unwrap_or(0.0);

        let kept: Vec<&[String]> = s.intersection(&p).copied().collect();
        let keep_tp: f64 = kept.iter().map(|g| w(g)).sum();
        let keep_relevant: f64 = s.iter().map(|g| w(g)).sum();
        total.keep += f1(keep_tp, kept.len() as f64, keep_relevant);

        let deleted: Vec<&[String]> = s.difference(&p).copied().collect();
        let del_tp: f64 = deleted.iter().map(|g| 1.0 - w(g)).sum();
        total.delete += if deleted.is_empty() {
            1.0
        } else {
            del_tp / deleted.len() as f64
        };

        let added: Vec<&[String]> = p.difference(&s).copied().collect();
        let add_tp = added.iter().filter(|g| weight.contains_key(**g)).count();
        let add_relevant = weight.keys().filter(|g| !s.contains(*g)).count();
        total.add += f1(add_tp as f64, added.len() as f64, add_relevant as f64);
    }
    let m = MAX_GRAM as f64;
    SariComponents {
        add: total.add / m,
        keep: total.keep / m,
        delete: total.delete / m,
    }
}

/// Corpus SARI in [0, 100]: the mean of sentence scores.
pub fn sari(instances: &[EvalInstance]) -> Result<f64, MetricError> {
    if instances.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let sum: f64 = instances
        .iter()
        .map(|i| sentence_sari(i.source(), i.hypothesis(), i.references()).score())
        .sum();
    Ok(100.0 * sum / instances.len() as f64)
}
