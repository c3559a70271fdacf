//! Model-free backends for tests and dry runs.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;
use std::path::Path;

use serde::Deserialize;

use super::{BackendError, ClassifierBackend, Label, NliDistribution, NliPair};
use crate::text::normalize;

fn words(text: &str) -> HashSet<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Heuristic stub: identical normalized strings are certain entailment;
/// otherwise entailment equals the share of hypothesis words found in the
/// premise, and the remainder is split 2:1 between neutral and
/// contradiction.
#[derive(Debug, Clone, Copy, Default)]
pub struct EchoBackend;

impl EchoBackend {
    pub fn score(premise: &str, hypothesis: &str) -> NliDistribution {
        if normalize(premise) == normalize(hypothesis) {
            return NliDistribution::certain(Label::Entailment);
        }
        let hyp = words(hypothesis);
        if hyp.is_empty() {
            return NliDistribution::certain(Label::Neutral);
        }
        let prem = words(premise);
        let overlap = hyp.iter().filter(|w| prem.contains(*w)).count() as f64 / hyp.len() as f64;
        let rest = 1.0 - overlap;
        let contradiction = rest / 3.0;
        NliDistribution::new(overlap, rest - contradiction, contradiction)
            .expect("stub distribution on the simplex")
    }
}

impl ClassifierBackend for EchoBackend {
    fn classify_batch(&self, pairs: &[NliPair<'_>]) -> Result<Vec<NliDistribution>, BackendError> {
        Ok(pairs
            .iter()
            .map(|p| Self::score(p.premise, p.hypothesis))
            .collect())
    }

    fn describe(&self) -> String {
        "stub:echo".into()
    }
}

/// What a [`TableBackend`] does with a pair missing from its table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fallback {
    /// Fail with [`BackendError::MissingPair`].
    #[default]
    Error,
    /// Score with [`EchoBackend`].
    Echo,
}

#[derive(Deserialize)]
struct TableRow {
    premise: String,
    hypothesis: String,
    #[serde(flatten)]
    distribution: NliDistribution,
}

/// Table-driven stub: exact (premise, hypothesis) → distribution, keyed on
/// normalized text.
#[derive(Debug, Clone, Default)]
pub struct TableBackend {
    table: HashMap<(String, String), NliDistribution>,
    fallback: Fallback,
}

impl TableBackend {
    pub fn new(fallback: Fallback) -> Self {
        TableBackend {
            table: HashMap::new(),
            fallback,
        }
    }

    pub fn insert(&mut self, premise: &str, hypothesis: &str, distribution: NliDistribution) {
        self.table
            .insert((normalize(premise), normalize(hypothesis)), distribution);
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Reads JSONL rows of the form
    /// `{"premise": ..., "hypothesis": ..., "entailment": p, "neutral": p, "contradiction": p}`.
    pub fn from_jsonl(reader: impl BufRead, fallback: Fallback) -> Result<Self, BackendError> {
        let mut backend = TableBackend::new(fallback);
        for (n, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| BackendError::Transport(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let row: TableRow = serde_json::from_str(&line)
                .map_err(|e| BackendError::Decode(format!("table line {}: {e}", n + 1)))?;
            backend.insert(&row.premise, &row.hypothesis, row.distribution);
        }
        Ok(backend)
    }

    pub fn load(path: impl AsRef<Path>, fallback: Fallback) -> Result<Self, BackendError> {
        let file = std::fs::File::open(path.as_ref())
            .map_err(|e| BackendError::Transport(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_jsonl(std::io::BufReader::new(file), fallback)
    }

    fn lookup(&self, pair: &NliPair<'_>) -> Result<NliDistribution, BackendError> {
        let key = (normalize(pair.premise), normalize(pair.hypothesis));
        match (self.table.get(&key), self.fallback) {
            (Some(d), _) => Ok(*d),
            (None, Fallback::Echo) => Ok(EchoBackend::score(pair.premise, pair.hypothesis)),
            (None, Fallback::Error) => Err(BackendError::MissingPair {
                premise: key.0,
                hypothesis: key.1,
            }),
        }
    }
}

impl ClassifierBackend for TableBackend {
    fn classify_batch(&self, pairs: &[NliPair<'_>]) -> Result<Vec<NliDistribution>, BackendError> {
        pairs.iter().map(|p| self.lookup(p)).collect()
    }

    fn describe(&self) -> String {
        format!(
            "stub:table({} entries, fallback {:?})",
            self.table.len(),
            self.fallback
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair<'a>(premise: &'a str, hypothesis: &'a str) -> NliPair<'a> {
        NliPair {
            premise,
            hypothesis,
        }
    }

    #[test]
    fn echo_identical_strings_entail() {
        let d = EchoBackend::score("X.", " X. ");
        assert_eq!(d, NliDistribution::certain(Label::Entailment));
    }

    #[test]
    fn echo_overlap_is_proportional() {
        let d = EchoBackend::score("The cat sat on the mat.", "The cat slept.");
        // {the, cat} of {the, cat, slept}
        assert!((d.entailment() - 2.0 / 3.0).abs() < 1e-12);
        assert!((d.neutral() - 2.0 / 9.0).abs() < 1e-12);
        assert!((d.contradiction() - 1.0 / 9.0).abs() < 1e-12);
        assert_eq!(
            EchoBackend::score("abc", "..."),
            NliDistribution::certain(Label::Neutral)
        );
    }

    #[test]
    fn echo_is_deterministic() {
        let pairs = [pair("Her father was a physician.", "She was a physician."); 3];
        let a = EchoBackend.classify_batch(&pairs).unwrap();
        assert_eq!(a, EchoBackend.classify_batch(&pairs).unwrap());
        assert!(a.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn table_lookup_and_fallback() {
        let rows = r#"{"premise":"P.","hypothesis":"H.","entailment":0.1,"neutral":0.2,"contradiction":0.7}

{"premise":"P.","hypothesis":"Q.","entailment":0.9,"neutral":0.05,"contradiction":0.05}
"#;
        let strict = TableBackend::from_jsonl(rows.as_bytes(), Fallback::Error).unwrap();
        assert_eq!(strict.len(), 2);
        let got = strict
            .classify_batch(&[pair("P.", "H."), pair(" P. ", "Q.")])
            .unwrap();
        assert_eq!(got[0].contradiction(), 0.7);
        assert_eq!(got[1].entailment(), 0.9);
        assert!(matches!(
            strict.classify_batch(&[pair("P.", "Z.")]),
            Err(BackendError::MissingPair { .. })
        ));

        let lenient = TableBackend::from_jsonl(rows.as_bytes(), Fallback::Echo).unwrap();
        assert_eq!(
            lenient.classify_batch(&[pair("Z.", "Z.")]).unwrap()[0],
            NliDistribution::certain(Label::Entailment)
        );
    }

    #[test]
    fn table_rejects_bad_rows() {
        let bad = r#"{"premise":"P.","hypothesis":"H.","entailment":0.9,"neutral":0.9,"contradiction":0.0}"#;
        assert!(matches!(
            TableBackend::from_jsonl(bad.as_bytes(), Fallback::Error),
            Err(BackendError::Decode(_))
        ));
    }
}
