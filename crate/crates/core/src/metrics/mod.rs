//! Evaluation metrics for split-and-rephrase outputs.

mod bleu;
mod fkgl;
mod sari;

pub use bleu::{corpus_bleu, tokenize_13a, BleuStats, BLEU_SIGNATURE};
pub use fkgl::{count_syllables, fkgl, ReadabilityCounts};
pub use sari::{sari, sentence_sari, SariComponents};

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};

use crate::nli::{
    classify_all, is_entailment_dominant, BackendError, BatchConfig, ClassifierBackend, NliPair,
};
use crate::segmenter::{count_sentences, segment, RuleSet};
use crate::text::{nfc, normalize};

#[derive(Debug, thiserror::Error)]
pub enum MetricError {
    #[error("no instances to score")]
    EmptyInput,
    #[error("no words in the hypotheses")]
    NoWords,
    #[error("{left} sources but {right} hypotheses")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One system output with its source and references.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct EvalInstance {
    source: String,
    hypothesis: String,
    references: Vec<String>,
}

#[derive(Deserialize)]
struct RawInstance {
    source: String,
    hypothesis: String,
    references: Vec<String>,
}

impl TryFrom<RawInstance> for EvalInstance {
    type Error = MetricError;

    fn try_from(raw: RawInstance) -> Result<Self, MetricError> {
        EvalInstance::new(raw.source, raw.hypothesis, raw.references)
    }
}

impl EvalInstance {
    pub fn new<S: AsRef<str>>(
        source: impl AsRef<str>,
        hypothesis: impl AsRef<str>,
        references: impl IntoIterator<Item = S>,
    ) -> Result<Self, MetricError> {
        let clean = |s: &str, what: &str| {
            let s = nfc(s.trim());
            if s.is_empty() {
                Err(MetricError::InvalidInstance(format!("empty {what}")))
            } else {
                Ok(s)
            }
        };
        let references = references
            .into_iter()
            .map(|r| clean(r.as_ref(), "reference"))
            .collect::<Result<Vec<_>, _>>()?;
        if references.is_empty() {
            return Err(MetricError::InvalidInstance("no references".into()));
        }
        Ok(EvalInstance {
            source: clean(source.as_ref(), "source")?,
            hypothesis: clean(hypothesis.as_ref(), "hypothesis")?,
            references,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn hypothesis(&self) -> &str {
        &self.hypothesis
    }

    pub fn references(&self) -> &[String] {
        &self.references
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>, MetricError> {
    BufReader::new(File::open(path)?)
        .lines()
        .map(|l| l.map_err(MetricError::from))
        .collect()
}

/// Builds instances from aligned plain-text files. Each line of
/// `refs` holds one instance's references joined by `ref_separator`.
pub fn load_aligned(
    src: &Path,
    hyp: &Path,
    refs: &Path,
    ref_separator: &str,
) -> Result<Vec<EvalInstance>, MetricError> {
    let (src, hyp, refs) = (read_lines(src)?, read_lines(hyp)?, read_lines(refs)?);
    if src.len() != hyp.len() {
        return Err(MetricError::LengthMismatch {
            left: src.len(),
            right: hyp.len(),
        });
    }
    if src.len() != refs.len() {
        return Err(MetricError::LengthMismatch {
            left: src.len(),
            right: refs.len(),
        });
    }
    src.iter()
        .zip(&hyp)
        .zip(&refs)
        .enumerate()
        .map(|(i, ((s, h), r))| {
            EvalInstance::new(s, h, r.split(ref_separator)).map_err(|e| MetricError::Parse {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Reads `{"source", "hypothesis", "references"}` objects, one per line.
pub fn load_jsonl(path: &Path) -> Result<Vec<EvalInstance>, MetricError> {
    let mut out = Vec::new();
    for (i, line) in read_lines(path)?.into_iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let inst = serde_json::from_str(&line).map_err(|e| MetricError::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(inst);
    }
    Ok(out)
}

/// Percentage of hypotheses equal to their source after NFC and
/// whitespace collapsing. Case-sensitive.
pub fn copy_rate<S: AsRef<str>, H: AsRef<str>>(
    sources: &[S],
    hypotheses: &[H],
) -> Result<f64, MetricError> {
    if sources.len() != hypotheses.len() {
        return Err(MetricError::LengthMismatch {
            left: sources.len(),
            right: hypotheses.len(),
        });
    }
    if sources.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let same = sources
        .iter()
        .zip(hypotheses)
        .filter(|(s, h)| normalize(s.as_ref()) == normalize(h.as_ref()))
        .count();
    Ok(100.0 * same as f64 / sources.len() as f64)
}

/// Mean number of sentences per hypothesis; 0 for no hypotheses.
pub fn avg_split_count<S: AsRef<str>>(hypotheses: &[S], rules: &RuleSet) -> f64 {
    if hypotheses.is_empty() {
        return 0.0;
    }
    let total: usize = hypotheses
        .iter()
        .map(|h| count_sentences(h.as_ref(), rules))
        .sum();
    total as f64 / hypotheses.len() as f64
}

/// Percentage of instances whose every hypothesis sentence is
/// entailment-dominant with the source as premise.
pub fn entailment_ratio(
    instances: &[EvalInstance],
    backend: &dyn ClassifierBackend,
    rules: &RuleSet,
    batch: &BatchConfig,
) -> Result<f64, MetricError> {
    if instances.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let sentences: Vec<Vec<String>> = instances
        .iter()
        .map(|i| segment(i.hypothesis(), rules))
        .collect();
    let pairs: Vec<NliPair> = instances
        .iter()
        .zip(&sentences)
        .flat_map(|(inst, sents)| {
            sents.iter().map(move |s| NliPair {
                premise: inst.source(),
                hypothesis: s,
            })
        })
        .collect();
    let dists = classify_all(backend, &pairs, batch)?;
    let mut rest = dists.as_slice();
    let mut entailed = 0;
    for sents in &sentences {
        let (mine, tail) = rest.split_at(sents.len());
        rest = tail;
        if mine.iter().all(is_entailment_dominant) {
            entailed += 1;
        }
    }
    Ok(100.0 * entailed as f64 / instances.len() as f64)
}

fn unavailable_if_none<S: Serializer>(value: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.serialize_f64(*v),
        None => s.serialize_str("unavailable"),
    }
}

/// How the scores were produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub instances: usize,
    pub bleu: String,
    pub sari: String,
    pub nli_backend: Option<String>,
}

/// All metric values for one system output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub bleu: f64,
    pub sari: f64,
    pub fkgl: f64,
    #[serde(serialize_with = "unavailable_if_none")]
    pub entailment_ratio: Option<f64>,
    pub avg_sentences: f64,
    pub copy_rate: f64,
    /// Learned metrics are never computed here.
    #[serde(serialize_with = "unavailable_if_none")]
    pub bertscore: Option<f64>,
    #[serde(serialize_with = "unavailable_if_none")]
    pub bleurt: Option<f64>,
    pub metadata: ReportMetadata,
}

impl fmt::Display for EvaluationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_owned(), |v| format!("{v:.2}"));
        writeln!(f, "{:<12} {:>8.2}", "BLEU", self.bleu)?;
        writeln!(f, "{:<12} {:>8}", "BERTScore", opt(self.bertscore))?;
        writeln!(f, "{:<12} {:>8}", "BLEURT", opt(self.bleurt))?;
        writeln!(f, "{:<12} {:>8.2}", "SARI", self.sari)?;
        writeln!(f, "{:<12} {:>8.2}", "FKGL", self.fkgl)?;
        writeln!(f, "{:<12} {:>8}", "Entailment", opt(self.entailment_ratio))?;
        writeln!(f, "{:<12} {:>8.2}", "#Sent.", self.avg_sentences)?;
        write!(f, "{:<12} {:>8.2}", "Copy", self.copy_rate)
    }
}

/// Scores every metric. Without a backend the entailment ratio is
/// reported as unavailable.
pub fn evaluate(
    instances: &[EvalInstance],
    backend: Option<&dyn ClassifierBackend>,
    rules: &RuleSet,
    batch: &BatchConfig,
) -> Result<EvaluationReport, MetricError> {
    if instances.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let sources: Vec<&str> = instances.iter().map(EvalInstance::source).collect();
    let hypotheses: Vec<&str> = instances.iter().map(EvalInstance::hypothesis).collect();
    let entailment_ratio = match backend {
        Some(b) => Some(entailment_ratio(instances, b, rules, batch)?),
        None => None,
    };
    Ok(EvaluationReport {
        bleu: corpus_bleu(instances)?,
        sari: sari(instances)?,
        fkgl: fkgl(&hypotheses, rules)?,
        entailment_ratio,
        avg_sentences: avg_split_count(&hypotheses, rules),
        copy_rate: copy_rate(&sources, &hypotheses)?,
        bertscore: None,
        bleurt: None,
        metadata: ReportMetadata {
            instances: instances.len(),
            bleu: BLEU_SIGNATURE.to_owned(),
            sari: "ngrams:1-4|tok:13a+lc|del:precision|avg:sentence".to_owned(),
            nli_backend: backend.map(|b| b.describe()),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nli::{EchoBackend, Label, NliDistribution};

    fn inst(s: &str, h: &str, r: &[&str]) -> EvalInstance {
        EvalInstance::new(s, h, r.iter().copied()).unwrap()
    }

    struct AllContradict;

    impl ClassifierBackend for AllContradict {
        fn classify_batch(
            &self,
            pairs: &[NliPair<'_>],
        ) -> Result<Vec<NliDistribution>, BackendError> {
            Ok(vec![
                NliDistribution::certain(Label::Contradiction);
                pairs.len()
            ])
        }
        fn describe(&self) -> String {
            "contradict".into()
        }
    }

    #[test]
    fn instance_validation() {
        assert!(EvalInstance::new("a", "b", Vec::<String>::new()).is_err());
        assert!(EvalInstance::new(" ", "b", ["c"]).is_err());
        assert!(EvalInstance::new("a", "b", ["c", ""]).is_err());
    }

    #[test]
    fn copy_rates() {
        assert_eq!(copy_rate(&["a b", "c"], &["a  b", "c"]).unwrap(), 100.0);
        assert_eq!(copy_rate(&["a", "b"], &["x", "y"]).unwrap(), 0.0);
        assert_eq!(
            copy_rate(&["a", "b", "c", "d"], &["a", "b", "c", "D"]).unwrap(),
            75.0
        );
        assert!(matches!(
            copy_rate(&["a"], &["a", "b"]),
            Err(MetricError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn split_counts() {
        let rules = RuleSet::english();
        assert_eq!(avg_split_count(&["A. B.", "C."], rules), 1.5);
        assert_eq!(avg_split_count(&["One here.", "Two here."], rules), 1.0);
        assert_eq!(avg_split_count::<&str>(&[], rules), 0.0);
    }

    #[test]
    fn entailment_ratio_extremes() {
        let rules = RuleSet::english();
        let batch = BatchConfig::default();
        let data = [
            inst("He left. She stayed.", "He left. She stayed.", &["x"]),
            inst("A b.", "A b.", &["y"]),
        ];
        assert_eq!(
            entailment_ratio(&data, &EchoBackend, rules, &batch).unwrap(),
            100.0
        );
        assert_eq!(
            entailment_ratio(&data, &AllContradict, rules, &batch).unwrap(),
            0.0
        );
    }

    #[test]
    fn single_copied_instance() {
        let data = [inst(
            "The cat sat on the mat.",
            "The cat sat on the mat.",
            &["The cat sat on the mat."],
        )];
        let report = evaluate(&data, None, RuleSet::english(), &BatchConfig::default()).unwrap();
        assert!((report.bleu - 100.0).abs() < 1e-9);
        assert_eq!(report.copy_rate, 100.0);
        assert_eq!(report.entailment_ratio, None);
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["bertscore"], "unavailable");
        assert_eq!(json["entailment_ratio"], "unavailable");
    }
}
