//! Entailment-dominance filtering of complex/simple pairs.
//!
//! Every simple sentence of a record is classified with the complex
//! sentence as premise and the simple sentence as hypothesis. A record is
//! kept only if every pair is entailment-dominant: P(entailment) strictly
//! greater than both P(neutral) and P(contradiction).

mod backend;
mod distribution;
mod http;
mod stub;

pub use backend::{classify_all, BackendError, BatchConfig, ClassifierBackend, NliPair};
pub use distribution::{
    is_entailment_dominant, InvalidDistribution, Label, NliDistribution, SIMPLEX_TOLERANCE,
};
pub use http::HttpBackend;
pub use stub::{EchoBackend, Fallback, TableBackend};

use serde::Serialize;

use crate::corpus::{Corpus, CorpusError, Record};

/// Verdict on one (complex, simple) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub simple_index: usize,
    #[serde(flatten)]
    pub distribution: NliDistribution,
    pub passed: bool,
}

/// Keep/remove decision for one record, with its per-pair audit trail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterDecision {
    record_id: String,
    kept: bool,
    verdicts: Vec<Verdict>,
}

impl FilterDecision {
    /// Builds the decision from one distribution per simple sentence.
    pub fn from_distributions(
        record_id: impl Into<String>,
        distributions: &[NliDistribution],
    ) -> Self {
        let verdicts: Vec<Verdict> = distributions
            .iter()
            .enumerate()
            .map(|(simple_index, d)| Verdict {
                simple_index,
                distribution: *d,
                passed: is_entailment_dominant(d),
            })
            .collect();
        FilterDecision {
            record_id: record_id.into(),
            kept: verdicts.iter().all(|v| v.passed),
            verdicts,
        }
    }

    pub fn record_id(&self) -> &str {
        &self.record_id
    }

    pub fn kept(&self) -> bool {
        self.kept
    }

    pub fn verdicts(&self) -> &[Verdict] {
        &self.verdicts
    }

    /// Record-level label: entailment when kept, otherwise the worst
    /// pair label (contradiction before neutral).
    pub fn label(&self) -> Label {
        self.verdicts
            .iter()
            .map(|v| v.distribution.label())
            .max()
            .unwrap_or(Label::Entailment)
    }
}

/// Outcome for one record in a filtering run.
#[derive(Debug, Clone, PartialEq)]
pub enum Judgement {
    Decided(FilterDecision),
    /// The backend failed on this record and skipping was requested.
    Skipped {
        record_id: String,
        error: String,
    },
}

/// Id used in audit logs: the record's own id, else `#` and its 1-based
/// position in the input.
pub fn audit_id(record: &Record, position: usize) -> String {
    match record.id() {
        Some(id) => id.to_owned(),
        None => format!("#{}", position + 1),
    }
}

fn pairs_of(record: &Record) -> impl Iterator<Item = NliPair<'_>> {
    record.simples().iter().map(move |s| NliPair {
        premise: record.complex(),
        hypothesis: s,
    })
}

/// Classifies every (complex, simple) pair of `record` and applies the
/// all-pairs-must-pass rule.
pub fn judge_record(
    record: &Record,
    backend: &dyn ClassifierBackend,
) -> Result<FilterDecision, BackendError> {
    let pairs: Vec<NliPair> = pairs_of(record).collect();
    let dists = classify_all(
        backend,
        &pairs,
        &BatchConfig {
            batch_size: pairs.len(),
            concurrency: 1,
        },
    )?;
    Ok(FilterDecision::from_distributions(
        audit_id(record, 0),
        &dists,
    ))
}

/// Settings for a filtering run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct FilterOptions {
    pub batch: BatchConfig,
    /// Drop records the backend fails on instead of aborting.
    pub skip_on_error: bool,
}

/// Judges a slice of records whose first element sits at `offset` in the
/// full input. Judgements come back in input order.
pub fn judge_records(
    records: &[Record],
    offset: usize,
    backend: &dyn ClassifierBackend,
    options: &FilterOptions,
) -> Result<Vec<Judgement>, BackendError> {
    let pairs: Vec<NliPair> = records.iter().flat_map(pairs_of).collect();
    match classify_all(backend, &pairs, &options.batch) {
        Ok(dists) => {
            let mut rest = dists.as_slice();
            Ok(records
                .iter()
                .enumerate()
                .map(|(i, record)| {
                    let (mine, tail) = rest.split_at(record.simples().len());
                    rest = tail;
                    Judgement::Decided(FilterDecision::from_distributions(
                        audit_id(record, offset + i),
                        mine,
                    ))
                })
                .collect())
        }
        Err(e) if !options.skip_on_error => Err(e),
        // retry record by record so one bad record does not take the whole chunk down
        Err(_) => Ok(records
            .iter()
            .enumerate()
            .map(|(i, record)| {
                let pairs: Vec<NliPair> = pairs_of(record).collect();
                let id = audit_id(record, offset + i);
                match classify_all(backend, &pairs, &options.batch) {
                    Ok(dists) => Judgement::Decided(FilterDecision::from_distributions(id, &dists)),
                    Err(e) => Judgement::Skipped {
                        record_id: id,
                        error: e.to_string(),
                    },
                }
            })
            .collect()),
    }
}

/// Result of [`filter_corpus`].
#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutcome {
    pub kept: Corpus,
    pub decisions: Vec<FilterDecision>,
    /// Records dropped because the backend failed on them.
    pub skipped: Vec<String>,
}

impl FilterOutcome {
    pub fn removed(&self) -> usize {
        self.decisions.iter().filter(|d| !d.kept()).count() + self.skipped.len()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FilterError {
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Filters a whole corpus. Kept records keep their input order and are
/// returned unchanged.
pub fn filter_corpus(
    corpus: &Corpus,
    backend: &dyn ClassifierBackend,
    options: &FilterOptions,
) -> Result<FilterOutcome, FilterError> {
    let judgements = judge_records(corpus.records(), 0, backend, options)?;
    let mut kept = Corpus::new();
    let mut decisions = Vec::with_capacity(judgements.len());
    let mut skipped = Vec::new();
    for (record, judgement) in corpus.records().iter().zip(judgements) {
        match judgement {
            Judgement::Decided(decision) => {
                if decision.kept() {
                    kept.push(record.clone())?;
                }
                decisions.push(decision);
            }
            Judgement::Skipped { record_id, .. } => skipped.push(record_id),
        }
    }
    Ok(FilterOutcome {
        kept,
        decisions,
        skipped,
    })
}

/// Record-level label distribution of a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabelReport {
    pub records: usize,
    pub entailment: f64,
    pub neutral: f64,
    pub contradiction: f64,
}

impl LabelReport {
    /// Percentages from record-level label counts, indexed like
    /// [`Label::ALL`]. All zero for an empty corpus.
    pub fn from_counts(counts: [usize; 3]) -> Self {
        let records: usize = counts.iter().sum();
        let pct = |c: usize| {
            if records == 0 {
                0.0
            } else {
                100.0 * c as f64 / records as f64
            }
        };
        LabelReport {
            records,
            entailment: pct(counts[0]),
            neutral: pct(counts[1]),
            contradiction: pct(counts[2]),
        }
    }

    pub fn percentage(&self, label: Label) -> f64 {
        match label {
            Label::Entailment => self.entailment,
            Label::Neutral => self.neutral,
            Label::Contradiction => self.contradiction,
        }
    }
}

/// Three-way label distribution over records. A record is entailment only
/// if every pair is entailment-dominant; otherwise it takes its worst pair
/// label, contradiction before neutral.
pub fn label_report(
    corpus: &Corpus,
    backend: &dyn ClassifierBackend,
    batch: &BatchConfig,
) -> Result<LabelReport, BackendError> {
    let options = FilterOptions {
        batch: *batch,
        skip_on_error: false,
    };
    let mut counts = [0usize; 3];
    for judgement in judge_records(corpus.records(), 0, backend, &options)? {
        if let Judgement::Decided(d) = judgement {
            counts[d.label() as usize] += 1;
        }
    }
    Ok(LabelReport::from_counts(counts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(complex: &str, simples: &[&str]) -> Record {
        Record::new(complex, simples).unwrap()
    }

    fn d(e: f64, n: f64, c: f64) -> NliDistribution {
        NliDistribution::new(e, n, c).unwrap()
    }

    struct Constant(NliDistribution);

    impl ClassifierBackend for Constant {
        fn classify_batch(
            &self,
            pairs: &[NliPair<'_>],
        ) -> Result<Vec<NliDistribution>, BackendError> {
            Ok(vec![self.0; pairs.len()])
        }
        fn describe(&self) -> String {
            "constant".into()
        }
    }

    /// Fails whenever a batch contains the hypothesis "poison."
    struct Flaky;

    impl ClassifierBackend for Flaky {
        fn classify_batch(
            &self,
            pairs: &[NliPair<'_>],
        ) -> Result<Vec<NliDistribution>, BackendError> {
            if pairs.iter().any(|p| p.hypothesis == "poison.") {
                return Err(BackendError::Transport("boom".into()));
            }
            EchoBackend.classify_batch(pairs)
        }
        fn describe(&self) -> String {
            "flaky".into()
        }
    }

    #[test]
    fn echo_keeps_an_identical_pair() {
        let decision = judge_record(&record("X.", &["X."]), &EchoBackend).unwrap();
        assert!(decision.kept());
        assert_eq!(decision.verdicts().len(), 1);
    }

    #[test]
    fn one_failing_pair_removes_the_record() {
        let decision =
            FilterDecision::from_distributions("r", &[d(0.9, 0.05, 0.05), d(0.3, 0.3, 0.4)]);
        assert!(!decision.kept());
        assert!(decision.verdicts()[0].passed);
        assert!(!decision.verdicts()[1].passed);
        assert_eq!(decision.label(), Label::Contradiction);
    }

    #[test]
    fn empty_corpus_filters_to_empty() {
        let out = filter_corpus(&Corpus::new(), &EchoBackend, &FilterOptions::default()).unwrap();
        assert!(out.kept.is_empty());
        assert!(out.decisions.is_empty());
    }

    #[test]
    fn kept_records_are_an_ordered_subset() {
        let corpus = Corpus::from_records([
            record("A b c.", &["A b c."]),
            record("A b c.", &["Totally different words here."]),
            record(
                "Her father was a physician.",
                &["Her father was a physician.", "Her father."],
            ),
        ])
        .unwrap();
        let out = filter_corpus(&corpus, &EchoBackend, &FilterOptions::default()).unwrap();
        assert_eq!(
            out.kept.records(),
            &[corpus.records()[0].clone(), corpus.records()[2].clone()]
        );
        assert_eq!(out.decisions.len(), 3);
        assert_eq!(out.removed(), 1);
        assert_eq!(out.decisions[1].record_id(), "#2");
        // idempotent
        let again = filter_corpus(&out.kept, &EchoBackend, &FilterOptions::default()).unwrap();
        assert_eq!(again.kept, out.kept);
    }

    #[test]
    fn backend_failure_aborts_or_skips() {
        let corpus = Corpus::from_records([
            record("Good.", &["Good."]),
            record("Bad.", &["poison."]),
            record("Fine.", &["Fine."]),
        ])
        .unwrap();
        let strict = FilterOptions::default();
        assert!(matches!(
            filter_corpus(&corpus, &Flaky, &strict),
            Err(FilterError::Backend(_))
        ));

        let lenient = FilterOptions {
            skip_on_error: true,
            ..strict
        };
        let out = filter_corpus(&corpus, &Flaky, &lenient).unwrap();
        assert_eq!(out.kept.len(), 2);
        assert_eq!(out.skipped, ["#2"]);
        assert_eq!(out.decisions.len(), 2);
        assert_eq!(out.removed(), 1);
    }

    #[test]
    fn all_neutral_backend_reports_neutral() {
        let corpus =
            Corpus::from_records([record("A.", &["B.", "C."]), record("D.", &["E."])]).unwrap();
        let report = label_report(
            &corpus,
            &Constant(NliDistribution::certain(Label::Neutral)),
            &BatchConfig::default(),
        )
        .unwrap();
        assert_eq!(report.neutral, 100.0);
        assert_eq!(report.entailment + report.contradiction, 0.0);
        assert_eq!(report.records, 2);
    }

    #[test]
    fn worst_label_wins_in_reports() {
        let counts = [
            FilterDecision::from_distributions("a", &[d(0.9, 0.1, 0.0)]).label(),
            FilterDecision::from_distributions("b", &[d(0.9, 0.1, 0.0), d(0.1, 0.8, 0.1)]).label(),
            FilterDecision::from_distributions("c", &[d(0.1, 0.8, 0.1), d(0.1, 0.1, 0.8)]).label(),
        ];
        assert_eq!(
            counts,
            [Label::Entailment, Label::Neutral, Label::Contradiction]
        );
        let report = LabelReport::from_counts([1, 1, 1]);
        assert!((report.entailment + report.neutral + report.contradiction - 100.0).abs() < 0.01);
    }

    #[test]
    fn decision_audit_json() {
        let decision = FilterDecision::from_distributions("r1", &[d(0.5, 0.25, 0.25)]);
        assert_eq!(
            serde_json::to_string(&decision).unwrap(),
            r#"{"record_id":"r1","kept":true,"verdicts":[{"simple_index":0,"entailment":0.5,"neutral":0.25,"contradiction":0.25,"passed":true}]}"#
        );
    }
}
