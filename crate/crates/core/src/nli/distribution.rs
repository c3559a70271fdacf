use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on the probability-simplex sum.
pub const SIMPLEX_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("not a probability distribution: ({entailment}, {neutral}, {contradiction})")]
pub struct InvalidDistribution {
    pub entailment: f64,
    pub neutral: f64,
    pub contradiction: f64,
}

/// Three-way NLI label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Entailment,
    Neutral,
    Contradiction,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Entailment, Label::Neutral, Label::Contradiction];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Entailment => "entailment",
            Label::Neutral => "neutral",
            Label::Contradiction => "contradiction",
        }
    }
}

/// Probabilities over {entailment, neutral, contradiction}, in [0, 1] and
/// summing to one within [`SIMPLEX_TOLERANCE`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution")]
pub struct NliDistribution {
    entailment: f64,
    neutral: f64,
    contradiction: f64,
}

#[derive(Deserialize)]
struct RawDistribution {
    entailment: f64,
    neutral: f64,
    contradiction: f64,
}

impl TryFrom<RawDistribution> for NliDistribution {
    type Error = InvalidDistribution;

    fn try_from(raw: RawDistribution) -> Result<Self, Self::Error> {
        NliDistribution::new(raw.entailment, raw.neutral, raw.contradiction)
    }
}

impl NliDistribution {
    pub fn new(
        entailment: f64,
        neutral: f64,
        contradiction: f64,
    ) -> Result<Self, InvalidDistribution> {
        let values = [entailment, neutral, contradiction];
        let in_range = values.iter().all(|p| (0.0..=1.0).contains(p));
        if !in_range || (values.iter().sum::<f64>() - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(InvalidDistribution {
                entailment,
                neutral,
                contradiction,
            });
        }
        Ok(NliDistribution {
            entailment,
            neutral,
            contradiction,
        })
    }

    /// A point mass on `label`.
    pub fn certain(label: Label) -> Self {
        let mut p = [0.0; 3];
        p[label as usize] = 1.0;
        NliDistribution {
            entailment: p[0],
            neutral: p[1],
            contradiction: p[2],
        }
    }

    pub fn entailment(&self) -> f64 {
        self.entailment
    }

    pub fn neutral(&self) -> f64 {
        self.neutral
    }

    pub fn contradiction(&self) -> f64 {
        self.contradiction
    }

    pub fn probability(&self, label: Label) -> f64 {
        match label {
            Label::Entailment => self.entailment,
            Label::Neutral => self.neutral,
            Label::Contradiction => self.contradiction,
        }
    }

    /// Pair-level label. Entailment only when it strictly dominates;
    /// otherwise the larger of neutral and contradiction, with a tie going
    /// to contradiction.
    pub fn label(&self) -> Label {
        if is_entailment_dominant(self) {
            Label::Entailment
        } else if self.contradiction >= self.neutral {
            Label::Contradiction
        } else {
            Label::Neutral
        }
    }
}

/// The filter criterion: entailment strictly above both other labels.
/// Ties reject.
pub fn is_entailment_dominant(d: &NliDistribution) -> bool {
    d.entailment > d.neutral && d.entailment > d.contradiction
}
