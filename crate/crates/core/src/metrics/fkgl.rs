//! Flesch-Kincaid Grade Level, pooled over a corpus.

use crate::segmenter::{count_sentences, RuleSet};

use super::MetricError;

// Words the vowel-group heuristic gets wrong.
const SYLLABLE_EXCEPTIONS: &[(&str, usize)] = &[
    ("the", 1),
    ("area", 3),
    ("idea", 3),
    ("being", 2),
    ("every", 2),
    ("people", 2),
    ("business", 2),
    ("different", 3),
    ("evening", 2),
    ("family", 3),
    ("poem", 2),
    ("quiet", 2),
    ("science", 2),
    ("create", 2),
    ("created", 3),
    ("real", 2),
    ("really", 3),
    ("queue", 1),
    ("whole", 1),
    ("some", 1),
    ("something", 2),
    ("sometimes", 2),
    ("someone", 2),
    ("one", 1),
    ("once", 1),
    ("there", 1),
    ("where", 1),
    ("were", 1),
    ("here", 1),
    ("more", 1),
    ("fire", 1),
    ("hour", 1),
    ("our", 1),
    ("are", 1),
    ("have", 1),
    ("give", 1),
    ("live", 1),
    ("lives", 1),
    ("move", 1),
    ("love", 1),
    ("done", 1),
    ("gone", 1),
    ("none", 1),
    ("Wednesday", 2),
];

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Syllables in a single word. Non-letters are ignored; a word with no
/// letters (a number, say) counts as one syllable.
pub fn count_syllables(word: &str) -> usize {
    let w: String = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    if w.is_empty() {
        return 1;
    }
    if let Some(&(_, n)) = SYLLABLE_EXCEPTIONS
        .iter()
        .find(|(e, _)| e.eq_ignore_ascii_case(&w))
    {
        return n;
    }
    let chars: Vec<char> = w.chars().collect();
    let mut groups = 0;
    let mut prev_vowel = false;
    for &c in &chars {
        let v = is_vowel(c);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    let n = chars.len();
    // silent final e, but not consonant + "le"
    if n > 2 && chars[n - 1] == 'e' && !is_vowel(chars[n - 2]) {
        let consonant_le = chars[n - 2] == 'l' && !is_vowel(chars[n - 3]);
        if !consonant_le {
            groups -= 1;
        }
    }
    // "-es"/"-ed" endings that stay silent after most consonants
    if n > 3 && chars[n - 2] == 'e' && matches!(chars[n - 1], 's' | 'd') && !is_vowel(chars[n - 3])
    {
        let voiced = match chars[n - 1] {
            'd' => matches!(chars[n - 3], 't' | 'd'),
            _ => {
                matches!(chars[n - 3], 's' | 'x' | 'z' | 'c' | 'g')
                    || (chars[n - 3] == 'h' && matches!(chars[n - 4], 'c' | 's'))
            }
        };
        if !voiced {
            groups -= 1;
        }
    }
    groups.max(1)
}

/// Whitespace tokens that contain a letter or digit.
pub fn words(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace()
        .filter(|t| t.chars().any(char::is_alphanumeric))
}

/// Word, sentence and syllable totals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReadabilityCounts {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
}

impl ReadabilityCounts {
    pub fn of(text: &str, rules: &RuleSet) -> Self {
        let mut words_n = 0;
        let mut syllables = 0;
        for w in words(text) {
            words_n += 1;
            syllables += count_syllables(w);
        }
        let sentences = if words_n == 0 {
            0
        } else {
            count_sentences(text, rules).max(1)
        };
        ReadabilityCounts {
            words: words_n,
            sentences,
            syllables,
        }
    }

    pub fn add(&mut self, other: ReadabilityCounts) {
        self.words += other.words;
        self.sentences += other.sentences;
        self.syllables += other.syllables;
    }

    pub fn grade(&self) -> Result<f64, MetricError> {
        if self.words == 0 {
            return Err(MetricError::NoWords);
        }
        let w = self.words as f64;
        Ok(0.39 * (w / self.sentences as f64) + 11.8 * (self.syllables as f64 / w) - 15.59)
    }
}

/// Corpus FKGL: totals are pooled before the formula is applied.
pub fn fkgl<S: AsRef<str>>(hypotheses: &[S], rules: &RuleSet) -> Result<f64, MetricError> {
    let mut counts = ReadabilityCounts::default();
    for h in hypotheses {
        counts.add(ReadabilityCounts::of(h.as_ref(), rules));
    }
    counts.grade()
}
