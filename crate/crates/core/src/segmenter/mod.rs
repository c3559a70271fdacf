//! Rule-based English sentence boundary detection.
//!
//! A boundary candidate is a run of terminal punctuation (`.`, `!`, `?`,
//! `…`) plus any closing quotes or brackets directly after it. Each
//! candidate passes through the rules in [`RULE_ORDER`]; the first rule
//! that reaches a verdict decides. When no rule is sure, the text is not
//! split.
//!
//! Segments are trimmed slices of the input, cut only inside whitespace
//! runs, so joining them with single spaces reproduces the input up to
//! whitespace.

use std::collections::HashSet;
use std::path::Path;
use std::sync::OnceLock;

use thiserror::Error;

const BUILTIN_ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");

const TERMINALS: &[char] = &['.', '!', '?', '…'];
const CLOSERS: &[char] = &['"', '\'', '”', '’', ')', ']', '}', '»'];
const OPENERS: &[char] = &['"', '\'', '“', '‘', '(', '[', '{', '«'];

/// Capitalized words that start a new sentence even after an abbreviation
/// or an initial ("... Apple Inc. The company ...").
const SENTENCE_STARTERS: &[&str] = &[
    "The",
    "This",
    "That",
    "These",
    "Those",
    "There",
    "Then",
    "Thus",
    "He",
    "She",
    "It",
    "They",
    "We",
    "You",
    "His",
    "Her",
    "Its",
    "Their",
    "Our",
    "My",
    "In",
    "On",
    "At",
    "But",
    "However",
    "After",
    "Before",
    "When",
    "While",
    "Although",
    "Though",
    "Since",
    "As",
    "By",
    "For",
    "From",
    "Some",
    "Many",
    "Most",
    "Both",
    "Each",
    "Another",
    "Such",
    "Yet",
    "So",
    "Also",
    "Later",
    "Today",
    "During",
    "Despite",
    "Following",
    "Meanwhile",
    "If",
    "Because",
    "Other",
    "Several",
];

/// The boundary rules, in application order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryRule {
    /// Closing quotes and brackets after terminal punctuation stay with the
    /// sentence they close.
    ClosingCarryOver,
    /// No split unless whitespace follows the candidate. Covers decimals
    /// ("3.50"), dotted acronyms ("U.S.A") and URLs.
    WhitespaceRequired,
    /// "!" and "?" split before an uppercase letter or a digit.
    ExclamationQuestion,
    /// An ellipsis splits only before an uppercase letter.
    EllipsisGuard,
    /// A period never splits before a lowercase word or bare punctuation.
    LowercaseContinuation,
    /// A period after an abbreviation, an initial or a dotted acronym splits
    /// only before a common sentence-opening word.
    AbbreviationGuard,
    /// A period after an ordinary word splits before an uppercase letter, or
    /// before a digit unless the period follows a single-digit enumerator
    /// ("1. 2. 3.").
    TerminalSplit,
}

pub const RULE_ORDER: [BoundaryRule; 7] = [
    BoundaryRule::ClosingCarryOver,
    BoundaryRule::WhitespaceRequired,
    BoundaryRule::ExclamationQuestion,
    BoundaryRule::EllipsisGuard,
    BoundaryRule::LowercaseContinuation,
    BoundaryRule::AbbreviationGuard,
    BoundaryRule::TerminalSplit,
];

#[derive(Debug, Error)]
pub enum RuleSetError {
    #[error("line {line}: abbreviation {entry:?} contains whitespace")]
    Whitespace { line: usize, entry: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Immutable segmentation rules: an abbreviation list plus the fixed
/// boundary rules.
#[derive(Debug, Clone)]
pub struct RuleSet {
    abbreviations: HashSet<String>,
    numeric_abbreviations: HashSet<String>,
    starters: HashSet<&'static str>,
}

impl RuleSet {
    /// The shipped English rule set.
    pub fn english() -> &'static RuleSet {
        static RULES: OnceLock<RuleSet> = OnceLock::new();
        RULES.get_or_init(|| {
            RuleSet::from_abbreviations(BUILTIN_ABBREVIATIONS).expect("builtin abbreviations")
        })
    }

    /// Parses an abbreviation list: one entry per line, `#` comments, an
    /// optional `:num` suffix restricting the entry to numeric contexts.
    pub fn from_abbreviations(list: &str) -> Result<Self, RuleSetError> {
        let mut abbreviations = HashSet::new();
        let mut numeric_abbreviations = HashSet::new();
        for (n, raw) in list.lines().enumerate() {
            let entry = raw.trim();
            if entry.is_empty() || entry.starts_with('#') {
                continue;
            }
            if entry.contains(char::is_whitespace) {
                return Err(RuleSetError::Whitespace {
                    line: n + 1,
                    entry: entry.to_owned(),
                });
            }
            let entry = entry.to_lowercase();
            let entry = entry.trim_end_matches('.');
            match entry.strip_suffix(":num") {
                Some(word) => numeric_abbreviations.insert(word.to_owned()),
                None => abbreviations.insert(entry.to_owned()),
            };
        }
        Ok(RuleSet {
            abbreviations,
            numeric_abbreviations,
            starters: SENTENCE_STARTERS.iter().copied().collect(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RuleSetError> {
        Self::from_abbreviations(&std::fs::read_to_string(path)?)
    }

    pub fn rules(&self) -> &'static [BoundaryRule] {
        &RULE_ORDER
    }

    pub fn is_abbreviation(&self, word: &str) -> bool {
        self.abbreviations.contains(&word.to_lowercase())
    }

    fn guarded(&self, word: &str, before_digit: bool) -> bool {
        let lower = word.to_lowercase();
        if self.abbreviations.contains(&lower)
            || (before_digit && self.numeric_abbreviations.contains(&lower))
        {
            return true;
        }
        let mut chars = lower.chars();
        // single-letter initial
        if let (Some(c), None) = (chars.next(), chars.next()) {
            return c.is_alphabetic();
        }
        // dotted acronym: "j.r.r", "u.s", "ph.d"
        lower.contains('.')
            && lower.split('.').all(|part| {
                (1..=2).contains(&part.chars().count()) && part.chars().all(char::is_alphabetic)
            })
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::english().clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Terminal {
    Period,
    Ellipsis,
    ExclamationQuestion,
}

/// Splits `text` into sentences. Whitespace-only input yields no segments.
pub fn segment(text: &str, rules: &RuleSet) -> Vec<String> {
    let mut segments = Vec::new();
    let mut start = 0;
    for cut in boundaries(text, rules) {
        push_trimmed(&mut segments, &text[start..cut]);
        start = cut;
    }
    push_trimmed(&mut segments, &text[start..]);
    segments
}

/// Number of sentences [`segment`] would return.
pub fn count_sentences(text: &str, rules: &RuleSet) -> usize {
    segment(text, rules).len()
}

fn push_trimmed(out: &mut Vec<String>, piece: &str) {
    let piece = piece.trim();
    if !piece.is_empty() {
        out.push(piece.to_owned());
    }
}

/// Byte offsets right after each accepted boundary.
fn boundaries(text: &str, rules: &RuleSet) -> Vec<usize> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let offset = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let mut cuts = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if !TERMINALS.contains(&chars[i].1) {
            i += 1;
            continue;
        }
        let run_start = i;
        while i < chars.len() && TERMINALS.contains(&chars[i].1) {
            i += 1;
        }
        let run = &text[offset(run_start)..offset(i)];
        // ClosingCarryOver
        while i < chars.len() && CLOSERS.contains(&chars[i].1) {
            i += 1;
        }
        // WhitespaceRequired
        if i >= chars.len() || !chars[i].1.is_whitespace() {
            continue;
        }
        let mut next = i;
        while next < chars.len() && chars[next].1.is_whitespace() {
            next += 1;
        }
        if next >= chars.len() {
            continue;
        }
        let prev_token = token_before(text, offset(run_start));
        if is_boundary(run, prev_token, &text[offset(next)..], rules) {
            cuts.push(offset(i));
        }
    }
    cuts
}

fn token_before(text: &str, end: usize) -> &str {
    let head = &text[..end];
    let start = head
        .rfind(char::is_whitespace)
        .map_or(0, |p| p + head[p..].chars().next().unwrap().len_utf8());
    &head[start..]
}

fn classify(run: &str) -> Terminal {
    if run.contains(['!', '?']) {
        Terminal::ExclamationQuestion
    } else if run.contains('…') || run.len() >= 3 {
        Terminal::Ellipsis
    } else {
        Terminal::Period
    }
}

fn is_initial(token: &str) -> bool {
    let mut chars = token.chars();
    matches!((chars.next(), chars.next(), chars.next()), (Some(c), Some('.'), None) if c.is_uppercase())
}

/// `rest` starts at the token after the candidate and runs to the end of
/// the text.
fn is_boundary(run: &str, prev: &str, rest: &str, rules: &RuleSet) -> bool {
    let next = rest.split(char::is_whitespace).next().unwrap_or(rest);
    let first = next
        .trim_start_matches(OPENERS)
        .chars()
        .next()
        .filter(|c| c.is_alphanumeric());
    match classify(run) {
        Terminal::ExclamationQuestion => first.is_some_and(|c| c.is_uppercase() || c.is_numeric()),
        Terminal::Ellipsis => first.is_some_and(char::is_uppercase),
        Terminal::Period => {
            let Some(first) = first else { return false };
            if first.is_lowercase() {
                return false;
            }
            let word = prev.trim_start_matches(OPENERS).trim_end_matches('.');
            if is_initial(&format!("{word}.")) && is_initial(next) {
                // A run of initials is a name only if a surname follows it.
                let after = rest.split_whitespace().find(|t| !is_initial(t));
                return !after.is_some_and(|t| {
                    t.starts_with(char::is_uppercase)
                        && !rules
                            .starters
                            .contains(t.trim_end_matches(|c: char| !c.is_alphanumeric()))
                });
            }
            if rules.guarded(word, first.is_numeric()) {
                let next_word = next
                    .trim_start_matches(OPENERS)
                    .trim_end_matches(|c: char| !c.is_alphanumeric());
                return rules.starters.contains(next_word);
            }
            if first.is_uppercase() {
                return true;
            }
            first.is_numeric()
                && (word.chars().any(char::is_alphabetic)
                    || word.chars().filter(char::is_ascii_digit).count() > 1)
        }
    }
}


/// Re-derives a record's simple side by segmenting the joined simples.
///
/// Use this when the simple side arrived as one string. A record whose
/// simples are already single sentences comes back unchanged.
pub fn resegment_simples(record: &crate::corpus::Record, rules: &RuleSet) -> crate::corpus::Record {
    let segments = segment(&record.joined_simples(), rules);
    // the joined simples are non-empty, so there is at least one segment
    record
        .with_simples(segments)
        .expect("segments of a valid record are valid")
}
