//! Sentence-order reversal of the simple side, and its inverse for system
//! outputs.
//!
//! Training targets are written with their simple sentences in reverse
//! order. A model trained on them emits reversed sentences, so its outputs
//! are segmented and flipped back before scoring.

use crate::corpus::Record;
use crate::segmenter::{segment, RuleSet};
use crate::text::collapse_whitespace;

/// Returns the record with its simple sentences in reverse order.
pub fn reverse_simples(record: &Record) -> Record {
    let mut reversed = record.clone();
    reversed.reverse_simples_in_place();
    reversed
}

/// Segments a system output, reverses the sentence order and rejoins with
/// single spaces.
pub fn restore_output_order(output: &str, rules: &RuleSet) -> String {
    let mut sentences = segment(output, rules);
    if sentences.len() < 2 {
        return collapse_whitespace(output);
    }
    sentences.reverse();
    sentences.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(simples: &[&str]) -> Record {
        Record::new("Complex.", simples).unwrap()
    }

    #[test]
    fn reverses_three() {
        let r = reverse_simples(&record(&["A.", "B.", "C."]));
        assert_eq!(r.simples(), ["C.", "B.", "A."]);
        assert_eq!(r.complex(), "Complex.");
    }

    #[test]
    fn single_simple_is_unchanged() {
        let r = record(&["A."]);
        assert_eq!(reverse_simples(&r), r);
    }

    #[test]
    fn restores_output_order() {
        let rules = RuleSet::english();
        assert_eq!(restore_output_order("C. B. A.", rules), "A. B. C.");
        assert_eq!(
            restore_output_order("Only one sentence.", rules),
            "Only one sentence."
        );
        assert_eq!(
            restore_output_order("  spaced \t out  ", rules),
            "spaced out"
        );
        assert_eq!(restore_output_order("", rules), "");
    }

    #[test]
    fn reverse_then_restore_recovers_the_joined_simples() {
        let r = record(&[
            "Her father was a physician.",
            "She followed in his footsteps.",
        ]);
        let reversed = reverse_simples(&r).joined_simples();
        assert_eq!(
            restore_output_order(&reversed, RuleSet::english()),
            r.joined_simples()
        );
    }

    proptest! {
        #[test]
        fn reversal_is_an_involution(simples in proptest::collection::vec("[A-Za-z ]{0,10}[a-z][.!?]", 1..8)) {
            let r = record(&simples.iter().map(String::as_str).collect::<Vec<_>>());
            let once = reverse_simples(&r);
            prop_assert_eq!(reverse_simples(&once), r.clone());
            let mut a = r.simples().to_vec();
            let mut b = once.simples().to_vec();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}
