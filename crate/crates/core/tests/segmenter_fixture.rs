use serde::Deserialize;
use splitrefine::segmenter::{segment, RuleSet};

#[derive(Deserialize)]
struct Case {
    text: String,
    segments: Vec<String>,
}

fn cases() -> Vec<Case> {
    include_str!("data/segmenter_fixture.jsonl")
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn curated_fixture_accuracy() {
    let cases = cases();
    assert_eq!(cases.len(), 100);
    let mut misses = Vec::new();
    for case in &cases {
        let got = segment(&case.text, RuleSet::english());
        if got != case.segments {
            misses.push(format!(
                "{:?}\n   got      {:?}\n   expected {:?}",
                case.text, got, case.segments
            ));
        }
    }
    for m in &misses {
        eprintln!("miss: {m}");
    }
    let accuracy = (cases.len() - misses.len()) as f64 / cases.len() as f64;
    assert!(accuracy >= 0.95, "exact-match accuracy {accuracy:.2}");
}

#[test]
fn fixture_segments_are_fixed_points() {
    for case in cases() {
        for s in segment(&case.text, RuleSet::english()) {
            assert_eq!(segment(&s, RuleSet::english()), vec![s.clone()]);
        }
    }
}
