use proptest::prelude::*;
use splitrefine::corpus::{Corpus, Record};
use splitrefine::metrics::{entailment_ratio, EvalInstance};
use splitrefine::nli::{
    filter_corpus, is_entailment_dominant, BatchConfig, Fallback, FilterOptions, NliDistribution,
    TableBackend,
};
use splitrefine::partition::SplitMix64;
use splitrefine::segmenter::RuleSet;

/// All triples (i, j, k) / 20 with i + j + k = 20.
fn grid() -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for i in 0..=20 {
        for j in 0..=20 - i {
            out.push([i, j, 20 - i - j]);
        }
    }
    out
}

fn dist(t: [u32; 3]) -> NliDistribution {
    NliDistribution::new(t[0] as f64 / 20.0, t[1] as f64 / 20.0, t[2] as f64 / 20.0).unwrap()
}

#[test]
fn dominance_agrees_with_brute_force_on_the_grid() {
    let grid = grid();
    assert_eq!(grid.len(), 231);
    let mut ties = 0;
    for t in grid {
        let brute = t[0] > t[1] && t[0] > t[2];
        if t[0] == t[1] || t[0] == t[2] {
            ties += 1;
        }
        assert_eq!(is_entailment_dominant(&dist(t)), brute, "{t:?}");
    }
    assert!(ties > 0);
}

struct Synthetic {
    corpus: Corpus,
    table: TableBackend,
    /// Stored triples per record, in simple order.
    triples: Vec<Vec<[u32; 3]>>,
}

fn synthetic(records: usize, seed: u64) -> Synthetic {
    let grid = grid();
    let mut rng = SplitMix64::new(seed);
    let mut corpus = Corpus::new();
    let mut table = TableBackend::new(Fallback::Error);
    let mut triples = Vec::new();
    for r in 0..records {
        let complex = format!("Complex sentence number {r}.");
        let n = 1 + rng.below(4) as usize;
        let simples: Vec<String> = (0..n)
            .map(|s| format!("Simple {s} of record {r}."))
            .collect();
        let mut mine = Vec::new();
        for s in &simples {
            // bias towards dominant triples so both outcomes are common
            let t = loop {
                let t = grid[rng.below(grid.len() as u64) as usize];
                if t[0] >= t[1].max(t[2]) || rng.below(3) == 0 {
                    break t;
                }
            };
            table.insert(&complex, s, dist(t));
            mine.push(t);
        }
        corpus
            .push(
                Record::new(&complex, &simples)
                    .unwrap()
                    .with_id(Some(format!("r{r}"))),
            )
            .unwrap();
        triples.push(mine);
    }
    Synthetic {
        corpus,
        table,
        triples,
    }
}

#[test]
fn kept_set_equals_brute_force_over_1000_records() {
    let data = synthetic(1000, 7);
    let out = filter_corpus(&data.corpus, &data.table, &FilterOptions::default()).unwrap();
    let brute: Vec<&Record> = data
        .corpus
        .records()
        .iter()
        .zip(&data.triples)
        .filter(|(_, ts)| ts.iter().all(|t| t[0] > t[1] && t[0] > t[2]))
        .map(|(r, _)| r)
        .collect();
    assert!(brute.len() > 100 && brute.len() < 900, "{}", brute.len());
    assert_eq!(out.kept.records().iter().collect::<Vec<_>>(), brute);
    for (decision, ts) in out.decisions.iter().zip(&data.triples) {
        assert_eq!(decision.verdicts().len(), ts.len());
    }
}

#[test]
fn scheduling_does_not_change_the_result() {
    let data = synthetic(200, 11);
    let base = filter_corpus(&data.corpus, &data.table, &FilterOptions::default()).unwrap();
    for (batch_size, concurrency) in [(1, 1), (3, 7), (64, 2), (1000, 1)] {
        let options = FilterOptions {
            batch: BatchConfig {
                batch_size,
                concurrency,
            },
            skip_on_error: false,
        };
        let out = filter_corpus(&data.corpus, &data.table, &options).unwrap();
        assert_eq!(out, base);
    }
}

#[test]
fn filtering_is_idempotent() {
    let data = synthetic(300, 3);
    let once = filter_corpus(&data.corpus, &data.table, &FilterOptions::default()).unwrap();
    let twice = filter_corpus(&once.kept, &data.table, &FilterOptions::default()).unwrap();
    assert_eq!(twice.kept, once.kept);
    assert_eq!(twice.removed(), 0);
}

#[test]
fn entailment_ratio_matches_brute_force_on_ten_instances() {
    let rules = RuleSet::english();
    let mut table = TableBackend::new(Fallback::Error);
    let mut expected = 0;
    let mut instances = Vec::new();
    let mut rng = SplitMix64::new(99);
    let grid = grid();
    for i in 0..10 {
        let source = format!("Source sentence {i} with details.");
        let sentences: Vec<String> = (0..=i % 3)
            .map(|s| format!("Output part {s} of {i}."))
            .collect();
        let mut all = true;
        for s in &sentences {
            let t = grid[rng.below(grid.len() as u64) as usize];
            table.insert(&source, s, dist(t));
            all &= t[0] > t[1] && t[0] > t[2];
        }
        expected += all as usize;
        instances.push(EvalInstance::new(&source, sentences.join(" "), ["ref."]).unwrap());
    }
    let got = entailment_ratio(&instances, &table, rules, &BatchConfig::default()).unwrap();
    assert_eq!(got, 100.0 * expected as f64 / 10.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn kept_records_are_an_ordered_subsequence(seed in any::<u64>(), n in 0usize..60) {
        let data = synthetic(n, seed);
        let out = filter_corpus(&data.corpus, &data.table, &FilterOptions::default()).unwrap();
        let mut input = data.corpus.records().iter();
        for kept in out.kept.records() {
            prop_assert!(input.any(|r| r == kept));
        }
        prop_assert_eq!(out.kept.len() + out.removed(), n);
    }
}
