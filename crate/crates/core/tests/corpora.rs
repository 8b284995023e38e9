use std::collections::BTreeMap;

use distill::cleaner::{clean_dataset, fixpoint_violations, Verdict};
use distill::metrics::evaluate_detectors;
use distill::synth::{fuzz_corpus, gold_corpus, planted_corpus};
use distill::{assess, Diagnosis, NoiseCategory, RuleConfig};

fn predictions(outcomes: &[distill::CleanOutcome]) -> Vec<Diagnosis> {
    outcomes.iter().map(|o| o.to_diagnosis()).collect()
}

#[test]
fn gold_corpus_is_labelled_exactly() {
    let (ds, gold) = gold_corpus();
    let cfg = RuleConfig::default();
    let result = clean_dataset(&ds, &cfg);
    for o in &result.outcomes {
        let got: Vec<_> = o.labels.iter().map(|l| l.category).collect();
        let want: Vec<_> = gold[&o.pair_id].iter().copied().collect();
        assert_eq!(got, want, "{}: {:?}", o.pair_id, o.labels);
    }
    let eval = evaluate_detectors(&predictions(&result.outcomes), &gold).unwrap();
    assert_eq!(eval.micro.f1, 1.0);
    assert_eq!(eval.macro_f1, 1.0);
}

#[test]
fn gold_corpus_actions() {
    let (ds, _) = gold_corpus();
    let cfg = RuleConfig::default();
    let result = clean_dataset(&ds, &cfg);
    assert_eq!(result.count(Verdict::Updated), 4);
    assert_eq!(result.count(Verdict::Removed), 8);
    let by_id: BTreeMap<_, _> = result.distilled.iter().map(|p| (p.id.as_str(), p)).collect();
    assert_eq!(by_id["gold-partial"].comment, "returns the high value for an item within a series");
    assert_eq!(
        by_id["gold-verbose"].comment,
        "generate a csv file containing a summary of the xblock usage"
    );
    assert_eq!(by_id["gold-splitting"].comment, "this method initializes jTextField");
    assert!(!by_id["gold-blockcomment"].code.contains("TODO"));
    assert!(fixpoint_violations(&result.distilled, &cfg).is_empty());

    let report = assess(&ds, &cfg).unwrap();
    assert_eq!(report.noisy_total.count, 12);
    for s in &report.per_category {
        assert_eq!(s.count, 1, "{}", s.category);
    }
}

#[test]
fn planted_rates_are_recovered() {
    let planted = planted_corpus(1000, 0.05, 11);
    let cfg = RuleConfig::default();
    let result = clean_dataset(&planted.dataset, &cfg);
    let eval = evaluate_detectors(&predictions(&result.outcomes), &planted.labels).unwrap();
    for c in NoiseCategory::ALL {
        let e = &eval.per_category[&c];
        assert!(e.prf.recall == 1.0 && e.prf.precision >= 0.95, "{c}: {e:?}");
        assert!((result.report.stat(c).pct - 0.05).abs() <= 0.005, "{c}");
    }
    assert!(fixpoint_violations(&result.distilled, &cfg).is_empty());
}

#[test]
fn fuzz_corpora_reach_a_fixpoint() {
    let cfg = RuleConfig::default();
    for seed in 0..20 {
        let ds = fuzz_corpus(200, seed);
        let result = clean_dataset(&ds, &cfg);
        let bad = fixpoint_violations(&result.distilled, &cfg);
        assert!(bad.is_empty(), "seed {seed}: {bad:?}");
    }
}
