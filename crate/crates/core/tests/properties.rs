use std::collections::BTreeSet;

use proptest::prelude::*;

use distill::cleaner::{apply_updates, clean_dataset, Verdict};
use distill::detectors::{diagnose, find_duplicates};
use distill::lexing::{normalize_code, split_identifier, strip_block_comments, tokenize_code};
use distill::metrics::{bleu, cider, lcs_len, meteor, rouge_l, BleuMode, MeteorParams, ROUGE_BETA};
use distill::sentence::{classify_tokens, extract_first_sentence, normalize_for_match, AlignmentClass};
use distill::synth::{fuzz_corpus, planted_corpus};
use distill::{CodeCommentPair, Dataset, Language, NoiseAction, RuleConfig};

fn java_fragment() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        "[a-z][a-zA-Z0-9_]{0,8}",
        "[0-9]{1,4}",
        Just("\"st\"".to_string()),
        Just("/* c */".to_string()),
        Just("// note\n".to_string()),
        Just("{".to_string()),
        Just("}".to_string()),
        Just("(".to_string()),
        Just(")".to_string()),
        Just(";".to_string()),
        Just("+=".to_string()),
        Just(".".to_string()),
    ];
    let sep = prop_oneof![Just(" "), Just(""), Just("\n"), Just("  ")];
    prop::collection::vec((piece, sep), 1..30).prop_map(|v| {
        let mut s: String = v.into_iter().map(|(p, s)| format!("{p}{s}")).collect();
        if s.trim().is_empty() {
            s.push('x');
        }
        s
    })
}

fn words() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e"]), 0..9)
        .prop_map(|v| v.into_iter().map(String::from).collect())
}

proptest! {
    #[test]
    fn tokens_and_whitespace_cover_the_source(src in java_fragment()) {
        let toks = tokenize_code(&src, Language::Java).unwrap();
        let mut rebuilt = String::new();
        let mut pos = 0;
        for t in &toks {
            prop_assert!(src[pos..t.offset].chars().all(char::is_whitespace));
            rebuilt.push_str(&src[pos..t.offset]);
            rebuilt.push_str(&t.text);
            pos = t.end();
        }
        prop_assert!(src[pos..].chars().all(char::is_whitespace));
        rebuilt.push_str(&src[pos..]);
        prop_assert_eq!(rebuilt, src);
    }

    #[test]
    fn strip_is_idempotent_and_keeps_code_tokens(src in java_fragment()) {
        let (once, _) = strip_block_comments(&src, Language::Java).unwrap();
        if once.trim().is_empty() {
            return Ok(());
        }
        let (twice, removed) = strip_block_comments(&once, Language::Java).unwrap();
        prop_assert!(removed.is_empty());
        prop_assert_eq!(&twice, &once);
        prop_assert_eq!(normalize_code(&once, Language::Java).unwrap(), normalize_code(&src, Language::Java).unwrap());
    }

    #[test]
    fn normalize_ignores_layout(src in java_fragment()) {
        let spaced = src.replace(' ', "  \t");
        prop_assert_eq!(normalize_code(&src, Language::Java).unwrap(), normalize_code(&spaced, Language::Java).unwrap());
    }

    #[test]
    fn split_parts_rebuild_the_name(name in "[A-Za-z][A-Za-z0-9_]{0,15}") {
        let parts = split_identifier(&name);
        prop_assert_eq!(parts.concat(), name.replace('_', "").to_lowercase());
        prop_assert!(parts.iter().all(|p| !p.is_empty()));
    }

    #[test]
    fn first_sentence_survives_reflowing(ws in prop::collection::vec("[a-z]{1,6}", 1..12), breaks in prop::collection::vec(any::<bool>(), 12)) {
        let mut body = String::new();
        for (i, w) in ws.iter().enumerate() {
            if i > 0 {
                body.push_str(if breaks[i] { "\n * " } else { " " });
            }
            body.push_str(w);
        }
        let flat = extract_first_sentence(&format!("/** {}. More text here. */", ws.join(" ")), Language::Java);
        let flowed = extract_first_sentence(&format!("/** {body}. More text here. */"), Language::Java);
        prop_assert_eq!(normalize_for_match(&flat.text), normalize_for_match(&flowed.text));
        prop_assert_eq!(normalize_for_match(&flat.text), ws.clone());
    }

    #[test]
    fn alignment_classes_partition_prefixes(first in words(), cut in 0usize..10, extra in words()) {
        let cut = cut.min(first.len());
        let class = classify_tokens(&first[..cut], &first);
        if cut == first.len() {
            prop_assert_eq!(class, AlignmentClass::Exact);
        } else if cut > 0 {
            prop_assert_eq!(class, AlignmentClass::Partial);
        }
        let mut longer = first.clone();
        longer.extend(extra.iter().cloned());
        if !extra.is_empty() && !first.is_empty() {
            prop_assert_eq!(classify_tokens(&longer, &first), AlignmentClass::Verbose);
        }
    }

    #[test]
    fn updates_do_not_reflag_themselves(seed in 0u64..500) {
        let cfg = RuleConfig::default();
        for pair in fuzz_corpus(12, seed).iter() {
            let d = diagnose(pair, &cfg);
            for label in d.labels.iter().filter(|l| l.action == NoiseAction::Update) {
                let updated = apply_updates(pair, std::slice::from_ref(label), &cfg);
                let again = diagnose(&updated, &cfg);
                prop_assert!(!again.has(label.category), "{}: {:?} -> {:?}", pair.id, label, again);
            }
            for label in &d.labels {
                prop_assert!(d.labels.iter().filter(|l| l.category == label.category).count() == 1);
            }
        }
    }

    #[test]
    fn duplicate_groups_partition_the_ids(seed in 0u64..500) {
        let ds = fuzz_corpus(40, seed);
        let dups = find_duplicates(&ds, &RuleConfig::default());
        let mut seen = BTreeSet::new();
        for ids in dups.groups.values() {
            prop_assert!(ids.len() >= 2);
            for id in ids {
                prop_assert!(seen.insert(id.clone()));
            }
        }
        let all: BTreeSet<String> = ds.iter().map(|p| p.id.clone()).collect();
        prop_assert!(seen.is_subset(&all));
    }

    #[test]
    fn cleaning_conserves_and_orders(seed in 0u64..500) {
        let ds = fuzz_corpus(40, seed);
        let cfg = RuleConfig::default();
        let r = clean_dataset(&ds, &cfg);
        prop_assert_eq!(r.outcomes.len(), ds.len());
        prop_assert_eq!(r.count(Verdict::Kept) + r.count(Verdict::Updated), r.distilled.len());
        let order: Vec<&str> = r.outcomes.iter().filter(|o| o.verdict != Verdict::Removed).map(|o| o.pair_id.as_str()).collect();
        let distilled: Vec<&str> = r.distilled.iter().map(|p| p.id.as_str()).collect();
        prop_assert_eq!(order, distilled);
        for o in &r.outcomes {
            if o.labels.iter().any(|l| l.action == NoiseAction::Remove) {
                prop_assert_eq!(o.verdict, Verdict::Removed);
            }
            prop_assert_eq!(o.verdict == Verdict::Kept, o.labels.is_empty());
        }
        prop_assert_eq!(r.report.noisy_total.count, r.count(Verdict::Removed) + r.count(Verdict::Updated));
    }

    #[test]
    fn metric_ranges(h in words(), r in words()) {
        let hyps = vec![h.clone(), r.clone()];
        let refs = vec![r.clone(), h.clone()];
        for mode in [BleuMode::Corpus, BleuMode::SentenceSmoothed] {
            for v in bleu(&hyps, &refs, 4, mode).unwrap() {
                prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
            }
        }
        let rl = rouge_l(&h, &r, ROUGE_BETA);
        prop_assert!((0.0..=1.0).contains(&rl));
        prop_assert_eq!(lcs_len(&h, &r), lcs_len(&r, &h));
        let m = meteor(&h, &r, MeteorParams::default());
        prop_assert!((0.0..=1.0).contains(&m));
        let c = cider(&hyps, &refs).unwrap();
        prop_assert!(c.per_sentence.iter().all(|&x| (0.0..=10.0 + 1e-9).contains(&x)));
    }
}

#[test]
fn disabling_a_rule_never_raises_other_counts() {
    let ds = planted_corpus(240, 0.05, 5).dataset;
    let base = distill::assess(&ds, &RuleConfig::default()).unwrap();
    for c in distill::NoiseCategory::ALL {
        let mut cfg = RuleConfig::default();
        cfg.set_enabled(c, false);
        let r = distill::assess(&ds, &cfg).unwrap();
        assert_eq!(r.stat(c).count, 0);
        for (a, b) in r.per_category.iter().zip(&base.per_category) {
            assert!(a.count <= b.count, "disabling {c} raised {}", a.category);
        }
    }
}

#[test]
fn all_rules_disabled_is_identity() {
    let ds = fuzz_corpus(60, 9);
    let r = clean_dataset(&ds, &RuleConfig::default().disable_all());
    assert_eq!(r.distilled, ds);
}

#[test]
fn parallel_and_serial_agree() {
    let ds: Dataset = fuzz_corpus(300, 21);
    let cfg = RuleConfig::default();
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let wide = rayon::ThreadPoolBuilder::new().num_threads(6).build().unwrap();
    let a = serial.install(|| clean_dataset(&ds, &cfg));
    let b = wide.install(|| clean_dataset(&ds, &cfg));
    assert_eq!(a.distilled, b.distilled);
    assert_eq!(a.outcomes, b.outcomes);
    assert_eq!(a.report, b.report);
}

#[test]
fn remove_override_turns_updates_into_removals() {
    let mut cfg = RuleConfig::default();
    cfg.set_action(distill::NoiseCategory::OverSplitting, NoiseAction::Remove).unwrap();
    let pair = CodeCommentPair::new("o", "void init() { jTextField = make(); jTextField.show(); }", "this method initializes j text field");
    let r = clean_dataset(&Dataset::new("d", vec![pair]).unwrap(), &cfg);
    assert_eq!(r.outcomes[0].verdict, Verdict::Removed);
}
