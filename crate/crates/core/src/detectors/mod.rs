//! Per-pair noise detectors and corpus-level duplicate grouping.

mod code;
mod comment;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::config::RuleConfig;
use crate::corpus::{CodeCommentPair, Dataset, Partition};
use crate::error::Result;
use crate::lexing::{normalize_tokens, tokenize_with};
use crate::taxonomy::{Diagnosis, NoiseAction, NoiseCategory, NoiseLabel};

pub use code::{
    detect_auto_code, detect_block_comment_code, detect_commented_out_method, detect_empty_function,
    locate_body, method_name, statement_count,
};
pub use comment::{
    detect_content_tampering, detect_interrogation, detect_non_literal, detect_over_splitting,
    detect_partial_sentence, detect_under_development, detect_verbose_sentence, rejoin_identifiers,
};
pub(crate) use comment::{rejoin_candidates, strip_tampering};

/// Downgrades an Update label to Remove when the config asks for removal.
pub(crate) fn finalize(mut label: NoiseLabel, cfg: &RuleConfig) -> NoiseLabel {
    if label.action == NoiseAction::Update && cfg.action_for(label.category) == NoiseAction::Remove {
        label.action = NoiseAction::Remove;
        label.proposed_comment = None;
        label.proposed_code = None;
    }
    label
}

/// Runs every enabled per-pair detector. Detector errors end up in
/// `diagnostics`; they never stop the other detectors.
pub fn diagnose(pair: &CodeCommentPair, cfg: &RuleConfig) -> Diagnosis {
    use NoiseCategory::*;

    let mut d = Diagnosis::new(pair.id.clone());
    let on = |c| cfg.is_enabled(c);
    let mut add = |label: Option<NoiseLabel>| {
        if let Some(label) = label {
            d.insert(label);
        }
    };
    if on(PartialSentence) {
        add(detect_partial_sentence(pair, cfg));
    }
    if on(VerboseSentence) {
        add(detect_verbose_sentence(pair, cfg));
    }
    if on(ContentTampering) {
        add(detect_content_tampering(pair, cfg));
    }
    if on(NonLiteral) {
        add(detect_non_literal(pair, cfg));
    }
    if on(Interrogation) {
        add(detect_interrogation(pair, cfg));
    }
    if on(UnderDevelopment) {
        add(detect_under_development(pair, cfg));
    }
    if on(CommentedOutMethod) {
        add(detect_commented_out_method(pair, cfg));
    }

    let needs_tokens = [OverSplitting, EmptyFunction, BlockCommentCode, AutoCode];
    if !needs_tokens.into_iter().any(on) {
        return d;
    }
    let tokens = match tokenize_with(&pair.code, pair.language, &cfg.keywords) {
        Ok(tokens) => tokens,
        Err(e) => {
            d.diagnostics.push(format!("tokenize: {e}"));
            return d;
        }
    };
    let mut failures = Vec::new();
    let mut add_result = |category: NoiseCategory, result: Result<Option<NoiseLabel>>| match result {
        Ok(Some(label)) => d.insert(label),
        Ok(None) => {}
        Err(e) => failures.push(format!("{category}: {e}")),
    };
    if on(OverSplitting) {
        add_result(OverSplitting, Ok(comment::over_splitting_from_tokens(pair, &tokens, cfg)));
    }
    if on(EmptyFunction) {
        add_result(EmptyFunction, code::empty_function_from_tokens(&tokens, pair.language));
    }
    if on(BlockCommentCode) {
        add_result(BlockCommentCode, Ok(code::block_comment_from_tokens(pair, &tokens, cfg)));
    }
    if on(AutoCode) {
        add_result(AutoCode, code::auto_code_from_tokens(pair, &tokens, cfg));
    }
    d.diagnostics.extend(failures);
    d
}

/// Duplicate groups keyed by normalized code, plus pairs whose code could
/// not be normalized (those are treated as unique).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Duplicates {
    /// Each list is ordered keeper first.
    pub groups: BTreeMap<String, Vec<String>>,
    pub failures: Vec<(String, String)>,
}

impl Duplicates {
    /// Ids that lose to an earlier copy of the same code.
    pub fn non_keepers(&self) -> impl Iterator<Item = &str> {
        self.groups.values().flat_map(|ids| ids[1..].iter().map(String::as_str))
    }
}

pub fn find_duplicates(dataset: &Dataset, cfg: &RuleConfig) -> Duplicates {
    let pairs = dataset.pairs();
    let (groups, failures) = group_duplicates(pairs.iter().map(|p| (p, p.partition)).collect(), cfg);
    Duplicates {
        groups: groups
            .into_iter()
            .map(|(key, members)| (key, members.into_iter().map(|i| pairs[i].id.clone()).collect()))
            .collect(),
        failures: failures.into_iter().map(|(i, e)| (pairs[i].id.clone(), e)).collect(),
    }
}

/// Groups `items` (by position) on normalized code. Groups of one are
/// dropped; members are ordered by keep precedence, then position.
pub(crate) fn group_duplicates(
    items: Vec<(&CodeCommentPair, Partition)>,
    cfg: &RuleConfig,
) -> (BTreeMap<String, Vec<usize>>, Vec<(usize, String)>) {
    let keys: Vec<Result<String>> = items
        .par_iter()
        .map(|(pair, _)| tokenize_with(&pair.code, pair.language, &cfg.keywords).map(|t| normalize_tokens(&t)))
        .collect();
    let mut by_key: HashMap<String, Vec<usize>> = HashMap::new();
    let mut failures = Vec::new();
    for (i, key) in keys.into_iter().enumerate() {
        match key {
            Ok(key) => by_key.entry(key).or_default().push(i),
            Err(e) => failures.push((i, e.to_string())),
        }
    }
    let groups = by_key
        .into_iter()
        .filter(|(_, members)| members.len() > 1)
        .map(|(key, mut members)| {
            members.sort_by_key(|&i| (cfg.precedence_rank(items[i].1), i));
            (key, members)
        })
        .collect();
    (groups, failures)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagnose_block_comment_only() {
        let pair = CodeCommentPair::new(
            "g",
            "public int getFixQuality(){\n  checkRefresh();\n  // TODO: Why is he using Math.round?\n  return Math.round(quality);}",
            "get gps quality data",
        )
        .with_raw("/* Get GPS Quality Data  */");
        let d = diagnose(&pair, &RuleConfig::default());
        assert_eq!(d.categories(), vec![NoiseCategory::BlockCommentCode]);
    }

    #[test]
    fn diagnose_multi_label() {
        let pair = CodeCommentPair::new("s", "public void setX(int x) { }", "set x ?");
        let d = diagnose(&pair, &RuleConfig::default());
        assert_eq!(
            d.categories(),
            vec![NoiseCategory::Interrogation, NoiseCategory::EmptyFunction, NoiseCategory::AutoCode]
        );
    }

    #[test]
    fn diagnose_clean_and_broken() {
        let cfg = RuleConfig::default();
        let clean = CodeCommentPair::new("c", "int sum(int a, int b) { int s = a + b; log(s); return s; }", "adds two numbers");
        assert!(diagnose(&clean, &cfg).is_clean());
        let broken = CodeCommentPair::new("b", "String s = \"open", "do we need this ?");
        let d = diagnose(&broken, &cfg);
        assert_eq!(d.categories(), vec![NoiseCategory::Interrogation]);
        assert!(d.diagnostics[0].starts_with("tokenize:"));
    }

    #[test]
    fn action_override_downgrades_updates() {
        let mut cfg = RuleConfig::default();
        cfg.set_action(NoiseCategory::BlockCommentCode, NoiseAction::Remove).unwrap();
        let pair = CodeCommentPair::new("b", "int f(){ /*x*/ return 1; }", "returns one");
        let label = diagnose(&pair, &cfg).labels.remove(0);
        assert_eq!(label.action, NoiseAction::Remove);
        assert!(label.proposed_code.is_none());
    }

    #[test]
    fn duplicate_keepers() {
        let cfg = RuleConfig::default();
        let ds = Dataset::new("d", vec![
            CodeCommentPair::new("t", "int f() { return 1; }", "a").with_partition(Partition::Test),
            CodeCommentPair::new("r", "int f()\n{\n  return 1;\n}", "b"),
            CodeCommentPair::new("u", "int g() { return 2; }", "c"),
        ])
        .unwrap();
        let dups = find_duplicates(&ds, &cfg);
        assert_eq!(dups.groups.len(), 1);
        assert_eq!(dups.groups.values().next().unwrap(), &vec!["r".to_string(), "t".to_string()]);
        assert_eq!(dups.non_keepers().collect::<Vec<_>>(), vec!["t"]);

        let same = Dataset::new(
            "d",
            ["x", "y", "z"].iter().map(|id| CodeCommentPair::new(*id, "void a(){b();}", "c")).collect(),
        )
        .unwrap();
        assert_eq!(find_duplicates(&same, &cfg).groups.values().next().unwrap()[0], "x");
    }
}
