//! Applies detector verdicts to a dataset: removals, rewrites and
//! duplicate elimination.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RuleConfig;
use crate::corpus::{CodeCommentPair, Dataset};
use crate::detectors::{diagnose, group_duplicates, rejoin_candidates, rejoin_identifiers, strip_tampering};
use crate::error::Result;
use crate::lexing::tokenize_with;
use crate::report::QualityReport;
use crate::taxonomy::{Diagnosis, NoiseAction, NoiseCategory, NoiseLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Kept,
    Updated,
    Removed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Kept => "kept",
            Verdict::Updated => "updated",
            Verdict::Removed => "removed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CleanOutcome {
    pub pair_id: String,
    pub verdict: Verdict,
    pub labels: Vec<NoiseLabel>,
    /// The pair as it leaves the cleaner; `None` iff removed.
    pub final_pair: Option<CodeCommentPair>,
    pub diagnostics: Vec<String>,
}

impl CleanOutcome {
    pub fn has(&self, category: NoiseCategory) -> bool {
        self.labels.iter().any(|l| l.category == category)
    }

    /// The labels as a diagnosis, including any duplicate-code label.
    pub fn to_diagnosis(&self) -> Diagnosis {
        let mut d = Diagnosis::new(self.pair_id.clone());
        for label in &self.labels {
            d.insert(label.clone());
        }
        d.diagnostics = self.diagnostics.clone();
        d
    }
}

#[derive(Debug, Clone)]
pub struct DistillResult {
    pub distilled: Dataset,
    pub outcomes: Vec<CleanOutcome>,
    pub report: QualityReport,
}

impl DistillResult {
    pub fn count(&self, verdict: Verdict) -> usize {
        self.outcomes.iter().filter(|o| o.verdict == verdict).count()
    }
}

/// Applies Update labels to a pair.
///
/// The comment goes through the whole-comment proposals (partial or verbose
/// sentence) first, then tag stripping, then identifier rejoining on
/// whatever text is current. The code takes the block-comment proposal.
pub fn apply_updates(pair: &CodeCommentPair, labels: &[NoiseLabel], cfg: &RuleConfig) -> CodeCommentPair {
    let updates: Vec<&NoiseLabel> = labels.iter().filter(|l| l.action == NoiseAction::Update).collect();
    let find = |c: NoiseCategory| updates.iter().find(|l| l.category == c);
    let mut out = pair.clone();

    let partial = find(NoiseCategory::PartialSentence).and_then(|l| l.proposed_comment.as_ref());
    let verbose = find(NoiseCategory::VerboseSentence).and_then(|l| l.proposed_comment.as_ref());
    assert!(
        partial.is_none() || verbose.is_none(),
        "a comment cannot be both a prefix and an extension of its first sentence"
    );
    if let Some(whole) = partial.or(verbose) {
        out.comment = whole.clone();
    }
    if find(NoiseCategory::ContentTampering).is_some() {
        out.comment = strip_tampering(&out.comment, cfg);
    }
    if find(NoiseCategory::OverSplitting).is_some() {
        if let Ok(tokens) = tokenize_with(&pair.code, pair.language, &cfg.keywords) {
            out.comment = rejoin_identifiers(&out.comment, &rejoin_candidates(&tokens, pair.language, cfg));
        }
    }
    if let Some(code) = find(NoiseCategory::BlockCommentCode).and_then(|l| l.proposed_code.as_ref()) {
        out.code = code.clone();
    }
    out
}

/// Diagnoses and resolves every pair, then removes duplicated code among
/// the survivors. Outcomes come back in input order.
pub fn clean_dataset(dataset: &Dataset, cfg: &RuleConfig) -> DistillResult {
    let outcomes = clean_outcomes(dataset, cfg);
    let distilled_pairs: Vec<CodeCommentPair> = outcomes.iter().filter_map(|o| o.final_pair.clone()).collect();
    let report = QualityReport::from_outcomes(dataset.source_name(), &outcomes, cfg);
    let distilled = Dataset::new(dataset.source_name(), distilled_pairs)
        .expect("cleaning preserves id uniqueness and non-empty fields");
    DistillResult {
        distilled,
        outcomes,
        report,
    }
}

pub(crate) fn clean_outcomes(dataset: &Dataset, cfg: &RuleConfig) -> Vec<CleanOutcome> {
    let mut outcomes: Vec<CleanOutcome> = dataset
        .pairs()
        .par_iter()
        .map(|pair| resolve(pair, cfg))
        .collect();
    if cfg.is_enabled(NoiseCategory::DuplicatedCode) {
        remove_duplicates(&mut outcomes, cfg);
    }
    outcomes
}

fn resolve(pair: &CodeCommentPair, cfg: &RuleConfig) -> CleanOutcome {
    let diagnosis = diagnose(pair, cfg);
    let labels = diagnosis.labels;
    let (verdict, final_pair) = if labels.iter().any(|l| l.action == NoiseAction::Remove) {
        (Verdict::Removed, None)
    } else if labels.is_empty() {
        (Verdict::Kept, Some(pair.clone()))
    } else {
        (Verdict::Updated, Some(apply_updates(pair, &labels, cfg)))
    };
    CleanOutcome {
        pair_id: pair.id.clone(),
        verdict,
        labels,
        final_pair,
        diagnostics: diagnosis.diagnostics,
    }
}

fn remove_duplicates(outcomes: &mut [CleanOutcome], cfg: &RuleConfig) {
    let survivors: Vec<usize> = (0..outcomes.len()).filter(|&i| outcomes[i].final_pair.is_some()).collect();
    let items = survivors
        .iter()
        .map(|&i| {
            let pair = outcomes[i].final_pair.as_ref().unwrap();
            (pair, pair.partition)
        })
        .collect();
    let (groups, _) = group_duplicates(items, cfg);
    let mut losers: Vec<(usize, String)> = groups
        .into_values()
        .flat_map(|members| {
            let keeper = outcomes[survivors[members[0]]].pair_id.clone();
            members[1..]
                .iter()
                .map(|&m| (survivors[m], keeper.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    losers.sort();
    for (i, keeper) in losers {
        let outcome = &mut outcomes[i];
        outcome.verdict = Verdict::Removed;
        outcome.final_pair = None;
        outcome
            .labels
            .push(NoiseLabel::remove(NoiseCategory::DuplicatedCode, format!("same code as {keeper}")));
    }
}

/// Ids of distilled pairs that a second cleaning pass would still change.
pub fn fixpoint_violations(distilled: &Dataset, cfg: &RuleConfig) -> Vec<String> {
    clean_outcomes(distilled, cfg)
        .into_iter()
        .filter(|o| o.verdict != Verdict::Kept)
        .map(|o| o.pair_id)
        .collect()
}

/// True when cleaning the distilled output again changes nothing.
pub fn verify_fixpoint(result: &DistillResult, cfg: &RuleConfig) -> bool {
    fixpoint_violations(&result.distilled, cfg).is_empty()
}

#[derive(Serialize)]
struct OutcomeRecord<'a> {
    id: &'a str,
    verdict: Verdict,
    categories: Vec<NoiseCategory>,
    evidence: Vec<&'a str>,
}

/// Writes one `{id, verdict, categories, evidence}` object per line.
pub fn write_outcomes<W: Write>(outcomes: &[CleanOutcome], mut output: W) -> Result<()> {
    for o in outcomes {
        let record = OutcomeRecord {
            id: &o.pair_id,
            verdict: o.verdict,
            categories: o.labels.iter().map(|l| l.category).collect(),
            evidence: o.labels.iter().map(|l| l.evidence.as_str()).collect(),
        };
        serde_json::to_writer(&mut output, &record)?;
        output.write_all(b"\n")?;
    }
    Ok(())
}
