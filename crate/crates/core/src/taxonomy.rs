//! The twelve noise categories and the labels detectors attach to pairs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseCategory {
    PartialSentence,
    VerboseSentence,
    ContentTampering,
    OverSplitting,
    NonLiteral,
    Interrogation,
    UnderDevelopment,
    EmptyFunction,
    CommentedOutMethod,
    BlockCommentCode,
    AutoCode,
    DuplicatedCode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseAction {
    Remove,
    Update,
}

impl NoiseAction {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseAction::Remove => "remove",
            NoiseAction::Update => "update",
        }
    }
}

impl FromStr for NoiseAction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "remove" => Ok(NoiseAction::Remove),
            "update" => Ok(NoiseAction::Update),
            other => Err(Error::Config(format!("unknown action: {other}"))),
        }
    }
}

impl fmt::Display for NoiseAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl NoiseCategory {
    pub const ALL: [NoiseCategory; 12] = [
        NoiseCategory::PartialSentence,
        NoiseCategory::VerboseSentence,
        NoiseCategory::ContentTampering,
        NoiseCategory::OverSplitting,
        NoiseCategory::NonLiteral,
        NoiseCategory::Interrogation,
        NoiseCategory::UnderDevelopment,
        NoiseCategory::EmptyFunction,
        NoiseCategory::CommentedOutMethod,
        NoiseCategory::BlockCommentCode,
        NoiseCategory::AutoCode,
        NoiseCategory::DuplicatedCode,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The first seven categories concern the comment, the last five the code.
    pub fn is_comment_side(self) -> bool {
        self.index() < 7
    }

    pub fn side(self) -> &'static str {
        if self.is_comment_side() {
            "comment"
        } else {
            "code"
        }
    }

    pub fn default_action(self) -> NoiseAction {
        match self {
            NoiseCategory::PartialSentence
            | NoiseCategory::VerboseSentence
            | NoiseCategory::OverSplitting
            | NoiseCategory::BlockCommentCode => NoiseAction::Update,
            _ => NoiseAction::Remove,
        }
    }

    /// Categories that know how to rewrite a pair instead of dropping it.
    pub fn supports_update(self) -> bool {
        matches!(
            self,
            NoiseCategory::PartialSentence
                | NoiseCategory::VerboseSentence
                | NoiseCategory::ContentTampering
                | NoiseCategory::OverSplitting
                | NoiseCategory::BlockCommentCode
        )
    }

    pub fn key(self) -> &'static str {
        match self {
            NoiseCategory::PartialSentence => "partial_sentence",
            NoiseCategory::VerboseSentence => "verbose_sentence",
            NoiseCategory::ContentTampering => "content_tampering",
            NoiseCategory::OverSplitting => "over_splitting",
            NoiseCategory::NonLiteral => "non_literal",
            NoiseCategory::Interrogation => "interrogation",
            NoiseCategory::UnderDevelopment => "under_development",
            NoiseCategory::EmptyFunction => "empty_function",
            NoiseCategory::CommentedOutMethod => "commented_out_method",
            NoiseCategory::BlockCommentCode => "block_comment_code",
            NoiseCategory::AutoCode => "auto_code",
            NoiseCategory::DuplicatedCode => "duplicated_code",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            NoiseCategory::PartialSentence => "Partial Sentence",
            NoiseCategory::VerboseSentence => "Verbose Sentence",
            NoiseCategory::ContentTampering => "Content Tampering",
            NoiseCategory::OverSplitting => "Over-Splitting",
            NoiseCategory::NonLiteral => "Non-Literal",
            NoiseCategory::Interrogation => "Interrogation",
            NoiseCategory::UnderDevelopment => "Under-Development",
            NoiseCategory::EmptyFunction => "Empty Function",
            NoiseCategory::CommentedOutMethod => "Commented-Out Method",
            NoiseCategory::BlockCommentCode => "Block-Comment Code",
            NoiseCategory::AutoCode => "Auto Code",
            NoiseCategory::DuplicatedCode => "Duplicated Code",
        }
    }
}

impl FromStr for NoiseCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let wanted = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        NoiseCategory::ALL
            .into_iter()
            .find(|c| c.key() == wanted)
            .ok_or_else(|| Error::Config(format!("unknown category: {s}")))
    }
}

impl fmt::Display for NoiseCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseLabel {
    pub category: NoiseCategory,
    pub action: NoiseAction,
    pub evidence: String,
    /// Set by raw-comment-free heuristics; reported separately.
    #[serde(default)]
    pub fallback: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proposed_comment: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proposed_code: Option<String>,
}

impl NoiseLabel {
    pub fn remove(category: NoiseCategory, evidence: impl Into<String>) -> Self {
        NoiseLabel {
            category,
            action: NoiseAction::Remove,
            evidence: evidence.into(),
            fallback: false,
            proposed_comment: None,
            proposed_code: None,
        }
    }

    pub fn update_comment(category: NoiseCategory, evidence: impl Into<String>, comment: String) -> Self {
        NoiseLabel {
            action: NoiseAction::Update,
            proposed_comment: Some(comment),
            ..NoiseLabel::remove(category, evidence)
        }
    }

    pub fn update_code(category: NoiseCategory, evidence: impl Into<String>, code: String) -> Self {
        NoiseLabel {
            action: NoiseAction::Update,
            proposed_code: Some(code),
            ..NoiseLabel::remove(category, evidence)
        }
    }

    pub(crate) fn as_fallback(mut self) -> Self {
        self.fallback = true;
        if !self.evidence.starts_with("fallback") {
            self.evidence = format!("fallback: {}", self.evidence);
        }
        self
    }
}

/// Every label found on one pair, at most one per category, sorted by category.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnosis {
    pub pair_id: String,
    pub labels: Vec<NoiseLabel>,
    /// Detector failures (for example code that does not tokenize).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl Diagnosis {
    pub fn new(pair_id: impl Into<String>) -> Self {
        Diagnosis {
            pair_id: pair_id.into(),
            ..Default::default()
        }
    }

    /// Adds a label, replacing any existing label of the same category.
    pub fn insert(&mut self, label: NoiseLabel) {
        match self.labels.binary_search_by_key(&label.category, |l| l.category) {
            Ok(i) => self.labels[i] = label,
            Err(i) => self.labels.insert(i, label),
        }
    }

    pub fn get(&self, category: NoiseCategory) -> Option<&NoiseLabel> {
        self.labels.iter().find(|l| l.category == category)
    }

    pub fn has(&self, category: NoiseCategory) -> bool {
        self.get(category).is_some()
    }

    pub fn categories(&self) -> Vec<NoiseCategory> {
        self.labels.iter().map(|l| l.category).collect()
    }

    pub fn is_clean(&self) -> bool {
        self.labels.is_empty()
    }
}
