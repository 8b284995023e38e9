//! Rule configuration and the flat `dotted.key = value` config format.
//!
//! ```text
//! # comments start with '#'
//! rules.interrogation.enabled = false
//! rules.content_tampering.action = update
//! thresholds.max_auto_stmts = 3
//! thresholds.underdev_keywords = todo, fixme, work in progress
//! keep_precedence = train, valid, test
//! ```
//!
//! List values are comma separated. Keys this module does not know are handed
//! back to the caller so front ends can layer their own settings on top.

use std::collections::HashSet;

use crate::corpus::Partition;
use crate::error::{Error, Result};
use crate::lexing::Keywords;
use crate::sentence::SentenceRules;
use crate::taxonomy::{NoiseAction, NoiseCategory};

#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds {
    /// Identifiers need at least this many subtokens to count as over-split.
    pub min_split_subtokens: usize,
    /// Largest body (in statements) an auto-generated method may have.
    pub max_auto_stmts: usize,
    pub underdev_keywords: Vec<String>,
    /// Share of non-Latin letters above which a comment is non-literal.
    pub nonliteral_ratio: f64,
    /// A comment needs more than this many code-like lines to be a commented-out method.
    pub codey_line_min: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            min_split_subtokens: 2,
            max_auto_stmts: 2,
            underdev_keywords: words(&[
                "todo",
                "fixme",
                "xxx",
                "hack",
                "wip",
                "not implemented",
                "work in progress",
                "under construction",
                "description of the method",
                "auto-generated method stub",
                "deprecated",
            ]),
            nonliteral_ratio: 0.0,
            codey_line_min: 1,
        }
    }
}

/// Word lists used by the comment heuristics.
#[derive(Debug, Clone, PartialEq)]
pub struct WordLists {
    /// Words that cannot end a complete summary.
    pub dangling: Vec<String>,
    pub interrogative: Vec<String>,
    /// Pronouns that must follow an interrogative opener.
    pub interrogative_followers: Vec<String>,
    /// Ignored when comparing a comment with a method name.
    pub auto_stopwords: Vec<String>,
    /// Tokens that open a tokenized URL (`https developers google com`).
    pub url_schemes: Vec<String>,
    /// Tokens that close a tokenized URL host.
    pub url_suffixes: Vec<String>,
}

impl Default for WordLists {
    fn default() -> Self {
        WordLists {
            dangling: words(&["and", "or", "the", "a", "an", "of", "to", "with", "for", "at", "in", "on", "by"]),
            interrogative: words(&[
                "do", "does", "did", "is", "are", "was", "were", "can", "could", "should", "would", "will",
                "what", "why", "how", "where", "when", "who", "which",
            ]),
            interrogative_followers: words(&["we", "i", "you", "it", "this", "that"]),
            auto_stopwords: words(&["the", "a", "an", "this", "method"]),
            url_schemes: words(&["http", "https", "www"]),
            url_suffixes: words(&[
                "com", "org", "net", "html", "htm", "io", "edu", "gov", "info", "biz", "co", "uk", "de",
                "cn", "jp", "fr", "ru", "us", "eu",
            ]),
        }
    }
}

fn words(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleConfig {
    enabled: [bool; 12],
    action_override: [Option<NoiseAction>; 12],
    pub thresholds: Thresholds,
    /// Partition order used to pick the surviving copy of duplicated code.
    pub keep_precedence: Vec<Partition>,
    pub sentence: SentenceRules,
    pub keywords: Keywords,
    pub words: WordLists,
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            enabled: [true; 12],
            action_override: [None; 12],
            thresholds: Thresholds::default(),
            keep_precedence: Partition::ALL.to_vec(),
            sentence: SentenceRules::default(),
            keywords: Keywords::default(),
            words: WordLists::default(),
        }
    }
}

impl RuleConfig {
    pub fn is_enabled(&self, category: NoiseCategory) -> bool {
        self.enabled[category.index()]
    }

    pub fn set_enabled(&mut self, category: NoiseCategory, on: bool) {
        self.enabled[category.index()] = on;
    }

    pub fn disable_all(mut self) -> Self {
        self.enabled = [false; 12];
        self
    }

    pub fn action_for(&self, category: NoiseCategory) -> NoiseAction {
        self.action_override[category.index()].unwrap_or(category.default_action())
    }

    pub fn set_action(&mut self, category: NoiseCategory, action: NoiseAction) -> Result<()> {
        if action == NoiseAction::Update && !category.supports_update() {
            return Err(Error::Config(format!("{category} has no update action")));
        }
        self.action_override[category.index()] = Some(action);
        Ok(())
    }

    /// Rank of a partition in the keep order (lower is kept first).
    pub fn precedence_rank(&self, partition: Partition) -> usize {
        self.keep_precedence
            .iter()
            .position(|&p| p == partition)
            .unwrap_or(self.keep_precedence.len())
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.thresholds;
        if t.min_split_subtokens < 1 || t.max_auto_stmts < 1 || t.codey_line_min < 1 {
            return Err(Error::Config("count thresholds must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&t.nonliteral_ratio) {
            return Err(Error::Config("thresholds.nonliteral_ratio must be within [0, 1]".into()));
        }
        let distinct: HashSet<_> = self.keep_precedence.iter().collect();
        if self.keep_precedence.len() != 3 || distinct.len() != 3 {
            return Err(Error::Config("keep_precedence must order train, valid and test".into()));
        }
        Ok(())
    }

    /// Applies one `key = value` setting. Returns `Ok(false)` for keys that
    /// belong to someone else.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<bool> {
        let value = value.trim();
        let parts: Vec<&str> = key.trim().split('.').collect();
        match parts.as_slice() {
            ["rules", cat, "enabled"] => {
                let cat: NoiseCategory = cat.parse()?;
                self.set_enabled(cat, parse_bool(key, value)?);
            }
            ["rules", cat, "action"] => {
                let cat: NoiseCategory = cat.parse()?;
                self.set_action(cat, value.parse()?)?;
            }
            ["action_override", cat] => {
                let cat: NoiseCategory = cat.parse()?;
                self.set_action(cat, value.parse()?)?;
            }
            ["thresholds", "min_split_subtokens"] => self.thresholds.min_split_subtokens = parse_num(key, value)?,
            ["thresholds", "max_auto_stmts"] => self.thresholds.max_auto_stmts = parse_num(key, value)?,
            ["thresholds", "codey_line_min"] => self.thresholds.codey_line_min = parse_num(key, value)?,
            ["thresholds", "nonliteral_ratio"] => self.thresholds.nonliteral_ratio = parse_num(key, value)?,
            ["thresholds", "underdev_keywords"] => self.thresholds.underdev_keywords = parse_list(value),
            ["keep_precedence"] => {
                self.keep_precedence = parse_list(value)
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<_>>()?;
            }
            ["sentence", "abbreviations"] => self.sentence.abbreviations = parse_list(value),
            ["sentence", "section_markers"] => self.sentence.section_markers = parse_list(value),
            ["lexing", "java_keywords"] => self.keywords.java = parse_list(value).into_iter().collect(),
            ["lexing", "python_keywords"] => self.keywords.python = parse_list(value).into_iter().collect(),
            ["words", "dangling"] => self.words.dangling = parse_list(value),
            ["words", "interrogative"] => self.words.interrogative = parse_list(value),
            ["words", "interrogative_followers"] => self.words.interrogative_followers = parse_list(value),
            ["words", "auto_stopwords"] => self.words.auto_stopwords = parse_list(value),
            ["words", "url_schemes"] => self.words.url_schemes = parse_list(value),
            ["words", "url_suffixes"] => self.words.url_suffixes = parse_list(value),
            _ => return Ok(false),
        }
        Ok(true)
    }
}

/// Parses the flat config text into `(line, key, value)` entries.
pub fn parse_flat(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!("line {}: expected key = value", i + 1)));
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", i + 1)));
        }
        out.push((i + 1, key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

/// Builds a rule config from flat text, rejecting unknown keys.
pub fn rule_config_from_str(text: &str) -> Result<RuleConfig> {
    let mut cfg = RuleConfig::default();
    for (line, key, value) in parse_flat(text)? {
        if !cfg.apply(&key, &value).map_err(|e| Error::Config(format!("line {line}: {e}")))? {
            return Err(Error::Config(format!("line {line}: unknown key {key}")));
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected a boolean, got {value}"))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: expected a number, got {value}")))
}

fn parse_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(|s| s.trim().to_lowercase())
        .filter(|s| !s.is_empty())
        .collect()
}
