//! Code-comment records and their JSONL representation.
//!
//! One JSON object per line with the fields `id`, `code`, `comment`,
//! `raw_comment`, `language` and `partition`. Only `code` and `comment` are
//! required; a missing `id` becomes the 10-digit zero-padded line index.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Java,
    Python,
}

impl Language {
    pub fn as_str(self) -> &'static str {
        match self {
            Language::Java => "java",
            Language::Python => "python",
        }
    }
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "java" => Ok(Language::Java),
            "python" => Ok(Language::Python),
            _ => Err(Error::UnsupportedLanguage(s.to_string())),
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Dataset split. The derived order `Train < Valid < Test` is the default
/// duplicate-keeping precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Valid,
    Test,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::Train, Partition::Valid, Partition::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Valid => "valid",
            Partition::Test => "test",
        }
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "train" => Ok(Partition::Train),
            "valid" => Ok(Partition::Valid),
            "test" => Ok(Partition::Test),
            _ => Err(Error::UnsupportedPartition(s.to_string())),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One dataset record: a method and its summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeCommentPair {
    pub id: String,
    pub code: String,
    pub comment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_comment: Option<String>,
    pub language: Language,
    pub partition: Partition,
}

impl CodeCommentPair {
    pub fn new(id: impl Into<String>, code: impl Into<String>, comment: impl Into<String>) -> Self {
        CodeCommentPair {
            id: id.into(),
            code: code.into(),
            comment: comment.into(),
            raw_comment: None,
            language: Language::Java,
            partition: Partition::Train,
        }
    }

    pub fn with_raw(mut self, raw: impl Into<String>) -> Self {
        self.raw_comment = Some(raw.into());
        self
    }

    pub fn with_language(mut self, language: Language) -> Self {
        self.language = language;
        self
    }

    pub fn with_partition(mut self, partition: Partition) -> Self {
        self.partition = partition;
        self
    }

    fn check(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::EmptyId);
        }
        if self.code.trim().is_empty() {
            return Err(Error::EmptyCode);
        }
        Ok(())
    }
}

/// An ordered, id-unique collection of pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dataset {
    pairs: Vec<CodeCommentPair>,
    source_name: String,
}

impl Dataset {
    pub fn new(source_name: impl Into<String>, pairs: Vec<CodeCommentPair>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(pairs.len());
        for pair in &pairs {
            pair.check()?;
            if !seen.insert(pair.id.as_str()) {
                return Err(Error::DuplicateId(pair.id.clone()));
            }
        }
        Ok(Dataset {
            pairs,
            source_name: source_name.into(),
        })
    }

    pub fn empty(source_name: impl Into<String>) -> Self {
        Dataset {
            pairs: Vec::new(),
            source_name: source_name.into(),
        }
    }

    pub fn pairs(&self) -> &[CodeCommentPair] {
        &self.pairs
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CodeCommentPair> {
        self.pairs.iter()
    }

    pub fn with_source_name(mut self, name: impl Into<String>) -> Self {
        self.source_name = name.into();
        self
    }

    pub fn into_pairs(self) -> Vec<CodeCommentPair> {
        self.pairs
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a CodeCommentPair;
    type IntoIter = std::slice::Iter<'a, CodeCommentPair>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}

/// A record as parsed from JSON, before validation.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct RawRecord {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub code: Option<String>,
    #[serde(default)]
    pub comment: Option<String>,
    #[serde(default)]
    pub raw_comment: Option<String>,
    #[serde(default)]
    pub language: Option<String>,
    #[serde(default)]
    pub partition: Option<String>,
}

/// Values substituted for absent optional fields.
#[derive(Debug, Clone)]
pub struct RecordDefaults {
    pub id: String,
    pub language: Language,
    pub partition: Partition,
}

pub fn validate_pair(record: RawRecord, defaults: &RecordDefaults) -> Result<CodeCommentPair> {
    let code = record.code.ok_or(Error::MissingField("code"))?;
    let comment = record.comment.ok_or(Error::MissingField("comment"))?;
    let language = match record.language {
        Some(s) => s.parse()?,
        None => defaults.language,
    };
    let partition = match record.partition {
        Some(s) => s.parse()?,
        None => defaults.partition,
    };
    let pair = CodeCommentPair {
        id: record.id.unwrap_or_else(|| defaults.id.clone()),
        code,
        comment,
        raw_comment: record.raw_comment,
        language,
        partition,
    };
    pair.check()?;
    Ok(pair)
}

pub fn auto_id(line_index: usize) -> String {
    format!("{line_index:010}")
}

/// Reads a JSONL dataset. Blank lines are skipped but still count toward
/// line numbers and auto-generated ids.
pub fn read_jsonl<R: BufRead>(
    input: R,
    default_language: Language,
    default_partition: Partition,
) -> Result<Dataset> {
    let mut pairs = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (index, line) in input.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(&line).map_err(|_| Error::at_line(line_no, Error::MalformedJson))?;
        if !value.is_object() {
            return Err(Error::at_line(line_no, Error::MalformedJson));
        }
        let record: RawRecord = serde_json::from_value(value)
            .map_err(|e| Error::at_line(line_no, Error::MalformedRecord(e.to_string())))?;
        let defaults = RecordDefaults {
            id: auto_id(index),
            language: default_language,
            partition: default_partition,
        };
        let pair = validate_pair(record, &defaults).map_err(|e| Error::at_line(line_no, e))?;
        if !seen.insert(pair.id.clone()) {
            return Err(Error::DuplicateId(pair.id));
        }
        pairs.push(pair);
    }
    Ok(Dataset {
        pairs,
        source_name: String::new(),
    })
}

pub fn write_pair<W: Write>(pair: &CodeCommentPair, output: &mut W) -> Result<()> {
    serde_json::to_writer(&mut *output, pair)?;
    output.write_all(b"\n")?;
    Ok(())
}

pub fn write_jsonl<W: Write>(dataset: &Dataset, mut output: W) -> Result<()> {
    for pair in dataset {
        write_pair(pair, &mut output)?;
    }
    output.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(s: &str) -> Result<Dataset> {
        read_jsonl(s.as_bytes(), Language::Java, Partition::Train)
    }

    #[test]
    fn minimal_record_gets_defaults() {
        let ds = read(r#"{"code":"int f(){}","comment":"f"}"#).unwrap();
        assert_eq!(ds.len(), 1);
        let p = &ds.pairs()[0];
        assert_eq!(p.id, "0000000000");
        assert_eq!(p.language, Language::Java);
        assert_eq!(p.partition, Partition::Train);
        assert_eq!(p.raw_comment, None);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = read("{").unwrap_err();
        assert_eq!(err.to_string(), "line 1: malformed JSON");
        let err = read("{\"code\":\"x\",\"comment\":\"c\"}\n[1,2]").unwrap_err();
        assert_eq!(err.to_string(), "line 2: malformed JSON");
    }

    #[test]
    fn duplicate_ids_rejected() {
        let input = "{\"id\":\"a\",\"code\":\"x\",\"comment\":\"c\"}\n{\"id\":\"a\",\"code\":\"y\",\"comment\":\"d\"}";
        assert_eq!(read(input).unwrap_err().to_string(), "duplicate id: a");
    }

    #[test]
    fn missing_fields_name_the_field() {
        let err = read("{\"code\":\"x\"}").unwrap_err();
        assert_eq!(err.to_string(), "line 1: missing required field: comment");
        let err = read("\n{\"comment\":\"x\"}").unwrap_err();
        assert_eq!(err.to_string(), "line 2: missing required field: code");
    }

    #[test]
    fn validate_pair_cases() {
        let defaults = RecordDefaults {
            id: "0".into(),
            language: Language::Python,
            partition: Partition::Test,
        };
        let rec = RawRecord {
            code: Some("x".into()),
            comment: Some("c".into()),
            language: Some("java".into()),
            ..Default::default()
        };
        assert_eq!(validate_pair(rec, &defaults).unwrap().language, Language::Java);

        let rec = RawRecord {
            code: Some("".into()),
            comment: Some("c".into()),
            ..Default::default()
        };
        assert_eq!(validate_pair(rec, &defaults).unwrap_err().to_string(), "empty code");

        let rec = RawRecord {
            code: Some("x".into()),
            comment: Some("c".into()),
            language: Some("go".into()),
            ..Default::default()
        };
        assert_eq!(
            validate_pair(rec, &defaults).unwrap_err().to_string(),
            "unsupported language: go"
        );

        let rec = RawRecord {
            code: Some("x".into()),
            comment: Some("c".into()),
            partition: Some("dev".into()),
            ..Default::default()
        };
        assert!(validate_pair(rec, &defaults).is_err());
    }

    #[test]
    fn whitespace_only_code_is_empty() {
        let err = read(r#"{"code":"  \n ","comment":"c"}"#).unwrap_err();
        assert_eq!(err.to_string(), "line 1: empty code");
    }

    #[test]
    fn empty_dataset_writes_nothing() {
        let mut out = Vec::new();
        write_jsonl(&Dataset::empty("x"), &mut out).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn unicode_round_trip_is_byte_exact() {
        let pairs = vec![
            CodeCommentPair::new("1", "int a(){}", "plain"),
            CodeCommentPair::new("2", "int b(){}", "将JSONArray转换为Bean的List").with_raw("/* 默认为ArrayList */"),
            CodeCommentPair::new("3", "def c():\n    pass", "naïve \"quoted\"")
                .with_language(Language::Python)
                .with_partition(Partition::Valid),
        ];
        let ds = Dataset::new("u", pairs).unwrap();
        let mut first = Vec::new();
        write_jsonl(&ds, &mut first).unwrap();
        assert!(std::str::from_utf8(&first).is_ok());
        assert_eq!(first.iter().filter(|&&b| b == b'\n').count(), 3);
        let back = read_jsonl(first.as_slice(), Language::Java, Partition::Train).unwrap();
        assert_eq!(back.pairs(), ds.pairs());
        let mut second = Vec::new();
        write_jsonl(&back, &mut second).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn dataset_new_enforces_invariants() {
        let a = CodeCommentPair::new("a", "x", "c");
        assert!(matches!(
            Dataset::new("d", vec![a.clone(), a.clone()]),
            Err(Error::DuplicateId(_))
        ));
        assert!(matches!(
            Dataset::new("d", vec![CodeCommentPair::new("", "x", "c")]),
            Err(Error::EmptyId)
        ));
    }
}
