//! First-sentence extraction from raw comments and alignment of processed
//! summaries against it.
//!
//! Extraction walks the stripped comment line by line. A line that contains a
//! sentence terminator closes the sentence at that terminator; a line that
//! opens a section (`@param`, `Arguments:` ...) closes it before the line;
//! any other line is appended and the walk continues.

use serde::{Deserialize, Serialize};

use crate::corpus::Language;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Period,
    SectionMarker,
    EndOfComment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstSentence {
    pub text: String,
    pub consumed_lines: usize,
    pub terminated_by: Termination,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlignmentClass {
    Exact,
    Partial,
    Verbose,
    Unrelated,
}

/// Word lists that steer sentence extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceRules {
    /// Lower-case abbreviations (with their dots) that never end a sentence.
    pub abbreviations: Vec<String>,
    /// Lower-case section keywords recognised when followed by `:`.
    pub section_markers: Vec<String>,
}

impl Default for SentenceRules {
    fn default() -> Self {
        SentenceRules {
            abbreviations: ["e.g.", "i.e.", "etc.", "vs.", "cf."]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            section_markers: ["arguments", "args", "returns", "params", "raises", "see"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

impl SentenceRules {
    pub fn is_section_marker(&self, line: &str) -> bool {
        let line = line.trim_start();
        if let Some(rest) = line.strip_prefix('@') {
            return rest.chars().next().is_some_and(|c| c.is_alphabetic());
        }
        let word: String = line.chars().take_while(|c| c.is_alphabetic()).collect();
        if word.is_empty() {
            return false;
        }
        let after = line[word.len()..].trim_start();
        after.starts_with(':') && self.section_markers.iter().any(|m| m.eq_ignore_ascii_case(&word))
    }

    fn is_abbreviation(&self, word: &str) -> bool {
        let lower = word.to_lowercase();
        self.abbreviations.iter().any(|a| lower.ends_with(a.as_str()) && {
            // The abbreviation must start the word (after opening punctuation).
            let prefix = &lower[..lower.len() - a.len()];
            prefix.chars().all(|c| !c.is_alphanumeric())
        })
    }
}

/// Strips comment delimiters and returns the trimmed content lines, with
/// blank lines removed from both ends only.
pub fn strip_comment_delimiters(raw: &str, language: Language) -> Vec<String> {
    let mut lines: Vec<String> = raw
        .lines()
        .map(|line| match language {
            Language::Java => strip_java_line(line),
            Language::Python => strip_python_line(line),
        })
        .collect();
    while lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    let first = lines.iter().position(|l| !l.is_empty()).unwrap_or(lines.len());
    lines.drain(..first);
    lines
}

fn strip_java_line(line: &str) -> String {
    let mut s = line.trim();
    if let Some(rest) = s.strip_prefix("/**") {
        s = rest;
    } else if let Some(rest) = s.strip_prefix("/*") {
        s = rest;
    }
    if let Some(rest) = s.trim_end().strip_suffix("*/") {
        s = rest;
    }
    s = s.trim();
    if s.starts_with("//") {
        s = s.trim_start_matches('/');
    } else {
        s = s.trim_start_matches('*');
    }
    s.trim().to_string()
}

fn strip_python_line(line: &str) -> String {
    let mut s = line.trim();
    for q in ["\"\"\"", "'''"] {
        if let Some(rest) = s.strip_prefix(q) {
            s = rest;
        }
        if let Some(rest) = s.strip_suffix(q) {
            s = rest;
        }
    }
    s = s.trim_start_matches('#');
    s.trim().to_string()
}

/// Tracks inline code spans (`` `...` `` and `{@code ...}`) across lines.
#[derive(Default)]
struct SpanState {
    in_backtick: bool,
    brace_depth: usize,
}

impl SpanState {
    fn inside(&self) -> bool {
        self.in_backtick || self.brace_depth > 0
    }
}

/// Byte index just past the first sentence terminator in `line`, if any.
fn find_terminator(line: &str, rules: &SentenceRules, spans: &mut SpanState) -> Option<usize> {
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    for (i, &(at, c)) in chars.iter().enumerate() {
        match c {
            '`' if spans.brace_depth == 0 => spans.in_backtick = !spans.in_backtick,
            '{' if !spans.in_backtick => {
                if spans.brace_depth > 0 || line[at..].starts_with("{@") {
                    spans.brace_depth += 1;
                }
            }
            '}' if !spans.in_backtick && spans.brace_depth > 0 => spans.brace_depth -= 1,
            '.' | '!' | '?' if !spans.inside() => {
                let followed_ok = chars.get(i + 1).is_none_or(|&(_, n)| n.is_whitespace());
                if !followed_ok {
                    continue;
                }
                if c == '.' {
                    let word_start = line[..at]
                        .rfind(char::is_whitespace)
                        .map(|p| p + 1)
                        .unwrap_or(0);
                    if rules.is_abbreviation(&line[word_start..at + 1]) {
                        continue;
                    }
                }
                return Some(at + c.len_utf8());
            }
            _ => {}
        }
    }
    None
}

pub fn extract_first_sentence(raw: &str, language: Language) -> FirstSentence {
    extract_first_sentence_with(raw, language, &SentenceRules::default())
}

pub fn extract_first_sentence_with(raw: &str, language: Language, rules: &SentenceRules) -> FirstSentence {
    let lines = strip_comment_delimiters(raw, language);
    let mut text = String::new();
    let mut spans = SpanState::default();
    for (i, line) in lines.iter().enumerate() {
        if rules.is_section_marker(line) {
            return FirstSentence {
                text,
                consumed_lines: i,
                terminated_by: Termination::SectionMarker,
            };
        }
        if line.is_empty() {
            continue;
        }
        let cut = find_terminator(line, rules, &mut spans);
        if !text.is_empty() {
            text.push(' ');
        }
        match cut {
            Some(end) => {
                text.push_str(&line[..end]);
                return FirstSentence {
                    text,
                    consumed_lines: i + 1,
                    terminated_by: Termination::Period,
                };
            }
            None => text.push_str(line),
        }
    }
    FirstSentence {
        text,
        consumed_lines: lines.len(),
        terminated_by: Termination::EndOfComment,
    }
}

/// Lower-cased alphanumeric word tokens.
pub fn normalize_for_match(text: &str) -> Vec<String> {
    word_spans(text).into_iter().map(|(s, e)| text[s..e].to_lowercase()).collect()
}

/// Byte spans of the maximal alphanumeric runs in `text`.
pub fn word_spans(text: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_alphanumeric() {
            if start.is_none() {
                start = Some(i);
            }
        } else if let Some(s) = start.take() {
            spans.push((s, i));
        }
    }
    if let Some(s) = start {
        spans.push((s, text.len()));
    }
    spans
}

pub fn classify_tokens(processed: &[String], first: &[String]) -> AlignmentClass {
    if processed == first {
        AlignmentClass::Exact
    } else if !processed.is_empty() && processed.len() < first.len() && first.starts_with(processed) {
        AlignmentClass::Partial
    } else if !first.is_empty() && first.len() < processed.len() && processed.starts_with(first) {
        AlignmentClass::Verbose
    } else {
        AlignmentClass::Unrelated
    }
}

pub fn classify_alignment(processed: &str, first: &FirstSentence) -> AlignmentClass {
    classify_tokens(&normalize_for_match(processed), &normalize_for_match(&first.text))
}
