//! Code-side rules: empty functions, commented-out methods, comments inside
//! method bodies and IDE-generated boilerplate.

use std::collections::BTreeSet;
use std::sync::LazyLock;

use regex::Regex;

use crate::config::RuleConfig;
use crate::corpus::{CodeCommentPair, Language};
use crate::error::{Error, Result};
use crate::lexing::{split_identifier, strip_tokens, tokenize_with, Token, TokenKind};
use crate::sentence::normalize_for_match;
use crate::taxonomy::{NoiseCategory, NoiseLabel};

use super::comment::scan_text;
use super::finalize;

/// Index range (exclusive on both ends) of the method body within `tokens`.
///
/// Java: the tokens strictly inside the first top-level `{ ... }`.
/// Python: everything after the `:` that ends the `def` header.
pub fn locate_body(tokens: &[Token], language: Language) -> Result<(usize, usize)> {
    match language {
        Language::Java => {
            let mut parens = 0i32;
            let open = tokens.iter().position(|t| {
                if t.kind == TokenKind::Punct {
                    match t.text.as_str() {
                        "(" => parens += 1,
                        ")" => parens -= 1,
                        "{" if parens == 0 => return true,
                        _ => {}
                    }
                }
                false
            });
            let open = open.ok_or(Error::NoMethodBody)?;
            let mut depth = 0i32;
            for (i, t) in tokens.iter().enumerate().skip(open) {
                if t.is_punct("{") {
                    depth += 1;
                } else if t.is_punct("}") {
                    depth -= 1;
                    if depth == 0 {
                        return Ok((open, i));
                    }
                }
            }
            Err(Error::NoMethodBody)
        }
        Language::Python => {
            let def = tokens
                .iter()
                .position(|t| t.kind == TokenKind::Keyword && t.text == "def")
                .ok_or(Error::NoMethodBody)?;
            let mut depth = 0i32;
            for (i, t) in tokens.iter().enumerate().skip(def + 1) {
                if t.kind != TokenKind::Punct {
                    continue;
                }
                match t.text.as_str() {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => depth -= 1,
                    ":" if depth == 0 => return Ok((i, tokens.len())),
                    _ => {}
                }
            }
            Err(Error::NoMethodBody)
        }
    }
}

fn body_tokens(tokens: &[Token], language: Language) -> Result<&[Token]> {
    let (open, close) = locate_body(tokens, language)?;
    Ok(&tokens[open + 1..close])
}

pub fn detect_empty_function(pair: &CodeCommentPair, cfg: &RuleConfig) -> Result<Option<NoiseLabel>> {
    let tokens = tokenize_with(&pair.code, pair.language, &cfg.keywords)?;
    empty_function_from_tokens(&tokens, pair.language)
}

pub(crate) fn empty_function_from_tokens(tokens: &[Token], language: Language) -> Result<Option<NoiseLabel>> {
    let body = body_tokens(tokens, language)?;
    let mut significant = body.iter().filter(|t| !t.kind.is_comment());
    let empty = match language {
        Language::Java => significant.all(|t| t.is_punct(";")),
        Language::Python => significant.all(|t| {
            t.kind == TokenKind::StringLit
                || (t.kind == TokenKind::Keyword && t.text == "pass")
                || t.is_punct("...")
                || t.is_punct(";")
        }),
    };
    Ok(empty.then(|| NoiseLabel::remove(NoiseCategory::EmptyFunction, "method body has no statements")))
}

static JAVA_SIGNATURE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"^\s*(?:(?:public|private|protected|static|final|abstract|synchronized|native|default)\s+)*(?:<[^>]*>\s*)?([\w$][\w$.]*(?:<[^()]*>)?(?:\[\])*)\s+([\w$]+)\s*\([^()]*\)\s*(?:throws\s+[\w$.,\s]+)?[{;]",
    )
    .unwrap()
});
static PYTHON_SIGNATURE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*(?:async\s+)?def\s+\w+\s*\(").unwrap());

// Statement words that can precede `name(...)` without forming a signature.
const NOT_A_TYPE: &[&str] = &["return", "new", "throw", "else", "case", "yield", "await", "assert", "goto"];

fn is_signature(line: &str, language: Language) -> bool {
    match language {
        Language::Java => JAVA_SIGNATURE
            .captures(line)
            .is_some_and(|c| !NOT_A_TYPE.contains(&c.get(1).map_or("", |m| m.as_str()))),
        Language::Python => PYTHON_SIGNATURE.is_match(line),
    }
}

pub fn detect_commented_out_method(pair: &CodeCommentPair, cfg: &RuleConfig) -> Option<NoiseLabel> {
    let text = scan_text(pair);
    let category = NoiseCategory::CommentedOutMethod;
    // Either language's signature counts: comments get copied between projects.
    if let Some(line) = text
        .lines()
        .find(|l| is_signature(l, pair.language) || is_signature(l, other(pair.language)))
    {
        return Some(NoiseLabel::remove(category, line.trim()));
    }
    let codey = text
        .lines()
        .map(str::trim_end)
        .filter(|l| l.ends_with([';', '{', '}']))
        .count();
    (codey > cfg.thresholds.codey_line_min)
        .then(|| NoiseLabel::remove(category, format!("{codey} code-like lines")))
}

fn other(language: Language) -> Language {
    match language {
        Language::Java => Language::Python,
        Language::Python => Language::Java,
    }
}

pub fn detect_block_comment_code(pair: &CodeCommentPair, cfg: &RuleConfig) -> Result<Option<NoiseLabel>> {
    let tokens = tokenize_with(&pair.code, pair.language, &cfg.keywords)?;
    Ok(block_comment_from_tokens(pair, &tokens, cfg))
}

pub(crate) fn block_comment_from_tokens(
    pair: &CodeCommentPair,
    tokens: &[Token],
    cfg: &RuleConfig,
) -> Option<NoiseLabel> {
    let scope = body_tokens(tokens, pair.language).unwrap_or(tokens);
    let first = scope.iter().find(|t| t.kind.is_comment())?;
    let (stripped, _) = strip_tokens(&pair.code, tokens);
    let label = NoiseLabel::update_code(NoiseCategory::BlockCommentCode, first.text.clone(), stripped);
    Some(finalize(label, cfg))
}

/// Name of the method declared by `tokens`.
pub fn method_name(tokens: &[Token], language: Language) -> Option<&str> {
    match language {
        Language::Java => {
            let limit = locate_body(tokens, language).map_or(tokens.len(), |(open, _)| open);
            let mut depth = 0i32;
            for i in 0..limit {
                let t = &tokens[i];
                if t.is_punct("(") {
                    if depth == 0 && i > 0 && tokens[i - 1].kind == TokenKind::Identifier {
                        let annotation = i > 1 && tokens[i - 2].is_punct("@");
                        if !annotation {
                            return Some(&tokens[i - 1].text);
                        }
                    }
                    depth += 1;
                } else if t.is_punct(")") {
                    depth -= 1;
                }
            }
            None
        }
        Language::Python => tokens
            .windows(2)
            .find(|w| w[0].kind == TokenKind::Keyword && w[0].text == "def")
            .map(|w| w[1].text.as_str()),
    }
}

static JAVA_AUTO_NAME: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?:(?:get|set|is|test)[A-Z_0-9]|toString$)").unwrap());
static PYTHON_AUTO_NAME: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?:(?:get|set|is|test)_\w|__str__$|__repr__$|to_string$)").unwrap());

fn is_auto_name(name: &str, language: Language) -> bool {
    match language {
        Language::Java => JAVA_AUTO_NAME.is_match(name),
        Language::Python => PYTHON_AUTO_NAME.is_match(name),
    }
}

/// Top-level statements in the method body.
///
/// Java counts `;` outside nested blocks and parentheses plus each nested
/// block closed at top level; Python counts lines that start a top-level
/// token, ignoring comments and a leading docstring.
pub fn statement_count(tokens: &[Token], language: Language) -> Result<usize> {
    let body = body_tokens(tokens, language)?;
    let body: Vec<&Token> = body.iter().filter(|t| !t.kind.is_comment()).collect();
    match language {
        Language::Java => {
            let (mut braces, mut parens, mut count) = (0i32, 0i32, 0usize);
            for (i, t) in body.iter().enumerate() {
                if t.kind != TokenKind::Punct {
                    continue;
                }
                match t.text.as_str() {
                    "(" => parens += 1,
                    ")" => parens -= 1,
                    "{" => braces += 1,
                    "}" => {
                        braces -= 1;
                        let next = body.get(i + 1).map(|n| n.text.as_str());
                        let continues = matches!(
                            next,
                            Some(";" | ")" | "," | "." | "else" | "catch" | "finally" | "while")
                        );
                        if braces == 0 && parens == 0 && !continues {
                            count += 1;
                        }
                    }
                    ";" if braces == 0 && parens == 0 => count += 1,
                    _ => {}
                }
            }
            Ok(count)
        }
        Language::Python => {
            let skip = usize::from(body.first().is_some_and(|t| t.kind == TokenKind::StringLit));
            let mut depth = 0i32;
            let mut lines = BTreeSet::new();
            for t in &body[skip..] {
                if depth == 0 {
                    lines.insert(t.line);
                }
                if t.kind == TokenKind::Punct {
                    match t.text.as_str() {
                        "(" | "[" | "{" => depth += 1,
                        ")" | "]" | "}" => depth -= 1,
                        _ => {}
                    }
                }
            }
            Ok(lines.len())
        }
    }
}

pub fn detect_auto_code(pair: &CodeCommentPair, cfg: &RuleConfig) -> Result<Option<NoiseLabel>> {
    let tokens = tokenize_with(&pair.code, pair.language, &cfg.keywords)?;
    auto_code_from_tokens(pair, &tokens, cfg)
}

pub(crate) fn auto_code_from_tokens(
    pair: &CodeCommentPair,
    tokens: &[Token],
    cfg: &RuleConfig,
) -> Result<Option<NoiseLabel>> {
    let Some(name) = method_name(tokens, pair.language) else {
        return Ok(None);
    };
    if !is_auto_name(name, pair.language) {
        return Ok(None);
    }
    let stmts = statement_count(tokens, pair.language)?;
    let max = cfg.thresholds.max_auto_stmts;
    let comment_words: Vec<String> = normalize_for_match(&pair.comment)
        .into_iter()
        .filter(|w| !cfg.words.auto_stopwords.contains(w))
        .collect();
    let echoes_name = comment_words == split_identifier(name);
    let label = if stmts <= max && echoes_name {
        Some(format!("{name}: comment repeats the name, {stmts} statement(s)"))
    } else if stmts < max {
        Some(format!("{name}: {stmts} statement(s)"))
    } else {
        None
    };
    Ok(label.map(|evidence| NoiseLabel::remove(NoiseCategory::AutoCode, evidence)))
}
