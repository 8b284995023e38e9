//! Comment-side rules: partial/verbose first sentences, tampering, over-split
//! identifiers, non-literal text, interrogations and under-development notes.

use std::collections::HashSet;
use std::sync::LazyLock;

use regex::Regex;

use crate::config::RuleConfig;
use crate::corpus::{CodeCommentPair, Language};
use crate::error::Result;
use crate::lexing::{extract_identifiers, tokenize_with, Identifier, Token};
use crate::sentence::{
    classify_alignment, extract_first_sentence_with, normalize_for_match, strip_comment_delimiters,
    word_spans, AlignmentClass, FirstSentence,
};
use crate::taxonomy::{NoiseAction, NoiseCategory, NoiseLabel};

use super::code::method_name;
use super::finalize;

/// Text the raw-preferring rules scan: the delimiter-stripped raw comment if
/// present, else the processed comment.
pub(crate) fn scan_text(pair: &CodeCommentPair) -> String {
    match &pair.raw_comment {
        Some(raw) => strip_comment_delimiters(raw, pair.language).join("\n"),
        None => pair.comment.clone(),
    }
}

/// True when the comment looks like benchmark output: lower-case words
/// separated by single spaces, nothing else.
fn is_processed_style(comment: &str) -> bool {
    let tokens = normalize_for_match(comment);
    !tokens.is_empty() && tokens.join(" ") == comment.trim()
}

fn restyle(comment: &str, first: &FirstSentence) -> String {
    if is_processed_style(comment) {
        normalize_for_match(&first.text).join(" ")
    } else {
        first.text.clone()
    }
}

fn first_sentence(pair: &CodeCommentPair, cfg: &RuleConfig) -> Option<FirstSentence> {
    pair.raw_comment
        .as_deref()
        .map(|raw| extract_first_sentence_with(raw, pair.language, &cfg.sentence))
}

fn ends_with_terminal(text: &str) -> bool {
    text.trim_end().ends_with(['.', '!', '?'])
}

pub fn detect_partial_sentence(pair: &CodeCommentPair, cfg: &RuleConfig) -> Option<NoiseLabel> {
    let category = NoiseCategory::PartialSentence;
    match first_sentence(pair, cfg) {
        Some(first) => {
            if classify_alignment(&pair.comment, &first) != AlignmentClass::Partial {
                return None;
            }
            let label = NoiseLabel::update_comment(
                category,
                format!("first sentence: {}", first.text),
                restyle(&pair.comment, &first),
            );
            Some(finalize(label, cfg))
        }
        None => {
            let tokens = normalize_for_match(&pair.comment);
            let last = tokens.last()?;
            if ends_with_terminal(&pair.comment) || !cfg.words.dangling.iter().any(|w| w == last) {
                return None;
            }
            // Nothing to rebuild the sentence from, so the pair can only go.
            Some(NoiseLabel::remove(category, format!("dangling \"{last}\"")).as_fallback())
        }
    }
}

pub fn detect_verbose_sentence(pair: &CodeCommentPair, cfg: &RuleConfig) -> Option<NoiseLabel> {
    let category = NoiseCategory::VerboseSentence;
    let label = match first_sentence(pair, cfg) {
        Some(first) => {
            if classify_alignment(&pair.comment, &first) != AlignmentClass::Verbose {
                return None;
            }
            NoiseLabel::update_comment(
                category,
                format!("first sentence: {}", first.text),
                restyle(&pair.comment, &first),
            )
        }
        None => {
            let (evidence, proposal) = verbose_fallback(&pair.comment, cfg)?;
            NoiseLabel::update_comment(category, evidence, proposal).as_fallback()
        }
    };
    Some(finalize(label, cfg))
}

fn is_terminator_token(token: &str, cfg: &RuleConfig) -> bool {
    if !token.ends_with(['.', '!', '?']) {
        return false;
    }
    let lower = token.to_lowercase();
    !cfg.sentence.abbreviations.contains(&lower)
}

fn has_word(token: &str) -> bool {
    token.chars().any(char::is_alphanumeric)
}

/// Raw-free verbose rule: an interior terminator followed by three or more
/// words, or a section keyword after a terminator or before a colon.
/// Returns the evidence and the trimmed comment.
fn verbose_fallback(comment: &str, cfg: &RuleConfig) -> Option<(String, String)> {
    let tokens: Vec<&str> = comment.split_whitespace().collect();
    for (i, tok) in tokens.iter().enumerate() {
        if is_terminator_token(tok, cfg) {
            let words_after = tokens[i + 1..].iter().filter(|t| has_word(t)).count();
            if words_after >= 3 && (i > 0 || has_word(tok)) {
                return Some((format!("interior terminator \"{tok}\""), tokens[..=i].join(" ")));
            }
        }
        if i == 0 {
            continue;
        }
        let word = tok.trim_end_matches(':').to_lowercase();
        if !cfg.sentence.section_markers.contains(&word) {
            continue;
        }
        let colon = tok.ends_with(':') || tokens.get(i + 1).is_some_and(|n| n.starts_with(':'));
        let after_terminator = is_terminator_token(tokens[i - 1], cfg);
        if colon || after_terminator {
            let prefix = tokens[..i].join(" ");
            if has_word(&prefix) {
                return Some((format!("section marker \"{tok}\""), prefix));
            }
        }
    }
    None
}

static HTML_TAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"<[a-zA-Z!/][^>]*>").unwrap());
static JAVADOC_INLINE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\{@\w+[^}]*\}").unwrap());
static JAVADOC_TAG: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?:^|\s)(@(?:param|return|throws|see|link))\b").unwrap());
static URL: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"https?://\S+").unwrap());
static WWW: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\bwww\.[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)+").unwrap());
static PATH: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?:[A-Za-z0-9_-]+/)+[A-Za-z0-9_-]+\.[A-Za-z][A-Za-z0-9]{0,5}\b").unwrap()
});

/// Earliest tag/URL/path match in `text` as a byte range.
fn first_tamper_match(text: &str) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut consider = |range: (usize, usize)| {
        if best.is_none_or(|b| range.0 < b.0) {
            best = Some(range);
        }
    };
    for re in [&*HTML_TAG, &*JAVADOC_INLINE, &*URL, &*WWW, &*PATH] {
        if let Some(m) = re.find(text) {
            consider((m.start(), m.end()));
        }
    }
    if let Some(c) = JAVADOC_TAG.captures(text) {
        let m = c.get(1).expect("group");
        consider((m.start(), m.end()));
    }
    best
}

/// Tokenized URL such as `https developers google com`: a scheme word
/// followed within four words by a host suffix.
fn tokenized_url(text: &str, cfg: &RuleConfig) -> Option<(usize, usize)> {
    let spans = word_spans(text);
    let words: Vec<String> = spans.iter().map(|&(s, e)| text[s..e].to_lowercase()).collect();
    for (i, w) in words.iter().enumerate() {
        if !cfg.words.url_schemes.contains(w) {
            continue;
        }
        let end = (i + 5).min(words.len());
        if let Some(j) = (i + 1..end).find(|&j| cfg.words.url_suffixes.contains(&words[j])) {
            return Some((spans[i].0, spans[j].1));
        }
    }
    None
}

pub(crate) fn strip_tampering(comment: &str, cfg: &RuleConfig) -> String {
    let mut text = comment.to_string();
    while let Some((s, e)) = first_tamper_match(&text).or_else(|| tokenized_url(&text, cfg)) {
        text.replace_range(s..e, " ");
    }
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn detect_content_tampering(pair: &CodeCommentPair, cfg: &RuleConfig) -> Option<NoiseLabel> {
    let category = NoiseCategory::ContentTampering;
    if cfg.action_for(category) == NoiseAction::Update {
        // Only the processed comment can be rewritten, so only it is scanned.
        let text = &pair.comment;
        let (evidence, fallback) = match first_tamper_match(text) {
            Some((s, e)) => (text[s..e].to_string(), false),
            None => {
                let (s, e) = tokenized_url(text, cfg)?;
                (text[s..e].to_string(), true)
            }
        };
        let cleaned = strip_tampering(text, cfg);
        let label = if cleaned.is_empty() {
            NoiseLabel::remove(category, evidence)
        } else {
            NoiseLabel::update_comment(category, evidence, cleaned)
        };
        return Some(if fallback { label.as_fallback() } else { label });
    }
    let text = scan_text(pair);
    if let Some((s, e)) = first_tamper_match(&text) {
        return Some(NoiseLabel::remove(category, &text[s..e]));
    }
    let (s, e) = tokenized_url(&pair.comment, cfg)?;
    Some(NoiseLabel::remove(category, &pair.comment[s..e]).as_fallback())
}

/// Word spans where identifier characters (`_`, `$`) join words.
fn ident_word_spans(text: &str) -> Vec<(usize, usize)> {
    let is_word = |c: char| c.is_alphanumeric() || c == '_' || c == '$';
    let mut spans = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if is_word(c) {
            start.get_or_insert(i);
        } else if let Some(s) = start.take() {
            spans.push((s, i));
        }
    }
    if let Some(s) = start {
        spans.push((s, text.len()));
    }
    spans
}

fn find_run(words: &[String], run: &[String]) -> Option<usize> {
    if run.is_empty() || run.len() > words.len() {
        return None;
    }
    words.windows(run.len()).position(|w| w == run)
}

fn split_candidates(identifiers: Vec<Identifier>, min_subtokens: usize) -> Vec<Identifier> {
    let mut ids: Vec<Identifier> = identifiers
        .into_iter()
        .filter(|id| id.subtokens.len() >= min_subtokens.max(2))
        .collect();
    // Longest identifiers claim overlapping spans first; ties keep first-seen order.
    ids.sort_by(|a, b| b.subtokens.len().cmp(&a.subtokens.len()));
    ids
}

/// Replaces every split occurrence of a code identifier with the identifier.
pub fn rejoin_identifiers(comment: &str, identifiers: &[Identifier]) -> String {
    let mut text = comment.to_string();
    loop {
        let spans = ident_word_spans(&text);
        let words: Vec<String> = spans.iter().map(|&(s, e)| text[s..e].to_lowercase()).collect();
        let hit = identifiers
            .iter()
            .find_map(|id| find_run(&words, &id.subtokens).map(|pos| (id, pos)));
        let Some((id, pos)) = hit else {
            return text;
        };
        let (start, end) = (spans[pos].0, spans[pos + id.subtokens.len() - 1].1);
        text.replace_range(start..end, &id.name);
    }
}

pub fn detect_over_splitting(pair: &CodeCommentPair, cfg: &RuleConfig) -> Result<Option<NoiseLabel>> {
    let tokens = tokenize_with(&pair.code, pair.language, &cfg.keywords)?;
    Ok(over_splitting_from_tokens(pair, &tokens, cfg))
}

pub(crate) fn over_splitting_from_tokens(
    pair: &CodeCommentPair,
    tokens: &[Token],
    cfg: &RuleConfig,
) -> Option<NoiseLabel> {
    let ids = rejoin_candidates(tokens, pair.language, cfg);
    if ids.is_empty() {
        return None;
    }
    let text = &pair.comment;
    let spans = ident_word_spans(text);
    let words: Vec<String> = spans.iter().map(|&(s, e)| text[s..e].to_lowercase()).collect();
    let present: HashSet<&str> = words.iter().map(String::as_str).collect();
    let witness = ids.iter().find_map(|id| {
        let pos = find_run(&words, &id.subtokens)?;
        if present.contains(id.name.to_lowercase().as_str()) {
            return None;
        }
        let (s, e) = (spans[pos].0, spans[pos + id.subtokens.len() - 1].1);
        Some(format!("\"{}\" -> {}", &text[s..e], id.name))
    })?;
    let proposal = rejoin_identifiers(text, &ids);
    Some(finalize(
        NoiseLabel::update_comment(NoiseCategory::OverSplitting, witness, proposal),
        cfg,
    ))
}

/// Identifiers eligible for rejoining, in claim order. The method's own name
/// is left out: paraphrasing it is what summaries do.
pub(crate) fn rejoin_candidates(tokens: &[Token], language: Language, cfg: &RuleConfig) -> Vec<Identifier> {
    let own = method_name(tokens, language);
    let ids = extract_identifiers(tokens)
        .into_iter()
        .filter(|id| Some(id.name.as_str()) != own)
        .collect();
    split_candidates(ids, cfg.thresholds.min_split_subtokens)
}

pub fn detect_non_literal(pair: &CodeCommentPair, cfg: &RuleConfig) -> Option<NoiseLabel> {
    let text = scan_text(pair);
    let mut letters = 0usize;
    let mut foreign = 0usize;
    let mut first_foreign = None;
    for c in text.chars().filter(|c| c.is_alphabetic()) {
        letters += 1;
        if !c.is_ascii() {
            foreign += 1;
            first_foreign.get_or_insert(c);
        }
    }
    if letters == 0 {
        return None;
    }
    let ratio = foreign as f64 / letters as f64;
    if ratio > cfg.thresholds.nonliteral_ratio {
        Some(NoiseLabel::remove(
            NoiseCategory::NonLiteral,
            format!("{foreign}/{letters} non-Latin letters, first '{}'", first_foreign.unwrap_or('?')),
        ))
    } else {
        None
    }
}

pub fn detect_interrogation(pair: &CodeCommentPair, cfg: &RuleConfig) -> Option<NoiseLabel> {
    let category = NoiseCategory::Interrogation;
    if pair.comment.trim_end().ends_with('?') {
        return Some(NoiseLabel::remove(category, "ends with '?'"));
    }
    let tokens = normalize_for_match(&pair.comment);
    let (first, second) = (tokens.first()?, tokens.get(1)?);
    if cfg.words.interrogative.contains(first) && cfg.words.interrogative_followers.contains(second) {
        return Some(NoiseLabel::remove(category, format!("opens with \"{first} {second}\"")));
    }
    None
}

pub fn detect_under_development(pair: &CodeCommentPair, cfg: &RuleConfig) -> Option<NoiseLabel> {
    let haystack = format!(" {} ", normalize_for_match(&pair.comment).join(" "));
    cfg.thresholds.underdev_keywords.iter().find_map(|kw| {
        let needle = normalize_for_match(kw).join(" ");
        if needle.is_empty() || !haystack.contains(&format!(" {needle} ")) {
            return None;
        }
        Some(NoiseLabel::remove(NoiseCategory::UnderDevelopment, format!("keyword \"{kw}\"")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Language;

    fn cfg() -> RuleConfig {
        RuleConfig::default()
    }

    const HIGH_VALUE: &str = "/* Returns the high-value\n * for an item within a series. */";
    const XBLOCK: &str =
        "\"\"\"\nGenerate a CSV file containing a summary of the xBlock usage\nArguments:course_data\n\"\"\"";

    #[test]
    fn partial_with_raw() {
        let pair = CodeCommentPair::new("p", "double lookup(){return 1;}", "returns the high value")
            .with_raw(HIGH_VALUE);
        let label = detect_partial_sentence(&pair, &cfg()).unwrap();
        assert_eq!(label.action, NoiseAction::Update);
        assert_eq!(
            label.proposed_comment.as_deref(),
            Some("returns the high value for an item within a series")
        );
        let exact = CodeCommentPair::new("p", "x", "Returns the high-value for an item within a series.")
            .with_raw(HIGH_VALUE);
        assert!(detect_partial_sentence(&exact, &cfg()).is_none());
    }

    #[test]
    fn partial_fallback_on_dangling_word() {
        let pair = CodeCommentPair::new(
            "p",
            "x",
            "returns the value for the cell at code column index code and",
        );
        let label = detect_partial_sentence(&pair, &cfg()).unwrap();
        assert_eq!(label.action, NoiseAction::Remove);
        assert!(label.fallback);
        assert!(label.evidence.starts_with("fallback"));
        assert!(label.proposed_comment.is_none());
        let done = CodeCommentPair::new("p", "x", "returns the value and.");
        assert!(detect_partial_sentence(&done, &cfg()).is_none());
    }

    #[test]
    fn verbose_with_raw() {
        let pair = CodeCommentPair::new(
            "v",
            "def f(data):\n    pass",
            "generate a csv file containing a summary of the xblock usage arguments course data",
        )
        .with_raw(XBLOCK)
        .with_language(Language::Python);
        let label = detect_verbose_sentence(&pair, &cfg()).unwrap();
        assert_eq!(
            label.proposed_comment.as_deref(),
            Some("generate a csv file containing a summary of the xblock usage")
        );
        let clean = CodeCommentPair::new("v", "x", "sorts the list");
        assert!(detect_verbose_sentence(&clean, &cfg()).is_none());
    }

    #[test]
    fn verbose_fallback_rules() {
        let pair = CodeCommentPair::new("v", "x", "sorts the list. uses quicksort internally for speed");
        let label = detect_verbose_sentence(&pair, &cfg()).unwrap();
        assert_eq!(label.proposed_comment.as_deref(), Some("sorts the list."));
        assert!(label.fallback);

        let pair = CodeCommentPair::new("v", "x", "loads the file args: path the path");
        let label = detect_verbose_sentence(&pair, &cfg()).unwrap();
        assert_eq!(label.proposed_comment.as_deref(), Some("loads the file"));

        // Two trailing words are not enough; "returns" without a colon is prose.
        for ok in ["sorts the list. in place", "returns the value returns", "see e.g. the docs for more"] {
            let pair = CodeCommentPair::new("v", "x", ok);
            assert!(detect_verbose_sentence(&pair, &cfg()).is_none(), "{ok}");
        }
    }

    #[test]
    fn tampering_examples() {
        let pair = CodeCommentPair::new("c", "x", "p builds the jaspic application context p")
            .with_raw("/* <p> Builds the JASPIC application context.</p> */");
        let label = detect_content_tampering(&pair, &cfg()).unwrap();
        assert_eq!(label.evidence, "<p>");
        assert_eq!(label.action, NoiseAction::Remove);

        let pair = CodeCommentPair::new("c", "x", "https developers google com protocol buffers doc encoding");
        let label = detect_content_tampering(&pair, &cfg()).unwrap();
        assert!(label.fallback);
        assert!(label.evidence.contains("https developers google com"));

        for text in [
            "see http://example.org/x for details",
            "reads {@code foo} quickly",
            "@param x the value",
            "visit www.example.com today",
            "loads conf/app/settings.yaml",
        ] {
            assert!(detect_content_tampering(&CodeCommentPair::new("c", "x", text), &cfg()).is_some(), "{text}");
        }
        for text in ["returns the sum of a and b", "reads input and/or output", "a < b comparison"] {
            assert!(detect_content_tampering(&CodeCommentPair::new("c", "x", text), &cfg()).is_none(), "{text}");
        }
    }

    #[test]
    fn tampering_update_override_strips() {
        let mut c = cfg();
        c.set_action(NoiseCategory::ContentTampering, NoiseAction::Update).unwrap();
        let pair = CodeCommentPair::new("c", "x", "<p> builds the context </p> see https://a.b/c");
        let label = detect_content_tampering(&pair, &c).unwrap();
        assert_eq!(label.action, NoiseAction::Update);
        assert_eq!(label.proposed_comment.as_deref(), Some("builds the context see"));
        let fixed = CodeCommentPair::new("c", "x", "builds the context see");
        assert!(detect_content_tampering(&fixed, &c).is_none());
        let only_tag = CodeCommentPair::new("c", "x", "<br/>");
        assert_eq!(detect_content_tampering(&only_tag, &c).unwrap().action, NoiseAction::Remove);
    }

    #[test]
    fn over_splitting_examples() {
        let code = "private void initialize() {\n  jTextField = new JTextField();\n}";
        let pair = CodeCommentPair::new("o", code, "this method initializes j text field");
        let label = detect_over_splitting(&pair, &cfg()).unwrap().unwrap();
        assert_eq!(label.proposed_comment.as_deref(), Some("this method initializes jTextField"));

        let joined = CodeCommentPair::new("o", code, "this method initializes jTextField");
        assert!(detect_over_splitting(&joined, &cfg()).unwrap().is_none());

        let pair = CodeCommentPair::new("o", "void f(){ maxValue = 1; }", "set max value");
        let label = detect_over_splitting(&pair, &cfg()).unwrap().unwrap();
        assert_eq!(label.proposed_comment.as_deref(), Some("set maxValue"));

        let pair = CodeCommentPair::new("o", "def f(course_data):\n    return course_data", "uses course data")
            .with_language(Language::Python);
        let label = detect_over_splitting(&pair, &cfg()).unwrap().unwrap();
        assert_eq!(label.proposed_comment.as_deref(), Some("uses course_data"));
    }

    #[test]
    fn rejoin_prefers_longest_identifier() {
        let ids = vec![
            Identifier { name: "maxValue".into(), subtokens: vec!["max".into(), "value".into()] },
            Identifier {
                name: "maxValueSeen".into(),
                subtokens: vec!["max".into(), "value".into(), "seen".into()],
            },
        ];
        let mut sorted = ids.clone();
        sorted.sort_by(|a, b| b.subtokens.len().cmp(&a.subtokens.len()));
        assert_eq!(
            rejoin_identifiers("the max value seen and max value", &sorted),
            "the maxValueSeen and maxValue"
        );
    }

    #[test]
    fn non_literal_examples() {
        let pair = CodeCommentPair::new("n", "x", "jsonarray bean list arraylist")
            .with_raw("/* 将JSONArray转换为Bean的List，默认为ArrayList */");
        assert!(detect_non_literal(&pair, &cfg()).is_some());
        assert!(detect_non_literal(&CodeCommentPair::new("n", "x", "plain ascii"), &cfg()).is_none());
        let mut c = cfg();
        c.thresholds.nonliteral_ratio = 0.2;
        assert!(detect_non_literal(&CodeCommentPair::new("n", "x", "naïve approach"), &c).is_none());
        assert!(detect_non_literal(&CodeCommentPair::new("n", "x", "naïve approach"), &cfg()).is_some());
    }

    #[test]
    fn interrogation_examples() {
        let yes = ["do we need to show the upgrade wizard prompt ?",
            "is it a good idea using userid from aspnet membership table as a foreign key"];
        for c in yes {
            assert!(detect_interrogation(&CodeCommentPair::new("i", "x", c), &cfg()).is_some(), "{c}");
        }
        for c in ["returns the index", "do the work", "is"] {
            assert!(detect_interrogation(&CodeCommentPair::new("i", "x", c), &cfg()).is_none(), "{c}");
        }
    }

    #[test]
    fn under_development_examples() {
        for c in ["description of the method", "todo add caching here", "Auto-generated method stub"] {
            assert!(detect_under_development(&CodeCommentPair::new("u", "x", c), &cfg()).is_some(), "{c}");
        }
        for c in ["sorts the list in place", "todos are listed", "hackathon entry"] {
            assert!(detect_under_development(&CodeCommentPair::new("u", "x", c), &cfg()).is_none(), "{c}");
        }
    }
}
