//! A small state-machine lexer for Java and Python method sources.
//!
//! The lexer only needs to know where comments, string literals and
//! identifiers start and end; it never builds a syntax tree. Comment and
//! string contents are consumed whole and never re-tokenized.

use std::collections::HashSet;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::corpus::Language;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenKind {
    Identifier,
    Keyword,
    LineComment,
    BlockComment,
    StringLit,
    Number,
    Punct,
}

impl TokenKind {
    pub fn is_comment(self) -> bool {
        matches!(self, TokenKind::LineComment | TokenKind::BlockComment)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based line of the first character.
    pub line: usize,
    /// 1-based column (in characters) of the first character.
    pub col: usize,
    /// Byte offset of the first character in the source.
    pub offset: usize,
}

impl Token {
    pub fn end(&self) -> usize {
        self.offset + self.text.len()
    }

    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punct && self.text == p
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identifier {
    pub name: String,
    pub subtokens: Vec<String>,
}

const JAVA_KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while", "true", "false", "null", "var", "record", "yield",
];

const PYTHON_KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class",
    "continue", "def", "del", "elif", "else", "except", "finally", "for", "from", "global", "if",
    "import", "in", "is", "lambda", "nonlocal", "not", "or", "pass", "raise", "return", "try",
    "while", "with", "yield",
];

/// Per-language keyword lists. Identifiers found here lex as `Keyword`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Keywords {
    pub java: HashSet<String>,
    pub python: HashSet<String>,
}

impl Default for Keywords {
    fn default() -> Self {
        Keywords {
            java: JAVA_KEYWORDS.iter().map(|s| s.to_string()).collect(),
            python: PYTHON_KEYWORDS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl Keywords {
    pub fn for_language(&self, language: Language) -> &HashSet<String> {
        match language {
            Language::Java => &self.java,
            Language::Python => &self.python,
        }
    }
}

static DEFAULT_KEYWORDS: LazyLock<Keywords> = LazyLock::new(Keywords::default);

// Longest first so maximal munch picks e.g. `>>>=` over `>>`.
const OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "...", "**=", "//=", "->", "::", "++", "--", "&&", "||", "==",
    "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "**", "//",
    ":=", "@=",
];

struct Lexer<'a> {
    src: &'a str,
    lang: Language,
    keywords: &'a HashSet<String>,
    pos: usize,
    line: usize,
    col: usize,
    tokens: Vec<Token>,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn bump_str(&mut self, s: &str) {
        for _ in s.chars() {
            self.bump();
        }
    }

    fn push(&mut self, kind: TokenKind, start: usize, line: usize, col: usize) {
        let mut kind = kind;
        let text = &self.src[start..self.pos];
        if kind == TokenKind::Identifier && self.keywords.contains(text) {
            kind = TokenKind::Keyword;
        }
        self.tokens.push(Token {
            kind,
            text: text.to_string(),
            line,
            col,
            offset: start,
        });
    }

    fn run(mut self) -> Result<Vec<Token>> {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            let (start, line, col) = (self.pos, self.line, self.col);
            match self.lang {
                Language::Java => self.java_token(c, line, col)?,
                Language::Python => self.python_token(c, line, col)?,
            }
            debug_assert!(self.pos > start, "lexer made no progress");
            let _ = start;
        }
        Ok(self.tokens)
    }

    fn java_token(&mut self, c: char, line: usize, col: usize) -> Result<()> {
        let start = self.pos;
        let rest = self.rest();
        if rest.starts_with("//") {
            self.line_comment(start, line, col);
        } else if rest.starts_with("/*") {
            self.bump_str("/*");
            loop {
                if self.rest().starts_with("*/") {
                    self.bump_str("*/");
                    break;
                }
                if self.bump().is_none() {
                    return Err(Error::Unterminated {
                        what: "unterminated block comment",
                        line,
                        col,
                    });
                }
            }
            self.push(TokenKind::BlockComment, start, line, col);
        } else if rest.starts_with("\"\"\"") {
            self.triple_string("\"\"\"", start, line, col)?;
        } else if c == '"' || c == '\'' {
            self.quoted(c, start, line, col)?;
        } else {
            self.common_token(c, start, line, col);
        }
        Ok(())
    }

    fn python_token(&mut self, c: char, line: usize, col: usize) -> Result<()> {
        let start = self.pos;
        if c == '#' {
            self.line_comment(start, line, col);
            return Ok(());
        }
        if c == '"' || c == '\'' {
            return self.python_string(start, line, col);
        }
        if is_ident_start(c) {
            // String prefixes such as r"", b'', f"""...""".
            let word_len: usize = self
                .rest()
                .chars()
                .take_while(|&ch| is_ident_continue(ch))
                .map(char::len_utf8)
                .sum();
            let word = &self.rest()[..word_len];
            let after = self.rest()[word_len..].chars().next();
            if word.len() <= 2
                && word.chars().all(|ch| "rRbBuUfF".contains(ch))
                && matches!(after, Some('"') | Some('\''))
            {
                self.bump_str(word);
                return self.python_string(start, line, col);
            }
        }
        self.common_token(c, start, line, col);
        Ok(())
    }

    fn python_string(&mut self, start: usize, line: usize, col: usize) -> Result<()> {
        let rest = self.rest();
        if rest.starts_with("\"\"\"") {
            self.triple_string("\"\"\"", start, line, col)
        } else if rest.starts_with("'''") {
            self.triple_string("'''", start, line, col)
        } else {
            let q = self.peek().unwrap_or('"');
            self.quoted(q, start, line, col)
        }
    }

    fn line_comment(&mut self, start: usize, line: usize, col: usize) {
        while let Some(ch) = self.peek() {
            if ch == '\n' || ch == '\r' {
                break;
            }
            self.bump();
        }
        self.push(TokenKind::LineComment, start, line, col);
    }

    fn triple_string(&mut self, delim: &str, start: usize, line: usize, col: usize) -> Result<()> {
        self.bump_str(delim);
        loop {
            let rest = self.rest();
            if rest.starts_with(delim) {
                self.bump_str(delim);
                break;
            }
            if rest.starts_with('\\') {
                self.bump();
            }
            if self.bump().is_none() {
                return Err(Error::Unterminated {
                    what: "unterminated string",
                    line,
                    col,
                });
            }
        }
        self.push(TokenKind::StringLit, start, line, col);
        Ok(())
    }

    fn quoted(&mut self, quote: char, start: usize, line: usize, col: usize) -> Result<()> {
        self.bump();
        loop {
            match self.peek() {
                None | Some('\n') => {
                    return Err(Error::Unterminated {
                        what: "unterminated string",
                        line,
                        col,
                    })
                }
                Some('\\') => {
                    self.bump();
                    if self.bump().is_none() {
                        return Err(Error::Unterminated {
                            what: "unterminated string",
                            line,
                            col,
                        });
                    }
                }
                Some(ch) if ch == quote => {
                    self.bump();
                    break;
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
        self.push(TokenKind::StringLit, start, line, col);
        Ok(())
    }

    fn common_token(&mut self, c: char, start: usize, line: usize, col: usize) {
        if is_ident_start(c) {
            while self.peek().is_some_and(is_ident_continue) {
                self.bump();
            }
            self.push(TokenKind::Identifier, start, line, col);
        } else if c.is_ascii_digit() || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())) {
            self.number();
            self.push(TokenKind::Number, start, line, col);
        } else {
            let rest = self.rest();
            let op = OPERATORS.iter().find(|op| rest.starts_with(**op));
            match op {
                Some(op) => self.bump_str(op),
                None => {
                    self.bump();
                }
            }
            self.push(TokenKind::Punct, start, line, col);
        }
    }

    fn number(&mut self) {
        let mut prev = '\0';
        while let Some(ch) = self.peek() {
            let accept = ch.is_ascii_alphanumeric()
                || ch == '_'
                || (ch == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()))
                || ((ch == '+' || ch == '-') && matches!(prev, 'e' | 'E'));
            if !accept {
                break;
            }
            prev = ch;
            self.bump();
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

pub fn tokenize_code(source: &str, language: Language) -> Result<Vec<Token>> {
    tokenize_with(source, language, &DEFAULT_KEYWORDS)
}

pub fn tokenize_with(source: &str, language: Language, keywords: &Keywords) -> Result<Vec<Token>> {
    if source.trim().is_empty() {
        return Err(Error::EmptySource);
    }
    Lexer {
        src: source,
        lang: language,
        keywords: keywords.for_language(language),
        pos: 0,
        line: 1,
        col: 1,
        tokens: Vec::new(),
    }
    .run()
}

/// Distinct identifiers in first-seen order, with their subtokens.
pub fn extract_identifiers(tokens: &[Token]) -> Vec<Identifier> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for tok in tokens {
        if tok.kind != TokenKind::Identifier || !seen.insert(tok.text.as_str()) {
            continue;
        }
        let subtokens = split_identifier(&tok.text);
        if subtokens.is_empty() {
            continue;
        }
        out.push(Identifier {
            name: tok.text.clone(),
            subtokens,
        });
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CharClass {
    Lower,
    Upper,
    Digit,
}

fn class_of(c: char) -> CharClass {
    if c.is_numeric() {
        CharClass::Digit
    } else if c.is_uppercase() {
        CharClass::Upper
    } else {
        CharClass::Lower
    }
}

/// Splits a camelCase / snake_case / acronym identifier into lowercase parts.
///
/// Boundaries: separators (`_`, `$`), lower→Upper, the last capital of an
/// upper-case run when followed by lower case (`XMLParser` → xml, parser),
/// and letter↔digit transitions.
pub fn split_identifier(name: &str) -> Vec<String> {
    let mut parts = Vec::new();
    for segment in name.split(['_', '$']) {
        let chars: Vec<char> = segment.chars().collect();
        let mut current = String::new();
        for (i, &c) in chars.iter().enumerate() {
            if i > 0 && !current.is_empty() {
                let prev = class_of(chars[i - 1]);
                let cur = class_of(c);
                let next = chars.get(i + 1).map(|&n| class_of(n));
                let boundary = match (prev, cur) {
                    (CharClass::Lower, CharClass::Upper) => true,
                    (CharClass::Upper, CharClass::Upper) => next == Some(CharClass::Lower),
                    (CharClass::Digit, CharClass::Digit) => false,
                    (CharClass::Digit, _) | (_, CharClass::Digit) => true,
                    _ => false,
                };
                if boundary {
                    parts.push(std::mem::take(&mut current).to_lowercase());
                }
            }
            current.push(c);
        }
        if !current.is_empty() {
            parts.push(current.to_lowercase());
        }
    }
    parts
}

/// Removes every comment token from `source`.
///
/// Lines that held only comments (and whitespace) are dropped, trailing
/// whitespace left behind by a removed comment is trimmed, and a single space
/// is inserted where dropping a comment would fuse two adjacent tokens.
pub fn strip_block_comments(source: &str, language: Language) -> Result<(String, Vec<String>)> {
    strip_comments_with(source, language, &DEFAULT_KEYWORDS)
}

pub fn strip_comments_with(
    source: &str,
    language: Language,
    keywords: &Keywords,
) -> Result<(String, Vec<String>)> {
    let tokens = tokenize_with(source, language, keywords)?;
    Ok(strip_tokens(source, &tokens))
}

pub(crate) fn strip_tokens(source: &str, tokens: &[Token]) -> (String, Vec<String>) {
    let comments: Vec<&Token> = tokens.iter().filter(|t| t.kind.is_comment()).collect();
    if comments.is_empty() {
        return (source.to_string(), Vec::new());
    }
    let removed = comments.iter().map(|t| t.text.clone()).collect();

    // Rebuild the text line by line, remembering which output lines lost a comment.
    let mut out = String::with_capacity(source.len());
    let mut touched = vec![false];
    let mut cursor = 0;
    let push_text = |out: &mut String, touched: &mut Vec<bool>, text: &str| {
        for ch in text.chars() {
            out.push(ch);
            if ch == '\n' {
                touched.push(false);
            }
        }
    };
    for c in &comments {
        push_text(&mut out, &mut touched, &source[cursor..c.offset]);
        let before = out.chars().next_back();
        let after = source[c.end()..].chars().next();
        if let (Some(b), Some(a)) = (before, after) {
            if !b.is_whitespace() && !a.is_whitespace() {
                out.push(' ');
            }
        }
        *touched.last_mut().expect("non-empty") = true;
        cursor = c.end();
    }
    push_text(&mut out, &mut touched, &source[cursor..]);

    let mut lines = Vec::new();
    for (line, was_touched) in out.split('\n').zip(touched.iter().copied()) {
        if was_touched {
            let trimmed = line.trim_end();
            if trimmed.trim_start().is_empty() {
                continue;
            }
            lines.push(trimmed);
        } else {
            lines.push(line);
        }
    }
    (lines.join("\n"), removed)
}

/// Exact-duplicate key: non-comment token texts joined by single spaces.
pub fn normalize_code(source: &str, language: Language) -> Result<String> {
    let tokens = tokenize_code(source, language)?;
    Ok(normalize_tokens(&tokens))
}

pub fn normalize_tokens(tokens: &[Token]) -> String {
    let mut key = String::new();
    for t in tokens.iter().filter(|t| !t.kind.is_comment()) {
        if !key.is_empty() {
            key.push(' ');
        }
        key.push_str(&t.text);
    }
    key
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str, lang: Language) -> Vec<(TokenKind, String)> {
        tokenize_code(src, lang)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    #[test]
    fn java_statement_with_trailing_comment() {
        use TokenKind::*;
        assert_eq!(
            kinds("return x; // done", Language::Java),
            vec![
                (Keyword, "return".into()),
                (Identifier, "x".into()),
                (Punct, ";".into()),
                (LineComment, "// done".into()),
            ]
        );
    }

    #[test]
    fn todo_line_comment_is_one_token() {
        let src = "checkRefresh();\n// TODO: Why is he using Math.round?\nreturn Math.round(quality);";
        let toks = tokenize_code(src, Language::Java).unwrap();
        let comments: Vec<_> = toks.iter().filter(|t| t.kind.is_comment()).collect();
        assert_eq!(comments.len(), 1);
        assert_eq!(comments[0].text, "// TODO: Why is he using Math.round?");
        assert_eq!((comments[0].line, comments[0].col), (2, 1));
    }

    #[test]
    fn comment_markers_inside_string_are_not_comments() {
        let src = "\"/* not a comment */\"";
        let toks = tokenize_code(src, Language::Java).unwrap();
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].kind, TokenKind::StringLit);
    }

    #[test]
    fn python_comments_and_strings() {
        use TokenKind::*;
        let src = "def f(x):\n    \"\"\"doc # not comment\"\"\"\n    return r'\\d' # tail";
        let toks = kinds(src, Language::Python);
        assert_eq!(toks[0], (Keyword, "def".into()));
        assert!(toks.contains(&(StringLit, "\"\"\"doc # not comment\"\"\"".into())));
        assert!(toks.contains(&(StringLit, "r'\\d'".into())));
        assert_eq!(toks.last().unwrap(), &(LineComment, "# tail".into()));
        // `//` is floor division in Python, not a comment.
        assert!(kinds("a // b", Language::Python).iter().all(|(k, _)| !k.is_comment()));
    }

    #[test]
    fn unterminated_constructs_error_with_position() {
        let err = tokenize_code("int a; /* open", Language::Java).unwrap_err();
        assert_eq!(err.to_string(), "unterminated block comment at line 1, col 8");
        let err = tokenize_code("x = \"abc\ny", Language::Java).unwrap_err();
        assert!(matches!(err, Error::Unterminated { line: 1, col: 5, .. }));
        let err = tokenize_code("s = '''abc", Language::Python).unwrap_err();
        assert!(matches!(err, Error::Unterminated { .. }));
        assert!(tokenize_code("\"\\", Language::Java).is_err());
    }

    #[test]
    fn coverage_reconstructs_source() {
        let src = "public int getFixQuality(){\n  checkRefresh(); /*x*/ return 1.5e-3f;}";
        let toks = tokenize_code(src, Language::Java).unwrap();
        let covered: usize = toks.iter().map(|t| t.text.len()).sum();
        let ws: usize = src.chars().filter(|c| c.is_whitespace()).map(char::len_utf8).sum();
        assert_eq!(covered + ws, src.len());
        assert!(toks.iter().any(|t| t.kind == TokenKind::Number && t.text == "1.5e-3f"));
    }

    #[test]
    fn identifiers_skip_keywords_and_repeats() {
        let toks = tokenize_code("jTextField = null;", Language::Java).unwrap();
        assert_eq!(
            extract_identifiers(&toks),
            vec![Identifier {
                name: "jTextField".into(),
                subtokens: vec!["j".into(), "text".into(), "field".into()]
            }]
        );
        let toks = tokenize_code("return;", Language::Java).unwrap();
        assert!(extract_identifiers(&toks).is_empty());
        let toks = tokenize_code("max_value + maxValue + max_value", Language::Java).unwrap();
        let ids = extract_identifiers(&toks);
        assert_eq!(ids.len(), 2);
        for id in ids {
            assert_eq!(id.subtokens, vec!["max", "value"]);
        }
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_identifier("jTextField"), vec!["j", "text", "field"]);
        assert_eq!(split_identifier("x"), vec!["x"]);
        assert_eq!(split_identifier("parseHTTP2Frame"), vec!["parse", "http", "2", "frame"]);
        assert_eq!(split_identifier("XMLParser"), vec!["xml", "parser"]);
        assert_eq!(split_identifier("__init__"), vec!["init"]);
        assert_eq!(split_identifier("testID1"), vec!["test", "id", "1"]);
        assert_eq!(split_identifier("HTTP"), vec!["http"]);
        assert!(split_identifier("_").is_empty());
    }

    #[test]
    fn strip_examples() {
        let src = "public int getFixQuality(){\n  checkRefresh();\n  // TODO: Why is he using Math.round?\n  return Math.round(quality);}";
        let (stripped, removed) = strip_block_comments(src, Language::Java).unwrap();
        assert_eq!(
            stripped,
            "public int getFixQuality(){\n  checkRefresh();\n  return Math.round(quality);}"
        );
        assert_eq!(removed, vec!["// TODO: Why is he using Math.round?"]);

        let clean = "int f() {\n  return 1;\n}\n";
        assert_eq!(
            strip_block_comments(clean, Language::Java).unwrap(),
            (clean.to_string(), vec![])
        );

        let (s, r) = strip_block_comments("/* only */", Language::Java).unwrap();
        assert_eq!(s, "");
        assert_eq!(r, vec!["/* only */"]);

        let (s, _) = strip_block_comments("a/*x*/b", Language::Java).unwrap();
        assert_eq!(s, "a b");
        let (s, _) = strip_block_comments("int f(){return 1;} /*a*/", Language::Java).unwrap();
        assert_eq!(s, "int f(){return 1;}");
    }

    #[test]
    fn normalize_examples() {
        let a = normalize_code("int f(){return 1;}", Language::Java).unwrap();
        let b = normalize_code("int f() { return 1 ; }", Language::Java).unwrap();
        let c = normalize_code("int g(){return 1;}", Language::Java).unwrap();
        let d = normalize_code("int f(){/*a*/return 1;}", Language::Java).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, d);
        assert_eq!(a, "int f ( ) { return 1 ; }");
    }
}
