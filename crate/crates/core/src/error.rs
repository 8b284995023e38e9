use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("malformed JSON")]
    MalformedJson,
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error("missing required field: {0}")]
    MissingField(&'static str),
    #[error("duplicate id: {0}")]
    DuplicateId(String),
    #[error("empty id")]
    EmptyId,
    #[error("empty code")]
    EmptyCode,
    #[error("unsupported language: {0}")]
    UnsupportedLanguage(String),
    #[error("unsupported partition: {0}")]
    UnsupportedPartition(String),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("{what} at line {line}, col {col}")]
    Unterminated {
        what: &'static str,
        line: usize,
        col: usize,
    },
    #[error("empty source")]
    EmptySource,
    #[error("cannot locate method body")]
    NoMethodBody,
    #[error("config: {0}")]
    Config(String),
    #[error("length mismatch: {hypotheses} hypotheses vs {references} references")]
    LengthMismatch { hypotheses: usize, references: usize },
    #[error("{0}")]
    InvalidInput(String),
    #[error("predicted ids missing from gold: {0:?}")]
    MissingGold(Vec<String>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_line(line: usize, err: Error) -> Self {
        Error::AtLine {
            line,
            source: Box::new(err),
        }
    }
}
