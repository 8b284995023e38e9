//! Summarization metrics and detector evaluation.
//!
//! All sentence inputs are pre-tokenized word lists.

mod bleu;
mod cider;
mod eval;
mod meteor;
mod rouge;

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

pub use bleu::{bleu, BleuMode};
pub use cider::{cider, CiderScores};
pub use eval::{evaluate_detectors, CategoryEval, EvalResult, Prf};
pub use meteor::{meteor, MeteorParams};
pub use rouge::{lcs_len, rouge_l, ROUGE_BETA};

pub(crate) fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if n > 0 && tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

pub(crate) fn check_lengths(hypotheses: usize, references: usize) -> Result<()> {
    if hypotheses != references {
        return Err(Error::LengthMismatch { hypotheses, references });
    }
    Ok(())
}

/// All four metrics over one aligned corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    /// Cumulative BLEU-1..4.
    pub bleu: [f64; 4],
    pub bleu_mode: BleuMode,
    /// Mean over sentences.
    pub rouge_l: f64,
    /// Mean over sentences.
    pub meteor: f64,
    /// Mean over sentences; absent for single-sentence corpora.
    pub cider: Option<f64>,
    pub sentences: usize,
}

pub fn score_corpus(hypotheses: &[Vec<String>], references: &[Vec<String>], mode: BleuMode) -> Result<ScoreReport> {
    check_lengths(hypotheses.len(), references.len())?;
    if hypotheses.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let b = bleu(hypotheses, references, 4, mode)?;
    let n = hypotheses.len() as f64;
    let pairs = || hypotheses.iter().zip(references);
    let params = MeteorParams::default();
    Ok(ScoreReport {
        bleu: [b[0], b[1], b[2], b[3]],
        bleu_mode: mode,
        rouge_l: pairs().map(|(h, r)| rouge_l(h, r, ROUGE_BETA)).sum::<f64>() / n,
        meteor: pairs().map(|(h, r)| meteor(h, r, params)).sum::<f64>() / n,
        cider: (hypotheses.len() >= 2)
            .then(|| cider(hypotheses, references).map(|c| c.mean))
            .transpose()?,
        sentences: hypotheses.len(),
    })
}

/// Splits on whitespace.
pub fn tokenize_words(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}
