use serde::{Deserialize, Serialize};

use super::{check_lengths, ngram_counts};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BleuMode {
    /// Clipped counts pooled over the corpus, one brevity penalty.
    Corpus,
    /// Per-sentence BLEU with add-one smoothing for n >= 2, averaged.
    #[default]
    SentenceSmoothed,
}

/// Clipped matches and hypothesis n-gram totals for n = 1..=max_n.
fn clipped(hyp: &[String], reference: &[String], max_n: usize) -> Vec<(usize, usize)> {
    (1..=max_n)
        .map(|n| {
            let h = ngram_counts(hyp, n);
            let r = ngram_counts(reference, n);
            let matched = h.iter().map(|(g, &c)| c.min(r.get(g).copied().unwrap_or(0))).sum();
            (matched, hyp.len().saturating_sub(n - 1))
        })
        .collect()
}

fn brevity_penalty(hyp_len: usize, ref_len: usize) -> f64 {
    (1.0 - ref_len as f64 / hyp_len as f64).exp().min(1.0)
}

/// Cumulative BLEU-k for k = 1..=max_n.
fn cumulative(precisions: &[(f64, f64)], bp: f64) -> Vec<f64> {
    let mut log_sum = 0.0;
    let mut dead = false;
    precisions
        .iter()
        .enumerate()
        .map(|(i, &(num, den))| {
            if num == 0.0 || den == 0.0 {
                dead = true;
            } else {
                log_sum += (num / den).ln();
            }
            if dead {
                0.0
            } else {
                bp * (log_sum / (i + 1) as f64).exp()
            }
        })
        .collect()
}

/// BLEU-1..max_n (cumulative: BLEU-k is the geometric mean of the first k
/// precisions times the brevity penalty).
pub fn bleu(hypotheses: &[Vec<String>], references: &[Vec<String>], max_n: usize, mode: BleuMode) -> Result<Vec<f64>> {
    check_lengths(hypotheses.len(), references.len())?;
    if hypotheses.is_empty() {
        return Err(Error::InvalidInput("BLEU needs at least one sentence".into()));
    }
    if max_n == 0 {
        return Err(Error::InvalidInput("max_n must be at least 1".into()));
    }
    match mode {
        BleuMode::Corpus => {
            let mut totals = vec![(0.0, 0.0); max_n];
            let (mut c, mut r) = (0, 0);
            for (hyp, reference) in hypotheses.iter().zip(references) {
                for (t, (m, d)) in totals.iter_mut().zip(clipped(hyp, reference, max_n)) {
                    t.0 += m as f64;
                    t.1 += d as f64;
                }
                c += hyp.len();
                r += reference.len();
            }
            if c == 0 {
                return Ok(vec![0.0; max_n]);
            }
            Ok(cumulative(&totals, brevity_penalty(c, r)))
        }
        BleuMode::SentenceSmoothed => {
            let mut sums = vec![0.0; max_n];
            for (hyp, reference) in hypotheses.iter().zip(references) {
                if hyp.is_empty() {
                    continue;
                }
                let precisions: Vec<(f64, f64)> = clipped(hyp, reference, max_n)
                    .into_iter()
                    .enumerate()
                    .map(|(i, (m, d))| if i == 0 { (m as f64, d as f64) } else { (m as f64 + 1.0, d as f64 + 1.0) })
                    .collect();
                let scores = cumulative(&precisions, brevity_penalty(hyp.len(), reference.len()));
                for (s, v) in sums.iter_mut().zip(scores) {
                    *s += v;
                }
            }
            let n = hypotheses.len() as f64;
            Ok(sums.into_iter().map(|s| s / n).collect())
        }
    }
}
