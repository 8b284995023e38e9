use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{check_lengths, ngram_counts};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CiderScores {
    pub per_sentence: Vec<f64>,
    pub mean: f64,
}

type Vector<'a> = HashMap<&'a [String], f64>;

fn tfidf<'a>(tokens: &'a [String], n: usize, df: &HashMap<&[String], usize>, corpus: f64) -> Vector<'a> {
    ngram_counts(tokens, n)
        .into_iter()
        .map(|(g, c)| {
            let idf = (corpus / df.get(g).copied().unwrap_or(0).max(1) as f64).ln();
            (g, c as f64 * idf)
        })
        .collect()
}

fn cosine(a: &Vector, b: &Vector) -> f64 {
    let norm = |v: &Vector| v.values().map(|x| x * x).sum::<f64>().sqrt();
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let dot: f64 = a.iter().map(|(g, x)| x * b.get(g).copied().unwrap_or(0.0)).sum();
    dot / (na * nb)
}

/// Plain CIDEr with one reference per hypothesis: ten times the mean over
/// n = 1..4 of the TF-IDF cosine, IDF taken over the references.
pub fn cider(hypotheses: &[Vec<String>], references: &[Vec<String>]) -> Result<CiderScores> {
    check_lengths(hypotheses.len(), references.len())?;
    if references.len() < 2 {
        return Err(Error::InvalidInput("CIDEr needs at least two sentences".into()));
    }
    let corpus = references.len() as f64;
    let mut per_sentence = vec![0.0; hypotheses.len()];
    for n in 1..=4 {
        let mut df: HashMap<&[String], usize> = HashMap::new();
        for r in references {
            let distinct: HashSet<&[String]> = r.windows(n).collect();
            for g in distinct {
                *df.entry(g).or_insert(0) += 1;
            }
        }
        for (score, (h, r)) in per_sentence.iter_mut().zip(hypotheses.iter().zip(references)) {
            *score += cosine(&tfidf(h, n, &df, corpus), &tfidf(r, n, &df, corpus));
        }
    }
    for s in &mut per_sentence {
        *s *= 10.0 / 4.0;
    }
    let mean = per_sentence.iter().sum::<f64>() / per_sentence.len() as f64;
    Ok(CiderScores { per_sentence, mean })
}
