use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::taxonomy::{Diagnosis, NoiseCategory};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    /// Zero denominators give zero, never NaN.
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Prf { precision, recall, f1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryEval {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    #[serde(flatten)]
    pub prf: Prf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalResult {
    /// Every category, including ones absent from both sides.
    pub per_category: BTreeMap<NoiseCategory, CategoryEval>,
    /// Mean F1 over categories with at least one gold instance.
    pub macro_f1: f64,
    pub micro: Prf,
}

/// Scores detector output against gold category sets keyed by pair id.
pub fn evaluate_detectors(
    predicted: &[Diagnosis],
    gold: &BTreeMap<String, BTreeSet<NoiseCategory>>,
) -> Result<EvalResult> {
    let missing: Vec<String> = predicted
        .iter()
        .filter(|d| !gold.contains_key(&d.pair_id))
        .map(|d| d.pair_id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingGold(missing));
    }
    let mut counts = [(0usize, 0usize, 0usize); 12];
    let mut gold_any = [false; 12];
    for d in predicted {
        let want = &gold[&d.pair_id];
        let got: BTreeSet<NoiseCategory> = d.labels.iter().map(|l| l.category).collect();
        for c in NoiseCategory::ALL {
            let slot = &mut counts[c.index()];
            match (got.contains(&c), want.contains(&c)) {
                (true, true) => slot.0 += 1,
                (true, false) => slot.1 += 1,
                (false, true) => slot.2 += 1,
                (false, false) => {}
            }
            gold_any[c.index()] |= want.contains(&c);
        }
    }
    let per_category: BTreeMap<NoiseCategory, CategoryEval> = NoiseCategory::ALL
        .iter()
        .map(|&c| {
            let (tp, fp, fn_) = counts[c.index()];
            (c, CategoryEval { tp, fp, fn_, prf: Prf::from_counts(tp, fp, fn_) })
        })
        .collect();
    let graded: Vec<f64> = NoiseCategory::ALL
        .iter()
        .filter(|c| gold_any[c.index()])
        .map(|c| per_category[c].prf.f1)
        .collect();
    let macro_f1 = if graded.is_empty() {
        0.0
    } else {
        graded.iter().sum::<f64>() / graded.len() as f64
    };
    let (tp, fp, fn_) = counts
        .iter()
        .fold((0, 0, 0), |acc, c| (acc.0 + c.0, acc.1 + c.1, acc.2 + c.2));
    Ok(EvalResult {
        per_category,
        macro_f1,
        micro: Prf::from_counts(tp, fp, fn_),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxonomy::NoiseLabel;

    fn diag(id: &str, cats: &[NoiseCategory]) -> Diagnosis {
        let mut d = Diagnosis::new(id);
        for &c in cats {
            d.insert(NoiseLabel::remove(c, ""));
        }
        d
    }

    #[test]
    fn half_right() {
        use NoiseCategory::Interrogation as I;
        let gold: BTreeMap<_, _> = [("a", vec![I]), ("b", vec![I]), ("c", vec![])]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.into_iter().collect()))
            .collect();
        let pred = vec![diag("a", &[I]), diag("b", &[]), diag("c", &[I])];
        let r = evaluate_detectors(&pred, &gold).unwrap();
        let i = &r.per_category[&I].prf;
        assert_eq!((i.precision, i.recall, i.f1), (0.5, 0.5, 0.5));
        assert_eq!(r.macro_f1, 0.5);
    }

    #[test]
    fn all_clean_gold_gives_zeros_not_nan() {
        let gold: BTreeMap<_, _> = [("a".to_string(), BTreeSet::new())].into_iter().collect();
        let r = evaluate_detectors(&[diag("a", &[NoiseCategory::AutoCode])], &gold).unwrap();
        assert_eq!(r.micro, Prf::default());
        assert_eq!(r.macro_f1, 0.0);
        assert!(evaluate_detectors(&[diag("z", &[])], &gold).is_err());
    }
}
