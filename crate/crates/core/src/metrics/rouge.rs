/// Default recall weight for ROUGE-L.
pub const ROUGE_BETA: f64 = 1.2;

/// Length of the longest common subsequence.
pub fn lcs_len(a: &[String], b: &[String]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diag = 0;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x == y { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

/// ROUGE-L F-measure: `(1 + beta^2) P R / (R + beta^2 P)`.
pub fn rouge_l(hypothesis: &[String], reference: &[String], beta: f64) -> f64 {
    let l = lcs_len(hypothesis, reference);
    if l == 0 {
        return 0.0;
    }
    let p = l as f64 / hypothesis.len() as f64;
    let r = l as f64 / reference.len() as f64;
    let b2 = beta * beta;
    (1.0 + b2) * p * r / (r + b2 * p)
}
