use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeteorParams {
    /// Weight on recall in the harmonic mean.
    pub alpha: f64,
    /// Fragmentation penalty exponent.
    pub beta: f64,
    /// Maximum fragmentation penalty.
    pub gamma: f64,
}

impl Default for MeteorParams {
    fn default() -> Self {
        MeteorParams {
            alpha: 0.9,
            beta: 3.0,
            gamma: 0.5,
        }
    }
}

// Search budget for the chunk-minimizing alignment on long sentences.
const NODE_LIMIT: usize = 200_000;

struct Search {
    options: Vec<Vec<usize>>,
    /// Hypothesis positions with at least one option, from position i on.
    remaining: Vec<usize>,
    used: Vec<bool>,
    target: usize,
    best: usize,
    nodes: usize,
}

impl Search {
    fn run(&mut self, i: usize, prev: Option<usize>, matched: usize, chunks: usize) {
        self.nodes += 1;
        if chunks >= self.best || matched + self.remaining[i] < self.target {
            return;
        }
        if matched == self.target {
            self.best = chunks;
            return;
        }
        if self.nodes > NODE_LIMIT && self.best != usize::MAX {
            return;
        }
        // Extending the previous chunk first finds good bounds early.
        let mut order: Vec<usize> = self.options[i].iter().copied().filter(|&j| !self.used[j]).collect();
        if let Some(p) = prev {
            if let Some(k) = order.iter().position(|&j| j == p + 1) {
                order[..=k].rotate_right(1);
            }
        }
        for j in order {
            self.used[j] = true;
            let extends = prev.is_some_and(|p| j == p + 1);
            self.run(i + 1, Some(j), matched + 1, chunks + usize::from(!extends));
            self.used[j] = false;
        }
        self.run(i + 1, None, matched, chunks);
    }
}

/// Fewest chunks over all maximum exact-match alignments, with the match
/// count. Returns (0, 0) when nothing matches.
pub(crate) fn align(hypothesis: &[String], reference: &[String]) -> (usize, usize) {
    let mut ref_positions: HashMap<&str, Vec<usize>> = HashMap::new();
    for (j, w) in reference.iter().enumerate() {
        ref_positions.entry(w.as_str()).or_default().push(j);
    }
    let options: Vec<Vec<usize>> = hypothesis
        .iter()
        .map(|w| ref_positions.get(w.as_str()).cloned().unwrap_or_default())
        .collect();
    let mut hyp_counts: HashMap<&str, usize> = HashMap::new();
    for w in hypothesis {
        *hyp_counts.entry(w.as_str()).or_default() += 1;
    }
    let target: usize = hyp_counts
        .iter()
        .map(|(w, &c)| c.min(ref_positions.get(w).map_or(0, Vec::len)))
        .sum();
    if target == 0 {
        return (0, 0);
    }
    let mut remaining = vec![0; hypothesis.len() + 1];
    for i in (0..hypothesis.len()).rev() {
        remaining[i] = remaining[i + 1] + usize::from(!options[i].is_empty());
    }
    let mut search = Search {
        options,
        remaining,
        used: vec![false; reference.len()],
        target,
        best: usize::MAX,
        nodes: 0,
    };
    search.run(0, None, 0, 0);
    (target, search.best)
}

/// METEOR with exact matching only.
///
/// `Fmean = P R / (alpha P + (1 - alpha) R)`, so recall carries weight
/// alpha; the fragmentation penalty is `gamma (chunks / m)^beta`.
pub fn meteor(hypothesis: &[String], reference: &[String], params: MeteorParams) -> f64 {
    let (m, chunks) = align(hypothesis, reference);
    if m == 0 {
        return 0.0;
    }
    let p = m as f64 / hypothesis.len() as f64;
    let r = m as f64 / reference.len() as f64;
    let fmean = p * r / (params.alpha * p + (1.0 - params.alpha) * r);
    let penalty = params.gamma * (chunks as f64 / m as f64).powf(params.beta);
    fmean * (1.0 - penalty)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn hand_derived_values() {
        let p = MeteorParams::default();
        assert!((meteor(&toks("a b"), &toks("b a"), p) - 0.5).abs() < 1e-12);
        assert!((meteor(&toks("a b c d"), &toks("a b c d"), p) - 0.9921875).abs() < 1e-12);
        assert_eq!(meteor(&toks("x y"), &toks("a b"), p), 0.0);
    }

    #[test]
    fn recall_weighted_harmonic_mean() {
        // m = 1, P = 1, R = 1/2: Fmean = 0.5 / (0.9 + 0.05).
        let p = MeteorParams::default();
        let expected = (0.5 / 0.95) * (1.0 - 0.5);
        assert!((meteor(&toks("a"), &toks("a b"), p) - expected).abs() < 1e-12);
    }

    #[test]
    fn repeated_words_pick_fewest_chunks() {
        // Left-to-right pairing gives 3 chunks; a->3, a->1, b->2 gives 2.
        assert_eq!(align(&toks("a a b"), &toks("x a b a")), (3, 2));
        assert_eq!(align(&toks("a b c"), &toks("c b a")), (3, 3));
    }
}
