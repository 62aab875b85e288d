//! Viterbi decoding over the three BIO tags with a hard structural
//! constraint: I is unreachable from O and from the sentence start, so
//! decoded sequences never need the repair rule.

use std::collections::BTreeMap;

/// Tag indices; the order gives the tie-break preference (O wins ties).
pub const TAG_O: usize = 0;
pub const TAG_B: usize = 1;
pub const TAG_I: usize = 2;
pub const NUM_TAGS: usize = 3;
/// Virtual previous state for the first token.
pub const START: usize = 3;

pub type Weights = BTreeMap<String, [f64; NUM_TAGS]>;
pub type Transitions = [[f64; NUM_TAGS]; 4];

pub fn transition_allowed(prev: usize, next: usize) -> bool {
    !(next == TAG_I && (prev == TAG_O || prev == START))
}

/// Sum of feature weights per tag. Features are iterated in their given
/// order, so the floating-point sum is deterministic.
pub fn emissions(features: &[String], weights: &Weights) -> [f64; NUM_TAGS] {
    let mut scores = [0.0; NUM_TAGS];
    for feature in features {
        if let Some(w) = weights.get(feature) {
            for (score, weight) in scores.iter_mut().zip(w) {
                *score += weight;
            }
        }
    }
    scores
}

/// Best tag path for one sentence of per-token feature vectors.
pub fn viterbi(
    features: &[Vec<String>],
    weights: &Weights,
    transitions: &Transitions,
) -> Vec<usize> {
    let n = features.len();
    if n == 0 {
        return Vec::new();
    }

    let mut score = vec![[f64::NEG_INFINITY; NUM_TAGS]; n];
    let mut back = vec![[0usize; NUM_TAGS]; n];

    let first = emissions(&features[0], weights);
    for tag in 0..NUM_TAGS {
        if transition_allowed(START, tag) {
            score[0][tag] = first[tag] + transitions[START][tag];
        }
    }

    for i in 1..n {
        let emit = emissions(&features[i], weights);
        for tag in 0..NUM_TAGS {
            let mut best = f64::NEG_INFINITY;
            let mut best_prev = 0usize;
            for prev in 0..NUM_TAGS {
                if !transition_allowed(prev, tag) || score[i - 1][prev] == f64::NEG_INFINITY {
                    continue;
                }
                let candidate = score[i - 1][prev] + transitions[prev][tag];
                if candidate > best {
                    best = candidate;
                    best_prev = prev;
                }
            }
            score[i][tag] = best + emit[tag];
            back[i][tag] = best_prev;
        }
    }

    let mut last = 0usize;
    let mut best = f64::NEG_INFINITY;
    for tag in 0..NUM_TAGS {
        if score[n - 1][tag] > best {
            best = score[n - 1][tag];
            last = tag;
        }
    }

    let mut path = vec![0usize; n];
    path[n - 1] = last;
    for i in (1..n).rev() {
        path[i - 1] = back[i][path[i]];
    }
    path
}
