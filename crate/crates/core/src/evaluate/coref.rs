//! Coreference metrics: link-based MUC, element-based B³, and entity-based
//! CEAFe with an optimal one-to-one chain alignment found by a
//! maximum-weight assignment. Scores accumulate over documents by summing
//! numerators and denominators, and the headline number is the unweighted
//! mean of the three F1 values.

use std::collections::HashMap;

use serde::Serialize;

use crate::model::{Document, Span};
use crate::{Error, Result, ValidationIssue};

/// One coreference mention, identified by its exact span list.
pub type ChainElement = Vec<Span>;

/// A validated set of coreference chains for one document: every chain has
/// at least two elements and no element appears in two chains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSet {
    chains: Vec<Vec<ChainElement>>,
}

impl ChainSet {
    pub fn new(chains: Vec<Vec<ChainElement>>) -> Result<Self> {
        Self::with_context(chains, "")
    }

    pub fn from_document(doc: &Document) -> Result<Self> {
        Self::with_context(
            doc.chains.iter().map(|c| c.elements.clone()).collect(),
            &doc.id,
        )
    }

    fn with_context(chains: Vec<Vec<ChainElement>>, doc: &str) -> Result<Self> {
        let mut issues = Vec::new();
        let mut seen: HashMap<&ChainElement, usize> = HashMap::new();
        for (ci, chain) in chains.iter().enumerate() {
            if chain.len() < 2 {
                issues.push(ValidationIssue::new(
                    doc,
                    format!("chain {ci} has {} element(s), need at least 2", chain.len()),
                ));
            }
            for element in chain {
                if let Some(other) = seen.insert(element, ci) {
                    if other != ci {
                        issues.push(ValidationIssue::new(
                            doc,
                            format!("element {element:?} appears in chains {other} and {ci}"),
                        ));
                    }
                }
            }
        }
        if issues.is_empty() {
            Ok(ChainSet { chains })
        } else {
            Err(Error::Validation(issues))
        }
    }

    pub fn chains(&self) -> &[Vec<ChainElement>] {
        &self.chains
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    fn element_to_chain(&self) -> HashMap<&ChainElement, usize> {
        let mut map = HashMap::new();
        for (ci, chain) in self.chains.iter().enumerate() {
            for element in chain {
                map.insert(element, ci);
            }
        }
        map
    }
}

/// Percent-scale precision, recall and F1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    fn from_fractions(pn: f64, pd: f64, rn: f64, rd: f64) -> Self {
        let precision = if pd == 0.0 { 0.0 } else { 100.0 * pn / pd };
        let recall = if rd == 0.0 { 0.0 } else { 100.0 * rn / rd };
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Prf {
            precision,
            recall,
            f1,
        }
    }

    const PERFECT: Prf = Prf {
        precision: 100.0,
        recall: 100.0,
        f1: 100.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorefScores {
    pub muc: Prf,
    pub b3: Prf,
    pub ceafe: Prf,
    pub avg_f1: f64,
}

/// Unweighted arithmetic mean of the three F1 values.
pub fn conll_avg(muc_f1: f64, b3_f1: f64, ceafe_f1: f64) -> f64 {
    (muc_f1 + b3_f1 + ceafe_f1) / 3.0
}

/// Running sums that make the metrics additive over documents.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CorefAccumulator {
    muc_rn: f64,
    muc_rd: f64,
    muc_pn: f64,
    muc_pd: f64,
    b3_rsum: f64,
    b3_relems: usize,
    b3_psum: f64,
    b3_pelems: usize,
    ceafe_phi: f64,
    gold_chains: usize,
    pred_chains: usize,
}

impl CorefAccumulator {
    pub fn add(&mut self, gold: &ChainSet, pred: &ChainSet) {
        let (rn, rd) = muc_half(gold, pred);
        let (pn, pd) = muc_half(pred, gold);
        self.muc_rn += rn;
        self.muc_rd += rd;
        self.muc_pn += pn;
        self.muc_pd += pd;

        let (rsum, relems) = b3_half(gold, pred);
        let (psum, pelems) = b3_half(pred, gold);
        self.b3_rsum += rsum;
        self.b3_relems += relems;
        self.b3_psum += psum;
        self.b3_pelems += pelems;

        self.ceafe_phi += ceafe_alignment(gold, pred);
        self.gold_chains += gold.chains.len();
        self.pred_chains += pred.chains.len();
    }

    pub fn finish(&self) -> CorefScores {
        if self.gold_chains == 0 && self.pred_chains == 0 {
            return CorefScores {
                muc: Prf::PERFECT,
                b3: Prf::PERFECT,
                ceafe: Prf::PERFECT,
                avg_f1: 100.0,
            };
        }
        let muc = Prf::from_fractions(self.muc_pn, self.muc_pd, self.muc_rn, self.muc_rd);
        let b3 = Prf::from_fractions(
            self.b3_psum,
            self.b3_pelems as f64,
            self.b3_rsum,
            self.b3_relems as f64,
        );
        let ceafe = Prf::from_fractions(
            self.ceafe_phi,
            self.pred_chains as f64,
            self.ceafe_phi,
            self.gold_chains as f64,
        );
        CorefScores {
            muc,
            b3,
            ceafe,
            avg_f1: conll_avg(muc.f1, b3.f1, ceafe.f1),
        }
    }
}

/// MUC numerator/denominator for one direction: sum over `base` chains K of
/// `|K| - |partitions of K induced by other|` and `|K| - 1`.
fn muc_half(base: &ChainSet, other: &ChainSet) -> (f64, f64) {
    let lookup = other.element_to_chain();
    let mut num = 0.0;
    let mut den = 0.0;
    for chain in &base.chains {
        let mut touched: Vec<usize> = Vec::new();
        let mut unmatched = 0usize;
        for element in chain {
            match lookup.get(element) {
                Some(&ci) => {
                    if !touched.contains(&ci) {
                        touched.push(ci);
                    }
                }
                None => unmatched += 1,
            }
        }
        let partitions = touched.len() + unmatched;
        num += (chain.len() - partitions.min(chain.len())) as f64;
        den += (chain.len() - 1) as f64;
    }
    (num, den)
}

/// B³ overlap sum and element count for one direction. Elements absent from
/// the other side contribute zero.
fn b3_half(base: &ChainSet, other: &ChainSet) -> (f64, usize) {
    let lookup = other.element_to_chain();
    let mut sum = 0.0;
    let mut elems = 0usize;
    for chain in &base.chains {
        for element in chain {
            elems += 1;
            if let Some(&ci) = lookup.get(element) {
                let overlap = chain
                    .iter()
                    .filter(|e| lookup.get(*e) == Some(&ci))
                    .count();
                sum += overlap as f64 / chain.len() as f64;
            }
        }
    }
    (sum, elems)
}

/// Total φ4 similarity of the optimal one-to-one chain alignment, where
/// `φ4(K, R) = 2|K ∩ R| / (|K| + |R|)`.
fn ceafe_alignment(gold: &ChainSet, pred: &ChainSet) -> f64 {
    if gold.chains.is_empty() || pred.chains.is_empty() {
        return 0.0;
    }
    let weights: Vec<Vec<f64>> = gold
        .chains
        .iter()
        .map(|k| {
            pred.chains
                .iter()
                .map(|r| {
                    let common = k.iter().filter(|e| r.contains(e)).count();
                    2.0 * common as f64 / (k.len() + r.len()) as f64
                })
                .collect()
        })
        .collect();
    assignment_max(&weights)
}

/// Maximum-weight assignment over a rectangular matrix (Hungarian algorithm
/// on the negated costs, padded to square with zeros).
fn assignment_max(weights: &[Vec<f64>]) -> f64 {
    let rows = weights.len();
    let cols = weights.first().map(Vec::len).unwrap_or(0);
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    let n = rows.max(cols);
    let cost = |i: usize, j: usize| -> f64 {
        if i < rows && j < cols {
            -weights[i][j]
        } else {
            0.0
        }
    };

    // Shortest-augmenting-path Hungarian, 1-indexed potentials.
    let inf = f64::INFINITY;
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut assigned_row = vec![0usize; n + 1]; // column -> row
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        assigned_row[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = assigned_row[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[assigned_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if assigned_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            assigned_row[j0] = assigned_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut total = 0.0;
    for j in 1..=n {
        let i = assigned_row[j];
        if i >= 1 && i - 1 < rows && j - 1 < cols {
            total += weights[i - 1][j - 1];
        }
    }
    total
}

pub fn muc_prf(gold: &ChainSet, pred: &ChainSet) -> Prf {
    one_shot(gold, pred).muc
}

pub fn b3_prf(gold: &ChainSet, pred: &ChainSet) -> Prf {
    one_shot(gold, pred).b3
}

pub fn ceafe_prf(gold: &ChainSet, pred: &ChainSet) -> Prf {
    one_shot(gold, pred).ceafe
}

/// Score a single gold/pred chain-set pair.
pub fn score_chain_sets(gold: &ChainSet, pred: &ChainSet) -> CorefScores {
    one_shot(gold, pred)
}

fn one_shot(gold: &ChainSet, pred: &ChainSet) -> CorefScores {
    let mut acc = CorefAccumulator::default();
    acc.add(gold, pred);
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(i: usize) -> ChainElement {
        vec![Span::new(i * 10, i * 10 + 5)]
    }

    fn chains(groups: &[&[usize]]) -> ChainSet {
        ChainSet::new(
            groups
                .iter()
                .map(|g| g.iter().map(|&i| el(i)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identical_chain_sets_score_100() {
        let g = chains(&[&[0, 1, 2], &[3, 4]]);
        let scores = score_chain_sets(&g, &g);
        assert_eq!(scores.muc.f1, 100.0);
        assert_eq!(scores.b3.f1, 100.0);
        assert_eq!(scores.ceafe.f1, 100.0);
        assert_eq!(scores.avg_f1, 100.0);
    }

    #[test]
    fn muc_split_chain() {
        // Gold links {a,b,c,d}; prediction splits it into {a,b} and {c,d}.
        let gold = chains(&[&[0, 1, 2, 3]]);
        let pred = chains(&[&[0, 1], &[2, 3]]);
        let muc = muc_prf(&gold, &pred);
        assert!((muc.recall - 100.0 * 2.0 / 3.0).abs() < 1e-9);
        assert_eq!(muc.precision, 100.0);
    }

    #[test]
    fn muc_merged_chains() {
        // Prediction merges two gold chains of size 2.
        let gold = chains(&[&[0, 1], &[2, 3]]);
        let pred = chains(&[&[0, 1, 2, 3]]);
        let muc = muc_prf(&gold, &pred);
        assert_eq!(muc.recall, 100.0);
        assert!((muc.precision - 100.0 * 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn b3_merged_chains() {
        let gold = chains(&[&[0, 1], &[2, 3]]);
        let pred = chains(&[&[0, 1, 2, 3]]);
        let b3 = b3_prf(&gold, &pred);
        assert_eq!(b3.recall, 100.0);
        assert_eq!(b3.precision, 50.0);
    }

    #[test]
    fn disjoint_universes_score_zero() {
        let gold = chains(&[&[0, 1]]);
        let pred = chains(&[&[8, 9]]);
        let scores = score_chain_sets(&gold, &pred);
        assert_eq!(scores.muc.f1, 0.0);
        assert_eq!(scores.b3.f1, 0.0);
        assert_eq!(scores.ceafe.f1, 0.0);
        assert_eq!(scores.avg_f1, 0.0);
    }

    #[test]
    fn ceafe_prefers_best_alignment() {
        // Two gold chains, one pred chain equal to the second gold chain.
        let gold = chains(&[&[0, 1], &[2, 3, 4]]);
        let pred = chains(&[&[2, 3, 4]]);
        let ceafe = ceafe_prf(&gold, &pred);
        // phi = 1.0 on the aligned pair.
        assert_eq!(ceafe.precision, 100.0);
        assert_eq!(ceafe.recall, 50.0);
    }

    #[test]
    fn conll_avg_is_arithmetic_mean() {
        assert_eq!(conll_avg(100.0, 100.0, 100.0), 100.0);
        assert_eq!(conll_avg(0.0, 0.0, 0.0), 0.0);
        assert_eq!(conll_avg(60.0, 70.0, 80.0), 70.0);
    }

    #[test]
    fn singleton_chain_is_rejected() {
        let err = ChainSet::new(vec![vec![el(0)]]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn duplicate_element_across_chains_is_rejected() {
        let err = ChainSet::new(vec![
            vec![el(0), el(1)],
            vec![el(1), el(2)],
        ])
        .unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn reordering_is_invariant() {
        let gold = chains(&[&[0, 1, 2], &[3, 4]]);
        let pred = chains(&[&[0, 1], &[3, 4, 2]]);
        let a = score_chain_sets(&gold, &pred);
        let gold_r = chains(&[&[4, 3], &[2, 0, 1]]);
        let pred_r = chains(&[&[2, 4, 3], &[1, 0]]);
        let b = score_chain_sets(&gold_r, &pred_r);
        for (x, y) in [
            (a.muc.f1, b.muc.f1),
            (a.b3.f1, b.b3.f1),
            (a.ceafe.f1, b.ceafe.f1),
            (a.avg_f1, b.avg_f1),
        ] {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn assignment_handles_rectangles() {
        // 2x3: best picks 5 + 4.
        let w = vec![vec![5.0, 1.0, 0.0], vec![1.0, 4.0, 2.0]];
        assert!((assignment_max(&w) - 9.0).abs() < 1e-12);
        // 3x2 transposed.
        let t = vec![vec![5.0, 1.0], vec![1.0, 4.0], vec![0.0, 2.0]];
        assert!((assignment_max(&t) - 9.0).abs() < 1e-12);
    }

    #[test]
    fn assignment_avoids_greedy_trap() {
        // Greedy takes 10 then is stuck with 0; optimum is 9 + 8.
        let w = vec![vec![10.0, 9.0], vec![8.0, 0.0]];
        assert!((assignment_max(&w) - 17.0).abs() < 1e-12);
    }
}
