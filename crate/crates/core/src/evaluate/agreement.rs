//! Inter-annotator agreement.
//!
//! A pair of mentions is admissible when the spans match under the span
//! strictness flag and the labels match under the tag strictness flag; the
//! matched-mention count is the size of a maximum one-to-one matching over
//! admissible pairs, which makes the score symmetric and order-independent.
//! The per-document score is `100 * matched / max(|A|, |B|)`, 100 when both
//! sides are empty.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::Mention;
use crate::par;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpanStrictness {
    /// Span lists must be exactly equal.
    Strict,
    /// Any character overlap between any spans is enough.
    Intersection,
}

impl FromStr for SpanStrictness {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "strict" => Ok(SpanStrictness::Strict),
            "intersection" => Ok(SpanStrictness::Intersection),
            other => Err(format!("span strictness must be strict|intersection, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TagStrictness {
    /// Entity and attribute must both match.
    Strict,
    /// Labels are disregarded.
    Ignored,
}

impl FromStr for TagStrictness {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "strict" => Ok(TagStrictness::Strict),
            "ignored" => Ok(TagStrictness::Ignored),
            other => Err(format!("tag strictness must be strict|ignored, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementConfig {
    pub span: SpanStrictness,
    pub tag: TagStrictness,
}

impl Default for AgreementConfig {
    fn default() -> Self {
        AgreementConfig {
            span: SpanStrictness::Strict,
            tag: TagStrictness::Strict,
        }
    }
}

impl fmt::Display for AgreementConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "span={}, tag={}",
            match self.span {
                SpanStrictness::Strict => "strict",
                SpanStrictness::Intersection => "intersection",
            },
            match self.tag {
                TagStrictness::Strict => "strict",
                TagStrictness::Ignored => "ignored",
            }
        )
    }
}

fn admissible(a: &Mention, b: &Mention, cfg: AgreementConfig) -> bool {
    let spans_ok = match cfg.span {
        SpanStrictness::Strict => a.spans == b.spans,
        SpanStrictness::Intersection => a
            .spans
            .iter()
            .any(|sa| b.spans.iter().any(|sb| sa.intersects(sb))),
    };
    let tags_ok = match cfg.tag {
        TagStrictness::Strict => a.entity == b.entity && a.attribute == b.attribute,
        TagStrictness::Ignored => true,
    };
    spans_ok && tags_ok
}

/// Size of a maximum one-to-one matching between admissible mention pairs.
pub fn match_mentions(a: &[Mention], b: &[Mention], cfg: AgreementConfig) -> usize {
    let adjacency: Vec<Vec<usize>> = a
        .iter()
        .map(|ma| {
            b.iter()
                .enumerate()
                .filter(|(_, mb)| admissible(ma, mb, cfg))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    maximum_bipartite_matching(&adjacency, b.len())
}

/// Kuhn's augmenting-path algorithm.
fn maximum_bipartite_matching(adjacency: &[Vec<usize>], right_size: usize) -> usize {
    fn augment(
        u: usize,
        adjacency: &[Vec<usize>],
        matched_right: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &v in &adjacency[u] {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            if matched_right[v].is_none()
                || augment(matched_right[v].unwrap(), adjacency, matched_right, visited)
            {
                matched_right[v] = Some(u);
                return true;
            }
        }
        false
    }

    let mut matched_right: Vec<Option<usize>> = vec![None; right_size];
    let mut size = 0;
    for u in 0..adjacency.len() {
        let mut visited = vec![false; right_size];
        if augment(u, adjacency, &mut matched_right, &mut visited) {
            size += 1;
        }
    }
    size
}

/// Agreement score for one document, in `[0, 100]`.
pub fn agreement_pair(a: &[Mention], b: &[Mention], cfg: AgreementConfig) -> f64 {
    let denom = a.len().max(b.len());
    if denom == 0 {
        // Both annotators found nothing to annotate: perfect agreement.
        return 100.0;
    }
    100.0 * match_mentions(a, b, cfg) as f64 / denom as f64
}

/// Score of one annotator pair, averaged over their shared documents.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairScore {
    pub annotators: (String, String),
    pub documents: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub config: AgreementConfig,
    pub pairs: Vec<PairScore>,
    /// Mean of the pairwise averages.
    pub overall: f64,
}

/// Average pairwise agreement for two or more annotators. `annotations`
/// maps annotator name to its per-document mention lists.
pub fn agreement_average(
    annotations: &BTreeMap<String, BTreeMap<String, Vec<Mention>>>,
    cfg: AgreementConfig,
) -> Result<AgreementReport> {
    if annotations.len() < 2 {
        return Err(Error::EmptyInput(format!(
            "agreement needs at least 2 annotators, got {}",
            annotations.len()
        )));
    }

    let names: Vec<&String> = annotations.keys().collect();
    let mut pairs = Vec::new();
    for (i, left) in names.iter().enumerate() {
        for right in &names[i + 1..] {
            let docs_left = &annotations[*left];
            let docs_right = &annotations[*right];
            let shared: Vec<&String> = docs_left
                .keys()
                .collect::<BTreeSet<_>>()
                .intersection(&docs_right.keys().collect::<BTreeSet<_>>())
                .copied()
                .collect();
            if shared.is_empty() {
                return Err(Error::EmptyInput(format!(
                    "annotators {left:?} and {right:?} share no documents"
                )));
            }
            let scores = par::map(&shared, |doc| {
                agreement_pair(&docs_left[*doc], &docs_right[*doc], cfg)
            });
            pairs.push(PairScore {
                annotators: ((*left).clone(), (*right).clone()),
                documents: shared.len(),
                score: scores.iter().sum::<f64>() / shared.len() as f64,
            });
        }
    }

    let overall = pairs.iter().map(|p| p.score).sum::<f64>() / pairs.len() as f64;
    Ok(AgreementReport {
        config: cfg,
        pairs,
        overall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AttributeKind, EntityKind, Span};

    fn mention(id: &str, start: usize, end: usize, entity: EntityKind) -> Mention {
        Mention::new(id, entity, None, vec![Span::new(start, end)])
    }

    fn cfg(span: SpanStrictness, tag: TagStrictness) -> AgreementConfig {
        AgreementConfig { span, tag }
    }

    #[test]
    fn identical_sets_match_fully() {
        let a = vec![
            mention("1", 0, 5, EntityKind::Adr),
            mention("2", 6, 9, EntityKind::Note),
            mention("3", 10, 20, EntityKind::Disease),
        ];
        for span in [SpanStrictness::Strict, SpanStrictness::Intersection] {
            for tag in [TagStrictness::Strict, TagStrictness::Ignored] {
                assert_eq!(match_mentions(&a, &a, cfg(span, tag)), 3);
            }
        }
    }

    #[test]
    fn label_mismatch_needs_ignored_tags() {
        let a = vec![mention("1", 0, 5, EntityKind::Adr)];
        let b = vec![Mention::new(
            "1",
            EntityKind::Medication,
            Some(AttributeKind::Drugname),
            vec![Span::new(0, 5)],
        )];
        assert_eq!(
            match_mentions(&a, &b, cfg(SpanStrictness::Strict, TagStrictness::Strict)),
            0
        );
        assert_eq!(
            match_mentions(&a, &b, cfg(SpanStrictness::Strict, TagStrictness::Ignored)),
            1
        );
    }

    #[test]
    fn intersection_accepts_partial_overlap() {
        let a = vec![mention("1", 0, 5, EntityKind::Adr)];
        let b = vec![mention("1", 3, 8, EntityKind::Adr)];
        assert_eq!(
            match_mentions(&a, &b, cfg(SpanStrictness::Strict, TagStrictness::Strict)),
            0
        );
        assert_eq!(
            match_mentions(
                &a,
                &b,
                cfg(SpanStrictness::Intersection, TagStrictness::Strict)
            ),
            1
        );
    }

    #[test]
    fn one_to_one_constraint_uses_maximum_matching() {
        // Both of A's mentions overlap B's first mention, but only a perfect
        // matching pairs them off one-to-one.
        let a = vec![
            mention("a1", 0, 10, EntityKind::Adr),
            mention("a2", 5, 15, EntityKind::Adr),
        ];
        let b = vec![
            mention("b1", 4, 11, EntityKind::Adr),
            mention("b2", 0, 2, EntityKind::Adr),
        ];
        let c = cfg(SpanStrictness::Intersection, TagStrictness::Strict);
        // Greedy a1->b1 would leave a2 unmatched only if a2 had no partner;
        // maximum matching finds a1->b2, a2->b1.
        assert_eq!(match_mentions(&a, &b, c), 2);
    }

    #[test]
    fn pair_score_formula() {
        let a = vec![
            mention("1", 0, 5, EntityKind::Adr),
            mention("2", 6, 9, EntityKind::Adr),
            mention("3", 10, 12, EntityKind::Adr),
            mention("4", 13, 14, EntityKind::Adr),
        ];
        let b = vec![
            mention("1", 0, 5, EntityKind::Adr),
            mention("2", 6, 9, EntityKind::Adr),
        ];
        let score = agreement_pair(&a, &b, AgreementConfig::default());
        assert_eq!(score, 50.0); // 100 * 2 / max(4, 2)
    }

    #[test]
    fn empty_cases() {
        let some = vec![mention("1", 0, 5, EntityKind::Adr)];
        assert_eq!(agreement_pair(&[], &[], AgreementConfig::default()), 100.0);
        assert_eq!(agreement_pair(&[], &some, AgreementConfig::default()), 0.0);
    }

    #[test]
    fn average_over_documents_and_pairs() {
        let m = |n| {
            (0..n)
                .map(|i| mention(&format!("m{i}"), i * 10, i * 10 + 5, EntityKind::Adr))
                .collect::<Vec<_>>()
        };
        let mut ann: BTreeMap<String, BTreeMap<String, Vec<Mention>>> = BTreeMap::new();
        // doc1: 3/5 matched -> 60; doc2: 4/5 -> 80; average 70.
        ann.insert(
            "ann1".into(),
            BTreeMap::from([("doc1".into(), m(5)), ("doc2".into(), m(5))]),
        );
        ann.insert(
            "ann2".into(),
            BTreeMap::from([("doc1".into(), m(3)), ("doc2".into(), m(4))]),
        );
        let report = agreement_average(&ann, AgreementConfig::default()).unwrap();
        assert_eq!(report.pairs.len(), 1);
        assert_eq!(report.overall, 70.0);
    }

    #[test]
    fn no_shared_documents_is_an_error() {
        let mut ann: BTreeMap<String, BTreeMap<String, Vec<Mention>>> = BTreeMap::new();
        ann.insert("a".into(), BTreeMap::from([("d1".into(), vec![])]));
        ann.insert("b".into(), BTreeMap::from([("d2".into(), vec![])]));
        assert!(matches!(
            agreement_average(&ann, AgreementConfig::default()),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn three_annotators_mean_of_three_pairs() {
        let m = |n: usize| {
            (0..n)
                .map(|i| mention(&format!("m{i}"), i * 10, i * 10 + 5, EntityKind::Adr))
                .collect::<Vec<_>>()
        };
        let mut ann: BTreeMap<String, BTreeMap<String, Vec<Mention>>> = BTreeMap::new();
        ann.insert("a".into(), BTreeMap::from([("d".into(), m(4))]));
        ann.insert("b".into(), BTreeMap::from([("d".into(), m(2))]));
        ann.insert("c".into(), BTreeMap::from([("d".into(), m(4))]));
        let report = agreement_average(&ann, AgreementConfig::default()).unwrap();
        assert_eq!(report.pairs.len(), 3);
        // a-b: 50, a-c: 100, b-c: 50 -> 200/3
        assert!((report.overall - 200.0 / 3.0).abs() < 1e-12);
    }
}
