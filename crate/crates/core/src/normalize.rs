//! Surface-form normalization: Ratcliff/Obershelp similarity, incremental
//! grouping of mention surfaces, and application of group-name → code
//! mapping tables.

use serde::{Deserialize, Serialize};

use crate::formats::CodeMapping;
use crate::model::Code;

/// Ratcliff/Obershelp similarity in `[0, 1]`.
///
/// Strings are compared after lowercasing. The score is `2M / (|a| + |b|)`
/// where `M` counts characters matched by the recursive longest-common-
/// substring decomposition. Ties between equally long matches prefer the
/// earliest occurrence in the canonically first string, then in the second;
/// the canonical argument order makes the result symmetric. Two empty
/// strings score 1.
pub fn ratcliff_similarity(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.to_lowercase().chars().collect();
    let b: Vec<char> = b.to_lowercase().chars().collect();
    ratcliff_chars(&a, &b)
}

fn ratcliff_chars(a: &[char], b: &[char]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let (first, second) = if a <= b { (a, b) } else { (b, a) };
    let matched = matched_chars(first, second);
    2.0 * matched as f64 / (a.len() + b.len()) as f64
}

/// Total characters matched by recursive longest-match decomposition.
fn matched_chars(a: &[char], b: &[char]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let (ai, bi, len) = longest_match(a, b);
    if len == 0 {
        return 0;
    }
    len + matched_chars(&a[..ai], &b[..bi]) + matched_chars(&a[ai + len..], &b[bi + len..])
}

/// Longest common substring as `(start in a, start in b, length)`; ties
/// prefer the smallest start in `a`, then in `b`.
fn longest_match(a: &[char], b: &[char]) -> (usize, usize, usize) {
    // suffix[j] holds the match length starting at (i, j); computed from the
    // bottom row upward.
    let mut suffix = vec![0usize; b.len() + 1];
    let mut best = (0usize, 0usize, 0usize);
    for i in (0..a.len()).rev() {
        let mut next_diag = 0usize; // suffix[j + 1] from the previous row
        for j in (0..b.len()).rev() {
            let here = if a[i] == b[j] { next_diag + 1 } else { 0 };
            next_diag = suffix[j];
            suffix[j] = here;
        }
        suffix[b.len()] = 0;
        for (j, &len) in suffix[..b.len()].iter().enumerate() {
            // Strict inequalities keep the earliest (i, j) on ties; rows are
            // visited bottom-up so i must win by >= as later rows are earlier.
            if len > best.2 || (len == best.2 && len > 0 && (i, j) <= (best.0, best.1)) {
                best = (i, j, len);
            }
        }
    }
    best
}

/// A group of surface forms considered the same term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MentionGroup {
    /// Most frequent member; ties broken by lexicographic order.
    pub name: String,
    pub members: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub codes: Vec<Code>,
    #[serde(default)]
    pub concept_less: bool,
}

impl MentionGroup {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    fn recompute_name(&mut self) {
        let mut counts: std::collections::BTreeMap<&str, usize> = std::collections::BTreeMap::new();
        for m in &self.members {
            *counts.entry(m.as_str()).or_default() += 1;
        }
        let max = counts.values().copied().max().unwrap_or(0);
        self.name = counts
            .iter()
            .filter(|(_, &c)| c == max)
            .map(|(&name, _)| name)
            .min()
            .unwrap_or("")
            .to_string();
    }
}

/// Incrementally group surfaces in input order.
///
/// Each surface joins the existing group with the highest mean similarity to
/// all current group members, provided that mean strictly exceeds
/// `threshold`; otherwise it founds a new group. Ties keep the oldest group.
/// The result is deterministic for a fixed input order.
pub fn group_mentions(surfaces: &[String], threshold: f64) -> Vec<MentionGroup> {
    struct Building {
        members: Vec<String>,
        lowered: Vec<Vec<char>>,
    }

    let mut groups: Vec<Building> = Vec::new();
    for surface in surfaces {
        let lowered: Vec<char> = surface.to_lowercase().chars().collect();
        let mut best: Option<(f64, usize)> = None;
        for (gi, group) in groups.iter().enumerate() {
            let mean = group
                .lowered
                .iter()
                .map(|member| ratcliff_chars(&lowered, member))
                .sum::<f64>()
                / group.lowered.len() as f64;
            if mean > threshold && best.map_or(true, |(b, _)| mean > b) {
                best = Some((mean, gi));
            }
        }
        match best {
            Some((_, gi)) => {
                groups[gi].members.push(surface.clone());
                groups[gi].lowered.push(lowered);
            }
            None => groups.push(Building {
                members: vec![surface.clone()],
                lowered: vec![lowered],
            }),
        }
    }

    groups
        .into_iter()
        .map(|b| {
            let mut group = MentionGroup {
                name: String::new(),
                members: b.members,
                codes: Vec::new(),
                concept_less: false,
            };
            group.recompute_name();
            group
        })
        .collect()
}

/// Attach codes from a mapping table; groups without a mapping entry are
/// flagged `concept_less`.
pub fn assign_codes(groups: &mut [MentionGroup], mapping: &CodeMapping) {
    for group in groups.iter_mut() {
        group.codes = mapping.codes_for(&group.name).to_vec();
        group.concept_less = group.codes.is_empty();
    }
}

/// TSV rendering of a group list: name, size, members joined with `|`,
/// codes joined with `;` as `scheme:code`.
pub fn groups_to_tsv(groups: &[MentionGroup]) -> String {
    let mut out = String::new();
    for g in groups {
        let codes = g
            .codes
            .iter()
            .map(|c| format!("{}:{}", c.scheme, c.code))
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            g.name,
            g.size(),
            g.members.join("|"),
            if codes.is_empty() {
                "concept_less".to_string()
            } else {
                codes
            }
        ));
    }
    out
}
