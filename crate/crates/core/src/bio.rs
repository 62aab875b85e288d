//! Multi-label BIO encoding and decoding.
//!
//! Each annotation layer is encoded independently, so a token can carry tags
//! on several layers at once. Within one layer the encoding is a flat BIO
//! sequence; overlapping same-layer mentions and discontinuous mentions make
//! flattening lossy, and every lossy step is reported as a warning instead
//! of silently dropped.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{Layer, Mention, Sentence, Span};
use crate::{Error, Result};

/// Per-token tag of one layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BioTag {
    O,
    B,
    I,
}

impl fmt::Display for BioTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// B/I/O labels of one layer over one sentence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagSequence {
    pub layer: Layer,
    pub tags: Vec<BioTag>,
}

impl TagSequence {
    pub fn new(layer: Layer, tags: Vec<BioTag>) -> Self {
        TagSequence { layer, tags }
    }

    pub fn all_outside(layer: Layer, len: usize) -> Self {
        TagSequence {
            layer,
            tags: vec![BioTag::O; len],
        }
    }
}

/// A lossy step taken while flattening mentions into BIO.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EncodeWarning {
    /// Two same-layer mentions competed for a token; the winner kept it.
    OverlapFlattened { winner: String, loser: String },
    /// A mention's covered tokens are not contiguous; decoding will split it
    /// into `fragments` separate mentions.
    FragmentSplit { mention: String, fragments: usize },
}

impl fmt::Display for EncodeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodeWarning::OverlapFlattened { winner, loser } => {
                write!(f, "overlap flattened: {winner:?} won tokens over {loser:?}")
            }
            EncodeWarning::FragmentSplit { mention, fragments } => {
                write!(f, "mention {mention:?} encodes as {fragments} fragments")
            }
        }
    }
}

/// Result of encoding one sentence on one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodeOutcome {
    pub tags: TagSequence,
    pub warnings: Vec<EncodeWarning>,
}

/// Encode the mentions of `layer` over one sentence as a BIO sequence.
///
/// The first covered token of a mention gets B and every other covered token
/// gets I, including tokens of later spans of a discontinuous mention. When
/// two same-layer mentions claim one token, the mention with the earlier
/// character start wins (tie: larger total span length, then input order);
/// the loser keeps its tags on tokens nobody claimed, and the conflict is
/// reported. `mentions` may be an unfiltered document mention list; entries
/// off the layer or entirely outside the sentence are ignored.
pub fn encode_bio(sent: &Sentence, mentions: &[Mention], layer: Layer) -> Result<EncodeOutcome> {
    let n = sent.len();
    let mut tags = vec![BioTag::O; n];
    let mut warnings = Vec::new();

    let range = match sent.char_range() {
        Some(r) => r,
        None => {
            return Ok(EncodeOutcome {
                tags: TagSequence::new(layer, tags),
                warnings,
            })
        }
    };

    // Token indices covered by each candidate mention, sentence-local.
    struct Candidate<'a> {
        mention: &'a Mention,
        order: usize,
        covered: Vec<usize>,
    }

    let mut candidates = Vec::new();
    for (order, mention) in mentions.iter().enumerate() {
        if !mention.on_layer(layer) {
            continue;
        }
        let mut covered = Vec::new();
        let mut touches = false;
        for span in &mention.spans {
            if !span.intersects(&range) {
                continue;
            }
            touches = true;
            let before = covered.len();
            for (ti, tok) in sent.tokens.iter().enumerate() {
                if tok.span.intersects(span) {
                    covered.push(ti);
                }
            }
            if covered.len() == before {
                return Err(Error::Alignment(format!(
                    "mention {:?}: span at offset {} covers no token",
                    mention.id, span.start
                )));
            }
        }
        if !touches {
            continue;
        }
        covered.sort_unstable();
        covered.dedup();
        candidates.push(Candidate {
            mention,
            order,
            covered,
        });
    }

    // Earlier start wins a contested token; ties prefer the longer mention,
    // then input order.
    candidates.sort_by(|a, b| {
        a.mention
            .start()
            .cmp(&b.mention.start())
            .then(b.mention.total_len().cmp(&a.mention.total_len()))
            .then(a.order.cmp(&b.order))
    });

    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (ci, cand) in candidates.iter().enumerate() {
        for &ti in &cand.covered {
            match owner[ti] {
                None => owner[ti] = Some(ci),
                Some(winner) => {
                    let warning = EncodeWarning::OverlapFlattened {
                        winner: candidates[winner].mention.id.clone(),
                        loser: cand.mention.id.clone(),
                    };
                    if !warnings.contains(&warning) {
                        warnings.push(warning);
                    }
                }
            }
        }
    }

    for (ti, owner) in owner.iter().enumerate() {
        if let Some(ci) = owner {
            let cand = &candidates[*ci];
            tags[ti] = if ti == cand.covered[0] {
                BioTag::B
            } else {
                BioTag::I
            };
        }
    }

    // Count mentions whose claimed tokens split into several runs.
    for (ci, cand) in candidates.iter().enumerate() {
        let mut fragments = 0usize;
        let mut prev: Option<usize> = None;
        for &ti in cand.covered.iter().filter(|&&ti| owner[ti] == Some(ci)) {
            if prev != Some(ti.wrapping_sub(1)) {
                fragments += 1;
            }
            prev = Some(ti);
        }
        if fragments >= 2 {
            warnings.push(EncodeWarning::FragmentSplit {
                mention: cand.mention.id.clone(),
                fragments,
            });
        }
    }

    Ok(EncodeOutcome {
        tags: TagSequence::new(layer, tags),
        warnings,
    })
}

/// Decode a BIO sequence back into continuous, single-span mentions.
///
/// Maximal `B I*` runs become mentions; an I that follows O (or starts the
/// sentence) is treated as B, so every tag sequence is decodable. Mention
/// spans are token-aligned: from the first token's start to the last token's
/// end.
pub fn decode_bio(tags: &TagSequence, sent: &Sentence) -> Result<Vec<Mention>> {
    if tags.tags.len() != sent.len() {
        return Err(Error::Alignment(format!(
            "tag sequence has {} tags but sentence has {} tokens",
            tags.tags.len(),
            sent.len()
        )));
    }

    let mut mentions = Vec::new();
    let mut run: Option<(usize, usize)> = None; // (first, last) token index

    let flush = |run: &mut Option<(usize, usize)>, mentions: &mut Vec<Mention>| {
        if let Some((first, last)) = run.take() {
            let span = Span::new(sent.tokens[first].span.start, sent.tokens[last].span.end);
            let id = format!("{}:{}-{}", tags.layer, span.start, span.end);
            mentions.push(Mention::new(
                id,
                tags.layer.entity(),
                tags.layer.attribute(),
                vec![span],
            ));
        }
    };

    for (ti, tag) in tags.tags.iter().enumerate() {
        match tag {
            BioTag::O => flush(&mut run, &mut mentions),
            BioTag::B => {
                flush(&mut run, &mut mentions);
                run = Some((ti, ti));
            }
            BioTag::I => match run {
                Some((_, ref mut last)) => *last = ti,
                // Repair rule: I after O or at sentence start opens a mention.
                None => run = Some((ti, ti)),
            },
        }
    }
    flush(&mut run, &mut mentions);

    Ok(mentions)
}
