//! Chunking precision/recall/F1 over typed BIO tag sequences, following the
//! CoNLL-2000 evaluation convention: mentions are extracted from both sides
//! with the repair rule (an `I-X` after `O` or after a run of another type
//! starts a new `X` mention) and a predicted mention counts only on an exact
//! (type, start, end) match.

use std::collections::{BTreeMap, HashSet};

use crate::formats::ChunkTag;
use crate::{Error, Result};

use super::report::{MetricReport, PrfCounts};

/// Extract `(type, start, end)` chunks from one sentence of tags, applying
/// the repair rule. `end` is exclusive.
pub fn extract_chunks(tags: &[ChunkTag]) -> Vec<(String, usize, usize)> {
    let mut chunks = Vec::new();
    let mut open: Option<(String, usize)> = None;

    for (i, tag) in tags.iter().enumerate() {
        match tag {
            ChunkTag::Out => {
                if let Some((label, start)) = open.take() {
                    chunks.push((label, start, i));
                }
            }
            ChunkTag::Begin(x) => {
                if let Some((label, start)) = open.take() {
                    chunks.push((label, start, i));
                }
                open = Some((x.clone(), i));
            }
            ChunkTag::Inside(x) => match &open {
                Some((label, _)) if label == x => {}
                // Repair: I after O, sentence start, or a different type.
                _ => {
                    if let Some((label, start)) = open.take() {
                        chunks.push((label, start, i));
                    }
                    open = Some((x.clone(), i));
                }
            },
        }
    }
    if let Some((label, start)) = open.take() {
        chunks.push((label, start, tags.len()));
    }
    chunks
}

/// Score predicted tag sequences against gold ones. Both are lists of
/// sentences; lengths must align token by token.
pub fn chunk_prf(gold: &[Vec<ChunkTag>], pred: &[Vec<ChunkTag>]) -> Result<MetricReport> {
    if gold.len() != pred.len() {
        return Err(Error::Alignment(format!(
            "{} gold sentences vs {} predicted",
            gold.len(),
            pred.len()
        )));
    }

    let mut per_type: BTreeMap<String, PrfCounts> = BTreeMap::new();
    for (si, (g, p)) in gold.iter().zip(pred).enumerate() {
        if g.len() != p.len() {
            return Err(Error::Alignment(format!(
                "sentence {si}: {} gold tags vs {} predicted",
                g.len(),
                p.len()
            )));
        }
        let gold_chunks = extract_chunks(g);
        let pred_chunks: HashSet<(String, usize, usize)> =
            extract_chunks(p).into_iter().collect();

        for chunk in &gold_chunks {
            let entry = per_type.entry(chunk.0.clone()).or_default();
            entry.gold += 1;
            if pred_chunks.contains(chunk) {
                entry.correct += 1;
            }
        }
        for (label, _, _) in &pred_chunks {
            per_type.entry(label.clone()).or_default().pred += 1;
        }
    }

    Ok(MetricReport::from_per_type(per_type))
}
