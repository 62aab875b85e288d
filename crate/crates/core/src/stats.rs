//! Descriptive corpus statistics: per-layer saturation, type/token ratios,
//! the structural complexity breakdown, coverage counts, drug-by-source
//! co-occurrence and review tonality. Everything maps per document and folds
//! deterministically, so results do not depend on the parallel schedule.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::formats::CorpusFile;
use crate::model::{
    classify_mention, covered_tokens_lenient, AttributeKind, Continuity, Document, Layer, Overlap,
    Upos, WordArity,
};
use crate::normalize::MentionGroup;
use crate::par;
use crate::{Error, Result};

/// Mentions per corpus word, scaled by 1000.
pub fn saturation_value(mentions: usize, words: usize) -> f64 {
    1000.0 * mentions as f64 / words as f64
}

/// Non-punctuation token count of a document. Tokens without a PoS tag
/// count as words.
pub fn word_count(doc: &Document) -> usize {
    doc.tokens()
        .filter(|(_, _, t)| t.pos != Some(Upos::PUNCT))
        .count()
}

/// Saturation of one layer over the whole corpus.
pub fn saturation(corpus: &CorpusFile, layer: Layer) -> Result<f64> {
    let words: usize = corpus.documents.iter().map(word_count).sum();
    if words == 0 {
        return Err(Error::EmptyInput(
            "saturation needs a tokenized, non-empty corpus".into(),
        ));
    }
    let mentions: usize = corpus
        .documents
        .iter()
        .map(|d| d.mentions_on(layer).count())
        .sum();
    Ok(saturation_value(mentions, words))
}

/// Type/token ratio of one document: unique lemmas over tokens. Tokens
/// without a lemma fall back to their lowercased surface form.
pub fn ttr(doc: &Document) -> Result<f64> {
    let tokens = doc.token_count();
    if tokens == 0 {
        return Err(Error::EmptyInput(format!(
            "document {:?} has no tokens",
            doc.id
        )));
    }
    let lemmas: BTreeSet<String> = doc.tokens().map(|(_, _, t)| t.lemma_or_text()).collect();
    Ok(lemmas.len() as f64 / tokens as f64)
}

/// One row of the complexity table. Percentages are of the layer's mention
/// count; the two word-arity cells sum to 100, as do the four
/// continuity-by-overlap cells.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ComplexityRow {
    pub mentions: usize,
    pub multiword_pct: f64,
    pub singleword_pct: f64,
    pub discontinuous_nonoverlapping_pct: f64,
    pub continuous_nonoverlapping_pct: f64,
    pub discontinuous_overlapping_pct: f64,
    pub continuous_overlapping_pct: f64,
    pub empty: bool,
}

#[derive(Debug, Clone, Copy, Default)]
struct ComplexityCounts {
    mentions: usize,
    multiword: usize,
    cells: [usize; 4], // [disc+nonover, cont+nonover, disc+over, cont+over]
}

impl ComplexityCounts {
    fn merge(&mut self, other: &ComplexityCounts) {
        self.mentions += other.mentions;
        self.multiword += other.multiword;
        for (a, b) in self.cells.iter_mut().zip(other.cells) {
            *a += b;
        }
    }

    fn into_row(self) -> ComplexityRow {
        if self.mentions == 0 {
            return ComplexityRow {
                empty: true,
                ..Default::default()
            };
        }
        let pct = |n: usize| 100.0 * n as f64 / self.mentions as f64;
        ComplexityRow {
            mentions: self.mentions,
            multiword_pct: pct(self.multiword),
            singleword_pct: pct(self.mentions - self.multiword),
            discontinuous_nonoverlapping_pct: pct(self.cells[0]),
            continuous_nonoverlapping_pct: pct(self.cells[1]),
            discontinuous_overlapping_pct: pct(self.cells[2]),
            continuous_overlapping_pct: pct(self.cells[3]),
            empty: false,
        }
    }
}

fn classify_document(doc: &Document) -> Result<BTreeMap<Layer, ComplexityCounts>> {
    let mut counts: BTreeMap<Layer, ComplexityCounts> = BTreeMap::new();
    for (mi, mention) in doc.mentions.iter().enumerate() {
        let others: Vec<&crate::model::Mention> = doc
            .mentions
            .iter()
            .enumerate()
            .filter(|(oi, _)| *oi != mi)
            .map(|(_, m)| m)
            .collect();
        let class = classify_mention(mention, &others, doc)?;
        let cell = match (class.continuity, class.overlap) {
            (Continuity::Discontinuous, Overlap::NonOverlapping) => 0,
            (Continuity::Continuous, Overlap::NonOverlapping) => 1,
            (Continuity::Discontinuous, Overlap::Overlapping) => 2,
            (Continuity::Continuous, Overlap::Overlapping) => 3,
        };
        let mut layers = vec![Layer::Entity(mention.entity)];
        if let Some(attr) = mention.attribute {
            layers.push(Layer::Attribute(attr));
        }
        for layer in layers {
            let entry = counts.entry(layer).or_default();
            entry.mentions += 1;
            if class.word_arity == WordArity::Multiword {
                entry.multiword += 1;
            }
            entry.cells[cell] += 1;
        }
    }
    Ok(counts)
}

/// Structural complexity per layer over the whole corpus. Every layer gets
/// a row; layers without mentions are flagged empty. A mention counts
/// against its entity layer and, when present, its attribute layer; overlap
/// is checked against all other mentions of the same document regardless of
/// layer.
pub fn complexity_table(corpus: &CorpusFile) -> Result<BTreeMap<String, ComplexityRow>> {
    let partials = par::try_map(&corpus.documents, classify_document)?;
    let mut merged: BTreeMap<Layer, ComplexityCounts> = BTreeMap::new();
    for partial in &partials {
        for (layer, counts) in partial {
            merged.entry(*layer).or_default().merge(counts);
        }
    }
    Ok(Layer::all()
        .into_iter()
        .map(|layer| {
            let counts = merged.remove(&layer).unwrap_or_default();
            (layer.name().to_string(), counts.into_row())
        })
        .collect())
}

/// Coverage of one layer: mention count, tokens inside mentions (each token
/// counted once per document), and documents containing the layer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CoverageRow {
    pub mentions: usize,
    pub words_in_mentions: usize,
    pub reviews: usize,
}

impl CoverageRow {
    fn merge(&mut self, other: &CoverageRow) {
        self.mentions += other.mentions;
        self.words_in_mentions += other.words_in_mentions;
        self.reviews += other.reviews;
    }
}

fn coverage_document(doc: &Document) -> BTreeMap<Layer, CoverageRow> {
    let mut rows: BTreeMap<Layer, CoverageRow> = BTreeMap::new();
    for layer in Layer::all() {
        let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut count = 0usize;
        for mention in doc.mentions_on(layer) {
            count += 1;
            covered.extend(covered_tokens_lenient(doc, mention));
        }
        if count > 0 {
            rows.insert(
                layer,
                CoverageRow {
                    mentions: count,
                    words_in_mentions: covered.len(),
                    reviews: 1,
                },
            );
        }
    }
    rows
}

/// Per-layer coverage over the corpus.
pub fn coverage(corpus: &CorpusFile) -> BTreeMap<String, CoverageRow> {
    let partials = par::map(&corpus.documents, coverage_document);
    let mut merged: BTreeMap<Layer, CoverageRow> = BTreeMap::new();
    for partial in &partials {
        for (layer, row) in partial {
            merged.entry(*layer).or_default().merge(row);
        }
    }
    merged
        .into_iter()
        .map(|(layer, row)| (layer.name().to_string(), row))
        .collect()
}

/// Full descriptive report over a corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub documents: usize,
    pub sentences: usize,
    pub tokens: usize,
    pub words: usize,
    pub avg_sentences: f64,
    pub avg_tokens: f64,
    /// Mean unique-lemma count per document.
    pub avg_lemmas: f64,
    pub avg_ttr: f64,
    pub saturation: BTreeMap<String, f64>,
    pub adr_to_entities: Option<f64>,
    pub adr_to_indication: Option<f64>,
    pub coverage: BTreeMap<String, CoverageRow>,
    pub complexity: BTreeMap<String, ComplexityRow>,
}

struct DocPartial {
    sentences: usize,
    tokens: usize,
    words: usize,
    lemmas: usize,
    ttr: f64,
    layer_counts: BTreeMap<Layer, usize>,
}

/// Compute the whole statistics report. Documents without tokens are
/// counted but excluded from the per-document averages.
pub fn corpus_stats(corpus: &CorpusFile) -> Result<CorpusStats> {
    if corpus.documents.is_empty() {
        return Err(Error::EmptyInput("corpus has no documents".into()));
    }

    let partials = par::map(&corpus.documents, |doc| {
        let tokens = doc.token_count();
        let lemmas: BTreeSet<String> = doc.tokens().map(|(_, _, t)| t.lemma_or_text()).collect();
        let mut layer_counts = BTreeMap::new();
        for layer in Layer::all() {
            let count = doc.mentions_on(layer).count();
            if count > 0 {
                layer_counts.insert(layer, count);
            }
        }
        DocPartial {
            sentences: doc.sentences.len(),
            tokens,
            words: word_count(doc),
            lemmas: lemmas.len(),
            ttr: if tokens == 0 {
                0.0
            } else {
                lemmas.len() as f64 / tokens as f64
            },
            layer_counts,
        }
    });

    let tokenized = partials.iter().filter(|p| p.tokens > 0).count();
    let words: usize = partials.iter().map(|p| p.words).sum();
    if words == 0 {
        return Err(Error::EmptyInput(
            "corpus has no word tokens; parse it first".into(),
        ));
    }

    let mut layer_totals: BTreeMap<Layer, usize> = BTreeMap::new();
    for partial in &partials {
        for (layer, count) in &partial.layer_counts {
            *layer_totals.entry(*layer).or_default() += count;
        }
    }

    let total_mentions: usize = corpus.documents.iter().map(|d| d.mentions.len()).sum();
    let adr = layer_totals
        .get(&Layer::Entity(crate::model::EntityKind::Adr))
        .copied()
        .unwrap_or(0);
    let indication = layer_totals
        .get(&Layer::Attribute(AttributeKind::Indication))
        .copied()
        .unwrap_or(0);

    let mean_over_tokenized = |f: &dyn Fn(&DocPartial) -> f64| -> f64 {
        if tokenized == 0 {
            0.0
        } else {
            partials
                .iter()
                .filter(|p| p.tokens > 0)
                .map(|p| f(p))
                .sum::<f64>()
                / tokenized as f64
        }
    };

    Ok(CorpusStats {
        documents: corpus.documents.len(),
        sentences: partials.iter().map(|p| p.sentences).sum(),
        tokens: partials.iter().map(|p| p.tokens).sum(),
        words,
        avg_sentences: mean_over_tokenized(&|p| p.sentences as f64),
        avg_tokens: mean_over_tokenized(&|p| p.tokens as f64),
        avg_lemmas: mean_over_tokenized(&|p| p.lemmas as f64),
        avg_ttr: mean_over_tokenized(&|p| p.ttr),
        saturation: Layer::all()
            .into_iter()
            .map(|layer| {
                let count = layer_totals.get(&layer).copied().unwrap_or(0);
                (layer.name().to_string(), saturation_value(count, words))
            })
            .collect(),
        adr_to_entities: (total_mentions > 0).then(|| adr as f64 / total_mentions as f64),
        adr_to_indication: (indication > 0).then(|| adr as f64 / indication as f64),
        coverage: coverage(corpus),
        complexity: complexity_table(corpus)?,
    })
}

// ============================================================================
// Group-based aggregations: co-occurrence and tonality
// ============================================================================

/// Lowercased member surface -> group name.
fn membership(groups: &[MentionGroup]) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    for group in groups {
        for member in &group.members {
            map.entry(member.to_lowercase())
                .or_insert_with(|| group.name.clone());
        }
    }
    map
}

/// Distinct group names matched by a document's mentions on `layer`.
fn doc_groups(
    doc: &Document,
    layer: Layer,
    members: &BTreeMap<String, String>,
) -> Result<BTreeSet<String>> {
    let mut found = BTreeSet::new();
    for mention in doc.mentions_on(layer) {
        let surface = mention.surface(&doc.text).to_lowercase();
        match members.get(&surface) {
            Some(group) => {
                found.insert(group.clone());
            }
            None => {
                return Err(Error::Config(format!(
                    "surface {surface:?} (document {:?}, layer {layer}) belongs to no group",
                    doc.id
                )))
            }
        }
    }
    Ok(found)
}

pub const MIXED_GROUP: &str = "mixed";

/// Percentage matrix of row groups against column groups.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CooccurrenceMatrix {
    pub rows: Vec<String>,
    /// Column group names plus a final "mixed" column.
    pub columns: Vec<String>,
    /// `values[r][c]` = share of row-group documents citing exactly column
    /// group c (documents with several column groups count under "mixed").
    pub values: Vec<Vec<f64>>,
    pub row_documents: Vec<usize>,
}

/// Cross row groups (e.g. drug-name groups) with column groups (e.g.
/// information-source groups). A cell is `100 * |docs with row group r and
/// exactly column group c| / |docs with row group r|`; documents citing two
/// or more distinct column groups count under the "mixed" column only.
pub fn cooccurrence(
    corpus: &CorpusFile,
    row_layer: Layer,
    row_groups: &[MentionGroup],
    col_layer: Layer,
    col_groups: &[MentionGroup],
) -> Result<CooccurrenceMatrix> {
    let row_members = membership(row_groups);
    let col_members = membership(col_groups);

    let rows: Vec<String> = row_groups.iter().map(|g| g.name.clone()).collect();
    let mut columns: Vec<String> = col_groups.iter().map(|g| g.name.clone()).collect();
    columns.push(MIXED_GROUP.to_string());

    let mut row_documents = vec![0usize; rows.len()];
    let mut counts = vec![vec![0usize; columns.len()]; rows.len()];

    for doc in &corpus.documents {
        let in_rows = doc_groups(doc, row_layer, &row_members)?;
        if in_rows.is_empty() {
            continue;
        }
        let in_cols = doc_groups(doc, col_layer, &col_members)?;
        let col_idx = match in_cols.len() {
            0 => None,
            1 => columns.iter().position(|c| c == in_cols.first().unwrap()),
            _ => Some(columns.len() - 1), // mixed
        };
        for row_name in &in_rows {
            let Some(ri) = rows.iter().position(|r| r == row_name) else {
                continue;
            };
            row_documents[ri] += 1;
            if let Some(ci) = col_idx {
                counts[ri][ci] += 1;
            }
        }
    }

    let values = counts
        .iter()
        .zip(&row_documents)
        .map(|(row, &total)| {
            row.iter()
                .map(|&n| {
                    if total == 0 {
                        0.0
                    } else {
                        100.0 * n as f64 / total as f64
                    }
                })
                .collect()
        })
        .collect();

    Ok(CooccurrenceMatrix {
        rows,
        columns,
        values,
        row_documents,
    })
}

impl CooccurrenceMatrix {
    /// CSV with two-decimal percentages; first column is the row group.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("group,documents");
        for col in &self.columns {
            out.push(',');
            out.push_str(col);
        }
        out.push('\n');
        for (ri, row) in self.rows.iter().enumerate() {
            out.push_str(row);
            out.push_str(&format!(",{}", self.row_documents[ri]));
            for value in &self.values[ri] {
                out.push_str(&format!(",{value:.2}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Tonality counts for one source group.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TonalityCounts {
    pub positive: usize,
    pub negative: usize,
    /// Documents with no reported effect or with both effects.
    pub neutral_or_mixed: usize,
    pub total: usize,
}

/// Tonality of one document: positive iff a BNE-Pos mention is present and
/// no negative label is; negative iff any of Worse/ADE-Neg/NegatedADE is
/// present and BNE-Pos is not; documents with both effects are set aside as
/// neutral-or-mixed.
pub fn document_tonality(doc: &Document) -> Tonality {
    let has_pos = doc
        .mentions
        .iter()
        .any(|m| m.attribute == Some(AttributeKind::BnePos));
    let has_neg = doc.mentions.iter().any(|m| {
        matches!(
            m.attribute,
            Some(AttributeKind::Worse) | Some(AttributeKind::AdeNeg) | Some(AttributeKind::NegatedAde)
        )
    });
    match (has_pos, has_neg) {
        (true, false) => Tonality::Positive,
        (false, true) => Tonality::Negative,
        _ => Tonality::NeutralOrMixed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tonality {
    Positive,
    Negative,
    NeutralOrMixed,
}

/// Aggregate document tonality per source group. Documents citing several
/// source groups count under "mixed"; documents citing none are skipped.
pub fn tonality(
    corpus: &CorpusFile,
    source_layer: Layer,
    source_groups: &[MentionGroup],
) -> Result<BTreeMap<String, TonalityCounts>> {
    let members = membership(source_groups);
    let mut out: BTreeMap<String, TonalityCounts> = BTreeMap::new();

    for doc in &corpus.documents {
        let sources = doc_groups(doc, source_layer, &members)?;
        let bucket = match sources.len() {
            0 => continue,
            1 => sources.first().unwrap().clone(),
            _ => MIXED_GROUP.to_string(),
        };
        let counts = out.entry(bucket).or_default();
        counts.total += 1;
        match document_tonality(doc) {
            Tonality::Positive => counts.positive += 1,
            Tonality::Negative => counts.negative += 1,
            Tonality::NeutralOrMixed => counts.neutral_or_mixed += 1,
        }
    }
    Ok(out)
}

// ============================================================================
// Rendering
// ============================================================================

impl CorpusStats {
    /// Human-readable report with two-decimal percentages.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "documents: {}\nsentences: {}\ntokens: {} ({} words)\n",
            self.documents, self.sentences, self.tokens, self.words
        ));
        out.push_str(&format!(
            "avg sentences: {:.2}\navg tokens: {:.2}\navg lemmas: {:.2}\navg TTR: {:.2}\n",
            self.avg_sentences, self.avg_tokens, self.avg_lemmas, self.avg_ttr
        ));
        if let Some(r) = self.adr_to_entities {
            out.push_str(&format!("ADR / total entities: {r:.2}\n"));
        }
        if let Some(r) = self.adr_to_indication {
            out.push_str(&format!("ADR / Indication: {r:.2}\n"));
        }

        out.push_str("\nlayer                mentions  words-in-mentions  reviews  saturation\n");
        for (layer, row) in &self.coverage {
            out.push_str(&format!(
                "{layer:<20} {:>8}  {:>17}  {:>7}  {:>10.2}\n",
                row.mentions,
                row.words_in_mentions,
                row.reviews,
                self.saturation.get(layer).copied().unwrap_or(0.0)
            ));
        }

        out.push_str(
            "\nlayer                mentions  multi%  single%  disc/non%  cont/non%  disc/over%  cont/over%\n",
        );
        for (layer, row) in &self.complexity {
            if row.empty {
                continue;
            }
            out.push_str(&format!(
                "{layer:<20} {:>8}  {:>6.2}  {:>7.2}  {:>9.2}  {:>9.2}  {:>10.2}  {:>10.2}\n",
                row.mentions,
                row.multiword_pct,
                row.singleword_pct,
                row.discontinuous_nonoverlapping_pct,
                row.continuous_nonoverlapping_pct,
                row.discontinuous_overlapping_pct,
                row.continuous_overlapping_pct,
            ));
        }
        out
    }
}
