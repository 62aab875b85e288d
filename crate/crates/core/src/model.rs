//! In-memory corpus model: documents, tokens, mentions (possibly
//! discontinuous), coreference chains, and structural classification of
//! mentions along the word-arity / continuity / overlap axes.
//!
//! All character offsets count Unicode scalar values, not bytes, so they are
//! stable across encodings of the Cyrillic source text.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Half-open character range `[start, end)` into a document's text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn intersects(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

impl From<(usize, usize)> for Span {
    fn from((start, end): (usize, usize)) -> Self {
        Span { start, end }
    }
}

impl From<Span> for (usize, usize) {
    fn from(s: Span) -> Self {
        (s.start, s.end)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// Number of Unicode scalar values in `text`.
pub fn char_len(text: &str) -> usize {
    text.chars().count()
}

/// Extract the text under `span` (character offsets).
pub fn span_text(text: &str, span: &Span) -> String {
    text.chars().skip(span.start).take(span.len()).collect()
}

// ============================================================================
// Entities, attributes and layers
// ============================================================================

/// Top-level annotated entity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityKind {
    Medication,
    Disease,
    #[serde(rename = "ADR")]
    Adr,
    Note,
}

impl EntityKind {
    pub const ALL: [EntityKind; 4] = [
        EntityKind::Medication,
        EntityKind::Disease,
        EntityKind::Adr,
        EntityKind::Note,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EntityKind::Medication => "Medication",
            EntityKind::Disease => "Disease",
            EntityKind::Adr => "ADR",
            EntityKind::Note => "Note",
        }
    }

    /// Whether this entity carries attribute sub-labels at all.
    pub fn has_attributes(&self) -> bool {
        matches!(self, EntityKind::Medication | EntityKind::Disease)
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntityKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        EntityKind::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown entity {s:?}"))
    }
}

/// Attribute sub-label of the Medication or Disease entity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AttributeKind {
    Drugname,
    DrugBrand,
    Drugform,
    Drugclass,
    MedMaker,
    MedFrom,
    Frequency,
    Dosage,
    Duration,
    Route,
    SourceInfodrug,
    Diseasename,
    Indication,
    #[serde(rename = "BNE-Pos")]
    BnePos,
    #[serde(rename = "ADE-Neg")]
    AdeNeg,
    #[serde(rename = "NegatedADE")]
    NegatedAde,
    Worse,
}

impl AttributeKind {
    pub const ALL: [AttributeKind; 17] = [
        AttributeKind::Drugname,
        AttributeKind::DrugBrand,
        AttributeKind::Drugform,
        AttributeKind::Drugclass,
        AttributeKind::MedMaker,
        AttributeKind::MedFrom,
        AttributeKind::Frequency,
        AttributeKind::Dosage,
        AttributeKind::Duration,
        AttributeKind::Route,
        AttributeKind::SourceInfodrug,
        AttributeKind::Diseasename,
        AttributeKind::Indication,
        AttributeKind::BnePos,
        AttributeKind::AdeNeg,
        AttributeKind::NegatedAde,
        AttributeKind::Worse,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AttributeKind::Drugname => "Drugname",
            AttributeKind::DrugBrand => "DrugBrand",
            AttributeKind::Drugform => "Drugform",
            AttributeKind::Drugclass => "Drugclass",
            AttributeKind::MedMaker => "MedMaker",
            AttributeKind::MedFrom => "MedFrom",
            AttributeKind::Frequency => "Frequency",
            AttributeKind::Dosage => "Dosage",
            AttributeKind::Duration => "Duration",
            AttributeKind::Route => "Route",
            AttributeKind::SourceInfodrug => "SourceInfodrug",
            AttributeKind::Diseasename => "Diseasename",
            AttributeKind::Indication => "Indication",
            AttributeKind::BnePos => "BNE-Pos",
            AttributeKind::AdeNeg => "ADE-Neg",
            AttributeKind::NegatedAde => "NegatedADE",
            AttributeKind::Worse => "Worse",
        }
    }

    /// The entity this attribute belongs to.
    pub fn entity(&self) -> EntityKind {
        match self {
            AttributeKind::Drugname
            | AttributeKind::DrugBrand
            | AttributeKind::Drugform
            | AttributeKind::Drugclass
            | AttributeKind::MedMaker
            | AttributeKind::MedFrom
            | AttributeKind::Frequency
            | AttributeKind::Dosage
            | AttributeKind::Duration
            | AttributeKind::Route
            | AttributeKind::SourceInfodrug => EntityKind::Medication,
            AttributeKind::Diseasename
            | AttributeKind::Indication
            | AttributeKind::BnePos
            | AttributeKind::AdeNeg
            | AttributeKind::NegatedAde
            | AttributeKind::Worse => EntityKind::Disease,
        }
    }
}

impl fmt::Display for AttributeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttributeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        AttributeKind::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown attribute {s:?}"))
    }
}

/// One annotation layer: either an entity or a single attribute. A mention
/// with an attribute lives on two layers (its entity and its attribute).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    Entity(EntityKind),
    Attribute(AttributeKind),
}

impl Layer {
    /// Every layer in a fixed order: the four entities, then the seventeen
    /// attributes.
    pub fn all() -> Vec<Layer> {
        EntityKind::ALL
            .into_iter()
            .map(Layer::Entity)
            .chain(AttributeKind::ALL.into_iter().map(Layer::Attribute))
            .collect()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Layer::Entity(e) => e.name(),
            Layer::Attribute(a) => a.name(),
        }
    }

    /// The entity a mention decoded from this layer belongs to.
    pub fn entity(&self) -> EntityKind {
        match self {
            Layer::Entity(e) => *e,
            Layer::Attribute(a) => a.entity(),
        }
    }

    pub fn attribute(&self) -> Option<AttributeKind> {
        match self {
            Layer::Entity(_) => None,
            Layer::Attribute(a) => Some(*a),
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Layer {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if let Ok(e) = s.parse::<EntityKind>() {
            return Ok(Layer::Entity(e));
        }
        if let Ok(a) = s.parse::<AttributeKind>() {
            return Ok(Layer::Attribute(a));
        }
        Err(format!("unknown layer {s:?}"))
    }
}

impl Serialize for Layer {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Layer {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ============================================================================
// Normalization code schemes
// ============================================================================

/// Code scheme a normalized mention can be linked to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CodeScheme {
    #[serde(rename = "ICD-10")]
    Icd10,
    #[serde(rename = "ATC")]
    Atc,
    #[serde(rename = "MedDRA")]
    MedDra,
    #[serde(rename = "SRD")]
    Srd,
}

impl CodeScheme {
    pub fn name(&self) -> &'static str {
        match self {
            CodeScheme::Icd10 => "ICD-10",
            CodeScheme::Atc => "ATC",
            CodeScheme::MedDra => "MedDRA",
            CodeScheme::Srd => "SRD",
        }
    }
}

impl fmt::Display for CodeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodeScheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ICD-10" => Ok(CodeScheme::Icd10),
            "ATC" => Ok(CodeScheme::Atc),
            "MedDRA" => Ok(CodeScheme::MedDra),
            "SRD" => Ok(CodeScheme::Srd),
            other => Err(format!("unknown code scheme {other:?}")),
        }
    }
}

/// A (scheme, code) pair attached by normalization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Code {
    pub scheme: CodeScheme,
    pub code: String,
}

// ============================================================================
// Mentions
// ============================================================================

/// An entity/attribute annotation over an ordered list of character spans.
/// Discontinuous mentions carry two or more spans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mention {
    pub id: String,
    pub entity: EntityKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attribute: Option<AttributeKind>,
    pub spans: Vec<Span>,
    #[serde(rename = "norm", default, skip_serializing_if = "Option::is_none")]
    pub normalized_term: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub codes: Vec<Code>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, String>,
}

impl Mention {
    pub fn new(
        id: impl Into<String>,
        entity: EntityKind,
        attribute: Option<AttributeKind>,
        spans: Vec<Span>,
    ) -> Self {
        Mention {
            id: id.into(),
            entity,
            attribute,
            spans,
            normalized_term: None,
            codes: Vec::new(),
            meta: BTreeMap::new(),
        }
    }

    /// Character offset where the mention starts.
    pub fn start(&self) -> usize {
        self.spans.first().map(|s| s.start).unwrap_or(0)
    }

    /// Total number of characters covered by all spans.
    pub fn total_len(&self) -> usize {
        self.spans.iter().map(Span::len).sum()
    }

    pub fn is_discontinuous(&self) -> bool {
        self.spans.len() >= 2
    }

    /// Whether the mention belongs to the given layer. Entity layers match
    /// the mention's entity; attribute layers match its attribute.
    pub fn on_layer(&self, layer: Layer) -> bool {
        match layer {
            Layer::Entity(e) => self.entity == e,
            Layer::Attribute(a) => self.attribute == Some(a),
        }
    }

    /// Surface form: fragment texts joined with a single space.
    pub fn surface(&self, text: &str) -> String {
        self.spans
            .iter()
            .map(|s| span_text(text, s))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

// ============================================================================
// Tokens, sentences, documents
// ============================================================================

/// Universal part-of-speech tag (UD v2, 17 values).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum Upos {
    ADJ,
    ADP,
    ADV,
    AUX,
    CCONJ,
    DET,
    INTJ,
    NOUN,
    NUM,
    PART,
    PRON,
    PROPN,
    PUNCT,
    SCONJ,
    SYM,
    VERB,
    X,
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Upos {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        use Upos::*;
        Ok(match s {
            "ADJ" => ADJ,
            "ADP" => ADP,
            "ADV" => ADV,
            "AUX" => AUX,
            "CCONJ" => CCONJ,
            "DET" => DET,
            "INTJ" => INTJ,
            "NOUN" => NOUN,
            "NUM" => NUM,
            "PART" => PART,
            "PRON" => PRON,
            "PROPN" => PROPN,
            "PUNCT" => PUNCT,
            "SCONJ" => SCONJ,
            "SYM" => SYM,
            "VERB" => VERB,
            "X" => X,
            other => return Err(format!("unknown PoS tag {other:?}")),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct TokenRepr {
    text: String,
    start: usize,
    end: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lemma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pos: Option<Upos>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    head: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    deprel: Option<String>,
}

/// One token with its character span and optional parse fields. `head`
/// follows the CoNLL-U convention: 0 is the root, `i > 0` points at the
/// sentence's i-th token (1-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "TokenRepr", into = "TokenRepr")]
pub struct Token {
    pub text: String,
    pub span: Span,
    pub lemma: Option<String>,
    pub pos: Option<Upos>,
    pub head: Option<usize>,
    pub deprel: Option<String>,
}

impl Token {
    pub fn new(text: impl Into<String>, start: usize, end: usize) -> Self {
        Token {
            text: text.into(),
            span: Span::new(start, end),
            lemma: None,
            pos: None,
            head: None,
            deprel: None,
        }
    }

    /// Lowercased lemma when present, otherwise the lowercased surface form.
    pub fn lemma_or_text(&self) -> String {
        self.lemma
            .as_deref()
            .unwrap_or(&self.text)
            .to_lowercase()
    }
}

impl From<TokenRepr> for Token {
    fn from(r: TokenRepr) -> Self {
        Token {
            text: r.text,
            span: Span::new(r.start, r.end),
            lemma: r.lemma,
            pos: r.pos,
            head: r.head,
            deprel: r.deprel,
        }
    }
}

impl From<Token> for TokenRepr {
    fn from(t: Token) -> Self {
        TokenRepr {
            text: t.text,
            start: t.span.start,
            end: t.span.end,
            lemma: t.lemma,
            pos: t.pos,
            head: t.head,
            deprel: t.deprel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Sentence {
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Self {
        Sentence { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Character range spanned by the sentence's tokens.
    pub fn char_range(&self) -> Option<Span> {
        let first = self.tokens.first()?;
        let last = self.tokens.last()?;
        Some(Span::new(first.span.start, last.span.end))
    }
}

/// A coreference chain: two or more elements referring to the same
/// real-world entity. Each element is itself a span list, so multiword and
/// discontinuous coreference mentions are representable. Chain ids are
/// positional ("c0", "c1", ...) and are not persisted in the file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<Vec<Span>>", into = "Vec<Vec<Span>>")]
pub struct CorefChain {
    pub id: String,
    pub elements: Vec<Vec<Span>>,
}

impl CorefChain {
    pub fn new(id: impl Into<String>, elements: Vec<Vec<Span>>) -> Self {
        CorefChain {
            id: id.into(),
            elements,
        }
    }
}

impl From<Vec<Vec<Span>>> for CorefChain {
    fn from(elements: Vec<Vec<Span>>) -> Self {
        CorefChain {
            id: String::new(),
            elements,
        }
    }
}

impl From<CorefChain> for Vec<Vec<Span>> {
    fn from(c: CorefChain) -> Self {
        c.elements
    }
}

/// One review with its raw text, survey metadata, parse, annotations and
/// coreference chains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sentences: Vec<Sentence>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mentions: Vec<Mention>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<CorefChain>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            text: text.into(),
            meta: BTreeMap::new(),
            sentences: Vec::new(),
            mentions: Vec::new(),
            chains: Vec::new(),
        }
    }

    /// Iterate tokens as `(sentence index, token index, token)`.
    pub fn tokens(&self) -> impl Iterator<Item = (usize, usize, &Token)> {
        self.sentences.iter().enumerate().flat_map(|(si, sent)| {
            sent.tokens
                .iter()
                .enumerate()
                .map(move |(ti, tok)| (si, ti, tok))
        })
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    pub fn mentions_on(&self, layer: Layer) -> impl Iterator<Item = &Mention> {
        self.mentions.iter().filter(move |m| m.on_layer(layer))
    }
}

// ============================================================================
// Mention-to-token alignment and structural classification
// ============================================================================

/// Position of a token inside a document.
pub type TokenPos = (usize, usize);

/// Tokens covered by the mention, as sorted `(sentence, token)` positions.
///
/// A token is covered if its span intersects any mention span; a boundary
/// that cuts through a token covers the whole token. Every mention span must
/// cover at least one token, otherwise the mention cannot be aligned and an
/// alignment error naming the offset is returned.
pub fn covered_tokens(doc: &Document, mention: &Mention) -> Result<Vec<TokenPos>> {
    let mut covered = Vec::new();
    for span in &mention.spans {
        let before = covered.len();
        for (si, ti, tok) in doc.tokens() {
            if tok.span.intersects(span) {
                covered.push((si, ti));
            }
        }
        if covered.len() == before {
            return Err(Error::Alignment(format!(
                "mention {:?}: span at offset {} covers no token",
                mention.id, span.start
            )));
        }
    }
    covered.sort_unstable();
    covered.dedup();
    Ok(covered)
}

/// Like [`covered_tokens`] but silently yields nothing for spans that touch
/// no token. Used when the caller only needs best-effort coverage of
/// surrounding mentions.
pub fn covered_tokens_lenient(doc: &Document, mention: &Mention) -> Vec<TokenPos> {
    let mut covered: Vec<TokenPos> = doc
        .tokens()
        .filter(|(_, _, tok)| mention.spans.iter().any(|s| tok.span.intersects(s)))
        .map(|(si, ti, _)| (si, ti))
        .collect();
    covered.sort_unstable();
    covered.dedup();
    covered
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordArity {
    Singleword,
    Multiword,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Continuity {
    Continuous,
    Discontinuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overlap {
    Overlapping,
    NonOverlapping,
}

/// Structural class of a mention: one value per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexityClass {
    pub word_arity: WordArity,
    pub continuity: Continuity,
    pub overlap: Overlap,
}

/// Classify a mention against the other mentions of its document.
///
/// Multiword means the mention covers two or more tokens; discontinuous
/// means it has two or more spans; overlapping means it shares at least one
/// covered token with some mention in `others`.
pub fn classify_mention(
    mention: &Mention,
    others: &[&Mention],
    doc: &Document,
) -> Result<ComplexityClass> {
    let covered = covered_tokens(doc, mention)?;

    let word_arity = if covered.len() >= 2 {
        WordArity::Multiword
    } else {
        WordArity::Singleword
    };

    let continuity = if mention.is_discontinuous() {
        Continuity::Discontinuous
    } else {
        Continuity::Continuous
    };

    let overlapping = others.iter().any(|other| {
        covered_tokens_lenient(doc, other)
            .iter()
            .any(|pos| covered.binary_search(pos).is_ok())
    });
    let overlap = if overlapping {
        Overlap::Overlapping
    } else {
        Overlap::NonOverlapping
    };

    Ok(ComplexityClass {
        word_arity,
        continuity,
        overlap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc_with_tokens(words: &[&str]) -> Document {
        // Tokens separated by single spaces.
        let text = words.join(" ");
        let mut doc = Document::new("d", text);
        let mut sent = Sentence::default();
        let mut cursor = 0;
        for w in words {
            let len = char_len(w);
            sent.tokens.push(Token::new(*w, cursor, cursor + len));
            cursor += len + 1;
        }
        doc.sentences.push(sent);
        doc
    }

    fn mention_over(doc: &Document, id: &str, toks: &[usize]) -> Mention {
        let sent = &doc.sentences[0];
        let spans = toks
            .iter()
            .map(|&t| sent.tokens[t].span)
            .collect::<Vec<_>>();
        Mention::new(id, EntityKind::Adr, None, spans)
    }

    #[test]
    fn single_token_mention_is_simple() {
        let doc = doc_with_tokens(&["боль", "прошла", "быстро"]);
        let m = mention_over(&doc, "m1", &[0]);
        let got = classify_mention(&m, &[], &doc).unwrap();
        assert_eq!(got.word_arity, WordArity::Singleword);
        assert_eq!(got.continuity, Continuity::Continuous);
        assert_eq!(got.overlap, Overlap::NonOverlapping);
    }

    #[test]
    fn two_spans_mean_discontinuous() {
        let doc = doc_with_tokens(&["прописал", "мне", "педиатр"]);
        let m = Mention::new(
            "m1",
            EntityKind::Medication,
            Some(AttributeKind::SourceInfodrug),
            vec![Span::new(0, 8), Span::new(13, 20)],
        );
        let got = classify_mention(&m, &[], &doc).unwrap();
        assert_eq!(got.continuity, Continuity::Discontinuous);
        assert_eq!(got.word_arity, WordArity::Multiword);
    }

    #[test]
    fn shared_token_is_overlap() {
        let doc = doc_with_tokens(&["a", "b", "c", "d", "e", "f", "g"]);
        let m = mention_over(&doc, "m1", &[3, 4, 5]);
        let other = mention_over(&doc, "m2", &[5, 6]);
        let got = classify_mention(&m, &[&other], &doc).unwrap();
        assert_eq!(got.overlap, Overlap::Overlapping);

        let far = mention_over(&doc, "m3", &[0]);
        let got = classify_mention(&m, &[&far], &doc).unwrap();
        assert_eq!(got.overlap, Overlap::NonOverlapping);
    }

    #[test]
    fn unaligned_span_is_an_error() {
        let doc = doc_with_tokens(&["ab", "cd"]);
        // Offset 2 is the space between the tokens.
        let m = Mention::new("m1", EntityKind::Adr, None, vec![Span::new(2, 3)]);
        let err = classify_mention(&m, &[], &doc).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("offset 2"), "{msg}");
        assert!(msg.contains("m1"), "{msg}");
    }

    #[test]
    fn boundary_cutting_through_token_covers_it() {
        let doc = doc_with_tokens(&["таблетки", "помогли"]);
        // Span stops mid-word; the whole first token is still covered.
        let m = Mention::new("m1", EntityKind::Adr, None, vec![Span::new(0, 4)]);
        let covered = covered_tokens(&doc, &m).unwrap();
        assert_eq!(covered, vec![(0, 0)]);
    }

    #[test]
    fn attribute_entities_match_tables() {
        for a in AttributeKind::ALL {
            let e = a.entity();
            assert!(e.has_attributes());
        }
        assert_eq!(AttributeKind::ALL.len(), 17);
        assert_eq!(
            AttributeKind::ALL
                .iter()
                .filter(|a| a.entity() == EntityKind::Medication)
                .count(),
            11
        );
    }

    #[test]
    fn layer_name_round_trip() {
        for layer in Layer::all() {
            let parsed: Layer = layer.name().parse().unwrap();
            assert_eq!(parsed, layer);
        }
        assert_eq!(Layer::all().len(), 21);
        assert!("BNE-Pos".parse::<Layer>().is_ok());
        assert!("bogus".parse::<Layer>().is_err());
    }

    #[test]
    fn span_text_counts_chars_not_bytes() {
        let text = "головная боль";
        assert_eq!(span_text(text, &Span::new(9, 13)), "боль");
        assert_eq!(char_len(text), 13);
    }
}
