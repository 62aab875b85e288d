//! The corpus JSON container: one self-contained UTF-8 file holding raw
//! texts, survey metadata, parses, mention annotations and coreference
//! chains. Saving is canonical (fixed key order, stable number formatting),
//! so re-saving a loaded corpus is byte-identical.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{char_len, Document};
use crate::{Error, Result, ValidationIssue};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusFile {
    pub version: String,
    pub documents: Vec<Document>,
}

impl CorpusFile {
    pub fn new(documents: Vec<Document>) -> Self {
        CorpusFile {
            version: FORMAT_VERSION.to_string(),
            documents,
        }
    }

    /// Check every structural invariant and return all violations.
    pub fn validate(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();

        if self.version != FORMAT_VERSION {
            issues.push(ValidationIssue::new(
                "",
                format!(
                    "unrecognized format version {:?} (expected {FORMAT_VERSION:?})",
                    self.version
                ),
            ));
        }

        let mut seen_docs = std::collections::BTreeSet::new();
        for doc in &self.documents {
            if !seen_docs.insert(&doc.id) {
                issues.push(ValidationIssue::new(&doc.id, "duplicate document id"));
            }
            validate_document(doc, &mut issues);
        }
        issues
    }
}

fn validate_document(doc: &Document, issues: &mut Vec<ValidationIssue>) {
    let text_len = char_len(&doc.text);
    let mut report = |detail: String| issues.push(ValidationIssue::new(&doc.id, detail));

    // Sentences and tokens: non-empty, in bounds, sorted, non-overlapping.
    let mut prev_end = 0usize;
    for (si, sent) in doc.sentences.iter().enumerate() {
        if sent.is_empty() {
            report(format!("sentence {si} has no tokens"));
            continue;
        }
        for (ti, tok) in sent.tokens.iter().enumerate() {
            if tok.span.is_empty() {
                report(format!("sentence {si} token {ti}: empty span {}", tok.span));
            }
            if tok.span.end > text_len {
                report(format!(
                    "sentence {si} token {ti}: span {} exceeds text length {text_len}",
                    tok.span
                ));
            }
            if tok.span.start < prev_end {
                report(format!(
                    "sentence {si} token {ti}: span {} overlaps or precedes previous token",
                    tok.span
                ));
            }
            prev_end = prev_end.max(tok.span.end);
        }
    }

    let mut seen_mentions = std::collections::BTreeSet::new();
    for mention in &doc.mentions {
        if !seen_mentions.insert(&mention.id) {
            report(format!("duplicate mention id {:?}", mention.id));
        }
        if mention.spans.is_empty() {
            report(format!("mention {:?} has no spans", mention.id));
            continue;
        }
        let mut prev: Option<usize> = None;
        for span in &mention.spans {
            if span.is_empty() {
                report(format!("mention {:?}: empty span {span}", mention.id));
            }
            if span.end > text_len {
                report(format!(
                    "mention {:?}: span {span} exceeds text length {text_len}",
                    mention.id
                ));
            }
            if let Some(prev_end) = prev {
                if span.start < prev_end {
                    report(format!(
                        "mention {:?}: spans out of order or overlapping at {span}",
                        mention.id
                    ));
                }
            }
            prev = Some(span.end);
        }
        match mention.attribute {
            Some(attr) if attr.entity() != mention.entity => {
                report(format!(
                    "mention {:?}: attribute {attr} does not belong to entity {}",
                    mention.id, mention.entity
                ));
            }
            Some(attr) if !mention.entity.has_attributes() => {
                report(format!(
                    "mention {:?}: entity {} carries no attributes (found {attr})",
                    mention.id, mention.entity
                ));
            }
            _ => {}
        }
    }

    for (ci, chain) in doc.chains.iter().enumerate() {
        if chain.elements.len() < 2 {
            report(format!(
                "chain {ci}: has {} element(s), need at least 2",
                chain.elements.len()
            ));
        }
        for element in &chain.elements {
            if element.is_empty() {
                report(format!("chain {ci}: empty element"));
            }
            for span in element {
                if span.end > text_len || span.is_empty() {
                    report(format!(
                        "chain {ci}: element span {span} out of range (text length {text_len})"
                    ));
                }
            }
        }
    }
}

/// Parse and validate a corpus from a JSON string. `origin` names the source
/// in error messages.
pub fn load_corpus_str(json: &str, origin: &Path) -> Result<CorpusFile> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let mut corpus: CorpusFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let mut pointer = String::new();
        for segment in e.path() {
            match segment {
                serde_path_to_error::Segment::Seq { index } => {
                    pointer.push_str(&format!("/{index}"))
                }
                serde_path_to_error::Segment::Map { key } => pointer.push_str(&format!("/{key}")),
                serde_path_to_error::Segment::Enum { variant } => {
                    pointer.push_str(&format!("/{variant}"))
                }
                serde_path_to_error::Segment::Unknown => pointer.push_str("/?"),
            }
        }
        if pointer.is_empty() {
            pointer.push('/');
        }
        Error::Schema {
            path: origin.to_path_buf(),
            pointer,
            message: e.inner().to_string(),
        }
    })?;

    // Chain ids are positional and assigned on load.
    for doc in &mut corpus.documents {
        for (ci, chain) in doc.chains.iter_mut().enumerate() {
            chain.id = format!("c{ci}");
        }
    }

    let issues = corpus.validate();
    if !issues.is_empty() {
        return Err(Error::Validation(issues));
    }
    Ok(corpus)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<CorpusFile> {
    let path = path.as_ref();
    let json = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    load_corpus_str(&json, path)
}

/// Canonical JSON form: two-space indentation, fixed field order, trailing
/// newline.
pub fn corpus_to_string(corpus: &CorpusFile) -> String {
    let mut out = serde_json::to_string_pretty(corpus).expect("corpus serialization cannot fail");
    out.push('\n');
    out
}

pub fn save_corpus(corpus: &CorpusFile, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, corpus_to_string(corpus)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AttributeKind, EntityKind, Mention, Sentence, Span, Token};
    use std::path::PathBuf;

    fn origin() -> PathBuf {
        PathBuf::from("<test>")
    }

    #[test]
    fn minimal_corpus_loads() {
        let json = r#"{"version": "1", "documents": [{"id": "d1", "text": ""}]}"#;
        let corpus = load_corpus_str(json, &origin()).unwrap();
        assert_eq!(corpus.documents.len(), 1);
        assert!(corpus.documents[0].mentions.is_empty());
    }

    #[test]
    fn span_out_of_range_names_the_mention() {
        let json = r#"{
            "version": "1",
            "documents": [{
                "id": "d1",
                "text": "abc",
                "mentions": [{"id": "m9", "entity": "ADR", "spans": [[0, 10]]}]
            }]
        }"#;
        let err = load_corpus_str(json, &origin()).unwrap_err();
        match err {
            Error::Validation(issues) => {
                assert!(issues.iter().any(|i| i.detail.contains("m9")), "{issues:?}");
            }
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn schema_violation_reports_json_pointer() {
        let json = r#"{"version": "1", "documents": [{"id": "d1", "text": "x",
            "mentions": [{"id": "m1", "entity": "Bogus", "spans": [[0, 1]]}]}]}"#;
        let err = load_corpus_str(json, &origin()).unwrap_err();
        match err {
            Error::Schema { pointer, .. } => {
                assert!(pointer.contains("/documents/0/mentions/0"), "{pointer}");
            }
            other => panic!("expected schema error, got {other}"),
        }
    }

    #[test]
    fn attribute_must_match_entity() {
        let mut doc = Document::new("d1", "Аспирин");
        doc.mentions.push(Mention::new(
            "m1",
            EntityKind::Disease,
            Some(AttributeKind::Drugname),
            vec![Span::new(0, 3)],
        ));
        let corpus = CorpusFile::new(vec![doc]);
        let issues = corpus.validate();
        assert_eq!(issues.len(), 1);
        assert!(issues[0].detail.contains("Drugname"));
    }

    #[test]
    fn save_load_round_trip_and_determinism() {
        let mut doc = Document::new("d1", "болит голова и тошнит");
        doc.meta
            .insert("heading".into(), serde_json::json!("Помог чересчур!"));
        doc.sentences.push(Sentence::new(vec![
            Token::new("болит", 0, 5),
            Token::new("голова", 6, 12),
            Token::new("и", 13, 14),
            Token::new("тошнит", 15, 21),
        ]));
        let mut m = Mention::new(
            "m1",
            EntityKind::Adr,
            None,
            vec![Span::new(0, 12), Span::new(15, 21)],
        );
        m.normalized_term = Some("головная боль".into());
        doc.mentions.push(m);
        doc.chains.push(crate::model::CorefChain::new(
            "c0",
            vec![vec![Span::new(0, 5)], vec![Span::new(15, 21)]],
        ));
        let corpus = CorpusFile::new(vec![doc]);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.json");
        save_corpus(&corpus, &path).unwrap();
        let loaded = load_corpus(&path).unwrap();
        assert_eq!(loaded, corpus);

        // Second save is byte-identical.
        let first = std::fs::read(&path).unwrap();
        save_corpus(&loaded, &path).unwrap();
        let second = std::fs::read(&path).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn chain_of_one_element_is_rejected() {
        let mut doc = Document::new("d1", "abcdef");
        doc.chains.push(crate::model::CorefChain::new(
            "c0",
            vec![vec![Span::new(0, 2)]],
        ));
        let issues = CorpusFile::new(vec![doc]).validate();
        assert!(issues.iter().any(|i| i.detail.contains("at least 2")));
    }
}
