//! Golden-file checks for the corpus container: the committed fixture must
//! load into exactly the expected object graph, re-save byte-identically,
//! and survive the save/load round trip. Set UPDATE_GOLDEN=1 to regenerate
//! the fixture after an intentional format change.

use std::path::PathBuf;

use ner_lab_core::formats::{corpus_to_string, load_corpus, save_corpus, CorpusFile};
use ner_lab_core::model::{
    AttributeKind, Code, CodeScheme, CorefChain, Document, EntityKind, Mention, Sentence, Span,
    Token, Upos,
};

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden.json")
}

fn token(
    text: &str,
    start: usize,
    end: usize,
    lemma: &str,
    pos: Upos,
    head: usize,
    deprel: &str,
) -> Token {
    let mut t = Token::new(text, start, end);
    t.lemma = Some(lemma.to_string());
    t.pos = Some(pos);
    t.head = Some(head);
    t.deprel = Some(deprel.to_string());
    t
}

/// The corpus the fixture encodes: two reviews, three mentions (one
/// discontinuous), one coreference chain.
fn golden_corpus() -> CorpusFile {
    // "Виферон помог быстро. Он недорогой."
    let mut d1 = Document::new("r0001", "Виферон помог быстро. Он недорогой.");
    d1.meta.insert(
        "heading".into(),
        serde_json::Value::String("Помог быстро".into()),
    );
    d1.sentences = vec![
        Sentence::new(vec![
            token("Виферон", 0, 7, "виферон", Upos::PROPN, 2, "nsubj"),
            token("помог", 8, 13, "помочь", Upos::VERB, 0, "root"),
            token("быстро", 14, 20, "быстро", Upos::ADV, 2, "advmod"),
            token(".", 20, 21, ".", Upos::PUNCT, 2, "punct"),
        ]),
        Sentence::new(vec![
            token("Он", 22, 24, "он", Upos::PRON, 2, "nsubj"),
            token("недорогой", 25, 34, "недорогой", Upos::ADJ, 0, "root"),
            token(".", 34, 35, ".", Upos::PUNCT, 2, "punct"),
        ]),
    ];
    let mut m1 = Mention::new(
        "m1",
        EntityKind::Medication,
        Some(AttributeKind::Drugname),
        vec![Span::new(0, 7)],
    );
    m1.normalized_term = Some("виферон".into());
    m1.codes.push(Code {
        scheme: CodeScheme::Atc,
        code: "L03AB05".into(),
    });
    let m2 = Mention::new(
        "m2",
        EntityKind::Disease,
        Some(AttributeKind::BnePos),
        vec![Span::new(8, 20)],
    );
    d1.mentions = vec![m1, m2];
    d1.chains = vec![CorefChain::new(
        "c0",
        vec![vec![Span::new(0, 7)], vec![Span::new(22, 24)]],
    )];

    // "Болела голова и горло после гриппа."
    let mut d2 = Document::new("r0002", "Болела голова и горло после гриппа.");
    d2.meta.insert(
        "heading".into(),
        serde_json::Value::String("Не советую".into()),
    );
    d2.sentences = vec![Sentence::new(vec![
        token("Болела", 0, 6, "болеть", Upos::VERB, 0, "root"),
        token("голова", 7, 13, "голова", Upos::NOUN, 1, "nsubj"),
        token("и", 14, 15, "и", Upos::CCONJ, 4, "cc"),
        token("горло", 16, 21, "горло", Upos::NOUN, 2, "conj"),
        token("после", 22, 27, "после", Upos::ADP, 6, "case"),
        token("гриппа", 28, 34, "грипп", Upos::NOUN, 1, "obl"),
        token(".", 34, 35, ".", Upos::PUNCT, 1, "punct"),
    ])];
    // Discontinuous mention: fragments joined across "и".
    d2.mentions = vec![Mention::new(
        "m3",
        EntityKind::Adr,
        None,
        vec![Span::new(0, 13), Span::new(16, 21)],
    )];

    CorpusFile::new(vec![d1, d2])
}

#[test]
fn fixture_loads_into_expected_graph() {
    let path = fixture_path();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        save_corpus(&golden_corpus(), &path).unwrap();
    }
    let loaded = load_corpus(&path).expect("fixture must validate");
    assert_eq!(loaded, golden_corpus());
    assert_eq!(loaded.documents.len(), 2);
    assert_eq!(
        loaded.documents.iter().map(|d| d.mentions.len()).sum::<usize>(),
        3
    );
    assert_eq!(loaded.documents[0].chains.len(), 1);
}

#[test]
fn fixture_bytes_are_canonical() {
    let bytes = std::fs::read(fixture_path()).unwrap();
    assert_eq!(bytes, corpus_to_string(&golden_corpus()).into_bytes());
}

#[test]
fn save_load_preserves_cyrillic_and_discontinuity() {
    let corpus = golden_corpus();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    save_corpus(&corpus, &path).unwrap();
    let loaded = load_corpus(&path).unwrap();
    assert_eq!(loaded, corpus);

    let first = std::fs::read(&path).unwrap();
    save_corpus(&loaded, &path).unwrap();
    assert_eq!(first, std::fs::read(&path).unwrap());
}

#[test]
fn document_order_is_preserved() {
    let loaded = load_corpus(fixture_path()).unwrap();
    let ids: Vec<&str> = loaded.documents.iter().map(|d| d.id.as_str()).collect();
    assert_eq!(ids, vec!["r0001", "r0002"]);
    let mention_ids: Vec<&str> = loaded.documents[0]
        .mentions
        .iter()
        .map(|m| m.id.as_str())
        .collect();
    assert_eq!(mention_ids, vec!["m1", "m2"]);
}
