//! Deterministic synthetic corpora for tests and benchmarks: a
//! dictionary-determined corpus where entity mentions are exactly the tokens
//! found in a lexicon, and random token-aligned sentences for round-trip
//! checks.

use rand::rngs::StdRng;
use rand::Rng;
use rand::SeedableRng;

use crate::formats::{CorpusFile, Lexicon};
use crate::model::{char_len, Document, EntityKind, Layer, Mention, Sentence, Span, Token, Upos};

const SYLLABLES: [&str; 12] = [
    "ба", "ве", "ги", "до", "жу", "зы", "ка", "ле", "ми", "но", "пу", "ры",
];

fn make_word(i: usize, suffix: &str) -> String {
    format!(
        "{}{}{suffix}",
        SYLLABLES[i % SYLLABLES.len()],
        SYLLABLES[(i / SYLLABLES.len()) % SYLLABLES.len()]
    )
}

/// Drug-like dictionary words.
pub fn entity_vocabulary(size: usize) -> Vec<String> {
    (0..size).map(|i| make_word(i, "ин")).collect()
}

/// Filler words disjoint from the entity vocabulary.
pub fn filler_vocabulary(size: usize) -> Vec<String> {
    (0..size).map(|i| make_word(i, "")).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct SynthConfig {
    pub documents: usize,
    pub sentences_per_document: usize,
    /// Inclusive token-count range per sentence.
    pub tokens_per_sentence: (usize, usize),
    /// Probability that a token is drawn from the entity dictionary.
    pub entity_rate: f64,
    pub layer: Layer,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            documents: 100,
            sentences_per_document: 5,
            tokens_per_sentence: (5, 12),
            entity_rate: 0.2,
            layer: Layer::Entity(EntityKind::Adr),
        }
    }
}

/// Generate a corpus whose mentions are exactly the dictionary tokens, plus
/// the dictionary itself as a lexicon. Every token carries lemma and PoS, so
/// the corpus works with every module.
pub fn lexicon_corpus(cfg: &SynthConfig, seed: u64) -> (CorpusFile, Lexicon) {
    let entities = entity_vocabulary(30);
    let fillers = filler_vocabulary(60);
    let pos_pool = [Upos::NOUN, Upos::VERB, Upos::ADJ, Upos::ADV];

    let mut lexicon = Lexicon::new("synth-dict");
    for word in &entities {
        lexicon.entries.insert(word.clone(), "entity".to_string());
    }

    let mut rng = StdRng::seed_from_u64(seed);
    let mut documents = Vec::with_capacity(cfg.documents);
    let mut mention_id = 0usize;

    for di in 0..cfg.documents {
        let mut text = String::new();
        let mut sentences = Vec::new();
        let mut mentions = Vec::new();
        let mut cursor = 0usize;

        for _ in 0..cfg.sentences_per_document {
            let count = rng.random_range(cfg.tokens_per_sentence.0..=cfg.tokens_per_sentence.1);
            let mut tokens = Vec::with_capacity(count);
            for _ in 0..count {
                let is_entity = rng.random::<f64>() < cfg.entity_rate;
                let word = if is_entity {
                    entities[rng.random_range(0..entities.len())].clone()
                } else {
                    fillers[rng.random_range(0..fillers.len())].clone()
                };
                if !text.is_empty() {
                    text.push(' ');
                    cursor += 1;
                }
                let len = char_len(&word);
                let span = Span::new(cursor, cursor + len);
                let mut token = Token::new(word.clone(), span.start, span.end);
                token.lemma = Some(word.clone());
                token.pos = Some(pos_pool[rng.random_range(0..pos_pool.len())]);
                text.push_str(&word);
                cursor += len;
                if is_entity {
                    mentions.push(Mention::new(
                        format!("m{mention_id}"),
                        cfg.layer.entity(),
                        cfg.layer.attribute(),
                        vec![span],
                    ));
                    mention_id += 1;
                }
                tokens.push(token);
            }
            sentences.push(Sentence::new(tokens));
        }

        let mut doc = Document::new(format!("doc{di:04}"), text);
        doc.sentences = sentences;
        doc.mentions = mentions;
        documents.push(doc);
    }

    (CorpusFile::new(documents), lexicon)
}

/// A random sentence plus continuous, non-overlapping, token-aligned
/// mentions on one layer, for encode/decode round-trip checks.
pub fn random_tagged_sentence(
    rng: &mut impl Rng,
    max_tokens: usize,
    layer: Layer,
) -> (Sentence, Vec<Mention>) {
    let fillers = filler_vocabulary(40);
    let count = rng.random_range(1..=max_tokens.max(1));
    let mut tokens = Vec::with_capacity(count);
    let mut cursor = 0usize;
    for _ in 0..count {
        let word = &fillers[rng.random_range(0..fillers.len())];
        let len = char_len(word);
        let mut token = Token::new(word.clone(), cursor, cursor + len);
        token.lemma = Some(word.clone());
        token.pos = Some(Upos::NOUN);
        tokens.push(token);
        cursor += len + 1;
    }
    let sentence = Sentence::new(tokens);

    let mut mentions = Vec::new();
    let mut ti = 0usize;
    let mut mi = 0usize;
    while ti < count {
        if rng.random::<f64>() < 0.35 {
            let len = rng.random_range(1..=3usize).min(count - ti);
            let span = Span::new(
                sentence.tokens[ti].span.start,
                sentence.tokens[ti + len - 1].span.end,
            );
            mentions.push(Mention::new(
                format!("r{mi}"),
                layer.entity(),
                layer.attribute(),
                vec![span],
            ));
            mi += 1;
            ti += len;
        } else {
            ti += 1;
        }
    }
    (sentence, mentions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_valid_and_deterministic() {
        let cfg = SynthConfig {
            documents: 10,
            ..Default::default()
        };
        let (a, lex) = lexicon_corpus(&cfg, 42);
        let (b, _) = lexicon_corpus(&cfg, 42);
        assert_eq!(a, b);
        assert!(a.validate().is_empty());
        assert_eq!(lex.len(), 30);

        let (c, _) = lexicon_corpus(&cfg, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn mentions_are_exactly_dictionary_tokens() {
        let (corpus, lexicon) = lexicon_corpus(&SynthConfig::default(), 1);
        for doc in &corpus.documents {
            let mention_starts: std::collections::BTreeSet<usize> =
                doc.mentions.iter().map(|m| m.spans[0].start).collect();
            for (_, _, tok) in doc.tokens() {
                let should_be = lexicon.contains(&tok.text);
                assert_eq!(mention_starts.contains(&tok.span.start), should_be);
            }
        }
    }

    #[test]
    fn random_sentences_have_disjoint_mentions() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let (sent, mentions) = random_tagged_sentence(
                &mut rng,
                12,
                Layer::Entity(EntityKind::Adr),
            );
            assert!(!sent.is_empty());
            for pair in mentions.windows(2) {
                assert!(pair[0].spans[0].end < pair[1].spans[0].start);
            }
        }
    }
}
