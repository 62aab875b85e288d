//! Thesaurus concept linking.
//!
//! Two routes map corpus words onto concept codes: cosine similarity between
//! word and concept embeddings (link iff the best cosine reaches the
//! threshold), and context matching over lexical and syntactic sets built
//! from dependency parses (link iff the mean of lexical involvement,
//! cohesiveness and centrality strictly exceeds the threshold).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::formats::VectorTable;
use crate::model::{Sentence, Upos};
use crate::par;
use crate::{Error, Result};

pub const DEFAULT_COSINE_THRESHOLD: f64 = 0.55;
pub const DEFAULT_SYNTACTIC_THRESHOLD: f64 = 0.6;

/// Function parts of speech removed by preprocessing.
pub const FUNCTION_POS: [Upos; 7] = [
    Upos::ADP,
    Upos::PART,
    Upos::PUNCT,
    Upos::CCONJ,
    Upos::SCONJ,
    Upos::DET,
    Upos::AUX,
];

/// Optional corpus-frequency ceiling: words whose count exceeds `ceiling`
/// are dropped.
#[derive(Debug, Clone, Default)]
pub struct FrequencyFilter {
    pub counts: std::collections::HashMap<String, usize>,
    pub ceiling: usize,
}

#[derive(Debug, Clone)]
pub struct PreprocessConfig {
    /// Words shorter than this many characters are removed.
    pub min_len: usize,
    pub frequency: Option<FrequencyFilter>,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            min_len: 1,
            frequency: None,
        }
    }
}

/// A word that survived preprocessing: lowercased lemma, its position, and
/// the lowercased lemma of its dependency parent (none for the root).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreppedWord {
    pub lemma: String,
    pub sentence: usize,
    pub index: usize,
    pub parent: Option<String>,
}

/// Lemmatize, lowercase and filter the words of parsed sentences.
///
/// Function words ([`FUNCTION_POS`]), words shorter than `min_len`, and
/// words over the frequency ceiling (when a table is supplied) are removed.
/// Candidate words must carry lemma and PoS.
pub fn preprocess(sentences: &[Sentence], cfg: &PreprocessConfig) -> Result<Vec<PreppedWord>> {
    let mut words = Vec::new();
    for (si, sent) in sentences.iter().enumerate() {
        for (ti, tok) in sent.tokens.iter().enumerate() {
            let pos = tok.pos.ok_or_else(|| {
                Error::Preprocess(format!(
                    "token {:?} (sentence {si}, index {ti}) has no PoS tag",
                    tok.text
                ))
            })?;
            if FUNCTION_POS.contains(&pos) {
                continue;
            }
            let lemma = tok
                .lemma
                .as_deref()
                .ok_or_else(|| {
                    Error::Preprocess(format!(
                        "token {:?} (sentence {si}, index {ti}) has no lemma",
                        tok.text
                    ))
                })?
                .to_lowercase();
            if lemma.chars().count() < cfg.min_len {
                continue;
            }
            if let Some(filter) = &cfg.frequency {
                if filter.counts.get(&lemma).copied().unwrap_or(0) > filter.ceiling {
                    continue;
                }
            }
            let parent = match tok.head {
                Some(0) | None => None,
                Some(h) => sent.tokens.get(h - 1).map(|p| p.lemma_or_text()),
            };
            words.push(PreppedWord {
                lemma,
                sentence: si,
                index: ti,
                parent,
            });
        }
    }
    Ok(words)
}

/// Lexical and syntactic context of one word.
///
/// The lexical set holds the word and its neighbours in the filtered word
/// list of the same sentence; the syntactic set holds the word and its
/// dependency parent (just the word itself when it has no parent).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextSets {
    pub lexical: BTreeSet<String>,
    pub syntactic: BTreeSet<String>,
    pub parent: Option<String>,
}

/// Build context sets for word `i` of a preprocessed word list.
pub fn context_sets(words: &[PreppedWord], i: usize) -> ContextSets {
    let word = &words[i];
    let mut lexical = BTreeSet::new();
    lexical.insert(word.lemma.clone());
    if i > 0 && words[i - 1].sentence == word.sentence {
        lexical.insert(words[i - 1].lemma.clone());
    }
    if let Some(next) = words.get(i + 1) {
        if next.sentence == word.sentence {
            lexical.insert(next.lemma.clone());
        }
    }

    let mut syntactic = BTreeSet::new();
    syntactic.insert(word.lemma.clone());
    if let Some(parent) = &word.parent {
        syntactic.insert(parent.clone());
    }

    ContextSets {
        lexical,
        syntactic,
        parent: word.parent.clone(),
    }
}

fn harmonic(x: f64, y: f64) -> f64 {
    if x + y == 0.0 {
        0.0
    } else {
        2.0 * x * y / (x + y)
    }
}

fn set_f1(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let common = a.intersection(b).count() as f64;
    if common == 0.0 {
        return 0.0;
    }
    harmonic(common / a.len() as f64, common / b.len() as f64)
}

/// Harmonic mean of the lexical-set overlap ratios.
pub fn lexical_involvement(word: &ContextSets, concept: &ContextSets) -> f64 {
    set_f1(&word.lexical, &concept.lexical)
}

/// Harmonic mean of the syntactic-set overlap ratios.
pub fn cohesiveness(word: &ContextSets, concept: &ContextSets) -> f64 {
    set_f1(&word.syntactic, &concept.syntactic)
}

/// 1 when the word's dependency parent appears in the concept word's
/// syntactic set, 0 otherwise (and 0 for parentless words).
pub fn centrality(word: &ContextSets, concept: &ContextSets) -> f64 {
    match &word.parent {
        Some(parent) if concept.syntactic.contains(parent) => 1.0,
        _ => 0.0,
    }
}

/// Mean of the three context metrics.
pub fn syntactic_score(word: &ContextSets, concept: &ContextSets) -> f64 {
    (lexical_involvement(word, concept) + cohesiveness(word, concept) + centrality(word, concept))
        / 3.0
}

/// One concept word with its preprocessed lemma and context sets.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptWord {
    pub lemma: String,
    pub contexts: ContextSets,
}

/// A thesaurus entry: the concept text, its code, preprocessed words with
/// contexts, and an optional embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptEntry {
    pub text: String,
    pub code: String,
    pub words: Vec<ConceptWord>,
    pub vector: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConceptInventory {
    pub concepts: Vec<ConceptEntry>,
}

impl ConceptInventory {
    /// Build an inventory from `(concept text, code)` pairs.
    ///
    /// When `parses` is given it must hold one parsed sentence per concept,
    /// aligned by position; context sets are then derived through the same
    /// preprocessing as corpus words. Without parses the concept words are
    /// the lowercased whitespace tokens of the text and carry no contexts,
    /// which is enough for cosine linking only. Concept vectors are the mean
    /// of the in-vocabulary word vectors; concepts with no word in the table
    /// get no vector.
    pub fn build(
        pairs: &[(String, String)],
        parses: Option<&[Sentence]>,
        vectors: Option<&VectorTable>,
        cfg: &PreprocessConfig,
    ) -> Result<Self> {
        if let Some(parses) = parses {
            if parses.len() != pairs.len() {
                return Err(Error::Config(format!(
                    "{} concept(s) but {} parse(s)",
                    pairs.len(),
                    parses.len()
                )));
            }
        }

        let mut concepts = Vec::new();
        for (ci, (text, code)) in pairs.iter().enumerate() {
            let words = match parses {
                Some(parses) => {
                    let sentence = std::slice::from_ref(&parses[ci]);
                    let prepped = preprocess(sentence, cfg)?;
                    prepped
                        .iter()
                        .enumerate()
                        .map(|(i, w)| ConceptWord {
                            lemma: w.lemma.clone(),
                            contexts: context_sets(&prepped, i),
                        })
                        .collect()
                }
                None => text
                    .split_whitespace()
                    .map(|w| {
                        let lemma = w.to_lowercase();
                        ConceptWord {
                            contexts: ContextSets {
                                lexical: BTreeSet::from([lemma.clone()]),
                                syntactic: BTreeSet::from([lemma.clone()]),
                                parent: None,
                            },
                            lemma,
                        }
                    })
                    .collect(),
            };
            let vector = vectors.and_then(|table| mean_vector(text, table));
            concepts.push(ConceptEntry {
                text: text.clone(),
                code: code.clone(),
                words,
                vector,
            });
        }
        Ok(ConceptInventory { concepts })
    }
}

/// Load a concept inventory TSV: `concept_text<TAB>code`, one per line, in
/// file order.
pub fn load_concept_pairs(path: impl AsRef<std::path::Path>) -> Result<Vec<(String, String)>> {
    let path = path.as_ref();
    let input = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut pairs = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.splitn(2, '\t');
        let text = cols.next().unwrap_or("").trim();
        let code = cols
            .next()
            .ok_or_else(|| Error::parse(path, idx + 1, "expected concept_text<TAB>code"))?
            .trim();
        if text.is_empty() || code.is_empty() {
            return Err(Error::parse(path, idx + 1, "empty concept text or code"));
        }
        pairs.push((text.to_string(), code.to_string()));
    }
    Ok(pairs)
}

/// Mean of the in-vocabulary word vectors of a phrase, lowercased.
fn mean_vector(text: &str, table: &VectorTable) -> Option<Vec<f64>> {
    let mut sum = vec![0.0; table.dimension];
    let mut hits = 0usize;
    for word in text.split_whitespace() {
        if let Some(vec) = table.get(&word.to_lowercase()) {
            for (s, v) in sum.iter_mut().zip(vec) {
                *s += v;
            }
            hits += 1;
        }
    }
    if hits == 0 {
        return None;
    }
    for s in &mut sum {
        *s /= hits as f64;
    }
    Some(sum)
}

/// Cosine similarity; zero-norm vectors yield 0.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// A linking decision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkResult {
    pub code: String,
    pub concept: String,
    pub score: f64,
}

/// Link a word to the concept with the highest embedding cosine, provided
/// that cosine reaches `threshold`. Out-of-vocabulary words get no link.
/// Ties keep the first concept in inventory order.
pub fn link_cosine(
    word: &str,
    inventory: &ConceptInventory,
    vectors: &VectorTable,
    threshold: f64,
) -> Result<Option<LinkResult>> {
    let word_vec = match vectors.get(&word.to_lowercase()) {
        Some(v) => v,
        None => return Ok(None),
    };

    let mut best: Option<(f64, &ConceptEntry)> = None;
    for concept in &inventory.concepts {
        let Some(cv) = &concept.vector else { continue };
        if cv.len() != word_vec.len() {
            return Err(Error::Config(format!(
                "concept {:?} has a vector of dimension {}, expected {}",
                concept.text,
                cv.len(),
                word_vec.len()
            )));
        }
        let sim = cosine(word_vec, cv);
        if best.map_or(true, |(b, _)| sim > b) {
            best = Some((sim, concept));
        }
    }

    Ok(best.and_then(|(score, concept)| {
        (score >= threshold).then(|| LinkResult {
            code: concept.code.clone(),
            concept: concept.text.clone(),
            score,
        })
    }))
}

/// Link word `i` of a preprocessed word list to the concept with the best
/// context score, provided the score strictly exceeds `threshold`. A
/// multiword concept scores as the maximum over its words.
pub fn link_syntactic(
    words: &[PreppedWord],
    i: usize,
    inventory: &ConceptInventory,
    threshold: f64,
) -> Result<Option<LinkResult>> {
    if i >= words.len() {
        return Err(Error::Config(format!(
            "word index {i} out of range ({} candidate words)",
            words.len()
        )));
    }
    let contexts = context_sets(words, i);

    let mut best: Option<(f64, &ConceptEntry)> = None;
    for concept in &inventory.concepts {
        let score = concept
            .words
            .iter()
            .map(|cw| syntactic_score(&contexts, &cw.contexts))
            .fold(0.0f64, f64::max);
        if best.map_or(true, |(b, _)| score > b) {
            best = Some((score, concept));
        }
    }

    Ok(best.and_then(|(score, concept)| {
        (score > threshold).then(|| LinkResult {
            code: concept.code.clone(),
            concept: concept.text.clone(),
            score,
        })
    }))
}

/// Which linking route to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkMethod {
    Cosine,
    Syntactic,
}

impl std::str::FromStr for LinkMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "cosine" => Ok(LinkMethod::Cosine),
            "syntactic" => Ok(LinkMethod::Syntactic),
            other => Err(format!("link method must be cosine|syntactic, got {other:?}")),
        }
    }
}

/// A linked word in batch output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordLink {
    pub word: String,
    pub code: String,
    pub score: f64,
    pub method: LinkMethod,
}

/// Link every candidate word of parsed sentences. Linking is independent
/// per word, so it runs through the parallel map.
pub fn link_words(
    sentences: &[Sentence],
    inventory: &ConceptInventory,
    vectors: Option<&VectorTable>,
    method: LinkMethod,
    threshold: f64,
    cfg: &PreprocessConfig,
) -> Result<Vec<WordLink>> {
    let words = preprocess(sentences, cfg)?;
    let indices: Vec<usize> = (0..words.len()).collect();
    let linked: Vec<Result<Option<WordLink>>> = par::map(&indices, |&i| {
        let word = &words[i];
        let result = match method {
            LinkMethod::Cosine => {
                let table = vectors.ok_or_else(|| {
                    Error::Config("cosine linking requires a vector table".into())
                })?;
                link_cosine(&word.lemma, inventory, table, threshold)?
            }
            LinkMethod::Syntactic => link_syntactic(&words, i, inventory, threshold)?,
        };
        Ok(result.map(|r| WordLink {
            word: word.lemma.clone(),
            code: r.code,
            score: r.score,
            method,
        }))
    });

    let mut out = Vec::new();
    for item in linked {
        if let Some(link) = item? {
            out.push(link);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Token;

    fn token(text: &str, lemma: &str, pos: Upos, head: Option<usize>) -> Token {
        let mut t = Token::new(text, 0, text.chars().count().max(1));
        t.lemma = Some(lemma.to_string());
        t.pos = Some(pos);
        t.head = head;
        t
    }

    #[test]
    fn function_words_are_dropped() {
        let sent = Sentence::new(vec![
            token("и", "и", Upos::CCONJ, Some(2)),
            token("боль", "боль", Upos::NOUN, Some(0)),
        ]);
        let words = preprocess(&[sent], &PreprocessConfig::default()).unwrap();
        assert_eq!(words.len(), 1);
        assert_eq!(words[0].lemma, "боль");
    }

    #[test]
    fn lemmas_are_lowercased() {
        let sent = Sentence::new(vec![token("Боль", "Боль", Upos::NOUN, Some(0))]);
        let words = preprocess(&[sent], &PreprocessConfig::default()).unwrap();
        assert_eq!(words[0].lemma, "боль");
    }

    #[test]
    fn min_len_filters_short_words() {
        let sent = Sentence::new(vec![
            token("он", "он", Upos::NOUN, Some(0)),
            token("грипп", "грипп", Upos::NOUN, Some(0)),
        ]);
        let cfg = PreprocessConfig {
            min_len: 3,
            ..Default::default()
        };
        let words = preprocess(&[sent], &cfg).unwrap();
        assert_eq!(words.len(), 1);
        assert_eq!(words[0].lemma, "грипп");
    }

    #[test]
    fn missing_lemma_names_the_token() {
        let mut t = Token::new("боль", 0, 4);
        t.pos = Some(Upos::NOUN);
        let err = preprocess(&[Sentence::new(vec![t])], &PreprocessConfig::default()).unwrap_err();
        assert!(err.to_string().contains("боль"));
    }

    #[test]
    fn context_sets_follow_the_filtered_list() {
        let sent = Sentence::new(vec![
            token("сильная", "сильный", Upos::ADJ, Some(2)),
            token("головная", "головной", Upos::ADJ, Some(3)),
            token("боль", "боль", Upos::NOUN, Some(0)),
        ]);
        let words = preprocess(&[sent], &PreprocessConfig::default()).unwrap();
        let ctx = context_sets(&words, 1);
        assert_eq!(
            ctx.lexical,
            BTreeSet::from(["сильный".into(), "головной".into(), "боль".into()])
        );
        assert_eq!(
            ctx.syntactic,
            BTreeSet::from(["головной".into(), "боль".into()])
        );

        // Root word: syntactic set is just the word.
        let ctx = context_sets(&words, 2);
        assert_eq!(ctx.syntactic, BTreeSet::from(["боль".into()]));
        assert_eq!(ctx.parent, None);
    }

    fn sets(words: &[&str], parent: Option<&str>) -> ContextSets {
        let lexical: BTreeSet<String> = words.iter().map(|s| s.to_string()).collect();
        let mut syntactic = BTreeSet::new();
        if let Some(first) = words.first() {
            syntactic.insert(first.to_string());
        }
        if let Some(p) = parent {
            syntactic.insert(p.to_string());
        }
        ContextSets {
            lexical,
            syntactic,
            parent: parent.map(String::from),
        }
    }

    #[test]
    fn involvement_and_cohesiveness_examples() {
        let w = sets(&["a", "b", "c"], None);
        let c = sets(&["b", "c", "d"], None);
        // Intersection {b, c}: F1(2/3, 2/3) = 2/3.
        assert!((lexical_involvement(&w, &c) - 2.0 / 3.0).abs() < 1e-12);

        let w = sets(&["w"], Some("p"));
        let c = sets(&["w"], Some("q"));
        // Syntactic sets {w,p} vs {w,q}: F1(1/2, 1/2) = 1/2.
        assert!((cohesiveness(&w, &c) - 0.5).abs() < 1e-12);

        let disjoint = sets(&["x", "y"], None);
        assert_eq!(lexical_involvement(&w, &disjoint), 0.0);
        assert_eq!(lexical_involvement(&w, &w), 1.0);
    }

    #[test]
    fn centrality_needs_the_parent_in_concept_set() {
        let w = sets(&["w"], Some("p"));
        let c_with = sets(&["p"], Some("x"));
        let c_without = sets(&["z"], None);
        assert_eq!(centrality(&w, &c_with), 1.0);
        assert_eq!(centrality(&w, &c_without), 0.0);
        let rootless = sets(&["w"], None);
        assert_eq!(centrality(&rootless, &c_with), 0.0);
    }

    fn toy_table() -> VectorTable {
        let mut t = VectorTable::new(2);
        t.insert("боль", vec![1.0, 0.0]).unwrap();
        t.insert("грипп", vec![0.0, 1.0]).unwrap();
        t.insert("недуг", vec![0.8, 0.6]).unwrap();
        t
    }

    fn toy_inventory(table: &VectorTable) -> ConceptInventory {
        ConceptInventory::build(
            &[
                ("боль".to_string(), "C0001".to_string()),
                ("грипп".to_string(), "C0002".to_string()),
            ],
            None,
            Some(table),
            &PreprocessConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn cosine_linking_decisions() {
        let table = toy_table();
        let inventory = toy_inventory(&table);

        // Identical vector: cos = 1.
        let hit = link_cosine("боль", &inventory, &table, 0.55).unwrap().unwrap();
        assert_eq!(hit.code, "C0001");
        assert!((hit.score - 1.0).abs() < 1e-12);

        // "недуг" = (0.8, 0.6): cos to боль = 0.8, to грипп = 0.6.
        let hit = link_cosine("недуг", &inventory, &table, 0.55).unwrap().unwrap();
        assert_eq!(hit.code, "C0001");
        assert!((hit.score - 0.8).abs() < 1e-12);

        // Out of vocabulary: no link.
        assert!(link_cosine("насморк", &inventory, &table, 0.55)
            .unwrap()
            .is_none());

        // Orthogonal vectors under a high threshold: no link.
        assert!(link_cosine("боль", &inventory, &table, 1.1).unwrap().is_none());
    }

    #[test]
    fn cosine_threshold_is_inclusive() {
        let mut table = VectorTable::new(2);
        table.insert("w", vec![1.0, 0.0]).unwrap();
        table.insert("c", vec![1.0, 0.0]).unwrap();
        let inventory = ConceptInventory::build(
            &[("c".to_string(), "X1".to_string())],
            None,
            Some(&table),
            &PreprocessConfig::default(),
        )
        .unwrap();
        // cos = 1.0 exactly; threshold 1.0 still links (>=).
        assert!(link_cosine("w", &inventory, &table, 1.0).unwrap().is_some());
    }

    #[test]
    fn syntactic_linking_thresholds() {
        // Word and concept word share everything: mean(1, 1, 1) = 1 > 0.6.
        let sent = Sentence::new(vec![
            token("головная", "головной", Upos::ADJ, Some(2)),
            token("боль", "боль", Upos::NOUN, Some(0)),
        ]);
        let concept_parse = Sentence::new(vec![
            token("головная", "головной", Upos::ADJ, Some(2)),
            token("боль", "боль", Upos::NOUN, Some(0)),
        ]);
        let inventory = ConceptInventory::build(
            &[("головная боль".to_string(), "C0018681".to_string())],
            Some(std::slice::from_ref(&concept_parse)),
            None,
            &PreprocessConfig::default(),
        )
        .unwrap();

        let words = preprocess(std::slice::from_ref(&sent), &PreprocessConfig::default()).unwrap();
        let hit = link_syntactic(&words, 0, &inventory, 0.6).unwrap().unwrap();
        assert_eq!(hit.code, "C0018681");
        assert!((hit.score - 1.0).abs() < 1e-12);

        // Unrelated word: all metrics 0, no link.
        let other = Sentence::new(vec![token("спать", "спать", Upos::VERB, Some(0))]);
        let other_words =
            preprocess(std::slice::from_ref(&other), &PreprocessConfig::default()).unwrap();
        assert!(link_syntactic(&other_words, 0, &inventory, 0.6)
            .unwrap()
            .is_none());
    }

    #[test]
    fn mean_of_three_metrics_drives_the_decision() {
        let word = ContextSets {
            lexical: BTreeSet::from(["a".into(), "b".into(), "c".into()]),
            syntactic: BTreeSet::from(["w".into(), "p".into()]),
            parent: Some("p".into()),
        };

        // Metrics (1.0, 0.5, 1): mean 0.833, above 0.6.
        let close = ContextSets {
            lexical: BTreeSet::from(["a".into(), "b".into(), "c".into()]),
            syntactic: BTreeSet::from(["p".into(), "x".into()]),
            parent: Some("x".into()),
        };
        let score = syntactic_score(&word, &close);
        assert!((score - (1.0 + 0.5 + 1.0) / 3.0).abs() < 1e-12);
        assert!(score > 0.6);

        // Metrics (2/3, 0.5, 0): mean 0.389, below 0.6.
        let far = ContextSets {
            lexical: BTreeSet::from(["b".into(), "c".into(), "d".into()]),
            syntactic: BTreeSet::from(["w".into(), "q".into()]),
            parent: Some("q".into()),
        };
        let score = syntactic_score(&word, &far);
        assert!((score - (2.0 / 3.0 + 0.5) / 3.0).abs() < 1e-12);
        assert!(score < 0.6);
    }

    #[test]
    fn scaling_vectors_does_not_change_decisions() {
        let table = toy_table();
        let inventory = toy_inventory(&table);

        let mut scaled_table = VectorTable::new(2);
        scaled_table.insert("боль", vec![3.0, 0.0]).unwrap();
        scaled_table.insert("грипп", vec![0.0, 3.0]).unwrap();
        scaled_table.insert("недуг", vec![2.4, 1.8]).unwrap();
        let scaled_inventory = ConceptInventory::build(
            &[
                ("боль".to_string(), "C0001".to_string()),
                ("грипп".to_string(), "C0002".to_string()),
            ],
            None,
            Some(&scaled_table),
            &PreprocessConfig::default(),
        )
        .unwrap();

        for word in ["боль", "грипп", "недуг"] {
            let a = link_cosine(word, &inventory, &table, 0.55).unwrap();
            let b = link_cosine(word, &scaled_inventory, &scaled_table, 0.55).unwrap();
            assert_eq!(a.map(|r| r.code), b.map(|r| r.code));
        }
    }
}
