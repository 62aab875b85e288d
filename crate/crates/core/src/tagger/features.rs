//! Feature extraction for the baseline tagger: surface-shape bits, emotion
//! and category dictionary memberships, concept-code bits, and document-level
//! psycholinguistic markers bucketized into quintiles. Features are
//! position-pure: a token's features depend only on the token, its sentence
//! window and document-level markers, never on gold tags.

use std::collections::HashMap;

use serde::Serialize;

use crate::formats::Lexicon;
use crate::model::{Document, Sentence, Upos};

/// Answers to the seven surface-shape questions, in fixed order: all caps,
/// all lowercase, first letter capital, contains a digit, more than half
/// digits, all digits, all letters Latin. Questions about letters are false
/// for tokens without letters.
pub fn common_features(text: &str) -> [bool; 7] {
    let chars: Vec<char> = text.chars().collect();
    let letters: Vec<char> = chars.iter().copied().filter(|c| c.is_alphabetic()).collect();
    let digits = chars.iter().filter(|c| c.is_ascii_digit()).count();

    [
        !letters.is_empty() && letters.iter().all(|c| c.is_uppercase()),
        !letters.is_empty() && letters.iter().all(|c| c.is_lowercase()),
        chars.first().is_some_and(|c| c.is_uppercase()),
        digits > 0,
        digits * 2 > chars.len(),
        !chars.is_empty() && digits == chars.len(),
        !letters.is_empty() && letters.iter().all(|c| c.is_ascii_alphabetic()),
    ]
}

/// One bit per dictionary: is the word present in it?
pub fn emotion_features(word: &str, lexicons: &[Lexicon]) -> Vec<bool> {
    let key = word.to_lowercase();
    lexicons.iter().map(|lex| lex.contains(&key)).collect()
}

/// `(lexicon name, category)` pairs the word belongs to.
pub fn dict_features<'a>(word: &str, lexicons: &'a [Lexicon]) -> Vec<(&'a str, &'a str)> {
    let key = word.to_lowercase();
    lexicons
        .iter()
        .filter_map(|lex| lex.category_of(&key).map(|cat| (lex.name.as_str(), cat)))
        .collect()
}

pub const PSYCHOLING_NAMES: [&str; 6] = [
    "verbs_to_adjectives",
    "verbs_to_nouns",
    "verb_forms_to_words",
    "question_marks",
    "exclamation_marks",
    "mean_sentence_length",
];

/// Document-level emotional-intensity markers. Ratios with a zero
/// denominator are reported as 0 with the corresponding flag set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsycholingMarkers {
    pub values: [f64; 6],
    pub degenerate: [bool; 6],
}

/// Compute the six markers: verbs/adjectives, verbs/nouns, verb forms (VERB
/// plus AUX, which covers participle readings in UD) over all tokens, '?'
/// count, '!' count, and mean sentence length in tokens.
pub fn psycholing_markers(doc: &Document) -> PsycholingMarkers {
    let mut verbs = 0usize;
    let mut aux = 0usize;
    let mut adjectives = 0usize;
    let mut nouns = 0usize;
    let mut tokens = 0usize;
    for (_, _, tok) in doc.tokens() {
        tokens += 1;
        match tok.pos {
            Some(Upos::VERB) => verbs += 1,
            Some(Upos::AUX) => aux += 1,
            Some(Upos::ADJ) => adjectives += 1,
            Some(Upos::NOUN) => nouns += 1,
            _ => {}
        }
    }
    let questions = doc.text.chars().filter(|&c| c == '?').count();
    let exclamations = doc.text.chars().filter(|&c| c == '!').count();
    let sentences = doc.sentences.len();

    let ratio = |num: f64, den: f64| -> (f64, bool) {
        if den == 0.0 {
            (0.0, true)
        } else {
            (num / den, false)
        }
    };

    let (r1, d1) = ratio(verbs as f64, adjectives as f64);
    let (r2, d2) = ratio(verbs as f64, nouns as f64);
    let (r3, d3) = ratio((verbs + aux) as f64, tokens as f64);
    let (r6, d6) = ratio(tokens as f64, sentences as f64);

    PsycholingMarkers {
        values: [r1, r2, r3, questions as f64, exclamations as f64, r6],
        degenerate: [d1, d2, d3, false, false, d6],
    }
}

/// Quintile cut points (20/40/60/80th percentiles, nearest rank) over a
/// training sample.
pub fn quintile_cuts(values: &[f64]) -> [f64; 4] {
    if values.is_empty() {
        return [0.0; 4];
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let pick = |q: f64| -> f64 {
        let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
        sorted[rank - 1]
    };
    [pick(0.2), pick(0.4), pick(0.6), pick(0.8)]
}

/// Bucket 1..=5 for a value under the given cut points.
pub fn bucket(value: f64, cuts: &[f64; 4]) -> usize {
    1 + cuts.iter().filter(|&&c| value > c).count()
}

/// Dictionaries and options shared by training and tagging.
#[derive(Debug, Clone, Default)]
pub struct FeatureConfig {
    pub emotion_lexicons: Vec<Lexicon>,
    pub category_lexicons: Vec<Lexicon>,
    /// Lowercased word -> concept code, typically produced by the linker.
    pub concept_codes: HashMap<String, String>,
    /// Look dictionary words up by lemma instead of surface form.
    pub use_lemma: bool,
}

impl FeatureConfig {
    pub fn lexicon_names(&self) -> Vec<String> {
        self.emotion_lexicons
            .iter()
            .chain(&self.category_lexicons)
            .map(|l| l.name.clone())
            .collect()
    }
}

/// Stateless extractor over a fixed configuration.
#[derive(Debug, Clone, Default)]
pub struct FeatureExtractor {
    pub config: FeatureConfig,
}

pub const WINDOW: i64 = 2;

impl FeatureExtractor {
    pub fn new(config: FeatureConfig) -> Self {
        FeatureExtractor { config }
    }

    /// Document-level features: one per marker, valid for every token.
    pub fn document_features(&self, doc: &Document, cuts: &[[f64; 4]; 6]) -> Vec<String> {
        let markers = psycholing_markers(doc);
        PSYCHOLING_NAMES
            .iter()
            .enumerate()
            .map(|(i, name)| format!("ton:{name}=q{}", bucket(markers.values[i], &cuts[i])))
            .collect()
    }

    /// Features of token `index`, with the sentence window conjoined onto
    /// relative offsets.
    pub fn token_features(
        &self,
        sentence: &Sentence,
        index: usize,
        doc_features: &[String],
    ) -> Vec<String> {
        let mut feats = Vec::with_capacity(32);
        feats.push("bias".to_string());
        feats.extend_from_slice(doc_features);

        for offset in -WINDOW..=WINDOW {
            let j = index as i64 + offset;
            if j < 0 || j as usize >= sentence.len() {
                continue;
            }
            let tok = &sentence.tokens[j as usize];
            let lower = tok.text.to_lowercase();
            feats.push(format!("w[{offset}]={lower}"));
            if let Some(lemma) = &tok.lemma {
                feats.push(format!("l[{offset}]={}", lemma.to_lowercase()));
            }
            if let Some(pos) = tok.pos {
                feats.push(format!("p[{offset}]={pos}"));
            }
            for (bit, set) in common_features(&tok.text).iter().enumerate() {
                if *set {
                    feats.push(format!("cf[{offset}]={bit}"));
                }
            }

            let lookup = if self.config.use_lemma {
                tok.lemma_or_text()
            } else {
                lower
            };
            for (i, present) in emotion_features(&lookup, &self.config.emotion_lexicons)
                .iter()
                .enumerate()
            {
                if *present {
                    feats.push(format!(
                        "emo[{offset}]={}",
                        self.config.emotion_lexicons[i].name
                    ));
                }
            }
            for (lex, category) in dict_features(&lookup, &self.config.category_lexicons) {
                feats.push(format!("dict[{offset}]={lex}:{category}"));
            }
            if let Some(code) = self.config.concept_codes.get(&lookup) {
                feats.push(format!("cui[{offset}]={code}"));
            }
        }
        feats
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{char_len, Sentence, Token};

    #[test]
    fn seven_questions() {
        assert_eq!(
            common_features("АСПИРИН"),
            [true, false, true, false, false, false, false]
        );
        assert_eq!(
            common_features("ibuprofen"),
            [false, true, false, false, false, false, true]
        );
        assert_eq!(
            common_features("15000"),
            [false, false, false, true, true, true, false]
        );
        assert_eq!(
            common_features("Виферон"),
            [false, false, true, false, false, false, false]
        );
        assert_eq!(
            common_features("б12"),
            [false, true, false, true, true, false, false]
        );
    }

    fn lexicon(name: &str, terms: &[(&str, &str)]) -> Lexicon {
        let mut lex = Lexicon::new(name);
        for (term, cat) in terms {
            lex.entries.insert(term.to_lowercase(), cat.to_string());
        }
        lex
    }

    #[test]
    fn emotion_bits_reflect_membership() {
        let dicts = vec![
            lexicon("anxiety", &[("страх", "Anxiety")]),
            lexicon("faith", &[("вера", "Faith")]),
            lexicon("joy", &[("страх", "Joy")]),
        ];
        assert_eq!(emotion_features("Страх", &dicts), vec![true, false, true]);
        assert_eq!(emotion_features("сон", &dicts), vec![false, false, false]);
    }

    #[test]
    fn category_features_carry_labels() {
        let vidal = lexicon("vidal", &[("судороги", "adverse effects")]);
        let got = dict_features("судороги", std::slice::from_ref(&vidal));
        assert_eq!(got, vec![("vidal", "adverse effects")]);
        assert!(dict_features("сон", std::slice::from_ref(&vidal)).is_empty());
    }

    fn parsed_doc(words: &[(&str, Upos)], text_suffix: &str) -> Document {
        let text = words.iter().map(|(w, _)| *w).collect::<Vec<_>>().join(" ") + text_suffix;
        let mut doc = Document::new("d", text);
        let mut sent = Sentence::default();
        let mut cursor = 0;
        for (w, pos) in words {
            let len = char_len(w);
            let mut tok = Token::new(*w, cursor, cursor + len);
            tok.pos = Some(*pos);
            tok.lemma = Some(w.to_lowercase());
            sent.tokens.push(tok);
            cursor += len + 1;
        }
        doc.sentences.push(sent);
        doc
    }

    #[test]
    fn markers_count_pos_and_punctuation() {
        let doc = parsed_doc(
            &[
                ("помогает", Upos::VERB),
                ("болит", Upos::VERB),
                ("сильный", Upos::ADJ),
                ("голова", Upos::NOUN),
            ],
            "!?",
        );
        let m = psycholing_markers(&doc);
        assert_eq!(m.values[0], 2.0); // verbs / adjectives
        assert_eq!(m.values[1], 2.0); // verbs / nouns
        assert_eq!(m.values[2], 0.5); // verb forms / tokens
        assert_eq!(m.values[3], 1.0); // '?'
        assert_eq!(m.values[4], 1.0); // '!'
        assert_eq!(m.values[5], 4.0); // tokens per sentence
        assert_eq!(m.degenerate, [false; 6]);
    }

    #[test]
    fn zero_denominator_sets_flag() {
        let doc = parsed_doc(&[("голова", Upos::NOUN)], "");
        let m = psycholing_markers(&doc);
        assert_eq!(m.values[0], 0.0);
        assert!(m.degenerate[0]);
    }

    #[test]
    fn quintiles_are_deterministic() {
        let values: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let cuts = quintile_cuts(&values);
        assert_eq!(cuts, [2.0, 4.0, 6.0, 8.0]);
        assert_eq!(bucket(1.0, &cuts), 1);
        assert_eq!(bucket(4.5, &cuts), 3);
        assert_eq!(bucket(100.0, &cuts), 5);
    }

    #[test]
    fn window_features_use_relative_offsets() {
        let doc = parsed_doc(
            &[("а", Upos::NOUN), ("б", Upos::NOUN), ("в", Upos::NOUN)],
            "",
        );
        let fx = FeatureExtractor::default();
        let feats = fx.token_features(&doc.sentences[0], 1, &[]);
        assert!(feats.contains(&"w[-1]=а".to_string()));
        assert!(feats.contains(&"w[0]=б".to_string()));
        assert!(feats.contains(&"w[1]=в".to_string()));
        assert!(feats.contains(&"bias".to_string()));
        // No out-of-range offsets.
        assert!(!feats.iter().any(|f| f.starts_with("w[-2]")));
    }
}
