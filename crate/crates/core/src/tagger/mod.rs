//! Baseline sequence tagger: hand-crafted features feeding an averaged
//! structured perceptron decoded with Viterbi, one independent model per
//! annotation layer. Training is deterministic under a fixed seed; tagging
//! is pure and runs in parallel over sentences.

mod features;
mod viterbi;

pub use features::{
    bucket, common_features, dict_features, emotion_features, psycholing_markers, quintile_cuts,
    FeatureConfig, FeatureExtractor, PsycholingMarkers, PSYCHOLING_NAMES,
};
pub use viterbi::{
    emissions, transition_allowed, viterbi, Transitions, Weights, NUM_TAGS, START, TAG_B, TAG_I,
    TAG_O,
};

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bio::{encode_bio, BioTag, TagSequence};
use crate::evaluate::{chunk_prf, PrfCounts};
use crate::formats::{ChunkTag, CorpusFile};
use crate::model::{Document, Layer};
use crate::par;
use crate::{Error, Result};

pub const MODEL_VERSION: &str = "1";

const TAG_BY_INDEX: [BioTag; NUM_TAGS] = [BioTag::O, BioTag::B, BioTag::I];

fn tag_index(tag: BioTag) -> usize {
    match tag {
        BioTag::O => TAG_O,
        BioTag::B => TAG_B,
        BioTag::I => TAG_I,
    }
}

/// A trained per-layer model: averaged feature and transition weights plus
/// the quintile cut points for document-level markers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggerModel {
    pub version: String,
    pub layer: Layer,
    pub weights: Weights,
    pub transitions: Transitions,
    pub doc_cuts: [[f64; 4]; 6],
    pub lexicon_names: Vec<String>,
    pub epochs: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpochScore {
    pub epoch: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub model: TaggerModel,
    /// Training-set chunking scores per epoch, under the current (not yet
    /// averaged) weights.
    pub trace: Vec<EpochScore>,
}

impl TrainOutcome {
    /// Training log as CSV: epoch, layer, precision, recall, f1.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("epoch,layer,precision,recall,f1\n");
        for score in &self.trace {
            out.push_str(&format!(
                "{},{},{:.4},{:.4},{:.4}\n",
                score.epoch, self.model.layer, score.precision, score.recall, score.f1
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TrainParams {
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            epochs: 10,
            seed: 42,
        }
    }
}

struct Instance {
    features: Vec<Vec<String>>,
    gold: Vec<usize>,
}

/// Lazily averaged perceptron state.
struct Averaged {
    weights: Weights,
    totals: BTreeMap<String, [f64; NUM_TAGS]>,
    stamps: BTreeMap<String, [usize; NUM_TAGS]>,
    transitions: Transitions,
    trans_totals: [[f64; NUM_TAGS]; 4],
    trans_stamps: [[usize; NUM_TAGS]; 4],
    updates: usize,
}

impl Averaged {
    fn new() -> Self {
        Averaged {
            weights: Weights::new(),
            totals: BTreeMap::new(),
            stamps: BTreeMap::new(),
            transitions: [[0.0; NUM_TAGS]; 4],
            trans_totals: [[0.0; NUM_TAGS]; 4],
            trans_stamps: [[0usize; NUM_TAGS]; 4],
            updates: 0,
        }
    }

    fn bump_feature(&mut self, feature: &str, tag: usize, delta: f64) {
        let t = self.updates;
        let weights = self.weights.entry(feature.to_string()).or_default();
        let totals = self.totals.entry(feature.to_string()).or_default();
        let stamps = self.stamps.entry(feature.to_string()).or_default();
        totals[tag] += weights[tag] * (t - stamps[tag]) as f64;
        stamps[tag] = t;
        weights[tag] += delta;
    }

    fn bump_transition(&mut self, prev: usize, tag: usize, delta: f64) {
        let t = self.updates;
        self.trans_totals[prev][tag] +=
            self.transitions[prev][tag] * (t - self.trans_stamps[prev][tag]) as f64;
        self.trans_stamps[prev][tag] = t;
        self.transitions[prev][tag] += delta;
    }

    fn finalize(mut self) -> (Weights, Transitions) {
        let t = self.updates.max(1);
        let mut averaged = Weights::new();
        for (feature, weights) in &self.weights {
            let totals = self.totals.get(feature).copied().unwrap_or_default();
            let stamps = self.stamps.get(feature).copied().unwrap_or_default();
            let mut avg = [0.0; NUM_TAGS];
            let mut keep = false;
            for tag in 0..NUM_TAGS {
                let total = totals[tag] + weights[tag] * (t - stamps[tag]) as f64;
                avg[tag] = total / t as f64;
                keep |= avg[tag] != 0.0;
            }
            if keep {
                averaged.insert(feature.clone(), avg);
            }
        }
        let mut avg_trans = [[0.0; NUM_TAGS]; 4];
        for prev in 0..4 {
            for tag in 0..NUM_TAGS {
                let total = self.trans_totals[prev][tag]
                    + self.transitions[prev][tag] * (t - self.trans_stamps[prev][tag]) as f64;
                avg_trans[prev][tag] = total / t as f64;
            }
        }
        self.totals.clear();
        (averaged, avg_trans)
    }
}

/// Train one layer on a corpus with gold mentions.
pub fn train(
    corpus: &CorpusFile,
    layer: Layer,
    params: TrainParams,
    config: FeatureConfig,
) -> Result<TrainOutcome> {
    let extractor = FeatureExtractor::new(config);

    // Quintile cut points come from the training documents.
    let markers: Vec<PsycholingMarkers> = corpus
        .documents
        .iter()
        .map(psycholing_markers)
        .collect();
    let mut doc_cuts = [[0.0; 4]; 6];
    for (i, cuts) in doc_cuts.iter_mut().enumerate() {
        let values: Vec<f64> = markers.iter().map(|m| m.values[i]).collect();
        *cuts = quintile_cuts(&values);
    }

    let mut instances = Vec::new();
    for doc in &corpus.documents {
        let doc_features = extractor.document_features(doc, &doc_cuts);
        for sent in &doc.sentences {
            if sent.is_empty() {
                continue;
            }
            let encoded = encode_bio(sent, &doc.mentions, layer)?;
            let gold: Vec<usize> = encoded.tags.tags.iter().map(|&t| tag_index(t)).collect();
            let features = (0..sent.len())
                .map(|i| extractor.token_features(sent, i, &doc_features))
                .collect();
            instances.push(Instance { features, gold });
        }
    }
    if instances.is_empty() {
        return Err(Error::EmptyInput("no training sentences".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut order: Vec<usize> = (0..instances.len()).collect();
    let mut state = Averaged::new();
    let mut trace = Vec::new();

    for epoch in 1..=params.epochs.max(1) {
        order.shuffle(&mut rng);
        for &idx in &order {
            let instance = &instances[idx];
            state.updates += 1;
            let predicted = viterbi(&instance.features, &state.weights, &state.transitions);
            if predicted == instance.gold {
                continue;
            }
            for (i, feats) in instance.features.iter().enumerate() {
                let gold = instance.gold[i];
                let pred = predicted[i];
                if gold != pred {
                    for feature in feats {
                        state.bump_feature(feature, gold, 1.0);
                        state.bump_feature(feature, pred, -1.0);
                    }
                }
                let prev_gold = if i == 0 { START } else { instance.gold[i - 1] };
                let prev_pred = if i == 0 { START } else { predicted[i - 1] };
                if (prev_gold, gold) != (prev_pred, pred) {
                    state.bump_transition(prev_gold, gold, 1.0);
                    state.bump_transition(prev_pred, pred, -1.0);
                }
            }
        }
        trace.push(epoch_score(
            epoch,
            &instances,
            &state.weights,
            &state.transitions,
            layer,
        )?);
    }

    let (weights, transitions) = state.finalize();
    Ok(TrainOutcome {
        model: TaggerModel {
            version: MODEL_VERSION.to_string(),
            layer,
            weights,
            transitions,
            doc_cuts,
            lexicon_names: extractor.config.lexicon_names(),
            epochs: params.epochs,
            seed: params.seed,
        },
        trace,
    })
}

fn epoch_score(
    epoch: usize,
    instances: &[Instance],
    weights: &Weights,
    transitions: &Transitions,
    layer: Layer,
) -> Result<EpochScore> {
    let to_chunks = |tags: &[usize]| -> Vec<ChunkTag> {
        tags.iter()
            .map(|&t| ChunkTag::from_bio(TAG_BY_INDEX[t], layer))
            .collect()
    };
    let mut gold = Vec::new();
    let mut pred = Vec::new();
    for instance in instances {
        gold.push(to_chunks(&instance.gold));
        pred.push(to_chunks(&viterbi(
            &instance.features,
            weights,
            transitions,
        )));
    }
    let report = chunk_prf(&gold, &pred)?;
    let counts: PrfCounts = report.micro;
    Ok(EpochScore {
        epoch,
        precision: counts.precision(),
        recall: counts.recall(),
        f1: counts.f1(),
    })
}

/// Tag every sentence of a document with a trained model.
pub fn tag_document(
    model: &TaggerModel,
    extractor: &FeatureExtractor,
    doc: &Document,
) -> Vec<TagSequence> {
    let doc_features = extractor.document_features(doc, &model.doc_cuts);
    par::map(&doc.sentences, |sent| {
        let features: Vec<Vec<String>> = (0..sent.len())
            .map(|i| extractor.token_features(sent, i, &doc_features))
            .collect();
        let path = viterbi(&features, &model.weights, &model.transitions);
        TagSequence::new(
            model.layer,
            path.into_iter().map(|t| TAG_BY_INDEX[t]).collect(),
        )
    })
}

/// Tag a whole corpus; returns per-document tag sequences.
pub fn tag_corpus(
    model: &TaggerModel,
    extractor: &FeatureExtractor,
    corpus: &CorpusFile,
) -> Vec<Vec<TagSequence>> {
    corpus
        .documents
        .iter()
        .map(|doc| tag_document(model, extractor, doc))
        .collect()
}

/// Serialize a model as deterministic JSON.
pub fn model_to_string(model: &TaggerModel) -> String {
    let mut out = serde_json::to_string_pretty(model).expect("model serialization cannot fail");
    out.push('\n');
    out
}

pub fn save_model(model: &TaggerModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_string(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TaggerModel> {
    let path = path.as_ref();
    let json = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let model: TaggerModel = serde_json::from_str(&json).map_err(|e| Error::Schema {
        path: path.to_path_buf(),
        pointer: format!("line {}", e.line()),
        message: e.to_string(),
    })?;
    if model.version != MODEL_VERSION {
        return Err(Error::Config(format!(
            "model version {:?} not supported (expected {MODEL_VERSION:?})",
            model.version
        )));
    }
    Ok(model)
}
