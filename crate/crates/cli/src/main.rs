//! `ner-lab`: corpus validation, format conversion, statistics, agreement,
//! NER and coreference evaluation, surface grouping, concept linking and the
//! baseline tagger, one subcommand each. Reports go to stdout (or `--out`);
//! diagnostics go to stderr. Exit codes: 0 success, 1 validation or
//! evaluation failure, 2 usage error.

mod config;

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ner_lab_core::bio::encode_bio;
use ner_lab_core::evaluate::{
    agreement_average, chunk_prf, round_half_up, AgreementConfig, ChainSet, CorefAccumulator,
    SpanStrictness, TagStrictness,
};
use ner_lab_core::formats::{
    layer_tag_path, load_code_mapping, load_corpus, load_lexicon, load_vectors, read_conllu_with_text,
    read_tag_file, save_corpus, write_tag_file, CorpusFile, Lexicon,
};
use ner_lab_core::linker::{
    link_words, load_concept_pairs, ConceptInventory, LinkMethod, PreprocessConfig,
};
use ner_lab_core::model::{Document, Layer};
use ner_lab_core::normalize::{assign_codes, group_mentions, groups_to_tsv, MentionGroup};
use ner_lab_core::stats::{cooccurrence, corpus_stats, tonality};
use ner_lab_core::tagger::{
    load_model, save_model, tag_document, train, FeatureConfig, FeatureExtractor, TrainParams,
};
use ner_lab_core::{par, Mention};

use config::FileConfig;

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "ner-lab", version, about = "Toolkit for complexly NER-annotated review corpora")]
struct Cli {
    /// TOML config file; explicit flags win over config values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads (0 = all cores); NER_LAB_THREADS is the fallback.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Report format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check a corpus file against every structural invariant.
    Validate {
        corpus: PathBuf,
    },
    /// Convert between the supported formats.
    Convert {
        #[command(subcommand)]
        what: ConvertCommand,
    },
    /// Descriptive corpus statistics; with --rows/--cols also the
    /// co-occurrence matrix and tonality table.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        /// Group report (JSON) for the matrix rows.
        #[arg(long, requires = "cols")]
        rows: Option<PathBuf>,
        /// Group report (JSON) for the matrix columns.
        #[arg(long, requires = "rows")]
        cols: Option<PathBuf>,
        #[arg(long, default_value = "Drugname")]
        row_layer: String,
        #[arg(long, default_value = "SourceInfodrug")]
        col_layer: String,
    },
    /// Pairwise inter-annotator agreement between two annotation files.
    Agreement {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Span strictness: strict | intersection.
        #[arg(long)]
        span: Option<String>,
        /// Tag strictness: strict | ignored.
        #[arg(long)]
        tag: Option<String>,
    },
    /// Chunking precision/recall/F1 over tag files.
    EvalNer {
        /// Two-column file (token gold-tag).
        #[arg(long, requires = "pred", conflicts_with = "file")]
        gold: Option<PathBuf>,
        /// Two-column file (token pred-tag).
        #[arg(long, requires = "gold", conflicts_with = "file")]
        pred: Option<PathBuf>,
        /// Combined three-column file (token gold pred).
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Coreference metrics between the chains of two corpora.
    EvalCoref {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
    },
    /// Group the surface forms of one layer; optionally attach codes.
    Group {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        layer: String,
        #[arg(long)]
        threshold: Option<f64>,
        /// name<TAB>scheme<TAB>code table.
        #[arg(long)]
        mapping: Option<PathBuf>,
    },
    /// Link corpus words to thesaurus concepts.
    Link {
        #[arg(long)]
        corpus: PathBuf,
        /// concept_text<TAB>code inventory.
        #[arg(long)]
        concepts: PathBuf,
        /// CoNLL-U parses of the concept texts, one sentence per concept.
        #[arg(long)]
        concept_parses: Option<PathBuf>,
        /// word2vec text vectors (required for --method cosine).
        #[arg(long)]
        vectors: Option<PathBuf>,
        /// cosine | syntactic.
        #[arg(long)]
        method: String,
        #[arg(long)]
        cosine_threshold: Option<f64>,
        #[arg(long)]
        syntactic_threshold: Option<f64>,
        #[arg(long)]
        min_len: Option<usize>,
    },
    /// Train the baseline tagger for one layer.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        layer: Option<String>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Where to write the trained model.
        #[arg(long)]
        model: PathBuf,
        /// Optional training-log CSV (epoch, layer, P, R, F1).
        #[arg(long)]
        log: Option<PathBuf>,
        #[command(flatten)]
        lexicons: LexiconArgs,
    },
    /// Tag a corpus with a trained model and write a tag file.
    Tag {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        /// Base path for the layer-suffixed tag file.
        #[arg(long)]
        tags_out: Option<PathBuf>,
        /// Also score predictions against the corpus gold mentions.
        #[arg(long)]
        eval: bool,
        #[command(flatten)]
        lexicons: LexiconArgs,
    },
}

#[derive(Debug, Clone, clap::Args)]
struct LexiconArgs {
    /// Emotion dictionary TSV (repeatable).
    #[arg(long = "emotion-lexicon", value_name = "FILE")]
    emotion: Vec<PathBuf>,
    /// Category dictionary TSV, e.g. a medication handbook (repeatable).
    #[arg(long = "category-lexicon", value_name = "FILE")]
    category: Vec<PathBuf>,
    /// word<TAB>code table of concept links.
    #[arg(long = "concept-map", value_name = "FILE")]
    concept_map: Option<PathBuf>,
    /// Look dictionary words up by lemma instead of surface form.
    #[arg(long)]
    use_lemma: bool,
}

#[derive(Subcommand)]
enum ConvertCommand {
    /// Corpus -> one conlleval tag file per layer (gold mirrored as pred).
    Tags {
        #[arg(long)]
        corpus: PathBuf,
        /// Base path; each file gets a -<layer> suffix.
        #[arg(long)]
        base: PathBuf,
        /// Layers to export (default: every layer with mentions).
        #[arg(long = "layer")]
        layers: Vec<String>,
    },
    /// CoNLL-U parse -> a single-document corpus file.
    Parses {
        #[arg(long)]
        conllu: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        doc_id: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// Effective settings echoed into machine-readable reports.
#[derive(Serialize)]
struct Envelope<T: Serialize> {
    tool_version: &'static str,
    command: &'static str,
    config: serde_json::Value,
    report: T,
}

fn emit<T: Serialize>(
    out: &Option<PathBuf>,
    format: Format,
    command: &'static str,
    effective: serde_json::Value,
    report: &T,
    text: impl FnOnce() -> String,
) -> anyhow::Result<()> {
    let rendered = match format {
        Format::Json => {
            let envelope = Envelope {
                tool_version: TOOL_VERSION,
                command,
                config: effective,
                report,
            };
            let mut s = serde_json::to_string_pretty(&envelope)?;
            s.push('\n');
            s
        }
        _ => text(),
    };
    write_output(out, &rendered)
}

fn write_output(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn parse_layer(name: &str) -> anyhow::Result<Layer> {
    Layer::from_str(name).map_err(|e| anyhow!(e))
}

fn load_groups(path: &Path) -> anyhow::Result<Vec<MentionGroup>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading groups {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing groups {}", path.display()))?;
    let groups = if value.is_array() {
        value
    } else if let Some(inner) = value.pointer("/report/groups") {
        inner.clone()
    } else if let Some(inner) = value.get("groups") {
        inner.clone()
    } else {
        bail!("{}: expected a group array or a group report", path.display());
    };
    Ok(serde_json::from_value(groups)?)
}

fn load_lexicons(paths: &[PathBuf]) -> anyhow::Result<Vec<Lexicon>> {
    let mut lexicons = Vec::new();
    for path in paths {
        let (lexicon, warnings) = load_lexicon(path)?;
        for warning in warnings {
            eprintln!("warning: {warning}");
        }
        lexicons.push(lexicon);
    }
    Ok(lexicons)
}

fn feature_config(args: &LexiconArgs) -> anyhow::Result<FeatureConfig> {
    let mut concept_codes = HashMap::new();
    if let Some(path) = &args.concept_map {
        for (word, code) in load_concept_pairs(path)? {
            concept_codes.insert(word.to_lowercase(), code);
        }
    }
    Ok(FeatureConfig {
        emotion_lexicons: load_lexicons(&args.emotion)?,
        category_lexicons: load_lexicons(&args.category)?,
        concept_codes,
        use_lemma: args.use_lemma,
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let file_config = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };

    let threads = cli
        .threads
        .or(file_config.threads)
        .or_else(|| {
            std::env::var("NER_LAB_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    if threads > 0 {
        if let Err(e) = par::configure_threads(threads) {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }

    let format = cli
        .format
        .or_else(|| match file_config.format.as_deref() {
            Some("text") => Some(Format::Text),
            Some("json") => Some(Format::Json),
            Some("csv") => Some(Format::Csv),
            Some(other) => {
                eprintln!("warning: unknown format {other:?} in config, using text");
                None
            }
            None => None,
        })
        .unwrap_or(Format::Text);

    let out = cli.out;

    match cli.command {
        Command::Validate { corpus } => cmd_validate(&corpus, &out, format, threads),
        Command::Convert { what } => cmd_convert(what, &out),
        Command::Stats {
            corpus,
            rows,
            cols,
            row_layer,
            col_layer,
        } => cmd_stats(&corpus, rows, cols, &row_layer, &col_layer, &out, format, threads),
        Command::Agreement { a, b, span, tag } => {
            let span = span
                .or(file_config.agreement.span)
                .unwrap_or_else(|| "strict".into());
            let tag = tag
                .or(file_config.agreement.tag)
                .unwrap_or_else(|| "strict".into());
            cmd_agreement(&a, &b, &span, &tag, &out, format, threads)
        }
        Command::EvalNer { gold, pred, file } => cmd_eval_ner(gold, pred, file, &out, format, threads),
        Command::EvalCoref { gold, pred } => cmd_eval_coref(&gold, &pred, &out, format, threads),
        Command::Group {
            corpus,
            layer,
            threshold,
            mapping,
        } => {
            let threshold = threshold.or(file_config.group.threshold).unwrap_or(0.8);
            cmd_group(&corpus, &layer, threshold, mapping, &out, format, threads)
        }
        Command::Link {
            corpus,
            concepts,
            concept_parses,
            vectors,
            method,
            cosine_threshold,
            syntactic_threshold,
            min_len,
        } => {
            let cosine_threshold = cosine_threshold
                .or(file_config.link.cosine_threshold)
                .unwrap_or(ner_lab_core::linker::DEFAULT_COSINE_THRESHOLD);
            let syntactic_threshold = syntactic_threshold
                .or(file_config.link.syntactic_threshold)
                .unwrap_or(ner_lab_core::linker::DEFAULT_SYNTACTIC_THRESHOLD);
            let min_len = min_len.or(file_config.link.min_len).unwrap_or(1);
            cmd_link(
                &corpus,
                &concepts,
                concept_parses,
                vectors,
                &method,
                cosine_threshold,
                syntactic_threshold,
                min_len,
                &out,
                format,
                threads,
            )
        }
        Command::Train {
            corpus,
            layer,
            epochs,
            seed,
            model,
            log,
            lexicons,
        } => {
            let layer = layer
                .or(file_config.train.layer)
                .ok_or_else(|| anyhow!("--layer is required (or set [train] layer in the config)"))?;
            let epochs = epochs.or(file_config.train.epochs).unwrap_or(10);
            let seed = seed.or(file_config.train.seed).unwrap_or(42);
            cmd_train(&corpus, &layer, epochs, seed, &model, log, &lexicons, &out, format, threads)
        }
        Command::Tag {
            model,
            corpus,
            tags_out,
            eval,
            lexicons,
        } => cmd_tag(&model, &corpus, tags_out, eval, &lexicons, &out, format, threads),
    }
}

// ============================================================================
// Subcommand bodies
// ============================================================================

fn cmd_validate(
    corpus_path: &Path,
    out: &Option<PathBuf>,
    format: Format,
    threads: usize,
) -> anyhow::Result<ExitCode> {
    #[derive(Serialize)]
    struct Report {
        file: String,
        documents: usize,
        mentions: usize,
        chains: usize,
        issues: Vec<String>,
    }

    let render = |r: &Report| {
        if r.issues.is_empty() {
            format!(
                "{}: OK ({} documents, {} mentions, {} chains)\n",
                r.file, r.documents, r.mentions, r.chains
            )
        } else {
            let mut s = format!("{}: {} issue(s)\n", r.file, r.issues.len());
            for issue in &r.issues {
                s.push_str(&format!("  {issue}\n"));
            }
            s
        }
    };

    let effective = serde_json::json!({ "corpus": corpus_path, "threads": threads });
    match load_corpus(corpus_path) {
        Ok(corpus) => {
            let report = Report {
                file: corpus_path.display().to_string(),
                documents: corpus.documents.len(),
                mentions: corpus.documents.iter().map(|d| d.mentions.len()).sum(),
                chains: corpus.documents.iter().map(|d| d.chains.len()).sum(),
                issues: Vec::new(),
            };
            emit(out, format, "validate", effective, &report, || render(&report))?;
            Ok(ExitCode::SUCCESS)
        }
        Err(ner_lab_core::Error::Validation(issues)) => {
            let report = Report {
                file: corpus_path.display().to_string(),
                documents: 0,
                mentions: 0,
                chains: 0,
                issues: issues.iter().map(|i| i.to_string()).collect(),
            };
            emit(out, format, "validate", effective, &report, || render(&report))?;
            Ok(ExitCode::from(1))
        }
        Err(other) => Err(other.into()),
    }
}

fn cmd_convert(what: ConvertCommand, _out: &Option<PathBuf>) -> anyhow::Result<ExitCode> {
    match what {
        ConvertCommand::Tags {
            corpus,
            base,
            layers,
        } => {
            let corpus = load_corpus(&corpus)?;
            let layers: Vec<Layer> = if layers.is_empty() {
                Layer::all()
                    .into_iter()
                    .filter(|layer| {
                        corpus
                            .documents
                            .iter()
                            .any(|d| d.mentions_on(*layer).next().is_some())
                    })
                    .collect()
            } else {
                layers
                    .iter()
                    .map(|l| parse_layer(l))
                    .collect::<anyhow::Result<_>>()?
            };

            let mut sentences = Vec::new();
            for doc in &corpus.documents {
                sentences.extend(doc.sentences.iter().cloned());
            }
            for layer in layers {
                let mut gold = Vec::new();
                for doc in &corpus.documents {
                    for sent in &doc.sentences {
                        let encoded = encode_bio(sent, &doc.mentions, layer)?;
                        for warning in &encoded.warnings {
                            eprintln!("warning: {}: {warning}", doc.id);
                        }
                        gold.push(encoded.tags);
                    }
                }
                let path = layer_tag_path(&base, layer);
                write_tag_file(&sentences, &gold, &gold, &path)?;
                eprintln!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        ConvertCommand::Parses { conllu, to, doc_id } => {
            let (sentences, text) = read_conllu_with_text(&conllu)?;
            let id = doc_id.unwrap_or_else(|| {
                conllu
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "doc".into())
            });
            let mut doc = Document::new(id, text);
            doc.sentences = sentences;
            save_corpus(&CorpusFile::new(vec![doc]), &to)?;
            eprintln!("wrote {}", to.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_stats(
    corpus_path: &Path,
    rows: Option<PathBuf>,
    cols: Option<PathBuf>,
    row_layer: &str,
    col_layer: &str,
    out: &Option<PathBuf>,
    format: Format,
    threads: usize,
) -> anyhow::Result<ExitCode> {
    #[derive(Serialize)]
    struct Report {
        stats: ner_lab_core::stats::CorpusStats,
        #[serde(skip_serializing_if = "Option::is_none")]
        cooccurrence: Option<ner_lab_core::stats::CooccurrenceMatrix>,
        #[serde(skip_serializing_if = "Option::is_none")]
        tonality: Option<BTreeMap<String, ner_lab_core::stats::TonalityCounts>>,
    }

    let corpus = load_corpus(corpus_path)?;
    let stats = corpus_stats(&corpus)?;

    let mut report = Report {
        stats,
        cooccurrence: None,
        tonality: None,
    };
    if let (Some(rows_path), Some(cols_path)) = (&rows, &cols) {
        let row_groups = load_groups(rows_path)?;
        let col_groups = load_groups(cols_path)?;
        let row_layer = parse_layer(row_layer)?;
        let col_layer = parse_layer(col_layer)?;
        report.cooccurrence = Some(cooccurrence(
            &corpus, row_layer, &row_groups, col_layer, &col_groups,
        )?);
        report.tonality = Some(tonality(&corpus, col_layer, &col_groups)?);
    }

    let effective = serde_json::json!({
        "corpus": corpus_path,
        "rows": rows,
        "cols": cols,
        "row_layer": row_layer,
        "col_layer": col_layer,
        "threads": threads,
        "format": format,
    });

    if format == Format::Csv {
        let matrix = report
            .cooccurrence
            .as_ref()
            .ok_or_else(|| anyhow!("--format csv needs --rows and --cols"))?;
        write_output(out, &matrix.to_csv())?;
        return Ok(ExitCode::SUCCESS);
    }

    emit(out, format, "stats", effective, &report, || {
        let mut text = report.stats.render_text();
        if let Some(matrix) = &report.cooccurrence {
            text.push_str("\nco-occurrence (% of row-group documents):\n");
            text.push_str(&matrix.to_csv());
        }
        if let Some(tonality) = &report.tonality {
            text.push_str("\nsource               positive  negative  neutral/mixed  total\n");
            for (source, counts) in tonality {
                text.push_str(&format!(
                    "{source:<20} {:>8}  {:>8}  {:>13}  {:>5}\n",
                    counts.positive, counts.negative, counts.neutral_or_mixed, counts.total
                ));
            }
        }
        text
    })?;
    Ok(ExitCode::SUCCESS)
}

fn annotator_map(corpus: &CorpusFile) -> BTreeMap<String, Vec<Mention>> {
    corpus
        .documents
        .iter()
        .map(|d| (d.id.clone(), d.mentions.clone()))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_agreement(
    a: &Path,
    b: &Path,
    span: &str,
    tag: &str,
    out: &Option<PathBuf>,
    format: Format,
    threads: usize,
) -> anyhow::Result<ExitCode> {
    let cfg = AgreementConfig {
        span: SpanStrictness::from_str(span).map_err(|e| anyhow!(e))?,
        tag: TagStrictness::from_str(tag).map_err(|e| anyhow!(e))?,
    };
    let corpus_a = load_corpus(a)?;
    let corpus_b = load_corpus(b)?;

    let mut annotations = BTreeMap::new();
    annotations.insert("a".to_string(), annotator_map(&corpus_a));
    annotations.insert("b".to_string(), annotator_map(&corpus_b));
    let report = agreement_average(&annotations, cfg)?;

    let effective = serde_json::json!({
        "a": a, "b": b, "span": span, "tag": tag, "threads": threads,
    });
    emit(out, format, "agreement", effective, &report, || {
        let mut text = format!("agreement: {:.1}\n", round_half_up(report.overall, 1));
        for pair in &report.pairs {
            text.push_str(&format!(
                "  {} vs {}: {:.1} over {} document(s)\n",
                pair.annotators.0,
                pair.annotators.1,
                round_half_up(pair.score, 1),
                pair.documents
            ));
        }
        text
    })?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval_ner(
    gold: Option<PathBuf>,
    pred: Option<PathBuf>,
    file: Option<PathBuf>,
    out: &Option<PathBuf>,
    format: Format,
    threads: usize,
) -> anyhow::Result<ExitCode> {
    let (gold_cols, pred_cols, effective) = match (&gold, &pred, &file) {
        (Some(gold_path), Some(pred_path), None) => {
            let g = read_tag_file(gold_path)?;
            let p = read_tag_file(pred_path)?;
            for (i, (gs, ps)) in g.sentences.iter().zip(&p.sentences).enumerate() {
                if gs.tokens != ps.tokens {
                    eprintln!("warning: sentence {i}: token texts differ between files");
                }
            }
            (
                g.column(0),
                p.column(0),
                serde_json::json!({ "gold": gold_path, "pred": pred_path, "threads": threads }),
            )
        }
        (None, None, Some(path)) => {
            let f = read_tag_file(path)?;
            if f.columns < 2 {
                bail!(
                    "{}: a combined tag file needs gold and pred columns",
                    path.display()
                );
            }
            (
                f.column(0),
                f.column(1),
                serde_json::json!({ "file": path, "threads": threads }),
            )
        }
        _ => bail!("pass either --gold and --pred, or --file"),
    };

    let report = chunk_prf(&gold_cols, &pred_cols)?;
    emit(out, format, "eval-ner", effective, &report, || report.to_string())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval_coref(
    gold: &Path,
    pred: &Path,
    out: &Option<PathBuf>,
    format: Format,
    threads: usize,
) -> anyhow::Result<ExitCode> {
    let gold_corpus = load_corpus(gold)?;
    let pred_corpus = load_corpus(pred)?;

    let pred_by_id: BTreeMap<&str, &Document> = pred_corpus
        .documents
        .iter()
        .map(|d| (d.id.as_str(), d))
        .collect();

    let empty = ChainSet::new(Vec::new()).expect("empty chain set is valid");
    let mut accumulator = CorefAccumulator::default();
    let mut documents = 0usize;
    for doc in &gold_corpus.documents {
        let gold_chains = ChainSet::from_document(doc)?;
        let pred_chains = match pred_by_id.get(doc.id.as_str()) {
            Some(pred_doc) => ChainSet::from_document(pred_doc)?,
            None => empty.clone(),
        };
        accumulator.add(&gold_chains, &pred_chains);
        documents += 1;
    }
    for doc in &pred_corpus.documents {
        if !gold_corpus.documents.iter().any(|g| g.id == doc.id) {
            let pred_chains = ChainSet::from_document(doc)?;
            accumulator.add(&empty, &pred_chains);
        }
    }
    let scores = accumulator.finish();

    #[derive(Serialize)]
    struct Report {
        documents: usize,
        #[serde(flatten)]
        scores: ner_lab_core::evaluate::CorefScores,
    }
    let report = Report { documents, scores };

    let effective = serde_json::json!({ "gold": gold, "pred": pred, "threads": threads });
    emit(out, format, "eval-coref", effective, &report, || {
        let r = |x: f64| round_half_up(x, 1);
        let mut text = format!("{:<7} {:>9}  {:>6}  {:>6}\n", "metric", "precision", "recall", "f1");
        for (name, prf) in [
            ("MUC", scores.muc),
            ("B3", scores.b3),
            ("CEAFe", scores.ceafe),
        ] {
            text.push_str(&format!(
                "{name:<7} {:>9.1}  {:>6.1}  {:>6.1}\n",
                r(prf.precision),
                r(prf.recall),
                r(prf.f1)
            ));
        }
        text.push_str(&format!("avg F1: {:.1}\n", r(scores.avg_f1)));
        text
    })?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_group(
    corpus_path: &Path,
    layer: &str,
    threshold: f64,
    mapping: Option<PathBuf>,
    out: &Option<PathBuf>,
    format: Format,
    threads: usize,
) -> anyhow::Result<ExitCode> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        bail!("--threshold must be in (0, 1], got {threshold}");
    }
    let corpus = load_corpus(corpus_path)?;
    let layer = parse_layer(layer)?;

    // Surfaces in corpus document order keep grouping reproducible.
    let mut surfaces = Vec::new();
    for doc in &corpus.documents {
        for mention in doc.mentions_on(layer) {
            surfaces.push(mention.surface(&doc.text));
        }
    }
    let mut groups = group_mentions(&surfaces, threshold);
    if let Some(mapping_path) = &mapping {
        let (mapping, warnings) = load_code_mapping(mapping_path)?;
        for warning in warnings {
            eprintln!("warning: {warning}");
        }
        assign_codes(&mut groups, &mapping);
    }

    #[derive(Serialize)]
    struct Report {
        layer: String,
        threshold: f64,
        surfaces: usize,
        groups: Vec<MentionGroup>,
    }
    let report = Report {
        layer: layer.to_string(),
        threshold,
        surfaces: surfaces.len(),
        groups,
    };

    let effective = serde_json::json!({
        "corpus": corpus_path, "layer": report.layer, "threshold": threshold,
        "mapping": mapping, "threads": threads,
    });
    emit(out, format, "group", effective, &report, || {
        groups_to_tsv(&report.groups)
    })?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_link(
    corpus_path: &Path,
    concepts: &Path,
    concept_parses: Option<PathBuf>,
    vectors: Option<PathBuf>,
    method: &str,
    cosine_threshold: f64,
    syntactic_threshold: f64,
    min_len: usize,
    out: &Option<PathBuf>,
    format: Format,
    threads: usize,
) -> anyhow::Result<ExitCode> {
    let method = LinkMethod::from_str(method).map_err(|e| anyhow!(e))?;
    let corpus = load_corpus(corpus_path)?;
    let pairs = load_concept_pairs(concepts)?;

    let parses = match &concept_parses {
        Some(path) => Some(ner_lab_core::formats::read_conllu(path)?),
        None => None,
    };
    let table = match &vectors {
        Some(path) => {
            let (table, warnings) = load_vectors(path)?;
            for warning in warnings {
                eprintln!("warning: {warning}");
            }
            Some(table)
        }
        None => None,
    };

    let pre = PreprocessConfig {
        min_len,
        frequency: None,
    };
    let inventory = ConceptInventory::build(&pairs, parses.as_deref(), table.as_ref(), &pre)?;

    let mut sentences = Vec::new();
    for doc in &corpus.documents {
        sentences.extend(doc.sentences.iter().cloned());
    }
    let threshold = match method {
        LinkMethod::Cosine => cosine_threshold,
        LinkMethod::Syntactic => syntactic_threshold,
    };
    let links = link_words(&sentences, &inventory, table.as_ref(), method, threshold, &pre)?;

    #[derive(Serialize)]
    struct Report {
        concepts: usize,
        candidate_sentences: usize,
        links: Vec<ner_lab_core::linker::WordLink>,
    }
    let report = Report {
        concepts: inventory.concepts.len(),
        candidate_sentences: sentences.len(),
        links,
    };

    let effective = serde_json::json!({
        "corpus": corpus_path, "concepts": concepts, "concept_parses": concept_parses,
        "vectors": vectors, "method": method, "cosine_threshold": cosine_threshold,
        "syntactic_threshold": syntactic_threshold, "min_len": min_len, "threads": threads,
    });
    emit(out, format, "link", effective, &report, || {
        let mut text = String::new();
        for link in &report.links {
            text.push_str(&format!(
                "{}\t{}\t{:.4}\t{:?}\n",
                link.word,
                link.code,
                link.score,
                link.method
            ));
        }
        text
    })?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_train(
    corpus_path: &Path,
    layer: &str,
    epochs: usize,
    seed: u64,
    model_path: &Path,
    log: Option<PathBuf>,
    lexicons: &LexiconArgs,
    out: &Option<PathBuf>,
    format: Format,
    threads: usize,
) -> anyhow::Result<ExitCode> {
    let corpus = load_corpus(corpus_path)?;
    let layer = parse_layer(layer)?;
    let config = feature_config(lexicons)?;
    let outcome = train(&corpus, layer, TrainParams { epochs, seed }, config)?;
    save_model(&outcome.model, model_path)?;
    eprintln!("wrote {}", model_path.display());
    if let Some(log_path) = &log {
        std::fs::write(log_path, outcome.trace_csv())
            .with_context(|| format!("writing {}", log_path.display()))?;
        eprintln!("wrote {}", log_path.display());
    }

    #[derive(Serialize)]
    struct Report {
        layer: String,
        epochs: usize,
        seed: u64,
        features: usize,
        trace: Vec<ner_lab_core::tagger::EpochScore>,
    }
    let report = Report {
        layer: layer.to_string(),
        epochs,
        seed,
        features: outcome.model.weights.len(),
        trace: outcome.trace.clone(),
    };

    let effective = serde_json::json!({
        "corpus": corpus_path, "layer": report.layer, "epochs": epochs, "seed": seed,
        "model": model_path, "threads": threads,
    });
    emit(out, format, "train", effective, &report, || {
        let mut text = format!(
            "trained {} on {} ({} features)\n",
            report.layer, corpus_path.display(), report.features
        );
        for score in &report.trace {
            text.push_str(&format!(
                "epoch {:>3}: P = {:.1}, R = {:.1}, F1 = {:.1}\n",
                score.epoch,
                round_half_up(score.precision, 1),
                round_half_up(score.recall, 1),
                round_half_up(score.f1, 1)
            ));
        }
        text
    })?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_tag(
    model_path: &Path,
    corpus_path: &Path,
    tags_out: Option<PathBuf>,
    eval: bool,
    lexicons: &LexiconArgs,
    out: &Option<PathBuf>,
    format: Format,
    threads: usize,
) -> anyhow::Result<ExitCode> {
    let model = load_model(model_path)?;
    let corpus = load_corpus(corpus_path)?;
    let config = feature_config(lexicons)?;
    if model.lexicon_names != config.lexicon_names() {
        eprintln!(
            "warning: model was trained with lexicons {:?}, tagging with {:?}",
            model.lexicon_names,
            config.lexicon_names()
        );
    }
    let extractor = FeatureExtractor::new(config);

    let mut sentences = Vec::new();
    let mut gold = Vec::new();
    let mut pred = Vec::new();
    for doc in &corpus.documents {
        let tagged = tag_document(&model, &extractor, doc);
        for (sent, seq) in doc.sentences.iter().zip(tagged) {
            let encoded = encode_bio(sent, &doc.mentions, model.layer)?;
            sentences.push(sent.clone());
            gold.push(encoded.tags);
            pred.push(seq);
        }
    }

    if let Some(base) = &tags_out {
        let path = layer_tag_path(base, model.layer);
        write_tag_file(&sentences, &gold, &pred, &path)?;
        eprintln!("wrote {}", path.display());
    }

    let effective = serde_json::json!({
        "model": model_path, "corpus": corpus_path, "layer": model.layer.to_string(),
        "tags_out": tags_out, "eval": eval, "threads": threads,
    });
    if eval {
        let to_cols = |seqs: &[ner_lab_core::bio::TagSequence]| {
            seqs.iter()
                .map(|s| {
                    s.tags
                        .iter()
                        .map(|&t| ner_lab_core::formats::ChunkTag::from_bio(t, s.layer))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        };
        let report = chunk_prf(&to_cols(&gold), &to_cols(&pred))?;
        emit(out, format, "tag", effective, &report, || report.to_string())?;
    } else {
        #[derive(Serialize)]
        struct Report {
            layer: String,
            sentences: usize,
        }
        let report = Report {
            layer: model.layer.to_string(),
            sentences: sentences.len(),
        };
        emit(out, format, "tag", effective, &report, || {
            format!("tagged {} sentence(s) on {}\n", report.sentences, report.layer)
        })?;
    }
    Ok(ExitCode::SUCCESS)
}
