//! conlleval-style tag files: one `token gold pred` line per token, single
//! spaces between columns, one blank line after each sentence. Tags are `O`
//! or `B-X`/`I-X` where `X` is the layer label.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::bio::{BioTag, TagSequence};
use crate::model::{Layer, Sentence};
use crate::{Error, Result};

/// A typed chunk tag as it appears in a tag file.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ChunkTag {
    Out,
    Begin(String),
    Inside(String),
}

impl ChunkTag {
    pub fn label(&self) -> Option<&str> {
        match self {
            ChunkTag::Out => None,
            ChunkTag::Begin(x) | ChunkTag::Inside(x) => Some(x),
        }
    }

    pub fn from_bio(tag: BioTag, layer: Layer) -> Self {
        match tag {
            BioTag::O => ChunkTag::Out,
            BioTag::B => ChunkTag::Begin(layer.name().to_string()),
            BioTag::I => ChunkTag::Inside(layer.name().to_string()),
        }
    }
}

impl fmt::Display for ChunkTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChunkTag::Out => f.write_str("O"),
            ChunkTag::Begin(x) => write!(f, "B-{x}"),
            ChunkTag::Inside(x) => write!(f, "I-{x}"),
        }
    }
}

impl FromStr for ChunkTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "O" {
            return Ok(ChunkTag::Out);
        }
        if let Some(x) = s.strip_prefix("B-") {
            if !x.is_empty() {
                return Ok(ChunkTag::Begin(x.to_string()));
            }
        }
        if let Some(x) = s.strip_prefix("I-") {
            if !x.is_empty() {
                return Ok(ChunkTag::Inside(x.to_string()));
            }
        }
        Err(format!("invalid chunk tag {s:?}"))
    }
}

/// Render aligned gold/pred tag sequences as tag-file text.
pub fn tag_file_string(
    sentences: &[Sentence],
    gold: &[TagSequence],
    pred: &[TagSequence],
) -> Result<String> {
    if sentences.len() != gold.len() || sentences.len() != pred.len() {
        return Err(Error::Alignment(format!(
            "{} sentences, {} gold sequences, {} pred sequences",
            sentences.len(),
            gold.len(),
            pred.len()
        )));
    }
    let mut out = String::new();
    for ((sent, g), p) in sentences.iter().zip(gold).zip(pred) {
        if g.tags.len() != sent.len() || p.tags.len() != sent.len() {
            return Err(Error::Alignment(format!(
                "sentence with {} tokens got {} gold and {} pred tags",
                sent.len(),
                g.tags.len(),
                p.tags.len()
            )));
        }
        for (ti, tok) in sent.tokens.iter().enumerate() {
            let gt = ChunkTag::from_bio(g.tags[ti], g.layer);
            let pt = ChunkTag::from_bio(p.tags[ti], p.layer);
            out.push_str(&tok.text);
            out.push(' ');
            out.push_str(&gt.to_string());
            out.push(' ');
            out.push_str(&pt.to_string());
            out.push('\n');
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_tag_file(
    sentences: &[Sentence],
    gold: &[TagSequence],
    pred: &[TagSequence],
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let text = tag_file_string(sentences, gold, pred)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Path for one layer of a multi-layer export: `out.tags` + `ADR` gives
/// `out-ADR.tags`.
pub fn layer_tag_path(base: &Path, layer: Layer) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = base.extension().map(|s| s.to_string_lossy().into_owned());
    let name = match ext {
        Some(ext) => format!("{stem}-{layer}.{ext}"),
        None => format!("{stem}-{layer}"),
    };
    base.with_file_name(name)
}

/// Write one tag file per layer, suffixing the layer name onto `base`.
/// Returns the paths written.
pub fn write_tag_files(
    sentences: &[Sentence],
    per_layer: &[(Layer, Vec<TagSequence>, Vec<TagSequence>)],
    base: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let base = base.as_ref();
    let mut paths = Vec::new();
    for (layer, gold, pred) in per_layer {
        let path = layer_tag_path(base, *layer);
        write_tag_file(sentences, gold, pred, &path)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Parsed tag file: tokens plus one or more tag columns per sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct TagFile {
    pub sentences: Vec<TagFileSentence>,
    pub columns: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TagFileSentence {
    pub tokens: Vec<String>,
    /// `columns[k][i]` is the k-th tag column of token i.
    pub columns: Vec<Vec<ChunkTag>>,
}

impl TagFile {
    /// Extract tag column `k` as per-sentence sequences.
    pub fn column(&self, k: usize) -> Vec<Vec<ChunkTag>> {
        self.sentences
            .iter()
            .map(|s| s.columns[k].clone())
            .collect()
    }
}

pub fn read_tag_file(path: impl AsRef<Path>) -> Result<TagFile> {
    let path = path.as_ref();
    let input = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_tag_file(&input, path)
}

fn parse_tag_file(input: &str, origin: &Path) -> Result<TagFile> {
    let mut sentences = Vec::new();
    let mut ncols: Option<usize> = None;

    let mut tokens: Vec<String> = Vec::new();
    let mut cols: Vec<Vec<ChunkTag>> = Vec::new();

    let mut flush = |tokens: &mut Vec<String>, cols: &mut Vec<Vec<ChunkTag>>| {
        if !tokens.is_empty() {
            sentences.push(TagFileSentence {
                tokens: std::mem::take(tokens),
                columns: std::mem::take(cols),
            });
        }
    };

    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            flush(&mut tokens, &mut cols);
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 {
            return Err(Error::parse(
                origin,
                lineno,
                "expected a token followed by at least one tag",
            ));
        }
        let tag_count = fields.len() - 1;
        match ncols {
            None => {
                ncols = Some(tag_count);
                cols = vec![Vec::new(); tag_count];
            }
            Some(n) if n != tag_count => {
                return Err(Error::parse(
                    origin,
                    lineno,
                    format!("expected {n} tag column(s), found {tag_count}"),
                ));
            }
            _ => {
                if cols.is_empty() {
                    cols = vec![Vec::new(); tag_count];
                }
            }
        }
        tokens.push(fields[0].to_string());
        for (k, field) in fields[1..].iter().enumerate() {
            let tag = field
                .parse::<ChunkTag>()
                .map_err(|e| Error::parse(origin, lineno, e))?;
            cols[k].push(tag);
        }
    }
    flush(&mut tokens, &mut cols);

    Ok(TagFile {
        sentences,
        columns: ncols.unwrap_or(0),
    })
}
