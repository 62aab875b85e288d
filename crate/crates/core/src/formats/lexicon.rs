//! Lexicon TSVs (`term<TAB>category`) and code-mapping TSVs
//! (`name<TAB>scheme<TAB>code`). Keys are lowercase-normalized; duplicate
//! keys keep the last entry and emit a warning.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::model::Code;
use crate::{Error, Result};

/// A named dictionary mapping lowercased surface terms to category labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    pub name: String,
    pub entries: BTreeMap<String, String>,
}

impl Lexicon {
    pub fn new(name: impl Into<String>) -> Self {
        Lexicon {
            name: name.into(),
            entries: BTreeMap::new(),
        }
    }

    pub fn contains(&self, term: &str) -> bool {
        self.entries.contains_key(&term.to_lowercase())
    }

    pub fn category_of(&self, term: &str) -> Option<&str> {
        self.entries.get(&term.to_lowercase()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Load a two-column lexicon. The lexicon name is the file stem.
pub fn load_lexicon(path: impl AsRef<Path>) -> Result<(Lexicon, Vec<String>)> {
    let path = path.as_ref();
    let input = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "lexicon".to_string());

    let mut lexicon = Lexicon::new(name);
    let mut warnings = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.splitn(2, '\t');
        let term = parts.next().unwrap_or("").trim();
        let category = parts
            .next()
            .ok_or_else(|| Error::parse(path, lineno, "expected term<TAB>category"))?
            .trim();
        if term.is_empty() {
            return Err(Error::parse(path, lineno, "empty term"));
        }
        let key = term.to_lowercase();
        if lexicon.entries.insert(key.clone(), category.to_string()).is_some() {
            warnings.push(format!(
                "{}:{lineno}: duplicate term {key:?}, last entry wins",
                path.display()
            ));
        }
    }
    Ok((lexicon, warnings))
}

/// Group-name to code(s) table used when applying normalization codes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodeMapping {
    pub entries: BTreeMap<String, Vec<Code>>,
}

impl CodeMapping {
    pub fn codes_for(&self, name: &str) -> &[Code] {
        self.entries
            .get(&name.to_lowercase())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// Load a three-column `name<TAB>scheme<TAB>code` mapping. One name may
/// carry codes in several schemes (one line each); an exact duplicate
/// (name, scheme) pair keeps the last code and warns.
pub fn load_code_mapping(path: impl AsRef<Path>) -> Result<(CodeMapping, Vec<String>)> {
    let path = path.as_ref();
    let input = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;

    let mut mapping = CodeMapping::default();
    let mut warnings = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(Error::parse(
                path,
                lineno,
                format!("expected name<TAB>scheme<TAB>code, found {} column(s)", cols.len()),
            ));
        }
        let name = cols[0].trim().to_lowercase();
        if name.is_empty() {
            return Err(Error::parse(path, lineno, "empty name"));
        }
        let scheme = cols[1]
            .trim()
            .parse()
            .map_err(|e: String| Error::parse(path, lineno, e))?;
        let code = Code {
            scheme,
            code: cols[2].trim().to_string(),
        };
        let codes = mapping.entries.entry(name.clone()).or_default();
        if let Some(existing) = codes.iter_mut().find(|c| c.scheme == scheme) {
            warnings.push(format!(
                "{}:{lineno}: duplicate mapping for {name:?} in scheme {scheme}, last wins",
                path.display()
            ));
            *existing = code;
        } else {
            codes.push(code);
        }
    }
    Ok((mapping, warnings))
}
