//! word2vec text format: a `count dimension` header line followed by one
//! `token v1 ... vdim` row per word, space-separated.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::{Error, Result};

/// Token-to-vector table with a single fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorTable {
    pub dimension: usize,
    entries: HashMap<String, Vec<f64>>,
}

impl VectorTable {
    pub fn new(dimension: usize) -> Self {
        VectorTable {
            dimension,
            entries: HashMap::new(),
        }
    }

    /// Insert a vector; the dimension must match the table's.
    pub fn insert(&mut self, token: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        if vector.len() != self.dimension {
            return Err(Error::Config(format!(
                "vector of dimension {} in a table of dimension {}",
                vector.len(),
                self.dimension
            )));
        }
        self.entries.insert(token.into(), vector);
        Ok(())
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.entries.get(token).map(Vec::as_slice)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains_key(token)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn load_vectors(path: impl AsRef<Path>) -> Result<(VectorTable, Vec<String>)> {
    let path = path.as_ref();
    let input = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_vectors(&input, path)
}

pub fn parse_vectors(input: &str, origin: &Path) -> Result<(VectorTable, Vec<String>)> {
    let mut lines = input.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(origin, 1, "missing header line"))?;
    let mut parts = header.split_whitespace();
    let count: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(origin, 1, "header must be: count dimension"))?;
    let dimension: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(origin, 1, "header must be: count dimension"))?;
    if parts.next().is_some() {
        return Err(Error::parse(origin, 1, "header must be: count dimension"));
    }

    let mut table = VectorTable::new(dimension);
    let mut warnings = Vec::new();
    let mut rows = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let token = fields.next().unwrap();
        let values: Vec<f64> = fields
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::parse(origin, lineno, format!("bad float {v:?}")))
            })
            .collect::<Result<_>>()?;
        if values.len() != dimension {
            return Err(Error::parse(
                origin,
                lineno,
                format!("expected {dimension} components, found {}", values.len()),
            ));
        }
        if table.entries.insert(token.to_string(), values).is_some() {
            warnings.push(format!(
                "{}:{lineno}: duplicate token {token:?}, last vector wins",
                origin.display()
            ));
        }
        rows += 1;
    }

    if rows != count {
        return Err(Error::parse(
            origin,
            1,
            format!("header promises {count} rows, file has {rows}"),
        ));
    }
    Ok((table, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn origin() -> PathBuf {
        PathBuf::from("<test>")
    }

    #[test]
    fn small_table_loads() {
        let input = "2 3\nболь 1.0 0.0 0.5\nгрипп 0.0 1.0 -0.5\n";
        let (table, warnings) = parse_vectors(input, &origin()).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(table.dimension, 3);
        assert_eq!(table.len(), 2);
        assert_eq!(table.get("боль"), Some(&[1.0, 0.0, 0.5][..]));
    }

    #[test]
    fn short_row_errors_with_line() {
        let input = "1 3\nболь 1.0 0.0\n";
        let err = parse_vectors(input, &origin()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn row_count_must_match_header() {
        let input = "3 2\na 1 2\nb 3 4\n";
        assert!(parse_vectors(input, &origin()).is_err());
    }

    #[test]
    fn duplicate_token_warns() {
        let input = "2 1\na 1\na 2\n";
        let (table, warnings) = parse_vectors(input, &origin()).unwrap();
        assert_eq!(warnings.len(), 1);
        assert_eq!(table.get("a"), Some(&[2.0][..]));
    }
}
