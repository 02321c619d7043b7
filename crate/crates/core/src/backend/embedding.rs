use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use super::{BackendError, WordSimilarity};
use crate::error::{Error, Result};

/// Cosine similarity over a static word-vector table, clamped to `[0, 1]`.
///
/// Reads the plain-text vector format (`word v1 v2 ...` per line). A leading
/// `<count> <dim>` header line, as written by word2vec and fastText, is skipped.
#[derive(Debug, Clone, Default)]
pub struct EmbeddingSimilarity {
    vectors: HashMap<String, Vec<f32>>,
    dim: usize,
}

impl EmbeddingSimilarity {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file))
    }

    pub fn from_reader(reader: impl BufRead) -> Result<Self> {
        let mut vectors = HashMap::new();
        let mut dim = 0;
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let mut parts = line.split_whitespace();
            let Some(word) = parts.next() else { continue };
            let values: Vec<&str> = parts.collect();
            if lineno == 0 && values.len() == 1 && word.parse::<usize>().is_ok() {
                continue;
            }
            let vector = values
                .iter()
                .map(|v| v.parse::<f32>())
                .collect::<std::result::Result<Vec<f32>, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            if vector.is_empty() {
                return Err(Error::Parse(format!(
                    "line {}: no vector components",
                    lineno + 1
                )));
            }
            if dim == 0 {
                dim = vector.len();
            } else if vector.len() != dim {
                return Err(Error::Parse(format!(
                    "line {}: expected {dim} components, found {}",
                    lineno + 1,
                    vector.len()
                )));
            }
            vectors.insert(word.to_lowercase(), vector);
        }
        Ok(Self { vectors, dim })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn lookup(&self, word: &str) -> Option<&[f32]> {
        self.vectors
            .get(word)
            .or_else(|| self.vectors.get(&word.to_lowercase()))
            .map(Vec::as_slice)
    }
}

impl WordSimilarity for EmbeddingSimilarity {
    fn similarity(&self, a: &str, b: &str) -> std::result::Result<f64, BackendError> {
        if a == b {
            return Ok(1.0);
        }
        let (Some(va), Some(vb)) = (self.lookup(a), self.lookup(b)) else {
            return Ok(0.0);
        };
        let mut dot = 0.0f64;
        let mut na = 0.0f64;
        let mut nb = 0.0f64;
        for (&x, &y) in va.iter().zip(vb) {
            let (x, y) = (f64::from(x), f64::from(y));
            dot += x * y;
            na += x * x;
            nb += y * y;
        }
        if na == 0.0 || nb == 0.0 {
            return Ok(0.0);
        }
        Ok((dot / (na.sqrt() * nb.sqrt())).clamp(0.0, 1.0))
    }
}
