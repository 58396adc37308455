//! Pre-trained word vectors and the averaged vectors built from them:
//! gloss vectors, usage-example vectors and token context vectors.

use std::collections::{HashMap, HashSet};
use std::ops::Range;
use std::path::Path;

use log::warn;

use crate::error::{read_to_string, Error, Result};
use crate::lexicon::Sense;
use crate::vector;

const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// Read-only token → vector map plus the stopword set applied when averaging.
#[derive(Debug, Clone)]
pub struct EmbeddingStore {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
    stopwords: HashSet<String>,
}

impl EmbeddingStore {
    /// Builds a store with no stopwords.
    pub fn new(dim: usize, vectors: HashMap<String, Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput(
                "embedding dimension must be positive".into(),
            ));
        }
        for (token, v) in &vectors {
            if v.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "vector for `{token}` has {} values, expected {dim}",
                    v.len()
                )));
            }
        }
        Ok(EmbeddingStore {
            dim,
            vectors,
            stopwords: HashSet::new(),
        })
    }

    pub fn with_stopwords(mut self, stopwords: HashSet<String>) -> Self {
        self.stopwords = stopwords;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.vectors.get(token).map(Vec::as_slice)
    }

    pub fn is_stopword(&self, token: &str) -> bool {
        self.stopwords.contains(token)
    }

    pub fn stopwords(&self) -> &HashSet<String> {
        &self.stopwords
    }
}

/// Averaging window: `window / 2` tokens on each side of the focus word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContextSpec {
    window: usize,
}

impl ContextSpec {
    pub fn new(window: usize) -> Result<Self> {
        if window < 2 || !window.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "context window must be even and at least 2, got {window}"
            )));
        }
        Ok(ContextSpec { window })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn half(&self) -> usize {
        self.window / 2
    }

    /// Left and right index ranges around `index` in a sequence of `len`
    /// tokens, clipped at the boundaries. The focus token is in neither.
    pub fn neighborhood(&self, len: usize, index: usize) -> (Range<usize>, Range<usize>) {
        let left = index.saturating_sub(self.half())..index;
        let right = (index + 1).min(len)..(index + 1 + self.half()).min(len);
        (left, right)
    }
}

impl Default for ContextSpec {
    fn default() -> Self {
        ContextSpec { window: 8 }
    }
}

pub fn parse_embeddings(text: &str) -> Result<EmbeddingStore> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .peekable();

    let mut declared: Option<(usize, usize)> = None;
    if let Some((_, first)) = lines.peek() {
        let fields: Vec<&str> = first.split_whitespace().collect();
        if let [n, d] = fields[..] {
            if let (Ok(n), Ok(d)) = (n.parse::<usize>(), d.parse::<usize>()) {
                declared = Some((n, d));
                lines.next();
            }
        }
    }

    let mut dim = declared.map(|(_, d)| d);
    if dim == Some(0) {
        return Err(Error::parse(1, "header declares dimension 0"));
    }
    let mut vectors: HashMap<String, Vec<f64>> = HashMap::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let mut fields = line.split_whitespace();
        let token = fields.next().expect("non-blank line has a field");
        let mut values = Vec::new();
        for (j, field) in fields.enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                Error::parse_at(
                    line_no,
                    j + 2,
                    format!("`{field}` is not a number (token `{token}`)"),
                )
            })?;
            if !v.is_finite() {
                return Err(Error::parse_at(
                    line_no,
                    j + 2,
                    format!("non-finite value `{field}` (token `{token}`)"),
                ));
            }
            values.push(v);
        }
        let expected = *dim.get_or_insert(values.len());
        if expected == 0 {
            return Err(Error::parse(
                line_no,
                format!("token `{token}` has no values"),
            ));
        }
        if values.len() != expected {
            return Err(Error::parse(
                line_no,
                format!(
                    "token `{token}` has {} values, expected {expected}",
                    values.len()
                ),
            ));
        }
        if vectors.contains_key(token) {
            warn!("embedding line {line_no}: duplicate token `{token}`, keeping the first");
            continue;
        }
        vectors.insert(token.to_string(), values);
    }

    if let Some((n, _)) = declared {
        if n != vectors.len() {
            warn!(
                "embedding header declares {n} rows, found {}",
                vectors.len()
            );
        }
    }
    let dim = dim.ok_or_else(|| Error::parse(1, "no vectors and no header"))?;
    EmbeddingStore::new(dim, vectors)
}

pub fn load_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingStore> {
    parse_embeddings(&read_to_string(path.as_ref())?)
}

/// One token per line; blank lines and lines starting with `#` are skipped.
pub fn parse_stopwords(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

pub fn load_stopwords(path: impl AsRef<Path>) -> Result<HashSet<String>> {
    Ok(parse_stopwords(&read_to_string(path.as_ref())?))
}

pub fn default_stopwords() -> HashSet<String> {
    parse_stopwords(DEFAULT_STOPWORDS)
}

/// Mean vector of the tokens that are neither stopwords nor missing from
/// the store. `None` when no token qualifies.
pub fn average_vector<S: AsRef<str>>(tokens: &[S], store: &EmbeddingStore) -> Option<Vec<f64>> {
    let rows = tokens
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| !store.is_stopword(t))
        .filter_map(|t| store.get(t));
    vector::mean(rows, store.dim())
}

pub fn definition_vector(sense: &Sense, store: &EmbeddingStore) -> Option<Vec<f64>> {
    average_vector(&sense.definition, store)
}

/// Vector of the window around `lemma` in the sense's first example. Falls
/// back to the whole example when the lemma does not occur in it.
pub fn example_vector(
    sense: &Sense,
    lemma: &str,
    spec: ContextSpec,
    store: &EmbeddingStore,
) -> Option<Vec<f64>> {
    let example = sense.first_example()?;
    match example.iter().position(|t| t == lemma) {
        Some(index) => {
            let (left, right) = spec.neighborhood(example.len(), index);
            let window: Vec<&str> = example[left]
                .iter()
                .chain(&example[right])
                .map(String::as_str)
                .collect();
            average_vector(&window, store)
        }
        None => average_vector(example, store),
    }
}

/// Context vector of the token at `index`: the average over up to
/// `window / 2` neighbors on each side, stopping at the sentence edges.
pub fn context_vector<S: AsRef<str>>(
    sentence: &[S],
    index: usize,
    spec: ContextSpec,
    store: &EmbeddingStore,
) -> Result<Option<Vec<f64>>> {
    if index >= sentence.len() {
        return Err(Error::InvalidInput(format!(
            "token index {index} out of range for sentence of length {}",
            sentence.len()
        )));
    }
    let (left, right) = spec.neighborhood(sentence.len(), index);
    let window: Vec<&str> = sentence[left]
        .iter()
        .chain(&sentence[right])
        .map(AsRef::as_ref)
        .collect();
    Ok(average_vector(&window, store))
}
