//! Sense integration for translation models: concatenated token/sense
//! inputs, hard selection (TOP), distance-weighted averages (AVG) and
//! attention-weighted averages (ATT), plus gradient verification of the
//! attention layer.

mod attention;
mod grad;
mod init;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};

pub use attention::{
    att_context, att_context_or_zero, att_scores, att_weights, AttentionParams, Matrix,
};
pub use grad::{
    grad_check, AttentionGradients, GradCheckReport, LinearLoss, Loss, SquaredNorm, ZeroLoss,
};
pub use init::{init_att_ini, AttIniConfig, WordEmbeddingTable};

/// Number of senses kept per word type by the averaging modes.
pub const DEFAULT_MAX_SENSES: usize = 5;

/// Label shared by all monosemous tokens in the NULL-label variant.
pub const NULL_LABEL: &str = "<null>";

/// How tokens without an ambiguous entry are labeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonosemousLabel {
    /// The word itself is its only sense label.
    #[default]
    Word,
    /// All such tokens share [`NULL_LABEL`].
    Null,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SenseEntry {
    pub labels: Vec<String>,
    pub vectors: Vec<Vec<f64>>,
}

/// Sense vectors per word type (or per monosemous word), at most
/// `max_senses` each, all of one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "BTreeMap<String, SenseEntry>",
    into = "BTreeMap<String, SenseEntry>"
)]
pub struct SenseEmbeddingTable {
    entries: BTreeMap<String, SenseEntry>,
    dim: usize,
}

impl SenseEmbeddingTable {
    pub fn new(dim: usize) -> Self {
        SenseEmbeddingTable {
            entries: BTreeMap::new(),
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds an entry, keeping at most `max_senses` leading senses.
    pub fn insert(
        &mut self,
        key: impl Into<String>,
        mut entry: SenseEntry,
        max_senses: usize,
    ) -> Result<()> {
        let key = key.into();
        if entry.labels.is_empty() || entry.labels.len() != entry.vectors.len() {
            return Err(Error::InvalidInput(format!(
                "sense entry `{key}` needs one vector per label ({} labels, {} vectors)",
                entry.labels.len(),
                entry.vectors.len()
            )));
        }
        if let Some(v) = entry.vectors.iter().find(|v| v.len() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        entry.labels.truncate(max_senses.max(1));
        entry.vectors.truncate(max_senses.max(1));
        self.entries.insert(key, entry);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&SenseEntry> {
        self.entries.get(key)
    }

    /// Entry used for a token: its own when present, otherwise the
    /// monosemous fallback (`word` itself or the shared NULL entry).
    pub fn resolve(&self, key: &str, word: &str, mode: MonosemousLabel) -> Option<&SenseEntry> {
        self.entries.get(key).or_else(|| match mode {
            MonosemousLabel::Word => self.entries.get(word),
            MonosemousLabel::Null => self.entries.get(NULL_LABEL),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SenseEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&read_to_string(path.as_ref())?)
    }
}

impl TryFrom<BTreeMap<String, SenseEntry>> for SenseEmbeddingTable {
    type Error = Error;

    fn try_from(entries: BTreeMap<String, SenseEntry>) -> Result<Self> {
        let dim = entries
            .values()
            .flat_map(|e| e.vectors.first())
            .map(Vec::len)
            .next()
            .unwrap_or(0);
        let mut table = SenseEmbeddingTable::new(dim);
        for (k, e) in entries {
            table.insert(k, e, usize::MAX)?;
        }
        Ok(table)
    }
}

impl From<SenseEmbeddingTable> for BTreeMap<String, SenseEntry> {
    fn from(t: SenseEmbeddingTable) -> Self {
        t.entries
    }
}

/// Token input vector: the word embedding followed by the sense embedding.
pub fn concat_token(word_vec: &[f64], sense_vec: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(word_vec.len() + sense_vec.len());
    out.extend_from_slice(word_vec);
    out.extend_from_slice(sense_vec);
    out
}

/// Hard selection: the stored vector for `label`.
pub fn top_sense<'a>(table: &'a SenseEmbeddingTable, key: &str, label: &str) -> Result<&'a [f64]> {
    let entry = table
        .get(key)
        .ok_or_else(|| Error::UnknownWord(key.to_string()))?;
    entry
        .labels
        .iter()
        .position(|l| l == label)
        .map(|i| entry.vectors[i].as_slice())
        .ok_or_else(|| Error::UnknownLabel {
            key: key.to_string(),
            label: label.to_string(),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    AvgLinear,
    AvgLogistic,
    AttSoftmax,
    Top,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SenseWeights {
    pub weights: Vec<f64>,
    pub mode: WeightMode,
}

impl SenseWeights {
    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn one_hot(k: usize, index: usize) -> Self {
        let mut weights = vec![0.0; k];
        weights[index] = 1.0;
        SenseWeights {
            weights,
            mode: WeightMode::Top,
        }
    }
}

/// Normalization of sense distances into averaging weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AvgNorm {
    /// `(1 - d_j) / sum_l d_l`, as written; need not sum to one. With
    /// `renormalize`, negative weights are clamped to zero and the rest
    /// rescaled to sum to one.
    Linear { renormalize: bool },
    /// `exp(-d_j^2) / sum_l exp(-d_l^2)`.
    Logistic,
}

pub fn avg_weights(distances: &[f64], norm: AvgNorm) -> Result<SenseWeights> {
    if distances.is_empty() {
        return Err(Error::InvalidInput("no sense distances".into()));
    }
    if distances.iter().any(|d| !d.is_finite()) {
        return Err(Error::NonFinite("sense distance".into()));
    }
    match norm {
        AvgNorm::Linear { renormalize } => {
            let total: f64 = distances.iter().sum();
            if total == 0.0 {
                return Err(Error::InvalidInput(
                    "linear sense weights are undefined when every distance is zero".into(),
                ));
            }
            let mut weights: Vec<f64> = distances.iter().map(|d| (1.0 - d) / total).collect();
            if renormalize {
                weights.iter_mut().for_each(|w| *w = w.max(0.0));
                let s: f64 = weights.iter().sum();
                if s == 0.0 {
                    return Err(Error::InvalidInput(
                        "all renormalized linear weights are zero".into(),
                    ));
                }
                weights.iter_mut().for_each(|w| *w /= s);
            }
            Ok(SenseWeights {
                weights,
                mode: WeightMode::AvgLinear,
            })
        }
        AvgNorm::Logistic => {
            let sq: Vec<f64> = distances.iter().map(|d| d * d).collect();
            let min = sq.iter().cloned().fold(f64::INFINITY, f64::min);
            let e: Vec<f64> = sq.iter().map(|s| (min - s).exp()).collect();
            let total: f64 = e.iter().sum();
            Ok(SenseWeights {
                weights: e.into_iter().map(|x| x / total).collect(),
                mode: WeightMode::AvgLogistic,
            })
        }
    }
}

/// `sum_j w_j * senses[j]`.
pub fn weighted_sense(weights: &SenseWeights, senses: &[Vec<f64>]) -> Result<Vec<f64>> {
    if weights.weights.len() != senses.len() {
        return Err(Error::DimensionMismatch {
            expected: senses.len(),
            found: weights.weights.len(),
        });
    }
    let dim = senses.first().map_or(0, Vec::len);
    let mut out = vec![0.0; dim];
    for (w, s) in weights.weights.iter().zip(senses) {
        if s.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.len(),
            });
        }
        for (o, x) in out.iter_mut().zip(s) {
            *o += w * x;
        }
    }
    Ok(out)
}
