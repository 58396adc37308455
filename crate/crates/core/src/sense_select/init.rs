//! Embedding-table initialization for the attention model: word rows from
//! pre-trained vectors, sense rows from k-means centroids, both padded with
//! small uniform noise up to the model dimension.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{SenseEmbeddingTable, SenseEntry, NULL_LABEL};
use crate::clustering::ClusterModel;
use crate::embeddings::EmbeddingStore;
use crate::error::{Error, Result};

pub type WordEmbeddingTable = BTreeMap<String, Vec<f64>>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttIniConfig {
    pub target_word_dim: usize,
    /// Defaults to `target_word_dim`.
    pub target_sense_dim: Option<usize>,
    pub pad_range: f64,
    pub max_senses: usize,
    pub seed: u64,
}

impl Default for AttIniConfig {
    fn default() -> Self {
        AttIniConfig {
            target_word_dim: 500,
            target_sense_dim: None,
            pad_range: 0.1,
            max_senses: super::DEFAULT_MAX_SENSES,
            seed: 0,
        }
    }
}

fn pad<R: Rng>(source: &[f64], target: usize, range: f64, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::with_capacity(target);
    out.extend_from_slice(source);
    while out.len() < target {
        out.push(rng.random_range(-range..=range));
    }
    out
}

/// Builds the word table for `vocabulary` and the sense table for `models`.
///
/// The sense table also holds one entry per vocabulary word (labelled with
/// the word itself) and a shared NULL entry, so either monosemous-label
/// convention can be resolved. Rows without a source vector are drawn
/// entirely from `[-pad_range, pad_range]`.
pub fn init_att_ini(
    vocabulary: &[String],
    store: &EmbeddingStore,
    models: &[ClusterModel],
    config: &AttIniConfig,
) -> Result<(WordEmbeddingTable, SenseEmbeddingTable)> {
    let word_dim = config.target_word_dim;
    let sense_dim = config.target_sense_dim.unwrap_or(word_dim);
    if word_dim < store.dim() {
        return Err(Error::Config(format!(
            "target word dimension {word_dim} is below the embedding dimension {}",
            store.dim()
        )));
    }
    if !(config.pad_range >= 0.0 && config.pad_range.is_finite()) {
        return Err(Error::Config(format!(
            "pad range must be non-negative, got {}",
            config.pad_range
        )));
    }
    let range = config.pad_range;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let vocab: BTreeSet<&String> = vocabulary.iter().collect();
    let mut words = WordEmbeddingTable::new();
    for w in &vocab {
        let row = pad(store.get(w).unwrap_or(&[]), word_dim, range, &mut rng);
        words.insert((*w).clone(), row);
    }

    let mut sorted: Vec<&ClusterModel> = models.iter().collect();
    sorted.sort_by(|a, b| a.key.cmp(&b.key));
    let mut senses = SenseEmbeddingTable::new(sense_dim);
    for m in sorted {
        if m.dim > sense_dim {
            return Err(Error::Config(format!(
                "centroids of {} have dimension {}, above the sense dimension {sense_dim}",
                m.key, m.dim
            )));
        }
        let kept = m.clusters.iter().take(config.max_senses);
        let entry = SenseEntry {
            labels: kept.clone().map(|c| c.label.clone()).collect(),
            vectors: kept
                .map(|c| pad(&c.centroid, sense_dim, range, &mut rng))
                .collect(),
        };
        senses.insert(m.key.to_string(), entry, config.max_senses)?;
    }
    for w in &vocab {
        let entry = SenseEntry {
            labels: vec![(*w).clone()],
            vectors: vec![pad(&[], sense_dim, range, &mut rng)],
        };
        senses.insert((*w).clone(), entry, 1)?;
    }
    let null = SenseEntry {
        labels: vec![NULL_LABEL.to_string()],
        vectors: vec![pad(&[], sense_dim, range, &mut rng)],
    };
    senses.insert(NULL_LABEL, null, 1)?;
    Ok((words, senses))
}
