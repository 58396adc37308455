//! Sense clustering: adaptive k-means, a bounded Chinese restaurant
//! process, and personalized-PageRank disambiguation over the sense graph.

mod crp;
mod graph;
mod kmeans;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};
use crate::lexicon::WordKey;
use crate::vector;

pub use crp::{crp_cluster, CrpFit, CrpParams};
pub use graph::{
    load_weighted_edges, parse_weighted_edges, personalized_pagerank, random_walk_disambiguate,
    PageRankConfig, SenseGraph, WeightedEdge,
};
pub use kmeans::{kmeans_adaptive, reduce_small_clusters, KMeans, KMeansFit};

pub const DEFAULT_MIN_CLUSTER_SIZE: usize = 10;

/// Which sense texts seed the clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitMode {
    Definitions,
    Examples,
}

impl std::str::FromStr for InitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "definitions" => Ok(InitMode::Definitions),
            "examples" => Ok(InitMode::Examples),
            other => Err(Error::Config(format!("unknown init mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for InitMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InitMode::Definitions => "definitions",
            InitMode::Examples => "examples",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub label: String,
    pub count: usize,
    pub centroid: Vec<f64>,
    /// Inventory sense the cluster was seeded from, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sense: Option<String>,
}

/// Per-word-type sense clusters, as persisted to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel {
    pub key: WordKey,
    pub init_mode: InitMode,
    pub dim: usize,
    pub clusters: Vec<Cluster>,
}

impl ClusterModel {
    pub fn new(key: WordKey, init_mode: InitMode, clusters: Vec<Cluster>) -> Result<Self> {
        let dim = clusters
            .first()
            .map(|c| c.centroid.len())
            .ok_or_else(|| Error::InvalidInput(format!("model for {key} has no clusters")))?;
        let model = ClusterModel {
            key,
            init_mode,
            dim,
            clusters,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.clusters.is_empty() {
            return Err(Error::InvalidInput(format!(
                "model for {} has no clusters",
                self.key
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for c in &self.clusters {
            if c.centroid.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: c.centroid.len(),
                });
            }
            if c.centroid.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "cluster `{}` has a non-finite centroid",
                    c.label
                )));
            }
            if !seen.insert(c.label.as_str()) {
                return Err(Error::Duplicate(format!("cluster label {}", c.label)));
            }
        }
        Ok(())
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.clusters.iter().map(|c| c.label.as_str())
    }

    pub fn total_count(&self) -> usize {
        self.clusters.iter().map(|c| c.count).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cluster models always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: ClusterModel = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_json(&read_to_string(path)?).map_err(|e| match e {
            Error::Serialization(s) => Error::InvalidInput(format!("{}: {s}", path.display())),
            other => other,
        })
    }
}

/// Result of nearest-centroid assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Assignment {
    pub index: usize,
    /// The context was a zero vector; the first cluster was used.
    pub fallback: bool,
}

/// Index of the centroid nearest to `context` in cosine distance, lowest
/// index on ties.
pub(crate) fn nearest_by_cosine<'a, I>(context: &[f64], centroids: I) -> usize
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut best = 0;
    let mut best_sim = f64::NEG_INFINITY;
    for (i, c) in centroids.into_iter().enumerate() {
        let s = vector::cosine_similarity(context, c);
        if s > best_sim {
            best = i;
            best_sim = s;
        }
    }
    best
}

/// Test-time sense assignment: the cluster whose centroid is closest in
/// cosine distance.
pub fn kmeans_assign(model: &ClusterModel, context: &[f64]) -> Result<Assignment> {
    if context.len() != model.dim {
        return Err(Error::DimensionMismatch {
            expected: model.dim,
            found: context.len(),
        });
    }
    if vector::is_zero(context) {
        return Ok(Assignment {
            index: 0,
            fallback: true,
        });
    }
    let index = nearest_by_cosine(
        context,
        model.clusters.iter().map(|c| c.centroid.as_slice()),
    );
    Ok(Assignment {
        index,
        fallback: false,
    })
}

fn check_dims(expected: usize, vectors: &[Vec<f64>]) -> Result<()> {
    match vectors.iter().find(|v| v.len() != expected) {
        Some(v) => Err(Error::DimensionMismatch {
            expected,
            found: v.len(),
        }),
        None => Ok(()),
    }
}
