//! End-to-end workflows over tagged corpora: build per-word-type sense
//! models, label a corpus, evaluate labels, and trace sense selection.
//!
//! Each `cmd_*` function loads its inputs from a [`PipelineConfig`] and
//! writes its artifacts; the functions they wrap work on in-memory data.

mod build;
mod config;
mod corpus;
mod demo;
mod evaluate;
mod label;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::clustering::{load_weighted_edges, ClusterModel, InitMode, SenseGraph};
use crate::embeddings::{
    default_stopwords, load_embeddings, load_stopwords, ContextSpec, EmbeddingStore,
};
use crate::error::{in_file, read_to_string, Error, Result};
use crate::lexicon::{load_inventory, SenseInventory, WordKey};

pub use build::{build_models, cmd_build, BuildOutput};
pub use config::{Method, PipelineConfig, Selection};
pub use corpus::{
    coarse_pos, escape_field, format_corpus, format_labeled, format_token, load_corpus,
    load_corpus_with, load_labeled, parse_corpus, parse_labeled, LabeledToken, ProperNouns,
    TaggedCorpus, Token, PENN_TAGS,
};
pub use demo::{cmd_demo_select, demo_select, SelectionTrace};
pub use evaluate::{
    cmd_eval_rho, cmd_eval_wsi, evaluate_wsi, instance_key, lexical_triples, predicted_rows,
    RhoInputs, WsiInputs,
};
pub use label::{cmd_label, instance_id, label_corpus, LabelOutput};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Inputs shared by every command.
#[derive(Debug)]
pub struct Resources {
    pub inventory: SenseInventory,
    pub store: EmbeddingStore,
    pub spec: ContextSpec,
}

impl Resources {
    pub fn load(config: &PipelineConfig) -> Result<Self> {
        let inv_path = config.require("inventory", &config.inventory)?;
        let inventory = in_file(inv_path, load_inventory(inv_path))?;
        let emb_path = config.require("embeddings", &config.embeddings)?;
        let store = in_file(emb_path, load_embeddings(emb_path))?;
        let stopwords = match &config.stopwords {
            Some(p) => load_stopwords(p)?,
            None => default_stopwords(),
        };
        log::info!(
            "loaded {} word types, {} embeddings of dimension {}",
            inventory.len(),
            store.len(),
            store.dim()
        );
        Ok(Resources {
            inventory,
            store: store.with_stopwords(stopwords),
            spec: config.context_spec(),
        })
    }
}

pub(crate) fn load_config_corpus(
    config: &PipelineConfig,
    proper: ProperNouns,
) -> Result<TaggedCorpus> {
    let path = config.require("corpus", &config.corpus)?;
    in_file(path, load_corpus_with(path, proper))
}

/// Sense graph from the inventory's neighbor lists plus any weighted edges.
pub fn load_graph(config: &PipelineConfig, inventory: &SenseInventory) -> Result<SenseGraph> {
    let mut graph = SenseGraph::from_inventory(inventory, config.pagerank)?;
    if let Some(path) = &config.edges {
        let edges = in_file(path, load_weighted_edges(path))?;
        in_file(path, graph.apply_edges(&edges))?;
    }
    Ok(graph)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelEntry {
    pub key: WordKey,
    pub file: String,
    pub clusters: usize,
    pub tokens: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedType {
    pub key: WordKey,
    pub reason: String,
}

/// Index of a model directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub method: Method,
    pub init_mode: InitMode,
    pub window: usize,
    pub min_cluster_size: usize,
    pub seed: u64,
    pub models: Vec<ModelEntry>,
    pub skipped: Vec<SkippedType>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifests always serialize") + "\n"
    }

    pub fn cluster_counts(&self) -> BTreeMap<WordKey, usize> {
        self.models
            .iter()
            .map(|m| (m.key.clone(), m.clusters))
            .collect()
    }
}

/// File name for a word type's model: the key with anything outside
/// `[A-Za-z0-9._-]` replaced by `_`.
pub fn model_file_name(key: &WordKey) -> String {
    let stem: String = key
        .to_string()
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{stem}.json")
}

/// Reads `manifest.json` and every model it lists.
pub fn load_models(dir: &Path) -> Result<(Manifest, BTreeMap<WordKey, ClusterModel>)> {
    let path = dir.join(MANIFEST_FILE);
    let manifest: Manifest =
        serde_json::from_str(&read_to_string(&path)?).map_err(|e| Error::InFile {
            path: path.clone(),
            source: Box::new(Error::InvalidInput(e.to_string())),
        })?;
    let mut models = BTreeMap::new();
    for entry in &manifest.models {
        let model = ClusterModel::load(dir.join(&entry.file))?;
        if model.key != entry.key {
            return Err(Error::InvalidInput(format!(
                "{} holds a model for {}, manifest says {}",
                entry.file, model.key, entry.key
            )));
        }
        models.insert(model.key.clone(), model);
    }
    Ok((manifest, models))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub(crate) fn models_dir(config: &PipelineConfig) -> Result<PathBuf> {
    config
        .require("models", &config.models)
        .map(Path::to_path_buf)
}
