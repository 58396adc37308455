use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use log::{info, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    load_config_corpus, load_models, models_dir, write_file, PipelineConfig, ProperNouns,
    Resources, Selection, TaggedCorpus,
};
use crate::clustering::{kmeans_assign, ClusterModel};
use crate::embeddings::context_vector;
use crate::error::{Error, Result};
use crate::lexicon::WordKey;
use crate::sense_select::{
    att_context_or_zero, att_scores, att_weights, avg_weights, init_att_ini, AttIniConfig,
    AttentionParams, AvgNorm, SenseEmbeddingTable, SenseWeights, WeightMode, WordEmbeddingTable,
};
use crate::vector;

/// Sense weights computed for one token.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionTrace {
    pub sentence: usize,
    pub position: usize,
    pub surface: String,
    pub key: WordKey,
    pub mode: Selection,
    pub labels: Vec<String>,
    /// Cosine distances from the context vector to each sense (TOP, AVG).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<f64>>,
    /// Attention scores before the softmax.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scores: Option<Vec<f64>>,
    pub weights: Vec<f64>,
    pub sum: f64,
    /// The context had no embedded words.
    pub fallback: bool,
}

struct AttentionSetup {
    words: WordEmbeddingTable,
    senses: SenseEmbeddingTable,
    params: AttentionParams,
}

fn attention_setup(
    res: &Resources,
    models: &BTreeMap<WordKey, ClusterModel>,
    corpus: &TaggedCorpus,
    config: &PipelineConfig,
) -> Result<AttentionSetup> {
    let vocab: Vec<String> = corpus
        .sentences
        .iter()
        .flatten()
        .map(|t| t.word())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let model_list: Vec<ClusterModel> = models.values().cloned().collect();
    let init = AttIniConfig {
        target_word_dim: config.word_dim,
        target_sense_dim: None,
        pad_range: config.pad_range,
        max_senses: config.max_senses,
        seed: config.seed,
    };
    let (words, senses) = init_att_ini(&vocab, &res.store, &model_list, &init)?;
    // A separate stream keeps the scorer independent of the table draws.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);
    let dim = config.word_dim;
    let params = match config.selection {
        Selection::AttTanh => AttentionParams::random_tanh(
            dim,
            dim,
            config.attention_width,
            config.pad_range,
            &mut rng,
        ),
        _ => AttentionParams::random_bilinear(dim, dim, config.pad_range, &mut rng),
    };
    Ok(AttentionSetup {
        words,
        senses,
        params,
    })
}

/// Weight traces for every token of an ambiguous type that has a model,
/// under the configured selection mode. `corpus` should have proper nouns
/// dropped, as in clustering.
///
/// TOP and AVG compare the token's windowed context vector with the model
/// centroids; the attention modes score the sense table rows built from the
/// centroids against the mean of the sentence's other word rows. A type
/// with a single sense always gets the weight vector `[1.0]`.
pub fn demo_select(
    res: &Resources,
    models: &BTreeMap<WordKey, ClusterModel>,
    corpus: &TaggedCorpus,
    config: &PipelineConfig,
) -> Result<Vec<SelectionTrace>> {
    config.validate()?;
    let mode = config.selection;
    let att = if mode.is_attention() {
        Some(attention_setup(res, models, corpus, config)?)
    } else {
        None
    };
    let mut traces = Vec::new();
    for (s, sentence) in corpus.sentences.iter().enumerate() {
        let words: Vec<String> = sentence.iter().map(|t| t.word()).collect();
        for (i, tok) in sentence.iter().enumerate() {
            let Some(key) = tok.key() else { continue };
            if !res.inventory.get(&key).is_some_and(|wt| wt.is_ambiguous()) {
                continue;
            }
            let Some(model) = models.get(&key) else {
                warn!(
                    "{key} at ({s}, {}): no model, token skipped",
                    tok.source_index
                );
                continue;
            };
            let mut trace = SelectionTrace {
                sentence: s,
                position: tok.source_index,
                surface: tok.surface.clone(),
                key: key.clone(),
                mode,
                labels: Vec::new(),
                distances: None,
                scores: None,
                weights: Vec::new(),
                sum: 0.0,
                fallback: false,
            };
            let weights = match &att {
                Some(setup) => {
                    let entry = setup
                        .senses
                        .get(&key.to_string())
                        .ok_or_else(|| Error::UnknownWord(key.to_string()))?;
                    trace.labels = entry.labels.clone();
                    if entry.vectors.len() == 1 {
                        vec![1.0]
                    } else {
                        let rows: Vec<Vec<f64>> =
                            words.iter().map(|w| setup.words[w].clone()).collect();
                        let u = att_context_or_zero(&rows, i, config.word_dim)?;
                        let scores = att_scores(&u, &entry.vectors, &setup.params)?;
                        let w = att_weights(&scores).weights;
                        trace.scores = Some(scores);
                        w
                    }
                }
                None => {
                    let kept = match mode {
                        Selection::Top => model.clusters.len(),
                        _ => config.max_senses,
                    };
                    let clusters = &model.clusters[..model.clusters.len().min(kept)];
                    trace.labels = clusters.iter().map(|c| c.label.clone()).collect();
                    let context = context_vector(&words, i, res.spec, &res.store)?;
                    trace.fallback = context.is_none();
                    if trace.fallback {
                        warn!(
                            "{key} at ({s}, {}): no embedded context words",
                            tok.source_index
                        );
                    }
                    let u = context.unwrap_or_else(|| vec![0.0; res.store.dim()]);
                    if u.len() != model.dim {
                        return Err(Error::DimensionMismatch {
                            expected: model.dim,
                            found: u.len(),
                        });
                    }
                    let d: Vec<f64> = clusters
                        .iter()
                        .map(|c| vector::cosine_distance(&u, &c.centroid))
                        .collect();
                    let w = if clusters.len() == 1 {
                        vec![1.0]
                    } else {
                        select_weights(mode, model, &u, &d)?.weights
                    };
                    trace.distances = Some(d);
                    w
                }
            };
            trace.sum = weights.iter().sum();
            trace.weights = weights;
            traces.push(trace);
        }
    }
    Ok(traces)
}

fn select_weights(
    mode: Selection,
    model: &ClusterModel,
    u: &[f64],
    d: &[f64],
) -> Result<SenseWeights> {
    match mode {
        Selection::Top => Ok(SenseWeights::one_hot(
            model.clusters.len(),
            kmeans_assign(model, u)?.index,
        )),
        Selection::AvgLinear => avg_weights(d, AvgNorm::Linear { renormalize: false }),
        Selection::AvgLogistic => avg_weights(d, AvgNorm::Logistic),
        Selection::AttTanh | Selection::AttBilinear => {
            unreachable!("attention handled by the caller")
        }
    }
}

impl SelectionTrace {
    pub fn weight_mode(&self) -> WeightMode {
        match self.mode {
            Selection::Top => WeightMode::Top,
            Selection::AvgLinear => WeightMode::AvgLinear,
            Selection::AvgLogistic => WeightMode::AvgLogistic,
            Selection::AttTanh | Selection::AttBilinear => WeightMode::AttSoftmax,
        }
    }
}

/// Writes one JSON trace per line to `output`.
pub fn cmd_demo_select(config: &PipelineConfig, output: &Path) -> Result<Vec<SelectionTrace>> {
    config.validate()?;
    let res = Resources::load(config)?;
    let corpus = load_config_corpus(config, ProperNouns::Drop)?;
    let (_, models) = load_models(&models_dir(config)?)?;
    let traces = demo_select(&res, &models, &corpus, config)?;
    let mut out = String::new();
    for t in &traces {
        out.push_str(&serde_json::to_string(t)?);
        out.push('\n');
    }
    write_file(output, &out)?;
    info!(
        "wrote {} {} traces to {}",
        traces.len(),
        config.selection,
        output.display()
    );
    Ok(traces)
}
