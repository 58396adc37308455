use std::collections::BTreeMap;

use log::{info, warn};
use rayon::prelude::*;

use super::{
    load_config_corpus, load_graph, model_file_name, models_dir, write_file, Manifest, Method,
    ModelEntry, PipelineConfig, ProperNouns, Resources, SkippedType, TaggedCorpus, MANIFEST_FILE,
};
use crate::clustering::{
    crp_cluster, kmeans_adaptive, random_walk_disambiguate, Cluster, ClusterModel, InitMode,
    SenseGraph,
};
use crate::embeddings::{context_vector, definition_vector, example_vector};
use crate::error::Result;
use crate::lexicon::{WordKey, WordType};
use crate::vector;

/// One occurrence of an ambiguous word type.
struct Occurrence {
    sentence: usize,
    position: usize,
    context: Option<Vec<f64>>,
    /// Noun and verb keys of the sentence, for graph disambiguation.
    sentence_keys: Vec<WordKey>,
    target: usize,
}

pub struct BuildOutput {
    pub manifest: Manifest,
    /// Models in manifest order.
    pub models: Vec<ClusterModel>,
}

enum Outcome {
    Model(ClusterModel, usize),
    Skipped(String),
}

fn gather(res: &Resources, corpus: &TaggedCorpus) -> Result<BTreeMap<WordKey, Vec<Occurrence>>> {
    let mut out: BTreeMap<WordKey, Vec<Occurrence>> = BTreeMap::new();
    for (s, sentence) in corpus.sentences.iter().enumerate() {
        let words: Vec<String> = sentence.iter().map(|t| t.word()).collect();
        let keyed: Vec<(usize, WordKey)> = sentence
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.key().map(|k| (i, k)))
            .collect();
        let sentence_keys: Vec<WordKey> = keyed.iter().map(|(_, k)| k.clone()).collect();
        for (target, (i, key)) in keyed.iter().enumerate() {
            if !res.inventory.get(key).is_some_and(WordType::is_ambiguous) {
                continue;
            }
            out.entry(key.clone()).or_default().push(Occurrence {
                sentence: s,
                position: sentence[*i].source_index,
                context: context_vector(&words, *i, res.spec, &res.store)?,
                sentence_keys: sentence_keys.clone(),
                target,
            });
        }
    }
    Ok(out)
}

/// Seed vectors of the senses that have the text `mode` needs and at least
/// one embedded word in it, with their inventory indices.
fn seeds(wt: &WordType, mode: InitMode, res: &Resources) -> Vec<(usize, Vec<f64>)> {
    wt.senses
        .iter()
        .enumerate()
        .filter_map(|(j, s)| {
            let v = match mode {
                InitMode::Definitions => definition_vector(s, &res.store),
                InitMode::Examples => example_vector(s, &wt.lemma, res.spec, &res.store),
            };
            v.map(|v| (j, v))
        })
        .collect()
}

fn cluster_type(
    wt: &WordType,
    occurrences: &[Occurrence],
    res: &Resources,
    graph: Option<&SenseGraph>,
    config: &PipelineConfig,
) -> Result<Outcome> {
    let key = wt.key();
    let with_context: Vec<&Occurrence> =
        occurrences.iter().filter(|o| o.context.is_some()).collect();
    for o in occurrences.iter().filter(|o| o.context.is_none()) {
        warn!(
            "{key}: no embedded context words at ({}, {}); token left out of clustering",
            o.sentence, o.position
        );
    }
    let seeds = seeds(wt, config.init_mode, res);
    let sense_of = |label: &str| {
        label
            .rsplit_once('.')
            .and_then(|(_, j)| j.parse::<usize>().ok())
            .map(|j| wt.senses[j].id.clone())
    };

    let clusters = match config.method {
        Method::Kmeans | Method::Crp => {
            if seeds.is_empty() {
                return Ok(Outcome::Skipped(format!(
                    "no sense has a usable {}",
                    init_text(config.init_mode)
                )));
            }
            if with_context.is_empty() {
                return Ok(Outcome::Skipped(
                    "no occurrence has embedded context words".into(),
                ));
            }
            let contexts: Vec<Vec<f64>> = with_context
                .iter()
                .map(|o| o.context.clone().unwrap())
                .collect();
            let labels: Vec<String> = seeds.iter().map(|(j, _)| key.sense_label(*j)).collect();
            let init: Vec<Vec<f64>> = seeds.into_iter().map(|(_, v)| v).collect();
            if config.method == Method::Kmeans {
                kmeans_adaptive(
                    &contexts,
                    &init,
                    &labels,
                    config.min_cluster_size,
                    config.max_iters,
                )?
                .clusters
            } else {
                crp_cluster(&contexts, &init, &labels, config.crp)?.clusters
            }
        }
        Method::Graph => {
            let graph = graph.expect("graph built for the graph method");
            let mut members: BTreeMap<usize, Vec<&Occurrence>> = BTreeMap::new();
            for o in occurrences {
                let id =
                    random_walk_disambiguate(graph, &res.inventory, &o.sentence_keys, o.target)?;
                let j = wt
                    .senses
                    .iter()
                    .position(|s| s.id == id)
                    .expect("sense of the target type");
                members.entry(j).or_default().push(o);
            }
            let seed_of: BTreeMap<usize, &Vec<f64>> = seeds.iter().map(|(j, v)| (*j, v)).collect();
            members
                .into_iter()
                .map(|(j, occ)| {
                    let centroid = vector::mean(
                        occ.iter().filter_map(|o| o.context.as_deref()),
                        res.store.dim(),
                    )
                    .or_else(|| seed_of.get(&j).map(|v| v.to_vec()))
                    .unwrap_or_else(|| vec![0.0; res.store.dim()]);
                    Cluster {
                        label: key.sense_label(j),
                        count: occ.len(),
                        centroid,
                        sense: None,
                    }
                })
                .collect()
        }
    };
    let clusters = clusters
        .into_iter()
        .map(|mut c| {
            c.sense = sense_of(&c.label);
            c
        })
        .collect();
    let tokens = match config.method {
        Method::Graph => occurrences.len(),
        _ => with_context.len(),
    };
    Ok(Outcome::Model(
        ClusterModel::new(key, config.init_mode, clusters)?,
        tokens,
    ))
}

fn init_text(mode: InitMode) -> &'static str {
    match mode {
        InitMode::Definitions => "definition",
        InitMode::Examples => "example",
    }
}

/// Clusters every ambiguous inventory type that occurs in `corpus`.
///
/// Word types are processed in parallel; results come back in key order,
/// so the output does not depend on scheduling.
pub fn build_models(
    res: &Resources,
    corpus: &TaggedCorpus,
    config: &PipelineConfig,
) -> Result<BuildOutput> {
    config.validate()?;
    let graph = match config.method {
        Method::Graph => Some(load_graph(config, &res.inventory)?),
        _ => None,
    };
    let occurrences = gather(res, corpus)?;
    let work: Vec<(&WordKey, &Vec<Occurrence>)> = occurrences.iter().collect();
    let outcomes: Vec<Result<Outcome>> = work
        .par_iter()
        .map(|(key, occ)| {
            let wt = res
                .inventory
                .get(key)
                .expect("gathered keys are in the inventory");
            cluster_type(wt, occ, res, graph.as_ref(), config)
        })
        .collect();

    let mut manifest = Manifest {
        method: config.method,
        init_mode: config.init_mode,
        window: config.window,
        min_cluster_size: config.min_cluster_size,
        seed: config.seed,
        models: Vec::new(),
        skipped: Vec::new(),
    };
    let mut models = Vec::new();
    let mut used_names = std::collections::HashSet::new();
    for ((key, _), outcome) in work.into_iter().zip(outcomes) {
        match outcome? {
            Outcome::Model(model, tokens) => {
                let mut file = model_file_name(key);
                let mut n = 1;
                while !used_names.insert(file.clone()) {
                    file = format!(
                        "{}-{n}.json",
                        model_file_name(key).trim_end_matches(".json")
                    );
                    n += 1;
                }
                info!(
                    "{key}: {} clusters from {tokens} tokens",
                    model.clusters.len()
                );
                manifest.models.push(ModelEntry {
                    key: key.clone(),
                    file,
                    clusters: model.clusters.len(),
                    tokens,
                });
                models.push(model);
            }
            Outcome::Skipped(reason) => {
                warn!("{key}: skipped, {reason}");
                manifest.skipped.push(SkippedType {
                    key: key.clone(),
                    reason,
                });
            }
        }
    }
    Ok(BuildOutput { manifest, models })
}

/// Builds models for the configured corpus and writes them, with
/// `manifest.json`, into the models directory.
pub fn cmd_build(config: &PipelineConfig) -> Result<Manifest> {
    let res = Resources::load(config)?;
    let corpus = load_config_corpus(config, ProperNouns::Drop)?;
    let dir = models_dir(config)?;
    let out = build_models(&res, &corpus, config)?;
    for (entry, model) in out.manifest.models.iter().zip(&out.models) {
        write_file(&dir.join(&entry.file), &(model.to_json() + "\n"))?;
    }
    write_file(&dir.join(MANIFEST_FILE), &out.manifest.to_json())?;
    info!(
        "wrote {} models to {} ({} types skipped)",
        out.models.len(),
        dir.display(),
        out.manifest.skipped.len()
    );
    Ok(out.manifest)
}
