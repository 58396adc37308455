use std::collections::BTreeMap;
use std::path::Path;

use log::{info, warn};

use super::{
    format_labeled, load_config_corpus, load_graph, load_models, models_dir, write_file,
    LabeledToken, Method, PipelineConfig, ProperNouns, Resources, TaggedCorpus, Token,
};
use crate::clustering::{kmeans_assign, random_walk_disambiguate, ClusterModel, SenseGraph};
use crate::embeddings::context_vector;
use crate::error::Result;
use crate::lexicon::{WordKey, WordType};

#[derive(Debug, Clone, PartialEq)]
pub struct LabelOutput {
    pub sentences: Vec<Vec<LabeledToken>>,
    /// `(instance id, label)` for every disambiguated token.
    pub instances: Vec<(String, String)>,
    pub fallbacks: usize,
}

impl LabelOutput {
    pub fn instances_tsv(&self) -> String {
        self.instances
            .iter()
            .map(|(id, l)| format!("{id}\t{l}\n"))
            .collect()
    }
}

/// Identifier of the token at `(sentence, position)`:
/// `lemma.n.sentence:position` (or `.v.` for verbs).
pub fn instance_id(key: &WordKey, sentence: usize, position: usize) -> String {
    format!("{}.{}.{sentence}:{position}", key.lemma, key.pos.short())
}

/// Labels every token of `corpus`. Tokens of ambiguous noun and verb types
/// get an induced sense label; all others are labeled with their surface
/// form. Proper nouns stay in the output but never enter a context.
///
/// `graph` must be given for the graph method, `models` for the others.
pub fn label_corpus(
    res: &Resources,
    models: &BTreeMap<WordKey, ClusterModel>,
    graph: Option<&SenseGraph>,
    corpus: &TaggedCorpus,
    method: Method,
) -> Result<LabelOutput> {
    let mut out = LabelOutput {
        sentences: Vec::with_capacity(corpus.len()),
        instances: Vec::new(),
        fallbacks: 0,
    };
    for (s, sentence) in corpus.sentences.iter().enumerate() {
        let kept: Vec<&Token> = sentence.iter().filter(|t| !t.is_proper_noun()).collect();
        let words: Vec<String> = kept.iter().map(|t| t.word()).collect();
        let keys: Vec<WordKey> = kept.iter().filter_map(|t| t.key()).collect();

        let mut labeled = Vec::with_capacity(sentence.len());
        let mut kept_index = 0;
        let mut key_index = 0;
        for token in sentence {
            let mut label = token.surface.clone();
            if !token.is_proper_noun() {
                let i = kept_index;
                kept_index += 1;
                if let Some(key) = token.key() {
                    let target = key_index;
                    key_index += 1;
                    if let Some(wt) = res.inventory.get(&key).filter(|wt| wt.is_ambiguous()) {
                        let coords = (s, token.source_index);
                        let (l, fallback) = match method {
                            Method::Graph => {
                                let graph = graph.expect("graph given for the graph method");
                                (by_graph(graph, res, wt, &keys, target)?, false)
                            }
                            _ => by_centroid(res, models.get(&key), &key, &words, i, coords)?,
                        };
                        out.fallbacks += usize::from(fallback);
                        out.instances
                            .push((instance_id(&key, s, token.source_index), l.clone()));
                        label = l;
                    }
                }
            }
            labeled.push(LabeledToken {
                token: token.clone(),
                label,
            });
        }
        out.sentences.push(labeled);
    }
    Ok(out)
}

fn by_graph(
    graph: &SenseGraph,
    res: &Resources,
    wt: &WordType,
    keys: &[WordKey],
    target: usize,
) -> Result<String> {
    let id = random_walk_disambiguate(graph, &res.inventory, keys, target)?;
    let j = wt
        .senses
        .iter()
        .position(|s| s.id == id)
        .expect("sense of the target type");
    Ok(wt.key().sense_label(j))
}

fn by_centroid(
    res: &Resources,
    model: Option<&ClusterModel>,
    key: &WordKey,
    words: &[String],
    i: usize,
    (s, p): (usize, usize),
) -> Result<(String, bool)> {
    let Some(model) = model else {
        warn!("{key} at ({s}, {p}): no model, using the first sense");
        return Ok((key.sense_label(0), true));
    };
    let context = context_vector(words, i, res.spec, &res.store)?
        .unwrap_or_else(|| vec![0.0; res.store.dim()]);
    let a = kmeans_assign(model, &context)?;
    if a.fallback {
        warn!("{key} at ({s}, {p}): no embedded context words, using the first cluster");
    }
    Ok((model.clusters[a.index].label.clone(), a.fallback))
}

/// Labels the configured corpus and writes it to `output`. With
/// `instances`, also writes the `(id, label)` pairs as TSV.
pub fn cmd_label(
    config: &PipelineConfig,
    output: &Path,
    instances: Option<&Path>,
) -> Result<LabelOutput> {
    config.validate()?;
    let res = Resources::load(config)?;
    let corpus = load_config_corpus(config, ProperNouns::Keep)?;
    let (models, graph) = match config.method {
        Method::Graph => (BTreeMap::new(), Some(load_graph(config, &res.inventory)?)),
        _ => (load_models(&models_dir(config)?)?.1, None),
    };
    let out = label_corpus(&res, &models, graph.as_ref(), &corpus, config.method)?;
    write_file(output, &format_labeled(&out.sentences))?;
    if let Some(path) = instances {
        write_file(path, &out.instances_tsv())?;
    }
    info!(
        "labeled {} tokens of ambiguous types ({} fallbacks)",
        out.instances.len(),
        out.fallbacks
    );
    Ok(out)
}
