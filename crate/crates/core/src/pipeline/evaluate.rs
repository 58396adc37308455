use std::collections::BTreeMap;
use std::path::Path;

use log::info;

use super::{
    instance_id, load_corpus_with, parse_labeled, write_file, Manifest, PipelineConfig,
    ProperNouns, TaggedCorpus, MANIFEST_FILE,
};
use crate::error::{in_file, read_to_string, Error, Result};
use crate::eval::{
    parse_alignments, parse_label_tsv, wsi_report, AlignedTriple, Alignment, LabeledInstances,
    LexicalChoiceReport, WordEvaluation, WsiReport,
};
use crate::lexicon::{load_inventory, SenseInventory, WordKey};

/// Word type of an instance id such as `rock.n.12` or `rock.n.3:5`: all
/// text before the last dot, read as `lemma.pos`.
pub fn instance_key(id: &str) -> Result<WordKey> {
    id.rsplit_once('.')
        .and_then(|(key, _)| key.parse().ok())
        .ok_or_else(|| {
            Error::InvalidInput(format!(
                "instance id `{id}` does not start with `lemma.pos.`"
            ))
        })
}

/// `(id, label)` rows from either a TSV file or a labeled corpus. A text
/// with a tab on any line is read as TSV. From a labeled corpus, the rows
/// are the tokens whose label is an induced label of their own word type.
pub fn predicted_rows(text: &str) -> Result<Vec<(String, String)>> {
    if text.lines().any(|l| l.contains('\t')) {
        return parse_label_tsv(text);
    }
    let mut rows = Vec::new();
    for (s, sentence) in parse_labeled(text)?.iter().enumerate() {
        for t in sentence {
            let Some(key) = t.token.key() else { continue };
            if t.label.starts_with(&format!("{key}.")) {
                rows.push((instance_id(&key, s, t.token.source_index), t.label.clone()));
            }
        }
    }
    Ok(rows)
}

/// Scores predictions against gold labels, per word type.
///
/// `cluster_counts` gives the model size per word type; types without an
/// entry count the distinct labels they were predicted with.
pub fn evaluate_wsi(
    predicted: &[(String, String)],
    gold: &[(String, String)],
    cluster_counts: Option<&BTreeMap<WordKey, usize>>,
) -> Result<WsiReport> {
    let joined = LabeledInstances::join(predicted, gold)?;
    // Per word type: instance ids, predicted labels, gold labels.
    let mut groups: BTreeMap<WordKey, [Vec<String>; 3]> = BTreeMap::new();
    for ((id, p), g) in joined
        .ids()
        .iter()
        .zip(joined.predicted())
        .zip(joined.gold())
    {
        let g_entry = groups.entry(instance_key(id)?).or_default();
        g_entry[0].push(id.clone());
        g_entry[1].push(p.clone());
        g_entry[2].push(g.clone());
    }
    let mut words = Vec::with_capacity(groups.len());
    for (key, [ids, p, g]) in groups {
        let data = LabeledInstances::new(ids, p, g)?;
        let cluster_count = cluster_counts
            .and_then(|c| c.get(&key).copied())
            .unwrap_or_else(|| data.predicted_cluster_count());
        words.push(WordEvaluation {
            key,
            data,
            cluster_count,
        });
    }
    Ok(wsi_report(&words))
}

pub struct WsiInputs<'a> {
    /// Labeled corpus or `id<TAB>label` TSV.
    pub predicted: &'a Path,
    pub gold: &'a Path,
    pub out_dir: &'a Path,
    /// Row name in the CSV and TSV reports; defaults to the run name.
    pub name: Option<&'a str>,
}

/// Writes `wsi.json`, `wsi.csv` and `wsi.tsv` into the output directory.
/// Cluster counts come from the models directory when one is configured.
pub fn cmd_eval_wsi(config: &PipelineConfig, inputs: &WsiInputs) -> Result<WsiReport> {
    let predicted = in_file(
        inputs.predicted,
        predicted_rows(&read_to_string(inputs.predicted)?),
    )?;
    let gold = in_file(inputs.gold, parse_label_tsv(&read_to_string(inputs.gold)?))?;
    let counts = match &config.models {
        Some(dir) => {
            let path = dir.join(MANIFEST_FILE);
            let manifest: Manifest =
                serde_json::from_str(&read_to_string(&path)?).map_err(|e| Error::InFile {
                    path,
                    source: Box::new(Error::InvalidInput(e.to_string())),
                })?;
            Some(manifest.cluster_counts())
        }
        None => None,
    };
    let report = evaluate_wsi(&predicted, &gold, counts.as_ref())?;
    let name = inputs
        .name
        .map_or_else(|| config.run_name(), str::to_string);
    write_file(&inputs.out_dir.join("wsi.json"), &(report.to_json() + "\n"))?;
    write_file(&inputs.out_dir.join("wsi.csv"), &report.to_csv(&name))?;
    write_file(&inputs.out_dir.join("wsi.tsv"), &report.to_tsv(&name))?;
    info!(
        "wrote WSI reports for {} instances to {}",
        gold.len(),
        inputs.out_dir.display()
    );
    Ok(report)
}

fn aligned_word<'a>(
    alignment: &Alignment,
    target: &'a [String],
    source: usize,
    sentence: usize,
) -> Result<Option<&'a str>> {
    match alignment.iter().filter(|(s, _)| *s == source).map(|(_, t)| *t).min() {
        None => Ok(None),
        Some(t) => target.get(t).map(|w| Some(w.as_str())).ok_or_else(|| {
            Error::InvalidInput(format!(
                "sentence {sentence}: alignment points at target token {t}, but the sentence has {}",
                target.len()
            ))
        }),
    }
}

/// One triple per source token of an ambiguous noun or verb type. Each
/// translation contributes the target word at the lowest index aligned to
/// the token, or nothing when the token is unaligned.
pub fn lexical_triples(
    inventory: &SenseInventory,
    source: &TaggedCorpus,
    targets: [&[Vec<String>]; 3],
    alignments: [&[Alignment]; 3],
) -> Result<Vec<AlignedTriple>> {
    let n = source.len();
    for (name, len) in ["system", "baseline", "reference"]
        .into_iter()
        .zip(targets.iter().map(|t| t.len()))
        .chain(
            [
                "system alignment",
                "baseline alignment",
                "reference alignment",
            ]
            .into_iter()
            .zip(alignments.iter().map(|a| a.len())),
        )
    {
        if len != n {
            return Err(Error::InvalidInput(format!(
                "{name} has {len} sentences, the source has {n}"
            )));
        }
    }
    let mut out = Vec::new();
    for (s, sentence) in source.sentences.iter().enumerate() {
        for tok in sentence {
            let Some(key) = tok.key() else { continue };
            if !inventory.get(&key).is_some_and(|wt| wt.is_ambiguous()) {
                continue;
            }
            let mut words = [None; 3];
            for k in 0..3 {
                words[k] = aligned_word(&alignments[k][s], &targets[k][s], tok.source_index, s)?;
            }
            out.push(AlignedTriple::new(words[0], words[1], words[2]));
        }
    }
    Ok(out)
}

pub struct RhoInputs<'a> {
    /// Tagged source-side corpus.
    pub source: &'a Path,
    /// Tokenized translations, one sentence per line: system, baseline,
    /// reference.
    pub targets: [&'a Path; 3],
    /// Source-to-target alignments for each translation, Pharaoh format.
    pub alignments: [&'a Path; 3],
    pub out_dir: &'a Path,
    pub name: Option<&'a str>,
}

pub const RHO_CSV_HEADER: &str =
    "config,rho,n_improved,n_degraded,T,both_correct,system_only,baseline_only,both_incorrect";

fn tokenized(path: &Path) -> Result<Vec<Vec<String>>> {
    Ok(read_to_string(path)?
        .lines()
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect())
}

/// Writes `rho.json` and `rho.csv` into the output directory.
pub fn cmd_eval_rho(config: &PipelineConfig, inputs: &RhoInputs) -> Result<LexicalChoiceReport> {
    let inv_path = config.require("inventory", &config.inventory)?;
    let inventory = in_file(inv_path, load_inventory(inv_path))?;
    let source = in_file(
        inputs.source,
        load_corpus_with(inputs.source, ProperNouns::Keep),
    )?;
    let targets = inputs.targets.map(tokenized);
    let alignments = inputs
        .alignments
        .map(|p| read_to_string(p).and_then(|t| in_file(p, parse_alignments(&t))));
    let [t0, t1, t2] = targets;
    let [a0, a1, a2] = alignments;
    let (t0, t1, t2, a0, a1, a2) = (t0?, t1?, t2?, a0?, a1?, a2?);
    let triples = lexical_triples(&inventory, &source, [&t0, &t1, &t2], [&a0, &a1, &a2])?;
    let report = LexicalChoiceReport::new(&triples)?;

    let name = inputs
        .name
        .map_or_else(|| config.run_name(), str::to_string);
    let (r, m) = (&report.rho, &report.confusion);
    let csv = format!(
        "{RHO_CSV_HEADER}\n{name},{:.4},{},{},{},{},{},{},{}\n",
        r.rho,
        r.n_improved,
        r.n_degraded,
        r.t,
        m.both_correct,
        m.system_only,
        m.baseline_only,
        m.both_incorrect
    );
    let json = serde_json::to_string_pretty(&report).expect("reports always serialize") + "\n";
    write_file(&inputs.out_dir.join("rho.json"), &json)?;
    write_file(&inputs.out_dir.join("rho.csv"), &csv)?;
    info!("rho = {:.4} over {} tokens", r.rho, r.t);
    Ok(report)
}
