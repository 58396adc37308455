use serde::Serialize;

use super::{paired_f1, v_score, LabeledInstances};
use crate::lexicon::{Pos, WordKey};

/// Instances of one word type together with the size of its sense model.
#[derive(Debug, Clone)]
pub struct WordEvaluation {
    pub key: WordKey,
    pub data: LabeledInstances,
    pub cluster_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CategoryScores {
    pub v_score: f64,
    pub homogeneity: f64,
    pub completeness: f64,
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
    /// `(v_score + f1) / 2`.
    pub average: f64,
    pub instances: usize,
    pub word_types: usize,
}

/// Scores per category. A category with no instances is `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WsiReport {
    pub all: Option<CategoryScores>,
    pub nouns: Option<CategoryScores>,
    pub verbs: Option<CategoryScores>,
    /// Mean number of clusters per word type, unweighted.
    pub cluster_count: f64,
}

/// Per-word scores averaged with weights proportional to instance counts.
fn category<'a>(words: impl Iterator<Item = &'a WordEvaluation>) -> Option<CategoryScores> {
    let mut acc = [0.0f64; 6];
    let mut n = 0usize;
    let mut types = 0usize;
    for w in words {
        let size = w.data.len();
        if size == 0 {
            continue;
        }
        let v = v_score(&w.data);
        let f = paired_f1(&w.data);
        let wt = size as f64;
        for (a, x) in acc.iter_mut().zip([
            v.v,
            v.homogeneity,
            v.completeness,
            f.f1,
            f.precision,
            f.recall,
        ]) {
            *a += wt * x;
        }
        n += size;
        types += 1;
    }
    if n == 0 {
        return None;
    }
    let [v, h, c, f1, p, r] = acc.map(|x| x / n as f64);
    Some(CategoryScores {
        v_score: v,
        homogeneity: h,
        completeness: c,
        f1,
        precision: p,
        recall: r,
        average: (v + f1) / 2.0,
        instances: n,
        word_types: types,
    })
}

pub fn wsi_report(words: &[WordEvaluation]) -> WsiReport {
    let cluster_count = if words.is_empty() {
        0.0
    } else {
        words.iter().map(|w| w.cluster_count as f64).sum::<f64>() / words.len() as f64
    };
    WsiReport {
        all: category(words.iter()),
        nouns: category(words.iter().filter(|w| w.key.pos == Pos::Noun)),
        verbs: category(words.iter().filter(|w| w.key.pos == Pos::Verb)),
        cluster_count,
    }
}

impl WsiReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// Header row of [`WsiReport::csv_row`]: V, F1 and their average for
    /// all/nouns/verbs, then the mean cluster count.
    pub const CSV_HEADER: &'static str =
        "config,V_all,V_nouns,V_verbs,F1_all,F1_nouns,F1_verbs,Average_all,Average_nouns,Average_verbs,C";

    /// Scores in percent with two decimals; empty cells for empty categories.
    pub fn csv_row(&self, config: &str) -> String {
        let cats = [&self.all, &self.nouns, &self.verbs];
        let pct = |f: fn(&CategoryScores) -> f64| {
            cats.iter()
                .map(|c| {
                    c.as_ref()
                        .map(|s| format!("{:.2}", 100.0 * f(s)))
                        .unwrap_or_default()
                })
                .collect::<Vec<_>>()
        };
        let mut cells = vec![config.to_string()];
        cells.extend(pct(|s| s.v_score));
        cells.extend(pct(|s| s.f1));
        cells.extend(pct(|s| s.average));
        cells.push(format!("{:.2}", self.cluster_count));
        cells.join(",")
    }

    pub fn to_csv(&self, config: &str) -> String {
        format!("{}\n{}\n", Self::CSV_HEADER, self.csv_row(config))
    }

    /// `config<TAB>metric<TAB>value` rows, one per metric, for plotting.
    pub fn to_tsv(&self, config: &str) -> String {
        let mut out = String::new();
        for (name, cat) in [
            ("all", &self.all),
            ("nouns", &self.nouns),
            ("verbs", &self.verbs),
        ] {
            let Some(s) = cat else { continue };
            for (metric, value) in [
                ("v_score", s.v_score),
                ("homogeneity", s.homogeneity),
                ("completeness", s.completeness),
                ("f1", s.f1),
                ("precision", s.precision),
                ("recall", s.recall),
                ("average", s.average),
            ] {
                out.push_str(&format!("{config}\t{metric}_{name}\t{value}\n"));
            }
        }
        out.push_str(&format!("{config}\tclusters\t{}\n", self.cluster_count));
        out
    }
}
