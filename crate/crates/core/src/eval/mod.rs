//! Evaluation: clustering scores against gold senses (V-measure, paired
//! F-score) and lexical-choice scores against a reference translation.

mod lexical;
mod wsi;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::Serialize;

use crate::error::{read_to_string, Error, Result};

pub use lexical::{
    confusion_matrix, parse_alignment_line, parse_alignments, rho, AlignedTriple, Alignment,
    ConfusionMatrix, LexicalChoice, LexicalChoiceReport,
};
pub use wsi::{wsi_report, CategoryScores, WordEvaluation, WsiReport};

/// Parallel instance ids, predicted labels and gold labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledInstances {
    ids: Vec<String>,
    predicted: Vec<String>,
    gold: Vec<String>,
}

impl LabeledInstances {
    pub fn new(ids: Vec<String>, predicted: Vec<String>, gold: Vec<String>) -> Result<Self> {
        if ids.len() != predicted.len() || ids.len() != gold.len() {
            return Err(Error::InvalidInput(format!(
                "instance lists differ in length: {} ids, {} predicted, {} gold",
                ids.len(),
                predicted.len(),
                gold.len()
            )));
        }
        if predicted.iter().chain(&gold).any(String::is_empty) {
            return Err(Error::InvalidInput("empty label".into()));
        }
        Ok(LabeledInstances {
            ids,
            predicted,
            gold,
        })
    }

    /// Ids generated from positions.
    pub fn from_labels(predicted: Vec<String>, gold: Vec<String>) -> Result<Self> {
        let ids = (0..predicted.len()).map(|i| i.to_string()).collect();
        Self::new(ids, predicted, gold)
    }

    /// Pairs predictions with gold labels by instance id. Every gold id must
    /// be predicted and vice versa.
    pub fn join(predicted: &[(String, String)], gold: &[(String, String)]) -> Result<Self> {
        let pred: HashMap<&str, &str> = unique_map(predicted, "prediction")?;
        let gold_map: HashMap<&str, &str> = unique_map(gold, "gold")?;
        let mut ids = Vec::with_capacity(gold.len());
        let mut p = Vec::with_capacity(gold.len());
        let mut g = Vec::with_capacity(gold.len());
        for (id, label) in gold {
            let pl = pred.get(id.as_str()).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "instance `{id}` has a gold label but no prediction"
                ))
            })?;
            ids.push(id.clone());
            p.push(pl.to_string());
            g.push(label.clone());
        }
        if let Some((id, _)) = predicted
            .iter()
            .find(|(id, _)| !gold_map.contains_key(id.as_str()))
        {
            return Err(Error::InvalidInput(format!(
                "instance `{id}` is predicted but has no gold label"
            )));
        }
        Self::new(ids, p, g)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn predicted(&self) -> &[String] {
        &self.predicted
    }

    pub fn gold(&self) -> &[String] {
        &self.gold
    }

    pub fn predicted_cluster_count(&self) -> usize {
        self.predicted.iter().collect::<HashSet<_>>().len()
    }
}

fn unique_map<'a>(rows: &'a [(String, String)], what: &str) -> Result<HashMap<&'a str, &'a str>> {
    let mut map = HashMap::with_capacity(rows.len());
    for (id, label) in rows {
        if map.insert(id.as_str(), label.as_str()).is_some() {
            return Err(Error::Duplicate(format!("{what} instance {id}")));
        }
    }
    Ok(map)
}

/// `instance_id<TAB>label` lines; blank lines are skipped.
pub fn parse_label_tsv(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(id), Some(label), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(i + 1, "expected `instance_id<TAB>label`"));
        };
        let (id, label) = (id.trim(), label.trim());
        if id.is_empty() || label.is_empty() {
            return Err(Error::parse(i + 1, "empty instance id or label"));
        }
        out.push((id.to_string(), label.to_string()));
    }
    Ok(out)
}

pub fn load_label_tsv(path: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
    parse_label_tsv(&read_to_string(path.as_ref())?)
}

/// Contingency counts between predicted clusters and gold classes.
struct Contingency {
    // Ordered so that float sums are reproducible run to run.
    cells: BTreeMap<(usize, usize), usize>,
    pred_sizes: Vec<usize>,
    gold_sizes: Vec<usize>,
    n: usize,
}

impl Contingency {
    fn new(data: &LabeledInstances) -> Self {
        fn intern<'a>(map: &mut HashMap<&'a str, usize>, s: &'a str) -> usize {
            let next = map.len();
            *map.entry(s).or_insert(next)
        }
        let mut pred_ids = HashMap::new();
        let mut gold_ids = HashMap::new();
        let mut cells = BTreeMap::new();
        for (p, g) in data.predicted.iter().zip(&data.gold) {
            let pi = intern(&mut pred_ids, p);
            let gi = intern(&mut gold_ids, g);
            *cells.entry((pi, gi)).or_insert(0) += 1;
        }
        let mut pred_sizes = vec![0; pred_ids.len()];
        let mut gold_sizes = vec![0; gold_ids.len()];
        for (&(p, g), &c) in &cells {
            pred_sizes[p] += c;
            gold_sizes[g] += c;
        }
        Contingency {
            cells,
            pred_sizes,
            gold_sizes,
            n: data.len(),
        }
    }
}

fn entropy(sizes: &[usize], n: usize) -> f64 {
    let n = n as f64;
    -sizes
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * p.ln()
        })
        .sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VMeasure {
    pub homogeneity: f64,
    pub completeness: f64,
    pub v: f64,
}

/// Homogeneity, completeness and their harmonic mean, with natural-log
/// entropies. Degenerate entropies score 1; `v` is 0 when both parts are.
pub fn v_score(data: &LabeledInstances) -> VMeasure {
    if data.is_empty() {
        return VMeasure {
            homogeneity: 1.0,
            completeness: 1.0,
            v: 1.0,
        };
    }
    let c = Contingency::new(data);
    let n = c.n as f64;
    let h_gold = entropy(&c.gold_sizes, c.n);
    let h_pred = entropy(&c.pred_sizes, c.n);
    // H(gold|pred) and H(pred|gold)
    let mut h_gold_given_pred = 0.0;
    let mut h_pred_given_gold = 0.0;
    for (&(p, g), &count) in &c.cells {
        let a = count as f64;
        h_gold_given_pred -= a / n * (a / c.pred_sizes[p] as f64).ln();
        h_pred_given_gold -= a / n * (a / c.gold_sizes[g] as f64).ln();
    }
    let homogeneity = if h_gold == 0.0 {
        1.0
    } else {
        (1.0 - h_gold_given_pred / h_gold).clamp(0.0, 1.0)
    };
    let completeness = if h_pred == 0.0 {
        1.0
    } else {
        (1.0 - h_pred_given_gold / h_pred).clamp(0.0, 1.0)
    };
    let v = if homogeneity + completeness == 0.0 {
        0.0
    } else {
        2.0 * homogeneity * completeness / (homogeneity + completeness)
    };
    VMeasure {
        homogeneity,
        completeness,
        v,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairedF {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn pairs(c: usize) -> u64 {
    let c = c as u64;
    c * c.saturating_sub(1) / 2
}

/// Paired F-score over unordered instance pairs: precision over pairs that
/// share a predicted cluster, recall over pairs that share a gold class.
pub fn paired_f1(data: &LabeledInstances) -> PairedF {
    let c = Contingency::new(data);
    let both: u64 = c.cells.values().map(|&x| pairs(x)).sum();
    let same_pred: u64 = c.pred_sizes.iter().map(|&x| pairs(x)).sum();
    let same_gold: u64 = c.gold_sizes.iter().map(|&x| pairs(x)).sum();
    // With no co-clustered pairs on either side the two partitions agree
    // (every instance is alone); an empty set on one side only scores 0.
    let (precision, recall) = if same_pred == 0 && same_gold == 0 {
        (1.0, 1.0)
    } else {
        (ratio(both, same_pred), ratio(both, same_gold))
    };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    PairedF {
        precision,
        recall,
        f1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inst(pred: &[&str], gold: &[&str]) -> LabeledInstances {
        LabeledInstances::from_labels(
            pred.iter().map(|s| s.to_string()).collect(),
            gold.iter().map(|s| s.to_string()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn v_score_examples() {
        let v = v_score(&inst(&["x", "x", "y", "z"], &["a", "a", "b", "c"]));
        assert!((v.v - 1.0).abs() < 1e-12);

        let v = v_score(&inst(&["x"; 4], &["a", "a", "b", "b"]));
        assert_eq!((v.homogeneity, v.completeness, v.v), (0.0, 1.0, 0.0));

        let v = v_score(&inst(&["1", "2", "3", "4"], &["a"; 4]));
        assert_eq!((v.homogeneity, v.completeness, v.v), (1.0, 0.0, 0.0));
    }

    #[test]
    fn paired_f_examples() {
        let f = paired_f1(&inst(&["x", "x", "y"], &["x", "x", "y"]));
        assert_eq!((f.precision, f.recall, f.f1), (1.0, 1.0, 1.0));

        let f = paired_f1(&inst(&["p", "p", "q", "q"], &["g"; 4]));
        assert_eq!(f.precision, 1.0);
        assert!((f.recall - 2.0 / 6.0).abs() < 1e-15);
        assert!((f.f1 - 0.5).abs() < 1e-15);

        let f = paired_f1(&inst(&["1", "2", "3"], &["g"; 3]));
        assert_eq!((f.precision, f.recall, f.f1), (0.0, 0.0, 0.0));

        let f = paired_f1(&inst(&["x"; 3], &["1", "2", "3"]));
        assert_eq!((f.precision, f.recall, f.f1), (0.0, 0.0, 0.0));

        let f = paired_f1(&inst(&["1", "2"], &["a", "b"]));
        assert_eq!(f.f1, 1.0);
    }

    #[test]
    fn join_by_id() {
        let pred = vec![
            ("b".to_string(), "1".to_string()),
            ("a".to_string(), "2".to_string()),
        ];
        let gold = vec![
            ("a".to_string(), "x".to_string()),
            ("b".to_string(), "y".to_string()),
        ];
        let d = LabeledInstances::join(&pred, &gold).unwrap();
        assert_eq!(d.ids(), ["a", "b"]);
        assert_eq!(d.predicted(), ["2", "1"]);

        let missing = vec![("a".to_string(), "2".to_string())];
        let err = LabeledInstances::join(&missing, &gold).unwrap_err();
        assert!(err.to_string().contains("`b`"), "{err}");
        let extra = vec![
            pred[0].clone(),
            pred[1].clone(),
            ("c".to_string(), "1".to_string()),
        ];
        assert!(LabeledInstances::join(&extra, &gold)
            .unwrap_err()
            .to_string()
            .contains("`c`"));
    }

    #[test]
    fn label_tsv() {
        let rows = parse_label_tsv("a.n.1\tx\n\nb.n.2\ty\n").unwrap();
        assert_eq!(rows.len(), 2);
        assert!(parse_label_tsv("a.n.1 x\n").is_err());
        assert!(parse_label_tsv("a\tb\tc\n").is_err());
    }

    /// Direct enumeration of all unordered pairs.
    fn brute_pairs(p: &[usize], g: &[usize]) -> (f64, f64, f64) {
        let (mut both, mut sp, mut sg) = (0u64, 0u64, 0u64);
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                let a = p[i] == p[j];
                let b = g[i] == g[j];
                sp += a as u64;
                sg += b as u64;
                both += (a && b) as u64;
            }
        }
        let (pr, re) = match (sp, sg) {
            (0, 0) => (1.0, 1.0),
            _ => (
                if sp == 0 {
                    0.0
                } else {
                    both as f64 / sp as f64
                },
                if sg == 0 {
                    0.0
                } else {
                    both as f64 / sg as f64
                },
            ),
        };
        let f = if pr + re == 0.0 {
            0.0
        } else {
            2.0 * pr * re / (pr + re)
        };
        (pr, re, f)
    }

    proptest! {
        #[test]
        fn relabeling_invariance(labels in proptest::collection::vec((0usize..4, 0usize..4), 1..20), shift in 1usize..7) {
            let p: Vec<String> = labels.iter().map(|l| format!("p{}", l.0)).collect();
            let g: Vec<String> = labels.iter().map(|l| format!("g{}", l.1)).collect();
            let p2: Vec<String> = labels.iter().map(|l| format!("q{}", (l.0 + shift) % 11)).collect();
            let a = LabeledInstances::from_labels(p, g.clone()).unwrap();
            let b = LabeledInstances::from_labels(p2, g).unwrap();
            let (va, vb) = (v_score(&a), v_score(&b));
            prop_assert!((va.v - vb.v).abs() < 1e-12);
            prop_assert_eq!(paired_f1(&a), paired_f1(&b));
            prop_assert!((0.0..=1.0).contains(&va.v));
            prop_assert!((0.0..=1.0).contains(&va.homogeneity) && (0.0..=1.0).contains(&va.completeness));
        }

        #[test]
        fn paired_matches_enumeration(labels in proptest::collection::vec((0usize..4, 0usize..4), 1..13)) {
            let p: Vec<usize> = labels.iter().map(|l| l.0).collect();
            let g: Vec<usize> = labels.iter().map(|l| l.1).collect();
            let d = LabeledInstances::from_labels(
                p.iter().map(|x| x.to_string()).collect(),
                g.iter().map(|x| x.to_string()).collect(),
            ).unwrap();
            let f = paired_f1(&d);
            let (pr, re, f1) = brute_pairs(&p, &g);
            prop_assert!((f.precision - pr).abs() <= 1e-12);
            prop_assert!((f.recall - re).abs() <= 1e-12);
            prop_assert!((f.f1 - f1).abs() <= 1e-12);
        }
    }
}
