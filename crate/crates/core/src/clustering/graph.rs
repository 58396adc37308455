//! Sense graph and personalized PageRank disambiguation.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};
use crate::lexicon::{SenseInventory, WordKey};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PageRankConfig {
    pub damping: f64,
    /// Iteration stops once the L1 distance to the stationary distribution
    /// is guaranteed to be below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            damping: 0.85,
            tolerance: 1e-8,
            max_iterations: 1000,
        }
    }
}

impl PageRankConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::Config(format!(
                "damping must lie in (0, 1), got {}",
                self.damping
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Config(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEdge {
    pub src: String,
    pub dst: String,
    pub weight: f64,
}

/// Undirected weighted graph over global sense ids.
#[derive(Debug, Clone)]
pub struct SenseGraph {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<BTreeMap<usize, f64>>,
    pub config: PageRankConfig,
}

impl SenseGraph {
    pub fn new(nodes: Vec<String>, config: PageRankConfig) -> Result<Self> {
        config.validate()?;
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::Duplicate(format!("graph node {n}")));
            }
        }
        let adjacency = vec![BTreeMap::new(); nodes.len()];
        Ok(SenseGraph {
            nodes,
            index,
            adjacency,
            config,
        })
    }

    /// Nodes are every sense of the inventory; each neighbor link becomes an
    /// undirected edge of weight 1.
    pub fn from_inventory(inv: &SenseInventory, config: PageRankConfig) -> Result<Self> {
        let nodes = inv
            .word_types()
            .flat_map(|wt| wt.senses.iter().map(|s| s.id.clone()))
            .collect();
        let mut graph = SenseGraph::new(nodes, config)?;
        let links: Vec<(String, String)> = inv
            .word_types()
            .flat_map(|wt| &wt.senses)
            .flat_map(|s| s.neighbors.iter().map(move |n| (s.id.clone(), n.clone())))
            .collect();
        for (a, b) in links {
            graph.set_edge(&a, &b, 1.0)?;
        }
        Ok(graph)
    }

    /// Sets (or overwrites) the weight of the undirected edge `a`–`b`.
    pub fn set_edge(&mut self, a: &str, b: &str, weight: f64) -> Result<()> {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "edge {a}-{b} has non-positive weight {weight}"
            )));
        }
        let ia = self
            .node_index(a)
            .ok_or_else(|| Error::DanglingNeighbor(vec![a.to_string()]))?;
        let ib = self
            .node_index(b)
            .ok_or_else(|| Error::DanglingNeighbor(vec![b.to_string()]))?;
        self.adjacency[ia].insert(ib, weight);
        self.adjacency[ib].insert(ia, weight);
        Ok(())
    }

    pub fn apply_edges(&mut self, edges: &[WeightedEdge]) -> Result<()> {
        for e in edges {
            self.set_edge(&e.src, &e.dst, e.weight)?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Outgoing `(neighbor, weight)` pairs of node `i`.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adjacency[i].iter().map(|(&j, &w)| (j, w))
    }
}

/// Tab-separated `src dst weight` lines; blank lines and `#` comments skipped.
pub fn parse_weighted_edges(text: &str) -> Result<Vec<WeightedEdge>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        let [src, dst, weight] = fields[..] else {
            return Err(Error::parse(
                line_no,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        };
        if src.is_empty() || dst.is_empty() {
            return Err(Error::parse(line_no, "empty node id"));
        }
        let weight: f64 = weight
            .parse()
            .map_err(|_| Error::parse_at(line_no, 3, format!("`{weight}` is not a number")))?;
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::parse_at(
                line_no,
                3,
                format!("weight must be positive, got {weight}"),
            ));
        }
        out.push(WeightedEdge {
            src: src.to_string(),
            dst: dst.to_string(),
            weight,
        });
    }
    Ok(out)
}

pub fn load_weighted_edges(path: impl AsRef<Path>) -> Result<Vec<WeightedEdge>> {
    parse_weighted_edges(&read_to_string(path.as_ref())?)
}

/// Stationary distribution of the walk that follows edges with probability
/// `damping` and jumps according to `teleport` otherwise. Mass at nodes
/// without edges is redistributed by the teleport vector.
///
/// `teleport` is indexed like [`SenseGraph::nodes`] and is normalized here.
pub fn personalized_pagerank(graph: &SenseGraph, teleport: &[f64]) -> Result<Vec<f64>> {
    let n = graph.len();
    if n == 0 {
        return Err(Error::InvalidInput("PageRank on an empty graph".into()));
    }
    if teleport.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: teleport.len(),
        });
    }
    if teleport.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
        return Err(Error::InvalidInput(
            "teleport weights must be finite and non-negative".into(),
        ));
    }
    let total: f64 = teleport.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidInput(
            "teleport weights need at least one positive entry".into(),
        ));
    }
    let t: Vec<f64> = teleport.iter().map(|w| w / total).collect();
    let cfg = graph.config;
    cfg.validate()?;

    let out_weight: Vec<f64> = (0..n)
        .map(|i| graph.neighbors(i).map(|(_, w)| w).sum())
        .collect();
    // The update contracts L1 distances by `damping`, so a step of size
    // `delta` leaves at most `delta * d / (1 - d)` to the fixed point.
    let stop = cfg.tolerance * (1.0 - cfg.damping) / cfg.damping;
    let mut p = t.clone();
    let mut next = vec![0.0; n];
    let mut converged = false;
    for _ in 0..cfg.max_iterations {
        let dangling: f64 = (0..n).filter(|&i| out_weight[i] == 0.0).map(|i| p[i]).sum();
        for i in 0..n {
            next[i] = ((1.0 - cfg.damping) + cfg.damping * dangling) * t[i];
        }
        for i in 0..n {
            if out_weight[i] == 0.0 {
                continue;
            }
            let share = cfg.damping * p[i] / out_weight[i];
            for (j, w) in graph.neighbors(i) {
                next[j] += share * w;
            }
        }
        let delta: f64 = p.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut p, &mut next);
        if delta < stop {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!(
            "PageRank stopped after {} iterations without reaching tolerance {}",
            cfg.max_iterations,
            cfg.tolerance
        );
    }
    let sum: f64 = p.iter().sum();
    for x in p.iter_mut() {
        *x /= sum;
    }
    Ok(p)
}

/// Picks the sense of `context[target]` ranked highest by a walk that
/// teleports uniformly onto the senses of the other context words.
///
/// Context entries absent from the inventory contribute nothing. With no
/// usable context the walk teleports uniformly over the whole graph. Ties
/// go to the sense listed first in the inventory.
pub fn random_walk_disambiguate(
    graph: &SenseGraph,
    inv: &SenseInventory,
    context: &[WordKey],
    target: usize,
) -> Result<String> {
    let key = context.get(target).ok_or_else(|| {
        Error::InvalidInput(format!(
            "target index {target} out of range for {} context words",
            context.len()
        ))
    })?;
    let wt = inv
        .get(key)
        .ok_or_else(|| Error::UnknownWord(key.to_string()))?;
    if wt.senses.len() == 1 {
        return Ok(wt.senses[0].id.clone());
    }

    let mut teleport = vec![0.0; graph.len()];
    for (i, other) in context.iter().enumerate() {
        if i == target || other == key {
            continue;
        }
        let Some(owt) = inv.get(other) else { continue };
        for s in &owt.senses {
            if let Some(n) = graph.node_index(&s.id) {
                teleport[n] += 1.0;
            }
        }
    }
    if teleport.iter().all(|&w| w == 0.0) {
        teleport.iter_mut().for_each(|w| *w = 1.0);
    }
    let rank = personalized_pagerank(graph, &teleport)?;

    let mut best = &wt.senses[0].id;
    let mut best_p = f64::NEG_INFINITY;
    for s in &wt.senses {
        let p = graph.node_index(&s.id).map_or(0.0, |n| rank[n]);
        if p > best_p {
            best = &s.id;
            best_p = p;
        }
    }
    Ok(best.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{parse_inventory, Pos};

    fn graph(nodes: &[&str], edges: &[(&str, &str)]) -> SenseGraph {
        let mut g = SenseGraph::new(
            nodes.iter().map(|s| s.to_string()).collect(),
            PageRankConfig::default(),
        )
        .unwrap();
        for (a, b) in edges {
            g.set_edge(a, b, 1.0).unwrap();
        }
        g
    }

    /// Dense power iteration run far past convergence.
    fn dense_oracle(g: &SenseGraph, teleport: &[f64]) -> Vec<f64> {
        let n = g.len();
        let d = g.config.damping;
        let total: f64 = teleport.iter().sum();
        let t: Vec<f64> = teleport.iter().map(|x| x / total).collect();
        let mut m = vec![vec![0.0; n]; n];
        for (i, m_row) in m.iter_mut().enumerate() {
            let row: f64 = g.neighbors(i).map(|(_, w)| w).sum();
            for (j, cell) in m_row.iter_mut().enumerate() {
                *cell = if row == 0.0 {
                    t[j]
                } else {
                    g.neighbors(i)
                        .filter(|&(k, _)| k == j)
                        .map(|(_, w)| w / row)
                        .sum()
                };
            }
        }
        let mut p = vec![1.0 / n as f64; n];
        for _ in 0..5000 {
            p = (0..n)
                .map(|j| (1.0 - d) * t[j] + d * (0..n).map(|i| m[i][j] * p[i]).sum::<f64>())
                .collect();
        }
        p
    }

    #[test]
    fn symmetric_pair() {
        let g = graph(&["a", "b"], &[("a", "b")]);
        let p = personalized_pagerank(&g, &[1.0, 1.0]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_node() {
        let g = graph(&["a"], &[]);
        assert_eq!(personalized_pagerank(&g, &[3.0]).unwrap(), [1.0]);
        let mut g = graph(&["a"], &[]);
        g.set_edge("a", "a", 2.0).unwrap();
        assert!((personalized_pagerank(&g, &[1.0]).unwrap()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn path_matches_oracle() {
        let g = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let t = [1.0, 1.0, 1.0];
        let p = personalized_pagerank(&g, &t).unwrap();
        let q = dense_oracle(&g, &t);
        for (x, y) in p.iter().zip(&q) {
            assert!((x - y).abs() < 1e-8, "{p:?} vs {q:?}");
        }
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        let empty = graph(&[], &[]);
        assert!(personalized_pagerank(&empty, &[]).is_err());
        let g = graph(&["a", "b"], &[]);
        assert!(personalized_pagerank(&g, &[0.0, 0.0]).is_err());
        assert!(personalized_pagerank(&g, &[1.0]).is_err());
        assert!(personalized_pagerank(&g, &[-1.0, 2.0]).is_err());
    }

    fn wsd_inventory() -> SenseInventory {
        let text = [
            r#"{"lemma": "bank", "pos": "noun", "senses": [{"id": "bank.n.01"}, {"id": "bank.n.02", "neighbors": ["money.n.01"]}]}"#,
            r#"{"lemma": "money", "pos": "noun", "senses": [{"id": "money.n.01"}]}"#,
            r#"{"lemma": "river", "pos": "noun", "senses": [{"id": "river.n.01"}]}"#,
            r#"{"lemma": "go", "pos": "verb", "senses": [{"id": "go.v.01"}]}"#,
        ]
        .join("\n");
        parse_inventory(&text).unwrap()
    }

    #[test]
    fn disambiguation() {
        let inv = wsd_inventory();
        let g = SenseGraph::from_inventory(&inv, PageRankConfig::default()).unwrap();
        let bank = WordKey::new("bank", Pos::Noun);
        let money = WordKey::new("money", Pos::Noun);
        let go = WordKey::new("go", Pos::Verb);

        // only bank.n.02 touches the context's sense
        let ctx = [money.clone(), bank.clone()];
        assert_eq!(
            random_walk_disambiguate(&g, &inv, &ctx, 1).unwrap(),
            "bank.n.02"
        );

        // monosemous target
        assert_eq!(
            random_walk_disambiguate(&g, &inv, &[go.clone(), bank.clone()], 0).unwrap(),
            "go.v.01"
        );

        // no context: uniform teleport; bank.n.02 has an edge so it outranks bank.n.01
        let alone = [bank.clone()];
        assert_eq!(
            random_walk_disambiguate(&g, &inv, &alone, 0).unwrap(),
            "bank.n.02"
        );

        // context senses unconnected to either candidate: tie -> first sense
        let ctx = [WordKey::new("river", Pos::Noun), bank.clone()];
        assert_eq!(
            random_walk_disambiguate(&g, &inv, &ctx, 1).unwrap(),
            "bank.n.01"
        );

        let unknown = [WordKey::new("zzz", Pos::Noun)];
        assert!(matches!(
            random_walk_disambiguate(&g, &inv, &unknown, 0),
            Err(Error::UnknownWord(_))
        ));
    }

    #[test]
    fn edge_file() {
        let edges = parse_weighted_edges("# comment\na\tb\t2.5\n\nb\tc\t1\n").unwrap();
        assert_eq!(edges.len(), 2);
        assert_eq!(edges[0].weight, 2.5);
        assert!(parse_weighted_edges("a\tb\n").is_err());
        assert!(parse_weighted_edges("a\tb\t-1\n").is_err());
        assert!(parse_weighted_edges("a\tb\tx\n").is_err());

        let mut g = graph(&["a", "b", "c"], &[]);
        g.apply_edges(&edges).unwrap();
        assert_eq!(g.neighbors(1).collect::<Vec<_>>(), [(0, 2.5), (2, 1.0)]);
        assert!(g.set_edge("a", "zz", 1.0).is_err());
    }
}
