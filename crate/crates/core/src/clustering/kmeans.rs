//! Adaptive k-means: Lloyd iterations seeded from sense vectors, followed
//! by absorption of clusters that are too small.
//!
//! Lloyd assignment uses squared Euclidean distance; absorption of small
//! clusters and test-time assignment use cosine distance.

use log::debug;

use super::{check_dims, nearest_by_cosine, Cluster, DEFAULT_MIN_CLUSTER_SIZE};
use crate::error::{Error, Result};
use crate::vector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeans {
    pub min_cluster_size: usize,
    pub max_iters: usize,
}

impl Default for KMeans {
    fn default() -> Self {
        KMeans {
            min_cluster_size: DEFAULT_MIN_CLUSTER_SIZE,
            max_iters: 300,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    /// Clusters after small-cluster absorption.
    pub clusters: Vec<Cluster>,
    /// Index into `clusters` for every input context.
    pub assignments: Vec<usize>,
    /// Clusters as they stood when Lloyd iterations stopped.
    pub lloyd_clusters: Vec<Cluster>,
    /// Within-cluster sum of squares after every assignment and update step.
    pub objective: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl KMeans {
    pub fn fit(
        &self,
        contexts: &[Vec<f64>],
        init: &[Vec<f64>],
        labels: &[String],
    ) -> Result<KMeansFit> {
        if contexts.is_empty() {
            return Err(Error::InvalidInput(
                "k-means needs at least one context".into(),
            ));
        }
        if init.is_empty() || init.len() != labels.len() {
            return Err(Error::InvalidInput(format!(
                "k-means needs one label per initial centroid (got {} centroids, {} labels)",
                init.len(),
                labels.len()
            )));
        }
        let dim = init[0].len();
        check_dims(dim, init)?;
        check_dims(dim, contexts)?;

        let mut centroids = init.to_vec();
        let mut assignments = assign_euclidean(contexts, &centroids);
        let mut objective = vec![within_ss(contexts, &centroids, &assignments)];
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iters {
            update_centroids(contexts, &assignments, &mut centroids);
            objective.push(within_ss(contexts, &centroids, &assignments));
            let next = assign_euclidean(contexts, &centroids);
            objective.push(within_ss(contexts, &centroids, &next));
            iterations += 1;
            if next == assignments {
                converged = true;
                break;
            }
            assignments = next;
        }
        debug_assert!(
            objective
                .windows(2)
                .all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-12),
            "k-means objective increased: {objective:?}"
        );

        let mut counts = vec![0usize; centroids.len()];
        for &a in &assignments {
            counts[a] += 1;
        }
        let lloyd_clusters: Vec<Cluster> = centroids
            .into_iter()
            .zip(counts)
            .zip(labels)
            .map(|((centroid, count), label)| Cluster {
                label: label.clone(),
                count,
                centroid,
                sense: None,
            })
            .collect();

        let (clusters, assignments) = reduce_small_clusters(
            &lloyd_clusters,
            self.min_cluster_size,
            contexts,
            &assignments,
        );
        Ok(KMeansFit {
            clusters,
            assignments,
            lloyd_clusters,
            objective,
            iterations,
            converged,
        })
    }
}

pub fn kmeans_adaptive(
    contexts: &[Vec<f64>],
    init_centroids: &[Vec<f64>],
    labels: &[String],
    min_cluster_size: usize,
    max_iters: usize,
) -> Result<KMeansFit> {
    KMeans {
        min_cluster_size,
        max_iters,
    }
    .fit(contexts, init_centroids, labels)
}

fn assign_euclidean(contexts: &[Vec<f64>], centroids: &[Vec<f64>]) -> Vec<usize> {
    contexts
        .iter()
        .map(|u| {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (i, c) in centroids.iter().enumerate() {
                let d = vector::squared_distance(u, c);
                if d < best_d {
                    best = i;
                    best_d = d;
                }
            }
            best
        })
        .collect()
}

/// Moves every non-empty cluster's centroid to the mean of its members.
/// Empty clusters keep their previous centroid.
fn update_centroids(contexts: &[Vec<f64>], assignments: &[usize], centroids: &mut [Vec<f64>]) {
    let dim = centroids[0].len();
    let mut sums = vec![vec![0.0; dim]; centroids.len()];
    let mut counts = vec![0usize; centroids.len()];
    for (u, &a) in contexts.iter().zip(assignments) {
        vector::add_assign(&mut sums[a], u);
        counts[a] += 1;
    }
    for ((c, mut s), n) in centroids.iter_mut().zip(sums).zip(counts) {
        if n > 0 {
            vector::scale(&mut s, 1.0 / n as f64);
            *c = s;
        }
    }
}

fn within_ss(contexts: &[Vec<f64>], centroids: &[Vec<f64>], assignments: &[usize]) -> f64 {
    contexts
        .iter()
        .zip(assignments)
        .map(|(u, &a)| vector::squared_distance(u, &centroids[a]))
        .sum()
}

/// Removes clusters holding fewer than `min_cluster_size` tokens and moves
/// each of their tokens to the cosine-nearest surviving cluster. Survivors
/// keep their centroids. When no cluster reaches the threshold the largest
/// one (lowest index on ties) absorbs every token.
///
/// Returns the surviving clusters, in their original order, and the
/// remapped assignments.
pub fn reduce_small_clusters(
    clusters: &[Cluster],
    min_cluster_size: usize,
    contexts: &[Vec<f64>],
    assignments: &[usize],
) -> (Vec<Cluster>, Vec<usize>) {
    let large: Vec<usize> = (0..clusters.len())
        .filter(|&i| clusters[i].count >= min_cluster_size)
        .collect();

    if large.is_empty() {
        let keep = (0..clusters.len())
            .max_by(|&a, &b| clusters[a].count.cmp(&clusters[b].count).then(b.cmp(&a)))
            .expect("at least one cluster");
        let mut survivor = clusters[keep].clone();
        survivor.count = assignments.len();
        debug!(
            "all {} clusters below {min_cluster_size}; `{}` absorbs {} tokens",
            clusters.len(),
            survivor.label,
            survivor.count
        );
        return (vec![survivor], vec![0; assignments.len()]);
    }

    let mut remap = vec![usize::MAX; clusters.len()];
    for (new, &old) in large.iter().enumerate() {
        remap[old] = new;
    }
    let mut survivors: Vec<Cluster> = large.iter().map(|&i| clusters[i].clone()).collect();

    // Smallest first; lowest index breaks ties.
    let mut small: Vec<usize> = (0..clusters.len())
        .filter(|&i| remap[i] == usize::MAX)
        .collect();
    small.sort_by_key(|&i| (clusters[i].count, i));

    let mut out: Vec<usize> = assignments.iter().map(|&a| remap[a]).collect();
    for &s in &small {
        let mut moved = 0;
        for (tok, &old) in assignments.iter().enumerate() {
            if old != s {
                continue;
            }
            let target = nearest_by_cosine(
                &contexts[tok],
                survivors.iter().map(|c| c.centroid.as_slice()),
            );
            survivors[target].count += 1;
            out[tok] = target;
            moved += 1;
        }
        debug!("cluster `{}` ({moved} tokens) absorbed", clusters[s].label);
    }
    (survivors, out)
}
