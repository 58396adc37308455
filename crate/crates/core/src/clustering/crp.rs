//! Bounded Chinese restaurant process with sense-informed seating scores.
//!
//! A single deterministic pass over the tokens. A token scores an occupied
//! sense `j` as `N_j * (lambda1 * s(u, d_j) + lambda2 * s(u, mu_j))` and an
//! empty one as `gamma * s(u, d_j)`, where `s` is cosine similarity, `d_j`
//! the sense's seed vector and `mu_j` the running mean of its members. The
//! token joins the highest-scoring sense; the number of senses never
//! exceeds the number of seeds.

use serde::{Deserialize, Serialize};

use super::{check_dims, Cluster};
use crate::error::{Error, Result};
use crate::vector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrpParams {
    pub lambda1: f64,
    pub lambda2: f64,
    pub gamma: f64,
}

impl CrpParams {
    pub fn new(lambda1: f64, lambda2: f64, gamma: f64) -> Result<Self> {
        let p = CrpParams {
            lambda1,
            lambda2,
            gamma,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.lambda1, self.lambda2, self.gamma];
        if all.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Config(format!(
                "CRP weights must be finite and non-negative: {self:?}"
            )));
        }
        if all.iter().all(|&x| x == 0.0) {
            return Err(Error::Config("CRP weights cannot all be zero".into()));
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        CrpParams {
            lambda1: self.lambda1 * factor,
            lambda2: self.lambda2 * factor,
            gamma: self.gamma * factor,
        }
    }
}

impl Default for CrpParams {
    fn default() -> Self {
        CrpParams {
            lambda1: 0.5,
            lambda2: 0.5,
            gamma: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrpFit {
    /// Occupied senses in seed order; empty senses are dropped.
    pub clusters: Vec<Cluster>,
    /// Index into `clusters` for every input context.
    pub assignments: Vec<usize>,
    /// Seed index chosen for every input context.
    pub seats: Vec<usize>,
}

pub fn crp_cluster(
    contexts: &[Vec<f64>],
    seed_vectors: &[Vec<f64>],
    labels: &[String],
    params: CrpParams,
) -> Result<CrpFit> {
    params.validate()?;
    if contexts.is_empty() {
        return Err(Error::InvalidInput("CRP needs at least one context".into()));
    }
    if seed_vectors.is_empty() || seed_vectors.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "CRP needs one label per seed vector (got {} seeds, {} labels)",
            seed_vectors.len(),
            labels.len()
        )));
    }
    let dim = seed_vectors[0].len();
    check_dims(dim, seed_vectors)?;
    check_dims(dim, contexts)?;

    let k = seed_vectors.len();
    let mut members = vec![0usize; k];
    let mut sums = vec![vec![0.0; dim]; k];
    let mut means = vec![vec![0.0; dim]; k];
    let mut seats = Vec::with_capacity(contexts.len());

    for u in contexts {
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for j in 0..k {
            let s_def = vector::cosine_similarity(u, &seed_vectors[j]);
            let score = if members[j] == 0 {
                params.gamma * s_def
            } else {
                let s_mean = vector::cosine_similarity(u, &means[j]);
                members[j] as f64 * (params.lambda1 * s_def + params.lambda2 * s_mean)
            };
            if score > best_score {
                best = j;
                best_score = score;
            }
        }
        members[best] += 1;
        vector::add_assign(&mut sums[best], u);
        means[best] = sums[best]
            .iter()
            .map(|x| x / members[best] as f64)
            .collect();
        seats.push(best);
    }

    let mut remap = vec![usize::MAX; k];
    let mut clusters = Vec::new();
    for j in 0..k {
        if members[j] == 0 {
            continue;
        }
        remap[j] = clusters.len();
        clusters.push(Cluster {
            label: labels[j].clone(),
            count: members[j],
            centroid: means[j].clone(),
            sense: None,
        });
    }
    let assignments = seats.iter().map(|&j| remap[j]).collect();
    Ok(CrpFit {
        clusters,
        assignments,
        seats,
    })
}
