use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{SenseWeights, WeightMode};
use crate::error::{Error, Result};

/// Dense row-major matrix. Serialized as an array of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("matrix rows differ in length".into()));
        }
        let n = rows.len();
        Ok(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn random<R: Rng>(rows: usize, cols: usize, range: f64, rng: &mut R) -> Self {
        Matrix {
            rows,
            cols,
            data: (0..rows * cols)
                .map(|_| rng.random_range(-range..=range))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `self * x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self^T * x`.
    pub fn t_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (i, xi) in x.iter().enumerate().take(self.rows) {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.data
            .chunks(m.cols.max(1))
            .take(m.rows)
            .map(<[f64]>::to_vec)
            .collect()
    }
}

/// Parameters of the sense attention scorer.
///
/// * `Tanh`: `f(u, mu) = v^T tanh(W u + U mu)` with `W: a x d_c`, `U: a x d_s`.
/// * `Bilinear`: `f(u, mu) = u^T W mu` with `W: d_c x d_s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum AttentionParams {
    Tanh { w: Matrix, u: Matrix, v: Vec<f64> },
    Bilinear { w: Matrix },
}

impl AttentionParams {
    pub fn context_dim(&self) -> usize {
        match self {
            AttentionParams::Tanh { w, .. } => w.cols(),
            AttentionParams::Bilinear { w } => w.rows(),
        }
    }

    pub fn sense_dim(&self) -> usize {
        match self {
            AttentionParams::Tanh { u, .. } => u.cols(),
            AttentionParams::Bilinear { w } => w.cols(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AttentionParams::Tanh { w, u, v } => {
                if w.rows() != v.len() || u.rows() != v.len() {
                    return Err(Error::InvalidInput(format!(
                        "tanh attention shapes disagree: W {}x{}, U {}x{}, v {}",
                        w.rows(),
                        w.cols(),
                        u.rows(),
                        u.cols(),
                        v.len()
                    )));
                }
                if !w.is_finite() || !u.is_finite() || v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::NonFinite("attention parameter".into()));
                }
            }
            AttentionParams::Bilinear { w } => {
                if !w.is_finite() {
                    return Err(Error::NonFinite("attention parameter".into()));
                }
            }
        }
        Ok(())
    }

    /// Uniform random parameters in `[-range, range]`.
    pub fn random_tanh<R: Rng>(
        context_dim: usize,
        sense_dim: usize,
        width: usize,
        range: f64,
        rng: &mut R,
    ) -> Self {
        AttentionParams::Tanh {
            w: Matrix::random(width, context_dim, range, rng),
            u: Matrix::random(width, sense_dim, range, rng),
            v: (0..width)
                .map(|_| rng.random_range(-range..=range))
                .collect(),
        }
    }

    pub fn random_bilinear<R: Rng>(
        context_dim: usize,
        sense_dim: usize,
        range: f64,
        rng: &mut R,
    ) -> Self {
        AttentionParams::Bilinear {
            w: Matrix::random(context_dim, sense_dim, range, rng),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("parameters always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: AttentionParams = serde_json::from_str(text)?;
        p.validate()?;
        Ok(p)
    }
}

/// Mean of every embedding except position `i`.
pub fn att_context(embeddings: &[Vec<f64>], i: usize) -> Result<Vec<f64>> {
    let len = embeddings.len();
    if len < 2 {
        return Err(Error::InvalidInput(
            "attention context needs at least two tokens".into(),
        ));
    }
    if i >= len {
        return Err(Error::InvalidInput(format!(
            "token index {i} out of range for {len} tokens"
        )));
    }
    let dim = embeddings[0].len();
    let mut acc = vec![0.0; dim];
    for (l, e) in embeddings.iter().enumerate() {
        if e.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: e.len(),
            });
        }
        if l != i {
            for (a, x) in acc.iter_mut().zip(e) {
                *a += x;
            }
        }
    }
    let n = (len - 1) as f64;
    acc.iter_mut().for_each(|a| *a /= n);
    Ok(acc)
}

/// [`att_context`], with a zero vector of `dim` for single-token sentences.
pub fn att_context_or_zero(embeddings: &[Vec<f64>], i: usize, dim: usize) -> Result<Vec<f64>> {
    if embeddings.len() == 1 && i == 0 {
        return Ok(vec![0.0; dim]);
    }
    att_context(embeddings, i)
}

pub fn att_scores(u: &[f64], senses: &[Vec<f64>], params: &AttentionParams) -> Result<Vec<f64>> {
    params.validate()?;
    if u.len() != params.context_dim() {
        return Err(Error::DimensionMismatch {
            expected: params.context_dim(),
            found: u.len(),
        });
    }
    if let Some(s) = senses.iter().find(|s| s.len() != params.sense_dim()) {
        return Err(Error::DimensionMismatch {
            expected: params.sense_dim(),
            found: s.len(),
        });
    }
    Ok(match params {
        AttentionParams::Tanh { w, u: um, v } => {
            let wu = w.mul_vec(u);
            senses
                .iter()
                .map(|mu| {
                    let umu = um.mul_vec(mu);
                    v.iter()
                        .zip(wu.iter().zip(&umu))
                        .map(|(vi, (a, b))| vi * (a + b).tanh())
                        .sum()
                })
                .collect()
        }
        AttentionParams::Bilinear { w } => {
            let wtu = w.t_mul_vec(u);
            senses
                .iter()
                .map(|mu| wtu.iter().zip(mu).map(|(a, b)| a * b).sum())
                .collect()
        }
    })
}

/// Softmax with max subtraction.
pub fn att_weights(scores: &[f64]) -> SenseWeights {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let total: f64 = e.iter().sum();
    SenseWeights {
        weights: e.into_iter().map(|x| x / total).collect(),
        mode: WeightMode::AttSoftmax,
    }
}
