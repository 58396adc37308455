//! Analytic gradients of the attention-weighted sense average and their
//! verification against central finite differences.
//!
//! Forward pass: scores `f_j` from [`att_scores`], weights
//! `w = softmax(f)`, output `y = sum_j w_j mu_j`, then a scalar loss `L(y)`.

use super::attention::{att_scores, att_weights, AttentionParams, Matrix};
use super::weighted_sense;
use crate::error::{Error, Result};

pub trait Loss {
    fn value(&self, y: &[f64]) -> f64;
    fn gradient(&self, y: &[f64]) -> Vec<f64>;
}

/// `sum_i y_i^2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SquaredNorm;

impl Loss for SquaredNorm {
    fn value(&self, y: &[f64]) -> f64 {
        y.iter().map(|x| x * x).sum()
    }

    fn gradient(&self, y: &[f64]) -> Vec<f64> {
        y.iter().map(|x| 2.0 * x).collect()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroLoss;

impl Loss for ZeroLoss {
    fn value(&self, _: &[f64]) -> f64 {
        0.0
    }

    fn gradient(&self, y: &[f64]) -> Vec<f64> {
        vec![0.0; y.len()]
    }
}

/// `c . y` for a fixed direction `c`.
#[derive(Debug, Clone)]
pub struct LinearLoss(pub Vec<f64>);

impl Loss for LinearLoss {
    fn value(&self, y: &[f64]) -> f64 {
        self.0.iter().zip(y).map(|(c, x)| c * x).sum()
    }

    fn gradient(&self, _: &[f64]) -> Vec<f64> {
        self.0.clone()
    }
}

/// Partial derivatives of the loss, shaped like the inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionGradients {
    pub w: Matrix,
    /// `U` and `v`; tanh variant only.
    pub u_mat: Option<Matrix>,
    pub v: Option<Vec<f64>>,
    pub context: Vec<f64>,
    pub senses: Vec<Vec<f64>>,
}

impl AttentionGradients {
    fn flatten(&self) -> Vec<f64> {
        let mut out = self.w.as_slice().to_vec();
        if let Some(u) = &self.u_mat {
            out.extend_from_slice(u.as_slice());
        }
        if let Some(v) = &self.v {
            out.extend_from_slice(v);
        }
        out.extend_from_slice(&self.context);
        out.extend(self.senses.iter().flatten());
        out
    }
}

fn forward(
    params: &AttentionParams,
    u: &[f64],
    senses: &[Vec<f64>],
    loss: &dyn Loss,
) -> Result<f64> {
    let scores = att_scores(u, senses, params)?;
    let y = weighted_sense(&att_weights(&scores), senses)?;
    Ok(loss.value(&y))
}

/// Loss value and its gradient with respect to every parameter and input.
pub fn attention_gradients(
    params: &AttentionParams,
    u: &[f64],
    senses: &[Vec<f64>],
    loss: &dyn Loss,
) -> Result<(f64, AttentionGradients)> {
    if senses.is_empty() {
        return Err(Error::InvalidInput(
            "gradient check needs at least one sense".into(),
        ));
    }
    let scores = att_scores(u, senses, params)?;
    let weights = att_weights(&scores).weights;
    let y = weighted_sense(&att_weights(&scores), senses)?;
    let value = loss.value(&y);
    let g = loss.gradient(&y);

    // dL/dw_j = g . mu_j ; softmax backward gives dL/df_j.
    let dw: Vec<f64> = senses
        .iter()
        .map(|mu| g.iter().zip(mu).map(|(a, b)| a * b).sum())
        .collect();
    let mean_dw: f64 = weights.iter().zip(&dw).map(|(w, d)| w * d).sum();
    let df: Vec<f64> = weights
        .iter()
        .zip(&dw)
        .map(|(w, d)| w * (d - mean_dw))
        .collect();

    // Direct path through the weighted average.
    let mut d_senses: Vec<Vec<f64>> = weights
        .iter()
        .map(|w| g.iter().map(|x| w * x).collect())
        .collect();

    let grads = match params {
        AttentionParams::Tanh { w, u: um, v } => {
            let a = v.len();
            let wu = w.mul_vec(u);
            let mut gw = Matrix::zeros(w.rows(), w.cols());
            let mut gu = Matrix::zeros(um.rows(), um.cols());
            let mut gv = vec![0.0; a];
            let mut gh_total = vec![0.0; a];
            for (j, mu) in senses.iter().enumerate() {
                let umu = um.mul_vec(mu);
                let t: Vec<f64> = wu.iter().zip(&umu).map(|(x, y)| (x + y).tanh()).collect();
                // dL/dh_j = df_j * v * (1 - t^2)
                let gh: Vec<f64> = (0..a).map(|i| df[j] * v[i] * (1.0 - t[i] * t[i])).collect();
                for i in 0..a {
                    gv[i] += df[j] * t[i];
                    gh_total[i] += gh[i];
                    for (c, m) in mu.iter().enumerate() {
                        gu[(i, c)] += gh[i] * m;
                    }
                }
                let back = um.t_mul_vec(&gh);
                for (d, b) in d_senses[j].iter_mut().zip(back) {
                    *d += b;
                }
            }
            for i in 0..a {
                for (c, x) in u.iter().enumerate() {
                    gw[(i, c)] = gh_total[i] * x;
                }
            }
            AttentionGradients {
                context: w.t_mul_vec(&gh_total),
                w: gw,
                u_mat: Some(gu),
                v: Some(gv),
                senses: d_senses,
            }
        }
        AttentionParams::Bilinear { w } => {
            // f_j = u^T W mu_j
            let mut gw = Matrix::zeros(w.rows(), w.cols());
            let mut gctx = vec![0.0; u.len()];
            let wtu = w.t_mul_vec(u);
            for (j, mu) in senses.iter().enumerate() {
                for (r, x) in u.iter().enumerate() {
                    for (c, m) in mu.iter().enumerate() {
                        gw[(r, c)] += df[j] * x * m;
                    }
                }
                let wmu = w.mul_vec(mu);
                for (gc, wm) in gctx.iter_mut().zip(wmu) {
                    *gc += df[j] * wm;
                }
                for (d, wt) in d_senses[j].iter_mut().zip(&wtu) {
                    *d += df[j] * wt;
                }
            }
            AttentionGradients {
                w: gw,
                u_mat: None,
                v: None,
                context: gctx,
                senses: d_senses,
            }
        }
    };
    Ok((value, grads))
}

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    /// Largest `|analytic - numeric| / max(1, |numeric|)` over all entries.
    pub max_rel_error: f64,
    pub checked: usize,
    pub loss: f64,
    pub gradients: AttentionGradients,
}

const STEP: f64 = 1e-5;

struct Inputs {
    params: AttentionParams,
    u: Vec<f64>,
    senses: Vec<Vec<f64>>,
}

impl Inputs {
    fn len(&self) -> usize {
        let p = match &self.params {
            AttentionParams::Tanh { w, u, v } => w.as_slice().len() + u.as_slice().len() + v.len(),
            AttentionParams::Bilinear { w } => w.as_slice().len(),
        };
        p + self.u.len() + self.senses.iter().map(Vec::len).sum::<usize>()
    }

    /// Entry `k` in the same order as [`AttentionGradients::flatten`].
    fn slot(&mut self, mut k: usize) -> &mut f64 {
        let params: Vec<&mut [f64]> = match &mut self.params {
            AttentionParams::Tanh { w, u, v } => {
                vec![w.as_mut_slice(), u.as_mut_slice(), v.as_mut_slice()]
            }
            AttentionParams::Bilinear { w } => vec![w.as_mut_slice()],
        };
        let rest = std::iter::once(self.u.as_mut_slice())
            .chain(self.senses.iter_mut().map(Vec::as_mut_slice));
        for block in params.into_iter().chain(rest) {
            if k < block.len() {
                return &mut block[k];
            }
            k -= block.len();
        }
        panic!("slot index out of range");
    }
}

/// Compares analytic gradients with central differences (step 1e-5) for
/// every parameter, context coordinate and sense coordinate.
pub fn grad_check(
    params: &AttentionParams,
    u: &[f64],
    senses: &[Vec<f64>],
    loss: &dyn Loss,
) -> Result<GradCheckReport> {
    let (value, grads) = attention_gradients(params, u, senses, loss)?;
    let analytic = grads.flatten();
    if analytic.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite("analytic gradient".into()));
    }
    let mut inputs = Inputs {
        params: params.clone(),
        u: u.to_vec(),
        senses: senses.to_vec(),
    };
    debug_assert_eq!(inputs.len(), analytic.len());

    let mut max_rel: f64 = 0.0;
    for (k, a) in analytic.iter().enumerate() {
        let orig = *inputs.slot(k);
        *inputs.slot(k) = orig + STEP;
        let plus = forward(&inputs.params, &inputs.u, &inputs.senses, loss)?;
        *inputs.slot(k) = orig - STEP;
        let minus = forward(&inputs.params, &inputs.u, &inputs.senses, loss)?;
        *inputs.slot(k) = orig;
        let numeric = (plus - minus) / (2.0 * STEP);
        if !numeric.is_finite() {
            return Err(Error::NonFinite("numeric gradient".into()));
        }
        max_rel = max_rel.max((a - numeric).abs() / numeric.abs().max(1.0));
    }
    Ok(GradCheckReport {
        max_rel_error: max_rel,
        checked: analytic.len(),
        loss: value,
        gradients: grads,
    })
}
