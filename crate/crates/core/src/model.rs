//! The compatibility model and its training objective.
//!
//! Class logits are bilinear in the class descriptor and the instance
//! feature: `z_ij = a_j^T V f_i + b_j`. The objective is softmax
//! cross-entropy over those logits plus a Frobenius regularizer on `V` and a
//! quadratic hypersphere penalty that holds each feature at distance `alpha`
//! from its own class's reconstructed prototype `W_j = V^T a_j`.
//!
//! With `beta = 0` the penalty vanishes and the objective reduces to plain
//! softmax cross-entropy with weight decay; with identity descriptors it is
//! exactly the standard multi-class softmax loss.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{l2_norm, DenseMatrix};
use crate::optim::Optimizer;
use crate::rng::{gauss, rng_from_seed};

/// Norm guard for the penalty gradient: residual norms below this are
/// clamped, and the contribution is dropped entirely when `alpha == 0`.
pub const PENALTY_NORM_EPS: f64 = 1e-8;

/// Learned parameters: the shared map `V` (d_a x d_f) and the per-seen-class
/// bias `b` (training only; inference is bias-free).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub v: DenseMatrix,
    pub b: Vec<f64>,
}

impl ModelParams {
    /// Small Gaussian init for `V` (std 0.01/sqrt(d_a)), zero biases.
    /// Deterministic given the seed.
    pub fn init(d_a: usize, d_f: usize, num_classes: usize, seed: u64) -> ModelParams {
        let mut rng = rng_from_seed(seed);
        let std = 0.01 / (d_a as f64).sqrt();
        let data = (0..d_a * d_f).map(|_| std * gauss(&mut rng)).collect();
        ModelParams {
            v: DenseMatrix::from_vec(d_a, d_f, data).expect("length matches by construction"),
            b: vec![0.0; num_classes],
        }
    }

    pub fn descriptor_dim(&self) -> usize {
        self.v.rows()
    }

    pub fn feature_dim(&self) -> usize {
        self.v.cols()
    }
}

/// All knobs of the objective and the training loop in one value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    /// Frobenius regularizer weight.
    pub lambda: f64,
    /// Hypersphere penalty weight; 0 disables the constraint.
    pub beta: f64,
    /// Hypersphere radius.
    pub alpha: f64,
    pub lr: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub optimizer: Optimizer,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            lambda: 1e-4,
            beta: 1.0,
            alpha: 1.0,
            lr: 1e-3,
            epochs: 100,
            batch_size: 64,
            seed: 0,
            optimizer: Optimizer::default(),
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidHyperparam(msg));
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!(
                "lambda must be finite and >= 0, got {}",
                self.lambda
            ));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be finite and >= 0, got {}", self.beta));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be finite and > 0, got {}", self.alpha));
        }
        if !(self.lr >= 0.0 && self.lr.is_finite()) {
            return bad(format!("lr must be finite and >= 0, got {}", self.lr));
        }
        if self.batch_size == 0 {
            return bad("batch_size must be >= 1".to_string());
        }
        Ok(())
    }
}

/// Additive decomposition of the objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossTerms {
    pub ce: f64,
    pub reg: f64,
    pub penalty: f64,
}

impl LossTerms {
    pub fn total(&self) -> f64 {
        self.ce + self.reg + self.penalty
    }

    pub fn is_finite(&self) -> bool {
        self.ce.is_finite() && self.reg.is_finite() && self.penalty.is_finite()
    }
}

fn check_shapes(
    params: &ModelParams,
    descriptors: &DenseMatrix,
    features: &DenseMatrix,
) -> Result<()> {
    if descriptors.cols() != params.v.rows() {
        return Err(Error::dim(
            "logits: descriptors vs V",
            descriptors.shape(),
            params.v.shape(),
        ));
    }
    if features.cols() != params.v.cols() {
        return Err(Error::dim(
            "logits: features vs V",
            features.shape(),
            params.v.shape(),
        ));
    }
    if descriptors.rows() != params.b.len() {
        return Err(Error::dim(
            "logits: descriptors vs b",
            descriptors.shape(),
            (params.b.len(), 1),
        ));
    }
    Ok(())
}

fn check_labels(labels: &[usize], rows: usize, num_classes: usize) -> Result<()> {
    if rows == 0 {
        return Err(Error::EmptyBatch);
    }
    if labels.len() != rows {
        return Err(Error::InvalidArgument(format!(
            "labels length {} does not match feature rows {rows}",
            labels.len()
        )));
    }
    if let Some((i, &l)) = labels.iter().enumerate().find(|(_, &l)| l >= num_classes) {
        return Err(Error::InvalidArgument(format!(
            "label {l} at index {i} out of range for {num_classes} classes"
        )));
    }
    Ok(())
}

/// Logit matrix (M x C): entry (i, j) is `a_j^T V f_i + b_j`.
pub fn logits(
    params: &ModelParams,
    descriptors: &DenseMatrix,
    features: &DenseMatrix,
) -> Result<DenseMatrix> {
    check_shapes(params, descriptors, features)?;
    // (F V^T) A^T + 1 b^T
    let fv = features.matmul(&params.v.transpose())?;
    let mut z = fv.matmul(&descriptors.transpose())?;
    for i in 0..z.rows() {
        for (zj, bj) in z.row_mut(i).iter_mut().zip(&params.b) {
            *zj += bj;
        }
    }
    Ok(z)
}

/// Row-wise softmax with per-row max subtraction; rows sum to 1 and large
/// logits cannot overflow.
pub fn softmax_rows(z: &DenseMatrix) -> DenseMatrix {
    let mut out = z.clone();
    for i in 0..out.rows() {
        let row = out.row_mut(i);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for v in row.iter_mut() {
            *v = (*v - max).exp();
            sum += *v;
        }
        for v in row.iter_mut() {
            *v /= sum;
        }
    }
    out
}

/// Reconstructed per-class classifiers/prototypes: row j is `W_j = V^T a_j`.
pub fn reconstruct_prototypes(v: &DenseMatrix, descriptors: &DenseMatrix) -> Result<DenseMatrix> {
    if descriptors.cols() != v.rows() {
        return Err(Error::dim(
            "reconstruct_prototypes",
            descriptors.shape(),
            v.shape(),
        ));
    }
    // Accumulated per row rather than via matmul so the matmul identity
    // W == descriptors * V stays an independent test route.
    let mut out = DenseMatrix::zeros(descriptors.rows(), v.cols());
    for j in 0..descriptors.rows() {
        let a = descriptors.row(j);
        let w = out.row_mut(j);
        for (k, &ak) in a.iter().enumerate() {
            if ak == 0.0 {
                continue;
            }
            for (wl, vl) in w.iter_mut().zip(v.row(k)) {
                *wl += ak * vl;
            }
        }
    }
    Ok(out)
}

/// Objective value split into its terms. `labels[i]` is the seen-class index
/// of feature row `i`.
pub fn ssl_loss_terms(
    params: &ModelParams,
    features: &DenseMatrix,
    labels: &[usize],
    descriptors: &DenseMatrix,
    h: &Hyperparams,
) -> Result<LossTerms> {
    check_shapes(params, descriptors, features)?;
    check_labels(labels, features.rows(), descriptors.rows())?;
    let m = features.rows() as f64;

    let z = logits(params, descriptors, features)?;
    let mut ce = 0.0;
    for (i, &y) in labels.iter().enumerate() {
        let row = z.row(i);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = row.iter().map(|v| (v - max).exp()).sum::<f64>().ln() + max;
        ce -= row[y] - lse;
    }
    ce /= m;

    let reg = h.lambda * params.v.frobenius_sq();

    let mut penalty = 0.0;
    if h.beta > 0.0 {
        let prototypes = reconstruct_prototypes(&params.v, descriptors)?;
        for (i, &y) in labels.iter().enumerate() {
            let n = residual_norm(features.row(i), prototypes.row(y));
            penalty += (n - h.alpha) * (n - h.alpha);
        }
        penalty *= h.beta / m;
    }

    Ok(LossTerms { ce, reg, penalty })
}

/// Scalar objective value.
pub fn ssl_loss(
    params: &ModelParams,
    features: &DenseMatrix,
    labels: &[usize],
    descriptors: &DenseMatrix,
    h: &Hyperparams,
) -> Result<f64> {
    Ok(ssl_loss_terms(params, features, labels, descriptors, h)?.total())
}

fn residual_norm(f: &[f64], w: &[f64]) -> f64 {
    f.iter()
        .zip(w)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Analytic gradient of [`ssl_loss`] with respect to `V` and `b`.
pub fn ssl_grad(
    params: &ModelParams,
    features: &DenseMatrix,
    labels: &[usize],
    descriptors: &DenseMatrix,
    h: &Hyperparams,
) -> Result<(DenseMatrix, Vec<f64>)> {
    let (_, dv, db) = ssl_loss_and_grad(params, features, labels, descriptors, h)?;
    Ok((dv, db))
}

/// Loss terms and gradient in one pass (the softmax is shared).
pub fn ssl_loss_and_grad(
    params: &ModelParams,
    features: &DenseMatrix,
    labels: &[usize],
    descriptors: &DenseMatrix,
    h: &Hyperparams,
) -> Result<(LossTerms, DenseMatrix, Vec<f64>)> {
    check_shapes(params, descriptors, features)?;
    check_labels(labels, features.rows(), descriptors.rows())?;
    let rows = features.rows();
    let classes = descriptors.rows();
    let m = rows as f64;

    let z = logits(params, descriptors, features)?;

    // Cross-entropy term and G = P - onehot(labels), computed row by row.
    let mut ce = 0.0;
    let mut g = DenseMatrix::zeros(rows, classes);
    for i in 0..rows {
        let zrow = z.row(i);
        let max = zrow.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        let grow = g.row_mut(i);
        for (gj, &zj) in grow.iter_mut().zip(zrow) {
            *gj = (zj - max).exp();
            sum += *gj;
        }
        ce -= zrow[labels[i]] - (sum.ln() + max);
        for gj in grow.iter_mut() {
            *gj /= sum;
        }
        grow[labels[i]] -= 1.0;
    }
    ce /= m;

    // db_j = (1/M) sum_i G_ij.
    let mut db = vec![0.0; classes];
    for i in 0..rows {
        for (dbj, gj) in db.iter_mut().zip(g.row(i)) {
            *dbj += gj;
        }
    }
    db.iter_mut().for_each(|v| *v /= m);

    // CE part of dV: (1/M) A^T (G^T F).
    let gtf = g.transpose().matmul(features)?;
    let mut dv = descriptors.transpose().matmul(&gtf)?.scaled(1.0 / m);

    // Frobenius part: 2 lambda V.
    let reg = h.lambda * params.v.frobenius_sq();
    if h.lambda != 0.0 {
        for (d, v) in dv.data_mut().iter_mut().zip(params.v.data()) {
            *d += 2.0 * h.lambda * v;
        }
    }

    // Hypersphere penalty and its gradient:
    // -(2 beta / M) sum_i ((n_i - alpha) / max(n_i, eps)) a_{y_i} r_i^T.
    let mut penalty = 0.0;
    if h.beta > 0.0 {
        let prototypes = reconstruct_prototypes(&params.v, descriptors)?;
        let d_f = params.v.cols();
        let mut r = vec![0.0; d_f];
        for (i, &y) in labels.iter().enumerate() {
            let f = features.row(i);
            let w = prototypes.row(y);
            for ((ri, fi), wi) in r.iter_mut().zip(f).zip(w) {
                *ri = fi - wi;
            }
            let n = l2_norm(&r);
            penalty += (n - h.alpha) * (n - h.alpha);
            if n < PENALTY_NORM_EPS && h.alpha == 0.0 {
                continue;
            }
            let factor = -(2.0 * h.beta / m) * (n - h.alpha) / n.max(PENALTY_NORM_EPS);
            let a = descriptors.row(y);
            for (k, &ak) in a.iter().enumerate() {
                if ak == 0.0 {
                    continue;
                }
                let dvrow = dv.row_mut(k);
                for (dvl, rl) in dvrow.iter_mut().zip(&r) {
                    *dvl += factor * ak * rl;
                }
            }
        }
        penalty *= h.beta / m;
    }

    Ok((LossTerms { ce, reg, penalty }, dv, db))
}
