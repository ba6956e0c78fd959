//! Minibatch training over the objective, optimizer implementations, and the
//! finite-difference gradient checker.
//!
//! Training is one logical thread with fixed sequential reductions, so a
//! given (dataset, hyperparams) pair always produces bitwise-identical
//! parameters. Optimizer state lives inside [`train`] and never leaks
//! across calls.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::ZslDataset;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::model::{
    ssl_loss, ssl_loss_and_grad, ssl_loss_terms, Hyperparams, LossTerms, ModelParams,
};
use crate::rng::{mix_seed, rng_from_seed};

/// Update rule for the parameter step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Optimizer {
    Sgd,
    /// Classic momentum: v <- mu v + g; theta <- theta - lr v.
    SgdMomentum {
        momentum: f64,
    },
    /// Bias-corrected Adam.
    Adam {
        beta1: f64,
        beta2: f64,
        eps: f64,
    },
}

impl Default for Optimizer {
    fn default() -> Self {
        Optimizer::Adam {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

impl fmt::Display for Optimizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Optimizer::Sgd => write!(f, "sgd"),
            Optimizer::SgdMomentum { .. } => write!(f, "sgd_momentum"),
            Optimizer::Adam { .. } => write!(f, "adam"),
        }
    }
}

impl FromStr for Optimizer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sgd" => Ok(Optimizer::Sgd),
            "sgd_momentum" => Ok(Optimizer::SgdMomentum { momentum: 0.9 }),
            "adam" => Ok(Optimizer::Adam {
                beta1: 0.9,
                beta2: 0.999,
                eps: 1e-8,
            }),
            other => Err(Error::InvalidArgument(format!(
                "unknown optimizer {other:?} (expected sgd, sgd_momentum, or adam)"
            ))),
        }
    }
}

/// Per-parameter-group optimizer state over a flat buffer.
enum OptState {
    Sgd,
    Momentum {
        mu: f64,
        vel: Vec<f64>,
    },
    Adam {
        beta1: f64,
        beta2: f64,
        eps: f64,
        m: Vec<f64>,
        v: Vec<f64>,
        t: u64,
    },
}

impl OptState {
    fn new(opt: Optimizer, len: usize) -> OptState {
        match opt {
            Optimizer::Sgd => OptState::Sgd,
            Optimizer::SgdMomentum { momentum } => OptState::Momentum {
                mu: momentum,
                vel: vec![0.0; len],
            },
            Optimizer::Adam { beta1, beta2, eps } => OptState::Adam {
                beta1,
                beta2,
                eps,
                m: vec![0.0; len],
                v: vec![0.0; len],
                t: 0,
            },
        }
    }

    fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        match self {
            OptState::Sgd => {
                for (p, g) in params.iter_mut().zip(grad) {
                    *p -= lr * g;
                }
            }
            OptState::Momentum { mu, vel } => {
                for ((p, g), v) in params.iter_mut().zip(grad).zip(vel.iter_mut()) {
                    *v = *mu * *v + g;
                    *p -= lr * *v;
                }
            }
            OptState::Adam {
                beta1,
                beta2,
                eps,
                m,
                v,
                t,
            } => {
                *t += 1;
                let bc1 = 1.0 - beta1.powi(*t as i32);
                let bc2 = 1.0 - beta2.powi(*t as i32);
                for ((p, &g), (mi, vi)) in params
                    .iter_mut()
                    .zip(grad)
                    .zip(m.iter_mut().zip(v.iter_mut()))
                {
                    *mi = *beta1 * *mi + (1.0 - *beta1) * g;
                    *vi = *beta2 * *vi + (1.0 - *beta2) * g * g;
                    let mhat = *mi / bc1;
                    let vhat = *vi / bc2;
                    *p -= lr * mhat / (vhat.sqrt() + *eps);
                }
            }
        }
    }
}

/// One completed epoch: loss decomposition over the full training set at the
/// epoch's end, plus wall time.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub total: f64,
    pub ce: f64,
    pub reg: f64,
    pub penalty: f64,
    pub seconds: f64,
}

/// Loss history of a training run.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
}

impl TrainHistory {
    pub fn final_terms(&self) -> Option<LossTerms> {
        self.epochs.last().map(|e| LossTerms {
            ce: e.ce,
            reg: e.reg,
            penalty: e.penalty,
        })
    }

    /// CSV with header `epoch,total,ce,reg,penalty,seconds`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("epoch,total,ce,reg,penalty,seconds\n");
        for e in &self.epochs {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                e.epoch, e.total, e.ce, e.reg, e.penalty, e.seconds
            ));
        }
        s
    }
}

fn gather_batch(
    features: &DenseMatrix,
    labels: &[usize],
    idx: &[usize],
) -> (DenseMatrix, Vec<usize>) {
    let mut f = DenseMatrix::zeros(idx.len(), features.cols());
    let mut l = Vec::with_capacity(idx.len());
    for (row, &i) in idx.iter().enumerate() {
        f.row_mut(row).copy_from_slice(features.row(i));
        l.push(labels[i]);
    }
    (f, l)
}

/// Train the model on the seen split of `dataset` with the given
/// hyperparameters. Deterministic given (dataset, h); shuffles are seeded
/// per epoch from `h.seed`. Aborts with diagnostics if the loss goes
/// non-finite.
pub fn train(dataset: &ZslDataset, h: &Hyperparams) -> Result<(ModelParams, TrainHistory)> {
    h.validate()?;
    let features = &dataset.train_features;
    let labels = &dataset.train_labels;
    let descriptors = &dataset.seen_descriptors;
    if features.rows() == 0 {
        return Err(Error::EmptyBatch);
    }

    let mut params = ModelParams::init(
        dataset.descriptor_dim(),
        dataset.feature_dim(),
        dataset.num_seen_classes(),
        h.seed,
    );
    let mut v_state = OptState::new(h.optimizer, params.v.data().len());
    let mut b_state = OptState::new(h.optimizer, params.b.len());

    let mut history = TrainHistory::default();
    let mut order: Vec<usize> = (0..features.rows()).collect();

    for epoch in 0..h.epochs {
        let start = Instant::now();
        let mut rng = rng_from_seed(mix_seed(h.seed, epoch as u64));
        order.shuffle(&mut rng);

        for (batch_no, batch_idx) in order.chunks(h.batch_size).enumerate() {
            let (bf, bl) = gather_batch(features, labels, batch_idx);
            let (terms, dv, db) = ssl_loss_and_grad(&params, &bf, &bl, descriptors, h)?;
            if !terms.is_finite() {
                return Err(Error::NonFiniteLoss {
                    epoch,
                    batch: batch_no,
                    total: terms.total(),
                    ce: terms.ce,
                    reg: terms.reg,
                    penalty: terms.penalty,
                });
            }
            v_state.step(params.v.data_mut(), dv.data(), h.lr);
            b_state.step(&mut params.b, &db, h.lr);
        }

        let terms = ssl_loss_terms(&params, features, labels, descriptors, h)?;
        if !terms.is_finite() {
            return Err(Error::NonFiniteLoss {
                epoch,
                batch: usize::MAX,
                total: terms.total(),
                ce: terms.ce,
                reg: terms.reg,
                penalty: terms.penalty,
            });
        }
        history.epochs.push(EpochRecord {
            epoch,
            total: terms.total(),
            ce: terms.ce,
            reg: terms.reg,
            penalty: terms.penalty,
            seconds: start.elapsed().as_secs_f64(),
        });
    }

    Ok((params, history))
}

/// Compare the analytic gradient against central finite differences on the
/// given batch; returns the max over entries of
/// `|g_a - g_fd| / max(|g_a|, |g_fd|, 1e-8)`.
///
/// `step` must lie in (0, 1e-3]; that range keeps the truncation and
/// round-off error of the central difference below the 1e-5 acceptance
/// threshold for f64.
pub fn grad_check(
    params: &ModelParams,
    features: &DenseMatrix,
    labels: &[usize],
    descriptors: &DenseMatrix,
    h: &Hyperparams,
    step: f64,
) -> Result<f64> {
    if !(step > 0.0 && step <= 1e-3) {
        return Err(Error::InvalidArgument(format!(
            "grad_check: step must be in (0, 1e-3], got {step}"
        )));
    }
    let (_, dv, db) = ssl_loss_and_grad(params, features, labels, descriptors, h)?;

    let mut max_err = 0.0f64;
    let mut record = |analytic: f64, numeric: f64| {
        let err = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8);
        max_err = max_err.max(err);
    };

    let mut probe = params.clone();
    for idx in 0..params.v.data().len() {
        let orig = params.v.data()[idx];
        probe.v.data_mut()[idx] = orig + step;
        let lp = ssl_loss(&probe, features, labels, descriptors, h)?;
        probe.v.data_mut()[idx] = orig - step;
        let lm = ssl_loss(&probe, features, labels, descriptors, h)?;
        probe.v.data_mut()[idx] = orig;
        record(dv.data()[idx], (lp - lm) / (2.0 * step));
    }
    for (idx, &analytic) in db.iter().enumerate() {
        let orig = params.b[idx];
        probe.b[idx] = orig + step;
        let lp = ssl_loss(&probe, features, labels, descriptors, h)?;
        probe.b[idx] = orig - step;
        let lm = ssl_loss(&probe, features, labels, descriptors, h)?;
        probe.b[idx] = orig;
        record(analytic, (lp - lm) / (2.0 * step));
    }

    Ok(max_err)
}
