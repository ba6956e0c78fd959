//! Closed-form comparison methods sharing the evaluation pipeline.
//!
//! Three deterministic ridge-style fits:
//!
//! * LR — regression from feature rows to their class descriptor; test
//!   features are projected into descriptor space and matched to unseen
//!   descriptors by cosine.
//! * RLR — the reverse regression, descriptor to feature; each unseen class
//!   gets a reconstructed visual point and test features match by cosine.
//! * ESZSL — closed-form bilinear map between features and descriptors fit
//!   against +/-1 one-hot labels; inference scores are the raw bilinear
//!   products.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::ZslDataset;
use crate::error::{Error, Result};
use crate::eval::{report_from_scores, scores, EvalReport, ScoreKind};
use crate::linalg::{ridge_solve, DenseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaselineKind {
    Lr,
    Rlr,
    Eszsl,
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaselineKind::Lr => write!(f, "lr"),
            BaselineKind::Rlr => write!(f, "rlr"),
            BaselineKind::Eszsl => write!(f, "eszsl"),
        }
    }
}

impl FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lr" => Ok(BaselineKind::Lr),
            "rlr" => Ok(BaselineKind::Rlr),
            "eszsl" => Ok(BaselineKind::Eszsl),
            other => Err(Error::InvalidArgument(format!(
                "unknown baseline {other:?} (expected lr, rlr, or eszsl)"
            ))),
        }
    }
}

/// A fitted baseline. Weight shape depends on the kind: LR and ESZSL are
/// d_f x d_a, RLR is d_a x d_f.
#[derive(Debug, Clone)]
pub struct BaselineModel {
    pub kind: BaselineKind,
    pub weights: DenseMatrix,
    pub gamma: f64,
    pub lam: f64,
}

/// Rows of the per-instance descriptor matrix A_Y: row i is the descriptor
/// of instance i's class.
fn instance_descriptors(labels: &[usize], seen_descriptors: &DenseMatrix) -> Result<DenseMatrix> {
    let mut out = DenseMatrix::zeros(labels.len(), seen_descriptors.cols());
    for (i, &y) in labels.iter().enumerate() {
        if y >= seen_descriptors.rows() {
            return Err(Error::InvalidArgument(format!(
                "label {y} at index {i} out of range for {} classes",
                seen_descriptors.rows()
            )));
        }
        out.row_mut(i).copy_from_slice(seen_descriptors.row(y));
    }
    Ok(out)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "ridge weight must be finite and >= 0, got {gamma}"
        )));
    }
    Ok(())
}

/// Ridge regression from features to class descriptors:
/// minimize ||F P - A_Y||_F^2 + gamma ||P||_F^2.
pub fn lr_fit(
    features: &DenseMatrix,
    labels: &[usize],
    seen_descriptors: &DenseMatrix,
    gamma: f64,
) -> Result<BaselineModel> {
    check_gamma(gamma)?;
    let a_y = instance_descriptors(labels, seen_descriptors)?;
    let gram = features.transpose().matmul(features)?;
    let rhs = features.transpose().matmul(&a_y)?;
    let weights = ridge_solve(&gram, &rhs, gamma)?;
    Ok(BaselineModel {
        kind: BaselineKind::Lr,
        weights,
        gamma,
        lam: 0.0,
    })
}

/// Ridge regression from class descriptors to features:
/// minimize ||A_Y Q - F||_F^2 + gamma ||Q||_F^2.
pub fn rlr_fit(
    features: &DenseMatrix,
    labels: &[usize],
    seen_descriptors: &DenseMatrix,
    gamma: f64,
) -> Result<BaselineModel> {
    check_gamma(gamma)?;
    let a_y = instance_descriptors(labels, seen_descriptors)?;
    let gram = a_y.transpose().matmul(&a_y)?;
    let rhs = a_y.transpose().matmul(features)?;
    let weights = ridge_solve(&gram, &rhs, gamma)?;
    Ok(BaselineModel {
        kind: BaselineKind::Rlr,
        weights,
        gamma,
        lam: 0.0,
    })
}

/// Closed-form bilinear fit against +/-1 one-hot labels:
/// M = (F^T F + gamma I)^-1 F^T Y A_s (A_s^T A_s + lam I)^-1, the minimizer
/// of ||F M A_s^T - Y||_F^2 + gamma ||M A_s^T||_F^2 + lam ||F M||_F^2
///   + gamma lam ||M||_F^2.
pub fn eszsl_fit(
    features: &DenseMatrix,
    labels: &[usize],
    seen_descriptors: &DenseMatrix,
    gamma: f64,
    lam: f64,
) -> Result<BaselineModel> {
    check_gamma(gamma)?;
    check_gamma(lam)?;
    let m = features.rows();
    let c_s = seen_descriptors.rows();
    if labels.len() != m {
        return Err(Error::InvalidArgument(format!(
            "labels length {} does not match feature rows {m}",
            labels.len()
        )));
    }
    let mut y = DenseMatrix::from_vec(m, c_s, vec![-1.0; m * c_s])?;
    for (i, &l) in labels.iter().enumerate() {
        if l >= c_s {
            return Err(Error::InvalidArgument(format!(
                "label {l} at index {i} out of range for {c_s} classes"
            )));
        }
        y.set(i, l, 1.0);
    }

    // Left solve: B = (F^T F + gamma I)^-1 (F^T Y A_s).
    let gram_f = features.transpose().matmul(features)?;
    let fya = features.transpose().matmul(&y)?.matmul(seen_descriptors)?;
    let b = ridge_solve(&gram_f, &fya, gamma)?;

    // Right solve via the transpose: M^T = (A_s^T A_s + lam I)^-1 B^T.
    let gram_a = seen_descriptors.transpose().matmul(seen_descriptors)?;
    let mt = ridge_solve(&gram_a, &b.transpose(), lam)?;

    Ok(BaselineModel {
        kind: BaselineKind::Eszsl,
        weights: mt.transpose(),
        gamma,
        lam,
    })
}

impl BaselineModel {
    /// Score matrix (M_test x C_u) of this baseline on the dataset's test
    /// split, under each method's own scoring convention.
    pub fn score_matrix(&self, dataset: &ZslDataset) -> Result<DenseMatrix> {
        match self.kind {
            BaselineKind::Lr => {
                let projected = dataset.test_features.matmul(&self.weights)?;
                scores(&projected, &dataset.unseen_descriptors, ScoreKind::Cosine)
            }
            BaselineKind::Rlr => {
                let points = dataset.unseen_descriptors.matmul(&self.weights)?;
                scores(&dataset.test_features, &points, ScoreKind::Cosine)
            }
            BaselineKind::Eszsl => {
                let fm = dataset.test_features.matmul(&self.weights)?;
                fm.matmul(&dataset.unseen_descriptors.transpose())
            }
        }
    }

    /// Full classification + retrieval report on the test split.
    pub fn evaluate(&self, dataset: &ZslDataset) -> Result<EvalReport> {
        let s = self.score_matrix(dataset)?;
        report_from_scores(&s, &dataset.test_labels, dataset.num_unseen_classes())
    }
}
