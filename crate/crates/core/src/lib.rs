//! Zero-shot classification and retrieval with descriptor-generated
//! classifiers.
//!
//! A bilinear compatibility model maps per-class semantic descriptors to
//! per-class classifier weights through a shared matrix, so classes never
//! observed in training still get a classifier from their descriptor alone.
//! Training minimizes softmax cross-entropy over the descriptor-generated
//! logits with a Frobenius regularizer and an optional hypersphere penalty
//! that keeps each feature at a fixed distance from its own class's
//! reconstructed prototype. Inference is bias-free cosine scoring against
//! reconstructed prototypes, evaluated as macro top-1 accuracy and
//! mean average precision with per-class precision-recall curves.
//!
//! The crate is organized around small, pure modules:
//!
//! * [`linalg`] — dense row-major matrices and a direct ridge solver
//! * [`data`] — dataset types, file formats, validation, synthetic benchmark
//! * [`model`] — logits, softmax, loss terms, analytic gradients, prototypes
//! * [`optim`] — minibatch training loop and the gradient checker
//! * [`eval`] — classification metrics, retrieval AP/mAP, PR curves
//! * [`baselines`] — LR / RLR / ESZSL closed-form comparison fits
//! * [`checkpoint`] — model and baseline checkpoint files
//!
//! All randomness is seeded ChaCha8; identical inputs give bitwise-identical
//! outputs on every platform.

pub mod baselines;
pub mod checkpoint;
pub mod data;
pub mod error;
pub mod eval;
pub mod linalg;
pub mod model;
pub mod optim;
pub mod plot;
mod rng;

pub use baselines::{eszsl_fit, lr_fit, rlr_fit, BaselineKind, BaselineModel};
pub use data::{load_manifest, make_synthetic, validate_dataset, SyntheticSpec, ZslDataset};
pub use error::{Error, Result};
pub use eval::{
    classify, cosine_scores, evaluate, per_class_top1, pr_curve, prototype_diagnostic,
    retrieval_ap, retrieval_map, EvalReport, ScoreKind,
};
pub use linalg::{ridge_solve, DenseMatrix};
pub use model::{
    logits, reconstruct_prototypes, softmax_rows, ssl_grad, ssl_loss, ssl_loss_terms, Hyperparams,
    LossTerms, ModelParams,
};
pub use optim::{grad_check, train, Optimizer, TrainHistory};
