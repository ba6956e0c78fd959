//! Dataset types, validation, file formats, and the synthetic benchmark
//! generator.

mod io;
mod synthetic;

pub use io::{
    load_labels, load_manifest, load_manifest_with, load_matrix, parse_kv_file, save_labels,
    save_matrix, write_manifest, LoadOptions, MatrixFormat,
};
pub use synthetic::{make_synthetic, SyntheticSpec};

use std::fmt;

use crate::linalg::DenseMatrix;

/// A zero-shot learning problem: seen-class training data, unseen-class test
/// data, and the two per-class semantic descriptor matrices.
///
/// Labels are 0-based indices into the descriptor matrix of their split; the
/// descriptor row order defines class identity. Seen and unseen classes live
/// in distinct index spaces and are disjoint by construction.
#[derive(Debug, Clone)]
pub struct ZslDataset {
    /// M x d_f, one instance per row.
    pub train_features: DenseMatrix,
    /// Seen-class index per training instance, in [0, num_seen_classes).
    pub train_labels: Vec<usize>,
    /// M_test x d_f.
    pub test_features: DenseMatrix,
    /// Unseen-class index per test instance, in [0, num_unseen_classes).
    pub test_labels: Vec<usize>,
    /// C_s x d_a.
    pub seen_descriptors: DenseMatrix,
    /// C_u x d_a.
    pub unseen_descriptors: DenseMatrix,
}

impl ZslDataset {
    pub fn feature_dim(&self) -> usize {
        self.train_features.cols()
    }

    pub fn descriptor_dim(&self) -> usize {
        self.seen_descriptors.cols()
    }

    pub fn num_seen_classes(&self) -> usize {
        self.seen_descriptors.rows()
    }

    pub fn num_unseen_classes(&self) -> usize {
        self.unseen_descriptors.rows()
    }
}

/// A single violation of the [`ZslDataset`] invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    FeatureDimMismatch {
        train: usize,
        test: usize,
    },
    DescriptorDimMismatch {
        seen: usize,
        unseen: usize,
    },
    LabelCountMismatch {
        split: Split,
        labels: usize,
        rows: usize,
    },
    LabelOutOfRange {
        split: Split,
        index: usize,
        label: usize,
        num_classes: usize,
    },
    EmptySeenClass {
        class: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Split::Train => write!(f, "train"),
            Split::Test => write!(f, "test"),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FeatureDimMismatch { train, test } => write!(
                f,
                "feature dimension mismatch: train has {train} columns, test has {test}"
            ),
            Violation::DescriptorDimMismatch { seen, unseen } => write!(
                f,
                "descriptor dimension mismatch: seen has {seen} columns, unseen has {unseen}"
            ),
            Violation::LabelCountMismatch {
                split,
                labels,
                rows,
            } => write!(
                f,
                "{split} labels count {labels} does not match feature rows {rows}"
            ),
            Violation::LabelOutOfRange {
                split,
                index,
                label,
                num_classes,
            } => write!(
                f,
                "{split} label at index {index} is {label}, out of range for {num_classes} classes"
            ),
            Violation::EmptySeenClass { class } => {
                write!(f, "seen class {class} has no training instances")
            }
        }
    }
}

/// Check every dataset invariant and return the violations found. An empty
/// report means the dataset is valid. Violations are data, not errors.
pub fn validate_dataset(d: &ZslDataset) -> Vec<Violation> {
    let mut out = Vec::new();

    if d.train_features.cols() != d.test_features.cols() {
        out.push(Violation::FeatureDimMismatch {
            train: d.train_features.cols(),
            test: d.test_features.cols(),
        });
    }
    if d.seen_descriptors.cols() != d.unseen_descriptors.cols() {
        out.push(Violation::DescriptorDimMismatch {
            seen: d.seen_descriptors.cols(),
            unseen: d.unseen_descriptors.cols(),
        });
    }
    if d.train_labels.len() != d.train_features.rows() {
        out.push(Violation::LabelCountMismatch {
            split: Split::Train,
            labels: d.train_labels.len(),
            rows: d.train_features.rows(),
        });
    }
    if d.test_labels.len() != d.test_features.rows() {
        out.push(Violation::LabelCountMismatch {
            split: Split::Test,
            labels: d.test_labels.len(),
            rows: d.test_features.rows(),
        });
    }

    let c_s = d.num_seen_classes();
    let mut seen_counts = vec![0usize; c_s];
    for (index, &label) in d.train_labels.iter().enumerate() {
        if label >= c_s {
            out.push(Violation::LabelOutOfRange {
                split: Split::Train,
                index,
                label,
                num_classes: c_s,
            });
        } else {
            seen_counts[label] += 1;
        }
    }
    for (class, &count) in seen_counts.iter().enumerate() {
        if count == 0 {
            out.push(Violation::EmptySeenClass { class });
        }
    }

    let c_u = d.num_unseen_classes();
    for (index, &label) in d.test_labels.iter().enumerate() {
        if label >= c_u {
            out.push(Violation::LabelOutOfRange {
                split: Split::Test,
                index,
                label,
                num_classes: c_u,
            });
        }
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_valid() -> ZslDataset {
        make_synthetic(&SyntheticSpec {
            d_f: 6,
            d_a: 4,
            seen_classes: 3,
            unseen_classes: 2,
            per_class: 2,
            noise_sigma: 0.1,
            seed: 9,
        })
        .unwrap()
        .0
    }

    #[test]
    fn valid_dataset_has_empty_report() {
        assert!(validate_dataset(&small_valid()).is_empty());
    }

    #[test]
    fn out_of_range_label_is_flagged() {
        let mut d = small_valid();
        let c_s = d.num_seen_classes();
        d.train_labels[0] = c_s;
        let report = validate_dataset(&d);
        assert!(report.iter().any(|v| matches!(
            v,
            Violation::LabelOutOfRange { split: Split::Train, label, .. } if *label == c_s
        )));
    }

    #[test]
    fn descriptor_dim_mismatch_is_flagged() {
        let mut d = small_valid();
        let c_u = d.num_unseen_classes();
        d.unseen_descriptors = DenseMatrix::zeros(c_u, d.descriptor_dim() + 1);
        let report = validate_dataset(&d);
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::DescriptorDimMismatch { .. })));
    }

    #[test]
    fn empty_seen_class_is_flagged() {
        let mut d = small_valid();
        // Relabel every class-0 instance to class 1.
        for l in d.train_labels.iter_mut() {
            if *l == 0 {
                *l = 1;
            }
        }
        let report = validate_dataset(&d);
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::EmptySeenClass { class: 0 })));
    }

    #[test]
    fn label_count_mismatch_is_flagged() {
        let mut d = small_valid();
        d.test_labels.pop();
        let report = validate_dataset(&d);
        assert!(report.iter().any(|v| matches!(
            v,
            Violation::LabelCountMismatch {
                split: Split::Test,
                ..
            }
        )));
    }
}
