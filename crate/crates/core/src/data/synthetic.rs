//! Seeded synthetic benchmark generator.
//!
//! The generator plants a known linear map from descriptor space to feature
//! space, so the planted map is an exact oracle: with zero noise, every
//! instance sits on its class prototype and any sound pipeline must score
//! perfectly.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::rng::{gauss, rng_from_seed};

use super::ZslDataset;

/// Parameters of the synthetic benchmark.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub d_f: usize,
    pub d_a: usize,
    pub seen_classes: usize,
    pub unseen_classes: usize,
    /// Instances generated per class, in both splits.
    pub per_class: usize,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            d_f: 16,
            d_a: 8,
            seen_classes: 10,
            unseen_classes: 4,
            per_class: 20,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    /// Check ranges; returns advisory warnings for legal but odd settings.
    pub fn check(&self) -> Result<Vec<String>> {
        if self.d_f == 0
            || self.d_a == 0
            || self.seen_classes == 0
            || self.unseen_classes == 0
            || self.per_class == 0
        {
            return Err(Error::InvalidArgument(
                "synthetic spec: all counts must be >= 1".to_string(),
            ));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "synthetic spec: noise_sigma must be finite and >= 0, got {}",
                self.noise_sigma
            )));
        }
        let mut warnings = Vec::new();
        if self.d_a > self.d_f {
            warnings.push(format!(
                "descriptor dim {} exceeds feature dim {}; d_a <= d_f is recommended",
                self.d_a, self.d_f
            ));
        }
        Ok(warnings)
    }
}

/// Generate a dataset plus the planted descriptor-to-feature map.
///
/// Sampling order is fixed: seen descriptors, unseen descriptors, the map,
/// then per-class instance noise (train split first). Class descriptors have
/// i.i.d. unit-Gaussian entries; the map has i.i.d. Gaussian entries scaled
/// by 1/sqrt(d_a). The class prototype is the unit-normalized image of the
/// descriptor, and each instance is the prototype plus isotropic Gaussian
/// noise, re-normalized to unit length.
pub fn make_synthetic(spec: &SyntheticSpec) -> Result<(ZslDataset, DenseMatrix)> {
    spec.check()?;
    let mut rng = rng_from_seed(spec.seed);

    let mut sample = |rows: usize, cols: usize, scale: f64| -> DenseMatrix {
        let data = (0..rows * cols).map(|_| scale * gauss(&mut rng)).collect();
        DenseMatrix::from_vec(rows, cols, data).expect("length matches by construction")
    };

    let seen_descriptors = sample(spec.seen_classes, spec.d_a, 1.0);
    let unseen_descriptors = sample(spec.unseen_classes, spec.d_a, 1.0);
    let map_scale = 1.0 / (spec.d_a as f64).sqrt();
    let gt_map = sample(spec.d_a, spec.d_f, map_scale);

    // Raw (unnormalized) prototype images; rows are descriptors * map.
    let seen_raw = seen_descriptors.matmul(&gt_map).expect("shape chain");
    let unseen_raw = unseen_descriptors.matmul(&gt_map).expect("shape chain");

    let mut fill_split = |raw: &DenseMatrix| -> (DenseMatrix, Vec<usize>) {
        let classes = raw.rows();
        let mut features = DenseMatrix::zeros(classes * spec.per_class, spec.d_f);
        let mut labels = Vec::with_capacity(classes * spec.per_class);
        for class in 0..classes {
            for inst in 0..spec.per_class {
                let row = class * spec.per_class + inst;
                for j in 0..spec.d_f {
                    // sigma = 0 adds exactly zero, so the row stays the raw
                    // prototype image bit-for-bit before normalization.
                    let v = raw.get(class, j) + spec.noise_sigma * gauss(&mut rng);
                    features.set(row, j, v);
                }
                labels.push(class);
            }
        }
        (features.normalize_rows(1e-12), labels)
    };

    let (train_features, train_labels) = fill_split(&seen_raw);
    let (test_features, test_labels) = fill_split(&unseen_raw);

    Ok((
        ZslDataset {
            train_features,
            train_labels,
            test_features,
            test_labels,
            seen_descriptors,
            unseen_descriptors,
        },
        gt_map,
    ))
}
