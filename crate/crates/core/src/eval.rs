//! Zero-shot classification and retrieval evaluation.
//!
//! Inference is bias-free: unseen-class prototypes are reconstructed from
//! the unseen descriptors and test features are scored against them by
//! cosine similarity (or raw inner product on request). Classification is
//! scored as average per-class top-1 accuracy (macro accuracy); retrieval
//! treats each unseen class prototype as a query over the full test gallery
//! and is scored by non-interpolated average precision.
//!
//! Tie rules are fixed so every number here is deterministic across
//! platforms: argmax ties go to the lowest class index, and gallery sorts
//! are stable with ties broken by ascending gallery index.

use serde::{Deserialize, Serialize};

use crate::data::ZslDataset;
use crate::error::{Error, Result};
use crate::linalg::{dot, l2_norm, DenseMatrix};
use crate::model::{reconstruct_prototypes, ModelParams};

/// Similarity used to compare features with prototypes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScoreKind {
    #[default]
    Cosine,
    InnerProduct,
}

/// Full evaluation output: classification and retrieval metrics over the
/// unseen classes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    /// Top-1 accuracy per unseen class.
    pub per_class_accuracy: Vec<f64>,
    /// Unweighted mean of `per_class_accuracy`.
    pub mean_accuracy: f64,
    /// Average precision per unseen class (prototype as query).
    pub per_class_ap: Vec<f64>,
    /// Unweighted mean of `per_class_ap`.
    pub map: f64,
    /// Per-class precision-recall curve, one (recall, precision) point per
    /// gallery rank.
    pub pr_curves: Vec<Vec<(f64, f64)>>,
    /// Row = true class, column = predicted class.
    pub confusion: Vec<Vec<usize>>,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<EvalReport> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            path: "<json>".to_string(),
            line: e.line(),
            msg: e.to_string(),
        })
    }
}

/// Similarity matrix (M x C) between feature rows and prototype rows.
/// Cosine scores define 0 for zero-norm operands.
pub fn cosine_scores(features: &DenseMatrix, prototypes: &DenseMatrix) -> Result<DenseMatrix> {
    scores(features, prototypes, ScoreKind::Cosine)
}

/// Similarity matrix under the chosen score.
pub fn scores(
    features: &DenseMatrix,
    prototypes: &DenseMatrix,
    kind: ScoreKind,
) -> Result<DenseMatrix> {
    if features.cols() != prototypes.cols() {
        return Err(Error::dim("scores", features.shape(), prototypes.shape()));
    }
    let mut out = DenseMatrix::zeros(features.rows(), prototypes.rows());
    let proto_norms: Vec<f64> = (0..prototypes.rows())
        .map(|j| l2_norm(prototypes.row(j)))
        .collect();
    for i in 0..features.rows() {
        let f = features.row(i);
        let fnorm = l2_norm(f);
        for (j, &pnorm) in proto_norms.iter().enumerate() {
            let raw = dot(f, prototypes.row(j));
            let s = match kind {
                ScoreKind::InnerProduct => raw,
                ScoreKind::Cosine => {
                    if fnorm == 0.0 || pnorm == 0.0 {
                        0.0
                    } else {
                        raw / (fnorm * pnorm)
                    }
                }
            };
            out.set(i, j, s);
        }
    }
    Ok(out)
}

/// Argmax per row; ties break toward the lowest column index.
pub fn classify(scores: &DenseMatrix) -> Vec<usize> {
    assert!(
        scores.rows() > 0 && scores.cols() > 0,
        "classify: scores must be nonempty"
    );
    (0..scores.rows())
        .map(|i| {
            let row = scores.row(i);
            let mut best = 0;
            for (j, &v) in row.iter().enumerate().skip(1) {
                if v > row[best] {
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// Per-class top-1 accuracy and its unweighted mean over classes.
pub fn per_class_top1(
    pred: &[usize],
    truth: &[usize],
    num_classes: usize,
) -> Result<(Vec<f64>, f64)> {
    if pred.len() != truth.len() {
        return Err(Error::InvalidArgument(format!(
            "per_class_top1: {} predictions vs {} truths",
            pred.len(),
            truth.len()
        )));
    }
    let mut counts = vec![0usize; num_classes];
    let mut correct = vec![0usize; num_classes];
    for (&p, &t) in pred.iter().zip(truth) {
        if t >= num_classes {
            return Err(Error::InvalidArgument(format!(
                "per_class_top1: truth label {t} out of range for {num_classes} classes"
            )));
        }
        counts[t] += 1;
        if p == t {
            correct[t] += 1;
        }
    }
    if let Some(class) = counts.iter().position(|&c| c == 0) {
        return Err(Error::EmptyClass { class });
    }
    let per_class: Vec<f64> = correct
        .iter()
        .zip(&counts)
        .map(|(&c, &n)| c as f64 / n as f64)
        .collect();
    let mean = per_class.iter().sum::<f64>() / num_classes as f64;
    Ok((per_class, mean))
}

/// Gallery order after the retrieval sort: indices by descending score,
/// stable, ties broken by ascending gallery index.
fn ranked_indices(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite scores"));
    idx
}

/// Non-interpolated average precision: mean of precision at each relevant
/// rank in the sorted gallery.
pub fn retrieval_ap(scores: &[f64], relevance: &[bool]) -> Result<f64> {
    if scores.len() != relevance.len() {
        return Err(Error::InvalidArgument(format!(
            "retrieval_ap: {} scores vs {} relevance flags",
            scores.len(),
            relevance.len()
        )));
    }
    let total_rel = relevance.iter().filter(|&&r| r).count();
    if total_rel == 0 {
        return Err(Error::NoRelevantItems);
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (rank0, &i) in ranked_indices(scores).iter().enumerate() {
        if relevance[i] {
            hits += 1;
            sum += hits as f64 / (rank0 + 1) as f64;
        }
    }
    Ok(sum / total_rel as f64)
}

/// Precision-recall curve: one (recall, precision) point per rank 1..=n
/// under the same sort and tie rule as [`retrieval_ap`].
pub fn pr_curve(scores: &[f64], relevance: &[bool]) -> Result<Vec<(f64, f64)>> {
    if scores.len() != relevance.len() {
        return Err(Error::InvalidArgument(format!(
            "pr_curve: {} scores vs {} relevance flags",
            scores.len(),
            relevance.len()
        )));
    }
    let total_rel = relevance.iter().filter(|&&r| r).count();
    if total_rel == 0 {
        return Err(Error::NoRelevantItems);
    }
    let mut hits = 0usize;
    let mut out = Vec::with_capacity(scores.len());
    for (rank0, &i) in ranked_indices(scores).iter().enumerate() {
        if relevance[i] {
            hits += 1;
        }
        out.push((
            hits as f64 / total_rel as f64,
            hits as f64 / (rank0 + 1) as f64,
        ));
    }
    Ok(out)
}

/// Build the full report from a precomputed (M_test x C_u) score matrix.
/// Column j doubles as the retrieval gallery for class j.
pub fn report_from_scores(
    score_matrix: &DenseMatrix,
    test_labels: &[usize],
    num_classes: usize,
) -> Result<EvalReport> {
    let pred = classify(score_matrix);
    let (per_class_accuracy, mean_accuracy) = per_class_top1(&pred, test_labels, num_classes)?;

    let mut confusion = vec![vec![0usize; num_classes]; num_classes];
    for (&p, &t) in pred.iter().zip(test_labels) {
        confusion[t][p] += 1;
    }

    let mut per_class_ap = Vec::with_capacity(num_classes);
    let mut pr_curves = Vec::with_capacity(num_classes);
    for class in 0..num_classes {
        let gallery: Vec<f64> = (0..score_matrix.rows())
            .map(|i| score_matrix.get(i, class))
            .collect();
        let relevance: Vec<bool> = test_labels.iter().map(|&t| t == class).collect();
        per_class_ap.push(retrieval_ap(&gallery, &relevance)?);
        pr_curves.push(pr_curve(&gallery, &relevance)?);
    }
    let map = per_class_ap.iter().sum::<f64>() / num_classes as f64;

    Ok(EvalReport {
        per_class_accuracy,
        mean_accuracy,
        per_class_ap,
        map,
        pr_curves,
        confusion,
    })
}

/// Run the full zero-shot evaluation of trained parameters on a dataset:
/// classification of every test row plus per-class retrieval with the
/// reconstructed prototypes as queries.
pub fn evaluate(params: &ModelParams, dataset: &ZslDataset, kind: ScoreKind) -> Result<EvalReport> {
    let prototypes = reconstruct_prototypes(&params.v, &dataset.unseen_descriptors)?;
    let score_matrix = scores(&dataset.test_features, &prototypes, kind)?;
    report_from_scores(
        &score_matrix,
        &dataset.test_labels,
        dataset.num_unseen_classes(),
    )
}

/// Retrieval protocol: each unseen class descriptor (via its reconstructed
/// prototype) queries the gallery of all unseen test features. Returns the
/// full report; the retrieval fields are the ones this protocol defines.
pub fn retrieval_map(params: &ModelParams, dataset: &ZslDataset) -> Result<EvalReport> {
    evaluate(params, dataset, ScoreKind::Cosine)
}

/// Distance from each unseen class's reconstructed prototype to the mean of
/// that class's test feature rows. Rows are (class, distance).
pub fn prototype_diagnostic(
    params: &ModelParams,
    dataset: &ZslDataset,
) -> Result<Vec<(usize, f64)>> {
    let prototypes = reconstruct_prototypes(&params.v, &dataset.unseen_descriptors)?;
    let c_u = dataset.num_unseen_classes();
    let d_f = dataset.feature_dim();
    let mut sums = vec![vec![0.0; d_f]; c_u];
    let mut counts = vec![0usize; c_u];
    for (i, &t) in dataset.test_labels.iter().enumerate() {
        if t >= c_u {
            return Err(Error::InvalidArgument(format!(
                "prototype_diagnostic: test label {t} out of range for {c_u} classes"
            )));
        }
        for (s, v) in sums[t].iter_mut().zip(dataset.test_features.row(i)) {
            *s += v;
        }
        counts[t] += 1;
    }
    let mut out = Vec::with_capacity(c_u);
    for class in 0..c_u {
        if counts[class] == 0 {
            return Err(Error::EmptyClass { class });
        }
        let n = counts[class] as f64;
        let dist = prototypes
            .row(class)
            .iter()
            .zip(&sums[class])
            .map(|(w, s)| {
                let d = s / n - w;
                d * d
            })
            .sum::<f64>()
            .sqrt();
        out.push((class, dist));
    }
    Ok(out)
}

/// Diagnostic table as CSV with header `class,distance`.
pub fn diagnostic_csv(table: &[(usize, f64)]) -> String {
    let mut s = String::from("class,distance\n");
    for (class, dist) in table {
        s.push_str(&format!("{class},{dist}\n"));
    }
    s
}

/// PR curve as CSV with header `rank,recall,precision`.
pub fn pr_curve_csv(points: &[(f64, f64)]) -> String {
    let mut s = String::from("rank,recall,precision\n");
    for (rank0, (recall, precision)) in points.iter().enumerate() {
        s.push_str(&format!("{},{recall},{precision}\n", rank0 + 1));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{make_synthetic, SyntheticSpec};
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn cosine_parallel_orthogonal_and_analytic() {
        let features =
            DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0], vec![1.0, 1.0]]).unwrap();
        let prototypes = DenseMatrix::from_rows(&[vec![1.0, 0.0]]).unwrap();
        let s = cosine_scores(&features, &prototypes).unwrap();
        assert!((s.get(0, 0) - 1.0).abs() < 1e-12);
        assert!(s.get(1, 0).abs() < 1e-12);
        assert!((s.get(2, 0) - 1.0 / 2.0f64.sqrt()).abs() < 1e-12);
        assert!((s.get(2, 0) - 0.7071067811865475).abs() < 1e-12);
    }

    #[test]
    fn cosine_zero_norm_scores_zero() {
        let features = DenseMatrix::from_rows(&[vec![0.0, 0.0]]).unwrap();
        let prototypes = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let s = cosine_scores(&features, &prototypes).unwrap();
        assert_eq!(s.data(), &[0.0, 0.0]);
    }

    #[test]
    fn classify_argmax_and_tie_break() {
        let s1 = DenseMatrix::from_rows(&[vec![0.2, 0.9, 0.1], vec![0.9, 0.9, 0.1]]).unwrap();
        assert_eq!(classify(&s1), vec![1, 0]);
        // A single column is always class 0.
        let s2 = DenseMatrix::from_rows(&[vec![0.5], vec![-3.0]]).unwrap();
        assert_eq!(classify(&s2), vec![0, 0]);
    }

    #[test]
    fn per_class_accuracy_examples() {
        let (per, mean) = per_class_top1(&[0, 1, 1, 1], &[0, 0, 1, 1], 2).unwrap();
        assert_eq!(per, vec![0.5, 1.0]);
        assert!((mean - 0.75).abs() < 1e-15);

        let (per, mean) = per_class_top1(&[0, 1, 0, 1], &[0, 1, 0, 1], 2).unwrap();
        assert_eq!(per, vec![1.0, 1.0]);
        assert_eq!(mean, 1.0);

        // Macro accuracy differs from micro accuracy under imbalance.
        let (per, mean) = per_class_top1(&[0, 0, 0, 0], &[0, 0, 0, 1], 2).unwrap();
        assert_eq!(per, vec![1.0, 0.0]);
        assert!((mean - 0.5).abs() < 1e-15);
        let micro = 3.0 / 4.0;
        assert!((mean - micro).abs() > 0.2);
    }

    #[test]
    fn per_class_accuracy_empty_class_errors() {
        match per_class_top1(&[0, 0], &[0, 0], 2) {
            Err(Error::EmptyClass { class }) => assert_eq!(class, 1),
            other => panic!("expected empty-class error, got {other:?}"),
        }
    }

    #[test]
    fn ap_hand_enumerated_cases() {
        // Ranked relevance (1, 0, 1): AP = (1/1 + 2/3) / 2.
        let ap = retrieval_ap(&[3.0, 2.0, 1.0], &[true, false, true]).unwrap();
        assert!((ap - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-12);
        assert!((ap - 0.8333333333333333).abs() < 1e-12);

        let ap = retrieval_ap(&[0.5, 0.4, 0.3], &[true, true, true]).unwrap();
        assert_eq!(ap, 1.0);

        // Single relevant item at rank k gives 1/k.
        for k in 1..=5usize {
            let n = 5;
            let scores: Vec<f64> = (0..n).map(|i| (n - i) as f64).collect();
            let relevance: Vec<bool> = (0..n).map(|i| i == k - 1).collect();
            let ap = retrieval_ap(&scores, &relevance).unwrap();
            assert!((ap - 1.0 / k as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn ap_requires_a_relevant_item() {
        assert!(matches!(
            retrieval_ap(&[1.0, 0.5], &[false, false]),
            Err(Error::NoRelevantItems)
        ));
    }

    #[test]
    fn ap_tie_break_uses_gallery_order() {
        // Equal scores: item 0 (irrelevant) ranks before item 1 (relevant).
        let ap = retrieval_ap(&[1.0, 1.0], &[false, true]).unwrap();
        assert!((ap - 0.5).abs() < 1e-15);
        let ap = retrieval_ap(&[1.0, 1.0], &[true, false]).unwrap();
        assert_eq!(ap, 1.0);
    }

    #[test]
    fn pr_curve_examples() {
        let pts = pr_curve(&[2.0, 1.0], &[true, false]).unwrap();
        assert_eq!(pts, vec![(1.0, 1.0), (1.0, 0.5)]);

        let pts = pr_curve(&[2.0, 1.0], &[false, true]).unwrap();
        assert_eq!(pts, vec![(0.0, 0.0), (1.0, 0.5)]);
    }

    /// Brute-force oracle: materialize the sorted gallery, then average
    /// precision at the relevant positions.
    fn ap_oracle(scores: &[f64], relevance: &[bool]) -> f64 {
        let mut entries: Vec<(usize, f64, bool)> = scores
            .iter()
            .zip(relevance)
            .enumerate()
            .map(|(i, (&s, &r))| (i, s, r))
            .collect();
        entries.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        let total = entries.iter().filter(|e| e.2).count();
        let mut seen = 0;
        let mut acc = 0.0;
        for (rank0, e) in entries.iter().enumerate() {
            if e.2 {
                seen += 1;
                acc += seen as f64 / (rank0 + 1) as f64;
            }
        }
        acc / total as f64
    }

    #[test]
    fn ap_matches_brute_force_on_small_galleries() {
        let mut rng = rng_from_seed(31);
        for n in 1..=6usize {
            for pattern in 1u32..(1 << n) {
                let relevance: Vec<bool> = (0..n).map(|i| pattern & (1 << i) != 0).collect();
                let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let got = retrieval_ap(&scores, &relevance).unwrap();
                let want = ap_oracle(&scores, &relevance);
                assert_eq!(got, want, "n={n} pattern={pattern:b}");
            }
        }
    }

    fn zero_noise_dataset(seed: u64) -> (crate::data::ZslDataset, DenseMatrix) {
        make_synthetic(&SyntheticSpec {
            d_f: 12,
            d_a: 6,
            seen_classes: 6,
            unseen_classes: 3,
            per_class: 5,
            noise_sigma: 0.0,
            seed,
        })
        .unwrap()
    }

    #[test]
    fn planted_map_scores_perfectly_on_zero_noise_data() {
        let (dataset, gt) = zero_noise_dataset(5);
        let params = ModelParams {
            b: vec![0.0; dataset.num_seen_classes()],
            v: gt,
        };
        let report = retrieval_map(&params, &dataset).unwrap();
        assert_eq!(report.mean_accuracy, 1.0);
        assert_eq!(report.map, 1.0);
        for row in &report.confusion {
            assert_eq!(row.iter().sum::<usize>(), 5);
        }
    }

    #[test]
    fn retrieval_map_small_case_matches_enumeration() {
        // Noisy small case: check the report against APs computed from
        // explicitly ranked lists.
        let (dataset, gt) = make_synthetic(&SyntheticSpec {
            d_f: 12,
            d_a: 6,
            seen_classes: 6,
            unseen_classes: 2,
            per_class: 2,
            noise_sigma: 0.8,
            seed: 6,
        })
        .unwrap();
        let params = ModelParams {
            b: vec![0.0; dataset.num_seen_classes()],
            v: gt,
        };
        let report = retrieval_map(&params, &dataset).unwrap();
        let prototypes = reconstruct_prototypes(&params.v, &dataset.unseen_descriptors).unwrap();
        let s = cosine_scores(&dataset.test_features, &prototypes).unwrap();
        for class in 0..dataset.num_unseen_classes() {
            let gallery: Vec<f64> = (0..s.rows()).map(|i| s.get(i, class)).collect();
            let relevance: Vec<bool> = dataset.test_labels.iter().map(|&t| t == class).collect();
            assert_eq!(report.per_class_ap[class], ap_oracle(&gallery, &relevance));
        }
        let mean = report.per_class_ap.iter().sum::<f64>() / report.per_class_ap.len() as f64;
        assert!((report.map - mean).abs() < 1e-15);
    }

    #[test]
    fn classify_is_scale_invariant() {
        let (dataset, gt) = zero_noise_dataset(7);
        let params = ModelParams {
            b: vec![0.0; dataset.num_seen_classes()],
            v: gt,
        };
        let prototypes = reconstruct_prototypes(&params.v, &dataset.unseen_descriptors).unwrap();
        let base = classify(&cosine_scores(&dataset.test_features, &prototypes).unwrap());
        for c in [0.1, 10.0] {
            let scaled =
                reconstruct_prototypes(&params.v, &dataset.unseen_descriptors.scaled(c)).unwrap();
            let pred = classify(&cosine_scores(&dataset.test_features, &scaled).unwrap());
            assert_eq!(pred, base, "scale {c}");
        }
        // Rescaling a single prototype row also changes nothing.
        let mut one_row = prototypes.clone();
        one_row.row_mut(1).iter_mut().for_each(|v| *v *= 42.0);
        let pred = classify(&cosine_scores(&dataset.test_features, &one_row).unwrap());
        assert_eq!(pred, base);
    }

    #[test]
    fn diagnostic_is_zero_under_planted_map_and_nonnegative() {
        let (dataset, gt) = zero_noise_dataset(8);
        let params = ModelParams {
            b: vec![0.0; dataset.num_seen_classes()],
            v: gt,
        };
        // Planted prototypes are unit-normalized images; the raw
        // reconstruction V^T a has the pre-normalization scale, so compare
        // directions via a scaled copy of the dataset's own prototypes.
        let table = prototype_diagnostic(&params, &dataset).unwrap();
        for &(_, d) in &table {
            assert!(d >= 0.0);
        }
        // With zero noise every class mean IS the unit prototype; the raw
        // reconstruction differs from it only by its norm.
        let prototypes = reconstruct_prototypes(&params.v, &dataset.unseen_descriptors).unwrap();
        for (class, d) in table {
            let w = prototypes.row(class);
            let expected = (l2_norm(w) - 1.0).abs();
            assert!(
                (d - expected).abs() < 1e-10,
                "class {class}: {d} vs {expected}"
            );
        }
    }

    #[test]
    fn report_json_round_trip_is_exact() {
        let (dataset, gt) = zero_noise_dataset(9);
        let params = ModelParams {
            b: vec![0.0; dataset.num_seen_classes()],
            v: gt,
        };
        let report = retrieval_map(&params, &dataset).unwrap();
        let back = EvalReport::from_json(&report.to_json()).unwrap();
        assert_eq!(back.mean_accuracy.to_bits(), report.mean_accuracy.to_bits());
        assert_eq!(back.map.to_bits(), report.map.to_bits());
        assert_eq!(back.per_class_ap.len(), report.per_class_ap.len());
        let recomputed_mean =
            back.per_class_accuracy.iter().sum::<f64>() / back.per_class_accuracy.len() as f64;
        assert_eq!(recomputed_mean.to_bits(), back.mean_accuracy.to_bits());
    }

    proptest! {
        #[test]
        fn pr_curve_recall_is_nondecreasing(seed in 0u64..200, n in 1usize..24) {
            let mut rng = rng_from_seed(seed);
            let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut relevance: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
            relevance[0] = true;
            let pts = pr_curve(&scores, &relevance).unwrap();
            prop_assert_eq!(pts.len(), n);
            for w in pts.windows(2) {
                prop_assert!(w[1].0 >= w[0].0);
            }
        }

        #[test]
        fn ap_equals_mean_precision_at_relevant_pr_points(seed in 0u64..200, n in 1usize..24) {
            let mut rng = rng_from_seed(seed + 1000);
            let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut relevance: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
            relevance[n / 2] = true;
            let pts = pr_curve(&scores, &relevance).unwrap();
            let ap = retrieval_ap(&scores, &relevance).unwrap();
            // Relevant ranks are exactly where recall increases.
            let total_rel = relevance.iter().filter(|&&r| r).count() as f64;
            let mut prev_recall = 0.0;
            let mut sum = 0.0;
            for (recall, precision) in pts {
                if recall > prev_recall {
                    sum += precision;
                    prev_recall = recall;
                }
            }
            prop_assert!((ap - sum / total_rel).abs() < 1e-12);
        }

        #[test]
        fn macro_mean_is_permutation_invariant(seed in 0u64..100) {
            let mut rng = rng_from_seed(seed);
            let n = 30;
            let c = 3;
            let truth: Vec<usize> = (0..n).map(|i| i % c).collect();
            let pred: Vec<usize> = (0..n).map(|_| rng.gen_range(0..c)).collect();
            let (_, mean) = per_class_top1(&pred, &truth, c).unwrap();
            // Relabel classes by the cycle 0->1->2->0.
            let relabel = |l: usize| (l + 1) % c;
            let truth2: Vec<usize> = truth.iter().map(|&l| relabel(l)).collect();
            let pred2: Vec<usize> = pred.iter().map(|&l| relabel(l)).collect();
            let (_, mean2) = per_class_top1(&pred2, &truth2, c).unwrap();
            prop_assert!((mean - mean2).abs() < 1e-15);
        }
    }
}
