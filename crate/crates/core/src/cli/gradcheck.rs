//! `gradcheck`: compare the analytic gradient against central finite
//! differences on a seeded random instance. Exit code 1 when the max
//! relative error reaches the threshold.

use semzsl::data::{make_synthetic, SyntheticSpec};
use semzsl::error::Result;
use semzsl::model::{Hyperparams, ModelParams};
use semzsl::optim::grad_check;

pub struct GradcheckArgs {
    pub seed: u64,
    pub step: f64,
    pub threshold: f64,
    pub lambda: f64,
    pub beta: f64,
    pub alpha: f64,
    pub d_f: usize,
    pub d_a: usize,
    pub classes: usize,
    pub batch: usize,
}

/// Returns the suggested process exit code.
pub fn run(args: &GradcheckArgs) -> Result<i32> {
    let spec = SyntheticSpec {
        d_f: args.d_f,
        d_a: args.d_a,
        seen_classes: args.classes,
        unseen_classes: 1,
        per_class: args.batch.div_ceil(args.classes).max(1),
        noise_sigma: 0.5,
        seed: args.seed,
    };
    let (dataset, _) = make_synthetic(&spec)?;
    let take = args.batch.min(dataset.train_features.rows());
    let mut features = semzsl::linalg::DenseMatrix::zeros(take, args.d_f);
    let mut labels = Vec::with_capacity(take);
    for i in 0..take {
        features
            .row_mut(i)
            .copy_from_slice(dataset.train_features.row(i));
        labels.push(dataset.train_labels[i]);
    }

    let params = ModelParams::init(args.d_a, args.d_f, args.classes, args.seed);
    let h = Hyperparams {
        lambda: args.lambda,
        beta: args.beta,
        alpha: args.alpha,
        seed: args.seed,
        ..Hyperparams::default()
    };
    let err = grad_check(
        &params,
        &features,
        &labels,
        &dataset.seen_descriptors,
        &h,
        args.step,
    )?;
    let pass = err < args.threshold;
    println!(
        "gradcheck: max relative error {err:.3e} (threshold {:.1e}) -> {}",
        args.threshold,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { 0 } else { 1 })
}
