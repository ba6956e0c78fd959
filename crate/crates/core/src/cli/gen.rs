//! `gen`: write a synthetic dataset, its manifest, and the planted map.

use std::path::Path;

use semzsl::checkpoint::save_model;
use semzsl::data::{make_synthetic, validate_dataset, write_manifest, SyntheticSpec};
use semzsl::error::Result;
use semzsl::model::Hyperparams;

pub fn run(spec: &SyntheticSpec, out_dir: &Path) -> Result<()> {
    let warnings = spec.check()?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }

    let (dataset, gt_map) = make_synthetic(spec)?;
    debug_assert!(validate_dataset(&dataset).is_empty());

    let manifest = write_manifest(out_dir, &dataset)?;

    // The planted map doubles as an oracle checkpoint: shape-compatible with
    // a trained model, zero bias, zero epochs.
    let gt_params = semzsl::model::ModelParams {
        v: gt_map,
        b: vec![0.0; spec.seen_classes],
    };
    let gt_h = Hyperparams {
        seed: spec.seed,
        ..Hyperparams::default()
    };
    let gt_manifest = save_model(&out_dir.join("ground_truth"), &gt_params, &gt_h, 0)?;

    println!(
        "wrote dataset: {} train x {}d ({} seen classes), {} test x {}d ({} unseen classes)",
        dataset.train_features.rows(),
        dataset.feature_dim(),
        dataset.num_seen_classes(),
        dataset.test_features.rows(),
        dataset.feature_dim(),
        dataset.num_unseen_classes(),
    );
    println!("manifest: {}", manifest.display());
    println!("ground-truth checkpoint: {}", gt_manifest.display());
    Ok(())
}
