//! `eval`: zero-shot classification report for a trained checkpoint.

use std::path::Path;

use semzsl::checkpoint::load_model;
use semzsl::data::{load_manifest_with, LoadOptions};
use semzsl::error::{Error, Result};
use semzsl::eval::{evaluate, ScoreKind};

pub fn run(
    data: &Path,
    opts: LoadOptions,
    model: &Path,
    kind: ScoreKind,
    out_dir: &Path,
) -> Result<()> {
    let dataset = load_manifest_with(data, opts)?;
    let params = load_model(model)?;
    let report = evaluate(&params, &dataset, kind)?;

    std::fs::create_dir_all(out_dir).map_err(|e| Error::Io {
        path: out_dir.display().to_string(),
        source: e,
    })?;
    let path = out_dir.join("eval_report.json");
    std::fs::write(&path, report.to_json()).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;

    println!("mean per-class top-1 accuracy: {:.6}", report.mean_accuracy);
    for (class, acc) in report.per_class_accuracy.iter().enumerate() {
        println!("  class {class}: {acc:.6}");
    }
    println!("report: {}", path.display());
    Ok(())
}
