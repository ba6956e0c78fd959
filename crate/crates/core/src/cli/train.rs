//! `train`: fit the model on a dataset manifest and write the checkpoint,
//! loss history, and a JSON run summary.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use semzsl::checkpoint::save_model;
use semzsl::data::{load_manifest_with, LoadOptions};
use semzsl::error::{Error, Result};
use semzsl::model::{Hyperparams, LossTerms};
use semzsl::optim::train;

#[derive(Serialize)]
struct RunSummary {
    epochs: usize,
    seed: u64,
    final_total: Option<f64>,
    final_ce: Option<f64>,
    final_reg: Option<f64>,
    final_penalty: Option<f64>,
    wall_seconds: f64,
    checkpoint: String,
}

pub fn run(data: &Path, opts: LoadOptions, h: &Hyperparams, out_dir: &Path) -> Result<()> {
    let dataset = load_manifest_with(data, opts)?;
    let violations = semzsl::data::validate_dataset(&dataset);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("invalid dataset: {v}");
        }
        return Err(Error::InvalidArgument(format!(
            "dataset fails validation with {} violation(s)",
            violations.len()
        )));
    }

    let started = Instant::now();
    let (params, history) = train(&dataset, h)?;
    let wall = started.elapsed().as_secs_f64();

    let manifest = save_model(out_dir, &params, h, h.epochs)?;
    std::fs::write(out_dir.join("history.csv"), history.to_csv()).map_err(|e| Error::Io {
        path: out_dir.join("history.csv").display().to_string(),
        source: e,
    })?;

    let terms: Option<LossTerms> = history.final_terms();
    let summary = RunSummary {
        epochs: h.epochs,
        seed: h.seed,
        final_total: terms.map(|t| t.total()),
        final_ce: terms.map(|t| t.ce),
        final_reg: terms.map(|t| t.reg),
        final_penalty: terms.map(|t| t.penalty),
        wall_seconds: wall,
        checkpoint: manifest.display().to_string(),
    };
    let summary_path = out_dir.join("run_summary.json");
    std::fs::write(
        &summary_path,
        serde_json::to_string_pretty(&summary).expect("summary serializes"),
    )
    .map_err(|e| Error::Io {
        path: summary_path.display().to_string(),
        source: e,
    })?;

    match terms {
        Some(t) => println!(
            "trained {} epochs in {wall:.2}s: total={:.6} ce={:.6} reg={:.6} penalty={:.6}",
            h.epochs,
            t.total(),
            t.ce,
            t.reg,
            t.penalty
        ),
        None => println!("trained 0 epochs (checkpoint is the initialization)"),
    }
    println!("checkpoint: {}", manifest.display());
    Ok(())
}
