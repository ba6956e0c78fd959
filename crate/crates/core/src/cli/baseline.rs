//! `baseline`: fit one of the closed-form comparison methods, save its
//! checkpoint, and write the evaluation report. `--sweep` grids the ridge
//! weights over powers of ten and keeps the best mean accuracy.

use std::path::Path;

use semzsl::baselines::{eszsl_fit, lr_fit, rlr_fit, BaselineKind, BaselineModel};
use semzsl::checkpoint::save_baseline;
use semzsl::data::{load_manifest_with, LoadOptions, ZslDataset};
use semzsl::error::{Error, Result};

fn fit(kind: BaselineKind, dataset: &ZslDataset, gamma: f64, lam: f64) -> Result<BaselineModel> {
    let f = &dataset.train_features;
    let l = &dataset.train_labels;
    let a = &dataset.seen_descriptors;
    match kind {
        BaselineKind::Lr => lr_fit(f, l, a, gamma),
        BaselineKind::Rlr => rlr_fit(f, l, a, gamma),
        BaselineKind::Eszsl => eszsl_fit(f, l, a, gamma, lam),
    }
}

pub fn run(
    data: &Path,
    opts: LoadOptions,
    kind: BaselineKind,
    gamma: f64,
    lam: f64,
    sweep: bool,
    out_dir: &Path,
) -> Result<()> {
    let dataset = load_manifest_with(data, opts)?;

    let model = if sweep {
        let grid: Vec<f64> = (-3..=3).map(|e| 10f64.powi(e)).collect();
        let mut best: Option<(f64, BaselineModel)> = None;
        for &g in &grid {
            // Only ESZSL has a second ridge weight.
            let lams: &[f64] = if kind == BaselineKind::Eszsl {
                &grid
            } else {
                &[0.0]
            };
            for &l in lams {
                let candidate = fit(kind, &dataset, g, l)?;
                let acc = candidate.evaluate(&dataset)?.mean_accuracy;
                println!("sweep {kind}: gamma={g} lam={l} mean accuracy {acc:.6}");
                if best.as_ref().is_none_or(|(b, _)| acc > *b) {
                    best = Some((acc, candidate));
                }
            }
        }
        best.expect("grid is nonempty").1
    } else {
        fit(kind, &dataset, gamma, lam)?
    };

    let report = model.evaluate(&dataset)?;
    let manifest = save_baseline(out_dir, &model)?;
    let report_path = out_dir.join("baseline_report.json");
    std::fs::write(&report_path, report.to_json()).map_err(|e| Error::Io {
        path: report_path.display().to_string(),
        source: e,
    })?;

    println!(
        "{kind} (gamma={}, lam={}): mean accuracy {:.6}, mAP {:.6}",
        model.gamma, model.lam, report.mean_accuracy, report.map
    );
    println!("checkpoint: {}", manifest.display());
    println!("report: {}", report_path.display());
    Ok(())
}
