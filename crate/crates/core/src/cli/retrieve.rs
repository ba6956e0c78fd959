//! `retrieve`: per-class retrieval with PR curves, mAP report, CSVs, and
//! optional SVG plots.

use std::path::Path;

use semzsl::checkpoint::load_model;
use semzsl::data::{load_manifest_with, LoadOptions};
use semzsl::error::{Error, Result};
use semzsl::eval::{diagnostic_csv, pr_curve_csv, prototype_diagnostic, retrieval_map};
use semzsl::plot::pr_curve_svg;

pub fn run(data: &Path, opts: LoadOptions, model: &Path, svg: bool, out_dir: &Path) -> Result<()> {
    let dataset = load_manifest_with(data, opts)?;
    let params = load_model(model)?;
    let report = retrieval_map(&params, &dataset)?;
    let diagnostic = prototype_diagnostic(&params, &dataset)?;

    std::fs::create_dir_all(out_dir).map_err(|e| Error::Io {
        path: out_dir.display().to_string(),
        source: e,
    })?;
    let write = |name: String, body: String| -> Result<()> {
        let path = out_dir.join(name);
        std::fs::write(&path, body).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })
    };

    write("retrieval_report.json".to_string(), report.to_json())?;
    write(
        "prototype_diagnostic.csv".to_string(),
        diagnostic_csv(&diagnostic),
    )?;
    for (class, points) in report.pr_curves.iter().enumerate() {
        write(format!("pr_class_{class}.csv"), pr_curve_csv(points))?;
        if svg {
            write(
                format!("pr_class_{class}.svg"),
                pr_curve_svg(points, &format!("PR curve, unseen class {class}")),
            )?;
        }
    }

    println!("mAP: {:.6}", report.map);
    for (class, ap) in report.per_class_ap.iter().enumerate() {
        println!("  class {class}: AP {ap:.6}");
    }
    println!("outputs in {}", out_dir.display());
    Ok(())
}
