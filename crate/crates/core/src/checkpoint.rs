//! Model checkpoints: a BIN matrix for the map, a CSV vector for the bias,
//! and a plain-text `key = value` manifest tying them together with the
//! hyperparameters and seed of the run that produced them.
//!
//! Baseline checkpoints reuse the scheme with a `kind` tag and a single
//! weights matrix.

use std::fs;
use std::path::{Path, PathBuf};

use crate::baselines::{BaselineKind, BaselineModel};
use crate::data::{load_matrix, save_matrix, MatrixFormat};
use crate::error::{Error, Result};
use crate::model::{Hyperparams, ModelParams};
use crate::optim::Optimizer;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Write `v.bin`, `b.csv`, and `model.txt` into `dir`; returns the manifest
/// path.
pub fn save_model(
    dir: &Path,
    params: &ModelParams,
    h: &Hyperparams,
    epochs_completed: usize,
) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    save_matrix(&dir.join("v.bin"), &params.v, MatrixFormat::Bin)?;
    let b_matrix = crate::linalg::DenseMatrix::from_vec(1, params.b.len(), params.b.clone())?;
    save_matrix(&dir.join("b.csv"), &b_matrix, MatrixFormat::Csv)?;
    let manifest = dir.join("model.txt");
    let body = format!(
        "kind = ssl\n\
         v = v.bin\n\
         b = b.csv\n\
         d_a = {}\n\
         d_f = {}\n\
         num_seen_classes = {}\n\
         lambda = {}\n\
         beta = {}\n\
         alpha = {}\n\
         lr = {}\n\
         epochs = {}\n\
         batch_size = {}\n\
         seed = {}\n\
         optimizer = {}\n",
        params.v.rows(),
        params.v.cols(),
        params.b.len(),
        h.lambda,
        h.beta,
        h.alpha,
        h.lr,
        epochs_completed,
        h.batch_size,
        h.seed,
        h.optimizer,
    );
    fs::write(&manifest, body).map_err(|e| io_err(&manifest, e))?;
    Ok(manifest)
}

/// Load a `kind = ssl` checkpoint. Shape keys are cross-checked against the
/// loaded matrices.
pub fn load_model(manifest: &Path) -> Result<ModelParams> {
    let pairs = crate::data::parse_kv_file(manifest)?;
    let dir = manifest.parent().unwrap_or(Path::new(".")).to_path_buf();
    let get = |key: &str| -> Option<&str> {
        pairs
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    };
    let kind = get("kind").unwrap_or("ssl");
    if kind != "ssl" {
        return Err(Error::Manifest {
            path: manifest.display().to_string(),
            msg: format!("expected kind = ssl, got {kind:?}"),
        });
    }
    let need = |key: &str| -> Result<&str> {
        get(key).ok_or_else(|| Error::Manifest {
            path: manifest.display().to_string(),
            msg: format!("missing key {key}"),
        })
    };
    let v_path = dir.join(need("v")?);
    let b_path = dir.join(need("b")?);
    let v = load_matrix(&v_path, MatrixFormat::from_path(&v_path)?)?;
    let b_matrix = load_matrix(&b_path, MatrixFormat::from_path(&b_path)?)?;
    if b_matrix.rows() != 1 {
        return Err(Error::Manifest {
            path: manifest.display().to_string(),
            msg: format!(
                "bias file must be a single CSV row, got {} rows",
                b_matrix.rows()
            ),
        });
    }
    let b = b_matrix.data().to_vec();

    for (key, actual) in [
        ("d_a", v.rows()),
        ("d_f", v.cols()),
        ("num_seen_classes", b.len()),
    ] {
        if let Some(text) = get(key) {
            let declared: usize = text.parse().map_err(|_| Error::Manifest {
                path: manifest.display().to_string(),
                msg: format!("{key}: expected an integer, got {text:?}"),
            })?;
            if declared != actual {
                return Err(Error::Manifest {
                    path: manifest.display().to_string(),
                    msg: format!("{key} = {declared} does not match loaded shape {actual}"),
                });
            }
        }
    }

    Ok(ModelParams { v, b })
}

/// Hyperparameters recorded in a checkpoint manifest, if all fields parse.
pub fn load_model_hyperparams(manifest: &Path) -> Result<Hyperparams> {
    let pairs = crate::data::parse_kv_file(manifest)?;
    let get = |key: &str| -> Option<&str> {
        pairs
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    };
    let mut h = Hyperparams::default();
    let bad = |key: &str, v: &str| Error::Manifest {
        path: manifest.display().to_string(),
        msg: format!("{key}: cannot parse {v:?}"),
    };
    macro_rules! read {
        ($field:ident, $key:expr) => {
            if let Some(v) = get($key) {
                h.$field = v.parse().map_err(|_| bad($key, v))?;
            }
        };
    }
    read!(lambda, "lambda");
    read!(beta, "beta");
    read!(alpha, "alpha");
    read!(lr, "lr");
    read!(epochs, "epochs");
    read!(batch_size, "batch_size");
    read!(seed, "seed");
    if let Some(v) = get("optimizer") {
        h.optimizer = v.parse::<Optimizer>()?;
    }
    Ok(h)
}

/// Write a baseline checkpoint (`weights.bin` + `model.txt`).
pub fn save_baseline(dir: &Path, model: &BaselineModel) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    save_matrix(&dir.join("weights.bin"), &model.weights, MatrixFormat::Bin)?;
    let manifest = dir.join("model.txt");
    let body = format!(
        "kind = {}\nweights = weights.bin\ngamma = {}\nlam = {}\n",
        model.kind, model.gamma, model.lam
    );
    fs::write(&manifest, body).map_err(|e| io_err(&manifest, e))?;
    Ok(manifest)
}

/// Load a baseline checkpoint written by [`save_baseline`].
pub fn load_baseline(manifest: &Path) -> Result<BaselineModel> {
    let pairs = crate::data::parse_kv_file(manifest)?;
    let dir = manifest.parent().unwrap_or(Path::new(".")).to_path_buf();
    let get = |key: &str| -> Option<&str> {
        pairs
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    };
    let kind: BaselineKind = get("kind")
        .ok_or_else(|| Error::Manifest {
            path: manifest.display().to_string(),
            msg: "missing key kind".to_string(),
        })?
        .parse()?;
    let weights_path = dir.join(get("weights").ok_or_else(|| Error::Manifest {
        path: manifest.display().to_string(),
        msg: "missing key weights".to_string(),
    })?);
    let weights = load_matrix(&weights_path, MatrixFormat::from_path(&weights_path)?)?;
    let parse_f64 = |key: &str| -> Result<f64> {
        match get(key) {
            None => Ok(0.0),
            Some(v) => v.parse().map_err(|_| Error::Manifest {
                path: manifest.display().to_string(),
                msg: format!("{key}: cannot parse {v:?}"),
            }),
        }
    };
    Ok(BaselineModel {
        kind,
        weights,
        gamma: parse_f64("gamma")?,
        lam: parse_f64("lam")?,
    })
}
