//! C ABI for the semzsl library.
//!
//! Conventions:
//!
//! * Handles (`SemzslDataset`, `SemzslModel`) are opaque; create them with
//!   the constructors here and release them with the matching `_free`.
//! * Every fallible call returns a [`SemzslStatus`]; on failure,
//!   [`semzsl_last_error_message`] returns a thread-local description valid
//!   until the next failing call on the same thread.
//! * Strings returned through out-pointers are NUL-terminated, allocated by
//!   this library, and must be released with [`semzsl_string_free`].
//! * All out-pointers are written only on `Ok`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use semzsl::checkpoint::{load_model, load_model_hyperparams, save_model};
use semzsl::data::{load_manifest, make_synthetic, SyntheticSpec, ZslDataset};
use semzsl::error::Error;
use semzsl::eval::{evaluate, ScoreKind};
use semzsl::model::{Hyperparams, ModelParams};
use semzsl::optim::{grad_check, train, Optimizer};

/// Status code for every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemzslStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    ParseError = 4,
    IoError = 5,
    SingularSystem = 6,
    NonFinite = 7,
    Internal = 8,
}

/// Optimizer selector for [`SemzslHyperparams`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemzslOptimizer {
    Sgd = 0,
    /// Momentum 0.9.
    SgdMomentum = 1,
    /// Adam(0.9, 0.999, 1e-8).
    Adam = 2,
}

/// Training hyperparameters, plain-old-data mirror of the library's.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SemzslHyperparams {
    pub lambda: f64,
    pub beta: f64,
    pub alpha: f64,
    pub lr: f64,
    pub epochs: u64,
    pub batch_size: u64,
    pub seed: u64,
    pub optimizer: SemzslOptimizer,
}

impl From<&SemzslHyperparams> for Hyperparams {
    fn from(h: &SemzslHyperparams) -> Hyperparams {
        Hyperparams {
            lambda: h.lambda,
            beta: h.beta,
            alpha: h.alpha,
            lr: h.lr,
            epochs: h.epochs as usize,
            batch_size: h.batch_size as usize,
            seed: h.seed,
            optimizer: match h.optimizer {
                SemzslOptimizer::Sgd => Optimizer::Sgd,
                SemzslOptimizer::SgdMomentum => Optimizer::SgdMomentum { momentum: 0.9 },
                SemzslOptimizer::Adam => Optimizer::default(),
            },
        }
    }
}

/// Opaque dataset handle.
pub struct SemzslDataset {
    inner: ZslDataset,
}

/// Opaque trained-model handle.
pub struct SemzslModel {
    inner: ModelParams,
    trained_with: Hyperparams,
    epochs_completed: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> SemzslStatus {
    match err {
        Error::DimMismatch { .. } | Error::NotSquare { .. } | Error::ShapeData { .. } => {
            SemzslStatus::DimensionMismatch
        }
        Error::Singular { .. } => SemzslStatus::SingularSystem,
        Error::Parse { .. } | Error::RaggedRow { .. } | Error::Manifest { .. } => {
            SemzslStatus::ParseError
        }
        Error::NonFinite { .. } | Error::NonFiniteLoss { .. } => SemzslStatus::NonFinite,
        Error::Io { .. } => SemzslStatus::IoError,
        Error::InvalidHyperparam(_)
        | Error::EmptyBatch
        | Error::EmptyClass { .. }
        | Error::NoRelevantItems
        | Error::InvalidArgument(_) => SemzslStatus::InvalidArgument,
    }
}

/// Run `f`, translating errors and panics into status codes.
fn guarded<F: FnOnce() -> Result<SemzslStatus, Error>>(f: F) -> SemzslStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(err)) => {
            set_error(err.to_string());
            status_of(&err)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal panic: {msg}"));
            SemzslStatus::Internal
        }
    }
}

fn null_err(what: &str) -> Error {
    Error::InvalidArgument(format!("{what} pointer is null"))
}

unsafe fn path_arg(ptr: *const c_char, what: &str) -> Result<std::path::PathBuf, Error> {
    if ptr.is_null() {
        return Err(null_err(what));
    }
    let s = unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|e| Error::InvalidArgument(format!("{what} is not valid UTF-8: {e}")))?;
    Ok(std::path::PathBuf::from(s))
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn semzsl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread; valid until the next
/// failing call on the same thread. Do not free.
#[no_mangle]
pub extern "C" fn semzsl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned through an out-pointer.
///
/// # Safety
/// `s` must be a pointer previously returned by this library through a
/// string out-parameter, not yet freed. A null pointer is ignored.
#[no_mangle]
pub unsafe extern "C" fn semzsl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Default hyperparameters (Adam, lr 1e-3, 100 epochs, batch 64, lambda
/// 1e-4, beta 1, alpha 1, seed 0).
#[no_mangle]
pub extern "C" fn semzsl_hyperparams_default() -> SemzslHyperparams {
    let h = Hyperparams::default();
    SemzslHyperparams {
        lambda: h.lambda,
        beta: h.beta,
        alpha: h.alpha,
        lr: h.lr,
        epochs: h.epochs as u64,
        batch_size: h.batch_size as u64,
        seed: h.seed,
        optimizer: SemzslOptimizer::Adam,
    }
}

/// Generate a seeded synthetic dataset.
///
/// # Safety
/// `out` must be a valid pointer to a `SemzslDataset*`.
#[no_mangle]
pub unsafe extern "C" fn semzsl_dataset_synthetic(
    d_f: u64,
    d_a: u64,
    seen_classes: u64,
    unseen_classes: u64,
    per_class: u64,
    noise_sigma: f64,
    seed: u64,
    out: *mut *mut SemzslDataset,
) -> SemzslStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let spec = SyntheticSpec {
            d_f: d_f as usize,
            d_a: d_a as usize,
            seen_classes: seen_classes as usize,
            unseen_classes: unseen_classes as usize,
            per_class: per_class as usize,
            noise_sigma,
            seed,
        };
        let (dataset, _) = make_synthetic(&spec)?;
        unsafe { *out = Box::into_raw(Box::new(SemzslDataset { inner: dataset })) };
        Ok(SemzslStatus::Ok)
    })
}

/// Load a dataset from a manifest file.
///
/// # Safety
/// `manifest_path` must be a NUL-terminated string; `out` must be a valid
/// pointer to a `SemzslDataset*`.
#[no_mangle]
pub unsafe extern "C" fn semzsl_dataset_load(
    manifest_path: *const c_char,
    out: *mut *mut SemzslDataset,
) -> SemzslStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let path = unsafe { path_arg(manifest_path, "manifest_path") }?;
        let dataset = load_manifest(&path)?;
        unsafe { *out = Box::into_raw(Box::new(SemzslDataset { inner: dataset })) };
        Ok(SemzslStatus::Ok)
    })
}

/// Basic shape information for a dataset handle. Any out-pointer may be null
/// to skip that field.
///
/// # Safety
/// `dataset` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn semzsl_dataset_shape(
    dataset: *const SemzslDataset,
    train_rows: *mut u64,
    test_rows: *mut u64,
    feature_dim: *mut u64,
    descriptor_dim: *mut u64,
    seen_classes: *mut u64,
    unseen_classes: *mut u64,
) -> SemzslStatus {
    guarded(|| {
        let ds = unsafe { dataset.as_ref() }.ok_or_else(|| null_err("dataset"))?;
        let d = &ds.inner;
        let write = |ptr: *mut u64, v: usize| {
            if !ptr.is_null() {
                unsafe { *ptr = v as u64 };
            }
        };
        write(train_rows, d.train_features.rows());
        write(test_rows, d.test_features.rows());
        write(feature_dim, d.feature_dim());
        write(descriptor_dim, d.descriptor_dim());
        write(seen_classes, d.num_seen_classes());
        write(unseen_classes, d.num_unseen_classes());
        Ok(SemzslStatus::Ok)
    })
}

/// Release a dataset handle.
///
/// # Safety
/// `dataset` must come from this library and not be freed twice. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn semzsl_dataset_free(dataset: *mut SemzslDataset) {
    if !dataset.is_null() {
        drop(unsafe { Box::from_raw(dataset) });
    }
}

/// Train a model on the dataset's seen split. Pass null hyperparameters for
/// the defaults.
///
/// # Safety
/// `dataset` must be a live handle; `out` must be a valid pointer to a
/// `SemzslModel*`; `hyperparams` may be null.
#[no_mangle]
pub unsafe extern "C" fn semzsl_train(
    dataset: *const SemzslDataset,
    hyperparams: *const SemzslHyperparams,
    out: *mut *mut SemzslModel,
) -> SemzslStatus {
    guarded(|| {
        let ds = unsafe { dataset.as_ref() }.ok_or_else(|| null_err("dataset"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let h = match unsafe { hyperparams.as_ref() } {
            Some(h) => Hyperparams::from(h),
            None => Hyperparams::default(),
        };
        let (params, _) = train(&ds.inner, &h)?;
        let model = SemzslModel {
            inner: params,
            trained_with: h,
            epochs_completed: h.epochs,
        };
        unsafe { *out = Box::into_raw(Box::new(model)) };
        Ok(SemzslStatus::Ok)
    })
}

/// Load a model checkpoint manifest.
///
/// # Safety
/// `manifest_path` must be a NUL-terminated string; `out` must be a valid
/// pointer to a `SemzslModel*`.
#[no_mangle]
pub unsafe extern "C" fn semzsl_model_load(
    manifest_path: *const c_char,
    out: *mut *mut SemzslModel,
) -> SemzslStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let path = unsafe { path_arg(manifest_path, "manifest_path") }?;
        let params = load_model(&path)?;
        let recorded = load_model_hyperparams(&path)?;
        let model = SemzslModel {
            inner: params,
            epochs_completed: recorded.epochs,
            trained_with: recorded,
        };
        unsafe { *out = Box::into_raw(Box::new(model)) };
        Ok(SemzslStatus::Ok)
    })
}

/// Save a model checkpoint (v.bin, b.csv, model.txt) into a directory.
///
/// # Safety
/// `model` must be a live handle; `dir` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn semzsl_model_save(
    model: *const SemzslModel,
    dir: *const c_char,
) -> SemzslStatus {
    guarded(|| {
        let m = unsafe { model.as_ref() }.ok_or_else(|| null_err("model"))?;
        let dir = unsafe { path_arg(dir, "dir") }?;
        save_model(
            Path::new(&dir),
            &m.inner,
            &m.trained_with,
            m.epochs_completed,
        )?;
        Ok(SemzslStatus::Ok)
    })
}

/// Release a model handle.
///
/// # Safety
/// `model` must come from this library and not be freed twice. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn semzsl_model_free(model: *mut SemzslModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Evaluate a model on a dataset's unseen test split and return the full
/// report (accuracy, mAP, PR curves, confusion) as a JSON string.
///
/// # Safety
/// `model` and `dataset` must be live handles; `out_json` must be a valid
/// pointer to a `char*` and the result must be freed with
/// [`semzsl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn semzsl_evaluate_json(
    model: *const SemzslModel,
    dataset: *const SemzslDataset,
    use_cosine: bool,
    out_json: *mut *mut c_char,
) -> SemzslStatus {
    guarded(|| {
        let m = unsafe { model.as_ref() }.ok_or_else(|| null_err("model"))?;
        let ds = unsafe { dataset.as_ref() }.ok_or_else(|| null_err("dataset"))?;
        if out_json.is_null() {
            return Err(null_err("out_json"));
        }
        let kind = if use_cosine {
            ScoreKind::Cosine
        } else {
            ScoreKind::InnerProduct
        };
        let report = evaluate(&m.inner, &ds.inner, kind)?;
        let json = CString::new(report.to_json())
            .map_err(|_| Error::InvalidArgument("report contained a NUL byte".to_string()))?;
        unsafe { *out_json = json.into_raw() };
        Ok(SemzslStatus::Ok)
    })
}

/// Compare the analytic gradient with central finite differences on a
/// seeded random instance; writes the max relative error.
///
/// # Safety
/// `out_max_rel_err` must be a valid pointer to an `f64`.
#[no_mangle]
pub unsafe extern "C" fn semzsl_grad_check(
    seed: u64,
    step: f64,
    out_max_rel_err: *mut f64,
) -> SemzslStatus {
    guarded(|| {
        if out_max_rel_err.is_null() {
            return Err(null_err("out_max_rel_err"));
        }
        let (dataset, _) = make_synthetic(&SyntheticSpec {
            noise_sigma: 0.5,
            seed,
            ..SyntheticSpec::default()
        })?;
        let params = ModelParams::init(
            dataset.descriptor_dim(),
            dataset.feature_dim(),
            dataset.num_seen_classes(),
            seed,
        );
        let h = Hyperparams {
            lambda: 1e-3,
            seed,
            ..Hyperparams::default()
        };
        let take = 16.min(dataset.train_features.rows());
        let mut features = semzsl::linalg::DenseMatrix::zeros(take, dataset.feature_dim());
        let mut labels = Vec::with_capacity(take);
        for i in 0..take {
            features
                .row_mut(i)
                .copy_from_slice(dataset.train_features.row(i));
            labels.push(dataset.train_labels[i]);
        }
        let err = grad_check(
            &params,
            &features,
            &labels,
            &dataset.seen_descriptors,
            &h,
            step,
        )?;
        unsafe { *out_max_rel_err = err };
        Ok(SemzslStatus::Ok)
    })
}
