//! Matrix, label, and manifest file formats.
//!
//! Three formats, all documented here and stable:
//!
//! * CSV matrix: comma-separated decimal floats, one matrix row per line,
//!   no header. Values are written with Rust's shortest round-trip `f64`
//!   formatting, so save/load is exact for finite values.
//! * BIN matrix: magic `ZSLM`, version byte (1), dtype byte (1 = f32,
//!   2 = f64), little-endian u64 row and column counts, then the values
//!   little-endian in row-major order. f32 payloads are widened to f64 on
//!   load.
//! * Labels: one integer per line.
//!
//! A dataset manifest is a plain-text `key = value` file naming the six
//! component files (paths resolved relative to the manifest) plus optional
//! normalization flags.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

use super::ZslDataset;

const BIN_MAGIC: &[u8; 4] = b"ZSLM";
const BIN_VERSION: u8 = 1;
const DTYPE_F32: u8 = 1;
const DTYPE_F64: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Bin,
}

impl MatrixFormat {
    /// Infer the format from a file extension: `.csv` is CSV, `.bin` is BIN.
    pub fn from_path(path: &Path) -> Result<MatrixFormat> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Ok(MatrixFormat::Csv),
            Some("bin") => Ok(MatrixFormat::Bin),
            other => Err(Error::InvalidArgument(format!(
                "cannot infer matrix format from extension {:?} of {}",
                other,
                path.display()
            ))),
        }
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Load a matrix in the declared format. Entries must be finite.
pub fn load_matrix(path: &Path, format: MatrixFormat) -> Result<DenseMatrix> {
    let m = match format {
        MatrixFormat::Csv => load_csv(path)?,
        MatrixFormat::Bin => load_bin(path)?,
    };
    if let Some((row, col)) = m.first_non_finite() {
        return Err(Error::NonFinite {
            context: path.display().to_string(),
            row,
            col,
        });
    }
    Ok(m)
}

/// Save a matrix in the declared format.
pub fn save_matrix(path: &Path, m: &DenseMatrix, format: MatrixFormat) -> Result<()> {
    match format {
        MatrixFormat::Csv => save_csv(path, m),
        MatrixFormat::Bin => save_bin(path, m),
    }
}

fn load_csv(path: &Path) -> Result<DenseMatrix> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut ncols = None;
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|e| Error::Parse {
                path: path.display().to_string(),
                line: lineno + 1,
                msg: format!("{e}: {:?}", field.trim()),
            })?;
            row.push(v);
        }
        match ncols {
            None => ncols = Some(row.len()),
            Some(expected) if expected != row.len() => {
                return Err(Error::RaggedRow {
                    path: path.display().to_string(),
                    line: lineno + 1,
                    expected,
                    found: row.len(),
                });
            }
            _ => {}
        }
        rows.push(row);
    }
    let ncols = ncols.unwrap_or(0);
    let mut data = Vec::with_capacity(rows.len() * ncols);
    let nrows = rows.len();
    for row in rows {
        data.extend(row);
    }
    DenseMatrix::from_vec(nrows, ncols, data)
}

fn save_csv(path: &Path, m: &DenseMatrix) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    for i in 0..m.rows() {
        let mut first = true;
        for v in m.row(i) {
            if !first {
                write!(w, ",").map_err(|e| io_err(path, e))?;
            }
            write!(w, "{v}").map_err(|e| io_err(path, e))?;
            first = false;
        }
        writeln!(w).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

fn load_bin(path: &Path) -> Result<DenseMatrix> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    let parse_err = |offset: usize, msg: String| Error::Parse {
        path: path.display().to_string(),
        line: offset,
        msg,
    };
    if bytes.len() < 22 {
        return Err(parse_err(
            0,
            format!("file too short: {} bytes", bytes.len()),
        ));
    }
    if &bytes[0..4] != BIN_MAGIC {
        return Err(parse_err(0, format!("bad magic {:?}", &bytes[0..4])));
    }
    if bytes[4] != BIN_VERSION {
        return Err(parse_err(4, format!("unsupported version {}", bytes[4])));
    }
    let dtype = bytes[5];
    let rows = u64::from_le_bytes(bytes[6..14].try_into().unwrap()) as usize;
    let cols = u64::from_le_bytes(bytes[14..22].try_into().unwrap()) as usize;
    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| parse_err(6, format!("shape overflow: {rows}x{cols}")))?;
    let payload = &bytes[22..];
    let width = match dtype {
        DTYPE_F32 => 4,
        DTYPE_F64 => 8,
        other => return Err(parse_err(5, format!("unknown dtype code {other}"))),
    };
    if payload.len() != count * width {
        return Err(parse_err(
            22,
            format!(
                "payload is {} bytes, expected {} for {rows}x{cols} dtype {dtype}",
                payload.len(),
                count * width
            ),
        ));
    }
    let mut data = Vec::with_capacity(count);
    match dtype {
        DTYPE_F32 => {
            for chunk in payload.chunks_exact(4) {
                data.push(f32::from_le_bytes(chunk.try_into().unwrap()) as f64);
            }
        }
        _ => {
            for chunk in payload.chunks_exact(8) {
                data.push(f64::from_le_bytes(chunk.try_into().unwrap()));
            }
        }
    }
    DenseMatrix::from_vec(rows, cols, data)
}

fn save_bin(path: &Path, m: &DenseMatrix) -> Result<()> {
    let mut bytes = Vec::with_capacity(22 + 8 * m.data().len());
    bytes.extend_from_slice(BIN_MAGIC);
    bytes.push(BIN_VERSION);
    bytes.push(DTYPE_F64);
    bytes.extend_from_slice(&(m.rows() as u64).to_le_bytes());
    bytes.extend_from_slice(&(m.cols() as u64).to_le_bytes());
    for v in m.data() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}

/// Load a labels file: one integer per line.
pub fn load_labels(path: &Path) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: usize = t.parse().map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: lineno + 1,
            msg: format!("{e}: {t:?}"),
        })?;
        out.push(v);
    }
    Ok(out)
}

pub fn save_labels(path: &Path, labels: &[usize]) -> Result<()> {
    let mut s = String::new();
    for l in labels {
        s.push_str(&l.to_string());
        s.push('\n');
    }
    fs::write(path, s).map_err(|e| io_err(path, e))
}

/// Parse a `key = value` file into key/value pairs. Blank lines and lines
/// starting with `#` are skipped; later keys override earlier ones.
pub fn parse_kv_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let Some((k, v)) = t.split_once('=') else {
            return Err(Error::Manifest {
                path: path.display().to_string(),
                msg: format!("line {}: expected key = value, got {t:?}", lineno + 1),
            });
        };
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_bool(path: &Path, key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" => Ok(true),
        "false" | "0" => Ok(false),
        _ => Err(Error::Manifest {
            path: path.display().to_string(),
            msg: format!("{key}: expected true/false, got {v:?}"),
        }),
    }
}

/// Overrides for the manifest's normalization flags, e.g. from CLI flags.
/// `None` keeps whatever the manifest says.
#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    pub normalize_features: Option<bool>,
    pub normalize_descriptors: Option<bool>,
}

/// Read a dataset manifest and load all six component files, applying the
/// normalization flags. The universal eps 1e-12 guards degenerate rows.
pub fn load_manifest(path: &Path) -> Result<ZslDataset> {
    load_manifest_with(path, LoadOptions::default())
}

/// [`load_manifest`] with explicit overrides of the normalization flags.
pub fn load_manifest_with(path: &Path, opts: LoadOptions) -> Result<ZslDataset> {
    let pairs = parse_kv_file(path)?;
    let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let missing = |key: &str| Error::Manifest {
        path: path.display().to_string(),
        msg: format!("missing key {key}"),
    };

    let mut files: [Option<PathBuf>; 6] = Default::default();
    let keys = [
        "train_features",
        "train_labels",
        "test_features",
        "test_labels",
        "seen_descriptors",
        "unseen_descriptors",
    ];
    let mut normalize_features = true;
    let mut normalize_descriptors = false;
    for (k, v) in &pairs {
        if let Some(i) = keys.iter().position(|key| key == k) {
            files[i] = Some(dir.join(v));
        } else if k == "normalize_features" {
            normalize_features = parse_bool(path, k, v)?;
        } else if k == "normalize_descriptors" {
            normalize_descriptors = parse_bool(path, k, v)?;
        } else {
            return Err(Error::Manifest {
                path: path.display().to_string(),
                msg: format!("unknown key {k:?}"),
            });
        }
    }
    let normalize_features = opts.normalize_features.unwrap_or(normalize_features);
    let normalize_descriptors = opts.normalize_descriptors.unwrap_or(normalize_descriptors);
    let mut resolved = Vec::with_capacity(6);
    for (i, key) in keys.iter().enumerate() {
        resolved.push(files[i].clone().ok_or_else(|| missing(key))?);
    }

    let load = |p: &PathBuf| -> Result<DenseMatrix> { load_matrix(p, MatrixFormat::from_path(p)?) };
    let mut train_features = load(&resolved[0])?;
    let train_labels = load_labels(&resolved[1])?;
    let mut test_features = load(&resolved[2])?;
    let test_labels = load_labels(&resolved[3])?;
    let mut seen_descriptors = load(&resolved[4])?;
    let mut unseen_descriptors = load(&resolved[5])?;

    if normalize_features {
        train_features = train_features.normalize_rows(1e-12);
        test_features = test_features.normalize_rows(1e-12);
    }
    if normalize_descriptors {
        seen_descriptors = seen_descriptors.normalize_rows(1e-12);
        unseen_descriptors = unseen_descriptors.normalize_rows(1e-12);
    }

    Ok(ZslDataset {
        train_features,
        train_labels,
        test_features,
        test_labels,
        seen_descriptors,
        unseen_descriptors,
    })
}

/// Write the six component files and a manifest into `dir`. Feature rows are
/// written as generated, so the manifest disables re-normalization on load.
pub fn write_manifest(dir: &Path, dataset: &ZslDataset) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    save_matrix(
        &dir.join("train_features.bin"),
        &dataset.train_features,
        MatrixFormat::Bin,
    )?;
    save_labels(&dir.join("train_labels.txt"), &dataset.train_labels)?;
    save_matrix(
        &dir.join("test_features.bin"),
        &dataset.test_features,
        MatrixFormat::Bin,
    )?;
    save_labels(&dir.join("test_labels.txt"), &dataset.test_labels)?;
    save_matrix(
        &dir.join("seen_descriptors.bin"),
        &dataset.seen_descriptors,
        MatrixFormat::Bin,
    )?;
    save_matrix(
        &dir.join("unseen_descriptors.bin"),
        &dataset.unseen_descriptors,
        MatrixFormat::Bin,
    )?;
    let manifest = dir.join("dataset.txt");
    let body = "\
train_features = train_features.bin
train_labels = train_labels.txt
test_features = test_features.bin
test_labels = test_labels.txt
seen_descriptors = seen_descriptors.bin
unseen_descriptors = unseen_descriptors.bin
normalize_features = false
normalize_descriptors = false
";
    fs::write(&manifest, body).map_err(|e| io_err(&manifest, e))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{make_synthetic, validate_dataset, SyntheticSpec};

    fn tmp() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn csv_parses_basic_matrix() {
        let dir = tmp();
        let p = dir.path().join("m.csv");
        fs::write(&p, "1,2\n3,4\n").unwrap();
        let m = load_matrix(&p, MatrixFormat::Csv).unwrap();
        assert_eq!(m.shape(), (2, 2));
        assert_eq!(m.data(), &[1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn csv_ragged_row_reports_line() {
        let dir = tmp();
        let p = dir.path().join("m.csv");
        fs::write(&p, "1,2\n3\n").unwrap();
        match load_matrix(&p, MatrixFormat::Csv) {
            Err(Error::RaggedRow {
                line,
                expected,
                found,
                ..
            }) => {
                assert_eq!((line, expected, found), (2, 2, 1));
            }
            other => panic!("expected ragged-row error, got {other:?}"),
        }
    }

    #[test]
    fn csv_non_finite_reports_coordinates() {
        let dir = tmp();
        let p = dir.path().join("m.csv");
        fs::write(&p, "1,2\n3,inf\n").unwrap();
        match load_matrix(&p, MatrixFormat::Csv) {
            Err(Error::NonFinite { row, col, .. }) => assert_eq!((row, col), (1, 1)),
            other => panic!("expected non-finite error, got {other:?}"),
        }
    }

    #[test]
    fn csv_parse_error_reports_line() {
        let dir = tmp();
        let p = dir.path().join("m.csv");
        fs::write(&p, "1,2\nx,4\n").unwrap();
        match load_matrix(&p, MatrixFormat::Csv) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bin_round_trip_is_bit_exact() {
        let dir = tmp();
        let p = dir.path().join("m.bin");
        let m = DenseMatrix::from_rows(&[
            vec![1.5, -2.25, 1e-300],
            vec![std::f64::consts::PI, 0.0, -0.0],
        ])
        .unwrap();
        save_matrix(&p, &m, MatrixFormat::Bin).unwrap();
        let back = load_matrix(&p, MatrixFormat::Bin).unwrap();
        assert_eq!(back.shape(), m.shape());
        for (a, b) in back.data().iter().zip(m.data()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn bin_f32_payload_is_widened() {
        let dir = tmp();
        let p = dir.path().join("m.bin");
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"ZSLM");
        bytes.push(1);
        bytes.push(1); // f32
        bytes.extend_from_slice(&1u64.to_le_bytes());
        bytes.extend_from_slice(&2u64.to_le_bytes());
        bytes.extend_from_slice(&1.5f32.to_le_bytes());
        bytes.extend_from_slice(&(-0.25f32).to_le_bytes());
        fs::write(&p, bytes).unwrap();
        let m = load_matrix(&p, MatrixFormat::Bin).unwrap();
        assert_eq!(m.data(), &[1.5, -0.25]);
    }

    #[test]
    fn bin_rejects_bad_magic() {
        let dir = tmp();
        let p = dir.path().join("m.bin");
        fs::write(&p, b"NOPE\x01\x02....................").unwrap();
        assert!(matches!(
            load_matrix(&p, MatrixFormat::Bin),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn csv_round_trip_is_exact_for_finite_values() {
        let dir = tmp();
        let p = dir.path().join("m.csv");
        let m = DenseMatrix::from_rows(&[
            vec![0.1, -7.25e-3, 123456.789],
            vec![std::f64::consts::E, -1.0 / 3.0, 2.0f64.powi(-40)],
        ])
        .unwrap();
        save_matrix(&p, &m, MatrixFormat::Csv).unwrap();
        let back = load_matrix(&p, MatrixFormat::Csv).unwrap();
        for (a, b) in back.data().iter().zip(m.data()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn labels_round_trip() {
        let dir = tmp();
        let p = dir.path().join("l.txt");
        save_labels(&p, &[0, 3, 2, 1]).unwrap();
        assert_eq!(load_labels(&p).unwrap(), vec![0, 3, 2, 1]);
    }

    #[test]
    fn manifest_round_trip_preserves_dataset() {
        let dir = tmp();
        let (d, _) = make_synthetic(&SyntheticSpec {
            d_f: 5,
            d_a: 3,
            seen_classes: 4,
            unseen_classes: 2,
            per_class: 3,
            noise_sigma: 0.2,
            seed: 4,
        })
        .unwrap();
        let manifest = write_manifest(dir.path(), &d).unwrap();
        let back = load_manifest(&manifest).unwrap();
        assert!(validate_dataset(&back).is_empty());
        assert_eq!(back.train_labels, d.train_labels);
        assert_eq!(back.test_labels, d.test_labels);
        assert_eq!(
            back.train_features.max_abs_diff(&d.train_features).unwrap(),
            0.0
        );
        assert_eq!(
            back.unseen_descriptors
                .max_abs_diff(&d.unseen_descriptors)
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn load_options_override_manifest_flags() {
        let dir = tmp();
        let (d, _) = make_synthetic(&SyntheticSpec {
            d_f: 4,
            d_a: 3,
            seen_classes: 3,
            unseen_classes: 2,
            per_class: 2,
            noise_sigma: 0.0,
            seed: 8,
        })
        .unwrap();
        let manifest = write_manifest(dir.path(), &d).unwrap();
        // The generated manifest says normalize_descriptors = false; force on.
        let back = load_manifest_with(
            &manifest,
            LoadOptions {
                normalize_features: None,
                normalize_descriptors: Some(true),
            },
        )
        .unwrap();
        for norm in back.seen_descriptors.row_norms() {
            assert!((norm - 1.0).abs() < 1e-12);
        }
        // And the default load leaves them raw.
        let raw = load_manifest(&manifest).unwrap();
        assert!(raw
            .seen_descriptors
            .row_norms()
            .iter()
            .any(|n| (n - 1.0).abs() > 1e-6));
    }

    #[test]
    fn manifest_missing_key_is_an_error() {
        let dir = tmp();
        let p = dir.path().join("dataset.txt");
        fs::write(&p, "train_features = a.bin\n").unwrap();
        match load_manifest(&p) {
            Err(Error::Manifest { msg, .. }) => assert!(msg.contains("missing key")),
            other => panic!("expected manifest error, got {other:?}"),
        }
    }
}
