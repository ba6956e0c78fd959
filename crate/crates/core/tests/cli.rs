//! End-to-end tests of the `semzsl` binary: every subcommand, the documented
//! exit codes, and the byte-level determinism contracts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use semzsl::eval::EvalReport;
use semzsl::model::ModelParams;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semzsl"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "command {args:?} failed:\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn gen(dir: &Path, seed: u64, noise: f64) -> PathBuf {
    run_ok(&[
        "gen",
        "--out",
        dir.to_str().unwrap(),
        "--seed",
        &seed.to_string(),
        "--noise",
        &noise.to_string(),
    ]);
    dir.join("dataset.txt")
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path
                    .strip_prefix(dir)
                    .unwrap()
                    .to_str()
                    .unwrap()
                    .to_string();
                files.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    files.sort();
    files
}

#[test]
fn gen_is_byte_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    gen(&a, 7, 0.2);
    gen(&b, 7, 0.2);
    let fa = read_dir_bytes(&a);
    let fb = read_dir_bytes(&b);
    assert_eq!(fa.len(), fb.len());
    for ((na, da), (nb, db)) in fa.iter().zip(&fb) {
        assert_eq!(na, nb);
        assert_eq!(da, db, "file {na} differs between identical gen runs");
    }
}

#[test]
fn train_is_bitwise_deterministic_across_invocations() {
    let tmp = tempfile::tempdir().unwrap();
    let data = gen(&tmp.path().join("data"), 3, 0.1);
    let r1 = tmp.path().join("r1");
    let r2 = tmp.path().join("r2");
    for out in [&r1, &r2] {
        run_ok(&[
            "train",
            "--data",
            data.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--epochs",
            "5",
        ]);
    }
    assert_eq!(
        std::fs::read(r1.join("v.bin")).unwrap(),
        std::fs::read(r2.join("v.bin")).unwrap()
    );
    assert_eq!(
        std::fs::read(r1.join("b.csv")).unwrap(),
        std::fs::read(r2.join("b.csv")).unwrap()
    );
}

#[test]
fn zero_noise_eval_with_ground_truth_map_is_perfect() {
    let tmp = tempfile::tempdir().unwrap();
    let data = gen(&tmp.path().join("data"), 11, 0.0);
    let gt_model = tmp.path().join("data/ground_truth/model.txt");
    let eval_dir = tmp.path().join("eval");
    let out = run_ok(&[
        "eval",
        "--data",
        data.to_str().unwrap(),
        "--model",
        gt_model.to_str().unwrap(),
        "--out",
        eval_dir.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("mean per-class top-1 accuracy: 1.000000"),
        "{stdout}"
    );
    let report =
        EvalReport::from_json(&std::fs::read_to_string(eval_dir.join("eval_report.json")).unwrap())
            .unwrap();
    assert_eq!(report.mean_accuracy, 1.0);
}

#[test]
fn beta_zero_training_has_identically_zero_penalty_column() {
    let tmp = tempfile::tempdir().unwrap();
    let data = gen(&tmp.path().join("data"), 5, 0.3);
    let run_dir = tmp.path().join("run");
    run_ok(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--out",
        run_dir.to_str().unwrap(),
        "--beta",
        "0",
        "--epochs",
        "4",
    ]);
    let csv = std::fs::read_to_string(run_dir.join("history.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "epoch,total,ce,reg,penalty,seconds");
    let mut rows = 0;
    for line in lines {
        let penalty: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert_eq!(penalty, 0.0, "row {line:?}");
        rows += 1;
    }
    assert_eq!(rows, 4);
}

#[test]
fn zero_epoch_checkpoint_equals_initialization() {
    let tmp = tempfile::tempdir().unwrap();
    let data = gen(&tmp.path().join("data"), 2, 0.1);
    let run_dir = tmp.path().join("run");
    run_ok(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--out",
        run_dir.to_str().unwrap(),
        "--epochs",
        "0",
        "--seed",
        "42",
    ]);
    let params = semzsl::checkpoint::load_model(&run_dir.join("model.txt")).unwrap();
    let init = ModelParams::init(8, 16, 10, 42);
    assert_eq!(params.v.data(), init.v.data());
    assert_eq!(params.b, init.b);
}

#[test]
fn gradcheck_exit_codes_follow_threshold() {
    let out = bin().args(["gradcheck"]).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"), "{stdout}");

    // An unreachable threshold flips the exit code to 1.
    let out = bin()
        .args(["gradcheck", "--threshold", "1e-12"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn retrieve_emits_monotone_pr_csv_per_class() {
    let tmp = tempfile::tempdir().unwrap();
    let data = gen(&tmp.path().join("data"), 9, 0.2);
    let gt_model = tmp.path().join("data/ground_truth/model.txt");
    let ret = tmp.path().join("ret");
    run_ok(&[
        "retrieve",
        "--data",
        data.to_str().unwrap(),
        "--model",
        gt_model.to_str().unwrap(),
        "--out",
        ret.to_str().unwrap(),
        "--svg",
    ]);
    for class in 0..4 {
        let csv = std::fs::read_to_string(ret.join(format!("pr_class_{class}.csv"))).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "rank,recall,precision");
        let mut prev = 0.0f64;
        let mut rows = 0;
        for line in lines {
            let recall: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert!(recall >= prev, "recall decreased in class {class}: {line}");
            prev = recall;
            rows += 1;
        }
        assert_eq!(rows, 80, "one point per gallery rank");
        assert!(ret.join(format!("pr_class_{class}.svg")).exists());
    }
}

#[test]
fn report_json_round_trips_with_exact_means() {
    let tmp = tempfile::tempdir().unwrap();
    let data = gen(&tmp.path().join("data"), 13, 0.3);
    let gt_model = tmp.path().join("data/ground_truth/model.txt");
    let ret = tmp.path().join("ret");
    run_ok(&[
        "retrieve",
        "--data",
        data.to_str().unwrap(),
        "--model",
        gt_model.to_str().unwrap(),
        "--out",
        ret.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(ret.join("retrieval_report.json")).unwrap();
    let report = EvalReport::from_json(&text).unwrap();
    let mean =
        report.per_class_accuracy.iter().sum::<f64>() / report.per_class_accuracy.len() as f64;
    assert_eq!(mean.to_bits(), report.mean_accuracy.to_bits());
    let map = report.per_class_ap.iter().sum::<f64>() / report.per_class_ap.len() as f64;
    assert_eq!(map.to_bits(), report.map.to_bits());
    // Confusion rows sum to the per-class test counts.
    for row in &report.confusion {
        assert_eq!(row.iter().sum::<usize>(), 20);
    }
}

#[test]
fn baseline_subcommand_writes_checkpoint_and_report() {
    let tmp = tempfile::tempdir().unwrap();
    let data = gen(&tmp.path().join("data"), 19, 0.0);
    for kind in ["lr", "rlr", "eszsl"] {
        let out_dir = tmp.path().join(kind);
        let out = run_ok(&[
            "baseline",
            "--data",
            data.to_str().unwrap(),
            "--kind",
            kind,
            "--gamma",
            "0.001",
            "--lam",
            "0.001",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        let stdout = String::from_utf8_lossy(&out.stdout);
        assert!(
            stdout.contains("mean accuracy 1.000000"),
            "{kind}: {stdout}"
        );
        assert!(out_dir.join("model.txt").exists());
        assert!(out_dir.join("weights.bin").exists());
        let report = EvalReport::from_json(
            &std::fs::read_to_string(out_dir.join("baseline_report.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(report.mean_accuracy, 1.0);
    }
}

#[test]
fn data_errors_exit_with_code_2() {
    let out = bin()
        .args([
            "train",
            "--data",
            "/nonexistent/dataset.txt",
            "--out",
            "/tmp/x",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    // Usage errors (unknown flag) also exit 2 per the CLI contract.
    let out = bin().args(["train", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_fills_unset_flags_and_flags_win() {
    let tmp = tempfile::tempdir().unwrap();
    let data = gen(&tmp.path().join("data"), 4, 0.1);
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(&cfg, "epochs = 2\nbeta = 0\n").unwrap();
    let run_dir = tmp.path().join("run");
    run_ok(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--out",
        run_dir.to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
        "--epochs",
        "3",
    ]);
    let csv = std::fs::read_to_string(run_dir.join("history.csv")).unwrap();
    // 3 epochs from the flag, beta = 0 from the config.
    assert_eq!(csv.lines().count(), 4);
    for line in csv.lines().skip(1) {
        let penalty: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert_eq!(penalty, 0.0);
    }
}

#[test]
fn out_dir_env_var_is_honored() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("env-out");
    let status = bin()
        .args(["gen", "--seed", "1"])
        .env("SEMZSL_OUT_DIR", out_dir.to_str().unwrap())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out_dir.join("dataset.txt").exists());
}
