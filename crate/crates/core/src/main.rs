//! Command-line interface: dataset generation, training, evaluation,
//! retrieval, gradient checking, and baseline fits.

mod cli;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use semzsl::baselines::BaselineKind;
use semzsl::data::{LoadOptions, SyntheticSpec};
use semzsl::error::Result;
use semzsl::eval::ScoreKind;
use semzsl::model::Hyperparams;
use semzsl::optim::Optimizer;

use cli::config::ConfigMap;
use cli::gradcheck::GradcheckArgs;
use cli::resolve_out_dir;

#[derive(Parser)]
#[command(
    name = "semzsl",
    version,
    about = "Zero-shot classification and retrieval with descriptor-generated classifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded synthetic dataset with a planted ground-truth map
    Gen(GenArgs),
    /// Train the compatibility model on a dataset manifest
    Train(TrainArgs),
    /// Classify the unseen test split with a trained checkpoint
    Eval(EvalArgs),
    /// Zero-shot retrieval: mAP, PR-curve CSVs, optional SVG plots
    Retrieve(RetrieveArgs),
    /// Check the analytic gradient against central finite differences
    Gradcheck(GradcheckCliArgs),
    /// Fit and evaluate a closed-form baseline (lr, rlr, eszsl)
    Baseline(BaselineArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Output directory (or $SEMZSL_OUT_DIR)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional key=value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Feature dimension
    #[arg(long)]
    d_f: Option<usize>,
    /// Descriptor dimension
    #[arg(long)]
    d_a: Option<usize>,
    /// Number of seen classes
    #[arg(long)]
    seen: Option<usize>,
    /// Number of unseen classes
    #[arg(long)]
    unseen: Option<usize>,
    /// Instances per class in each split
    #[arg(long)]
    per_class: Option<usize>,
    /// Instance noise standard deviation
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DataFlags {
    /// Consume feature rows as-is, overriding the manifest's
    /// normalize_features flag
    #[arg(long)]
    raw_features: bool,
    /// Row-normalize descriptors on load, overriding the manifest
    #[arg(long)]
    normalize_descriptors: bool,
}

impl DataFlags {
    fn options(&self) -> LoadOptions {
        LoadOptions {
            normalize_features: self.raw_features.then_some(false),
            normalize_descriptors: self.normalize_descriptors.then_some(true),
        }
    }
}

#[derive(Args)]
struct HyperArgs {
    /// Frobenius regularizer weight
    #[arg(long)]
    lambda: Option<f64>,
    /// Hypersphere penalty weight (0 disables the constraint)
    #[arg(long)]
    beta: Option<f64>,
    /// Hypersphere radius
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// sgd, sgd_momentum, or adam
    #[arg(long)]
    optimizer: Option<Optimizer>,
}

impl HyperArgs {
    fn resolve(self, cfg: &ConfigMap) -> Result<Hyperparams> {
        let d = Hyperparams::default();
        let h = Hyperparams {
            lambda: cfg.pick(self.lambda, "lambda", d.lambda)?,
            beta: cfg.pick(self.beta, "beta", d.beta)?,
            alpha: cfg.pick(self.alpha, "alpha", d.alpha)?,
            lr: cfg.pick(self.lr, "lr", d.lr)?,
            epochs: cfg.pick(self.epochs, "epochs", d.epochs)?,
            batch_size: cfg.pick(self.batch_size, "batch_size", d.batch_size)?,
            seed: cfg.pick(self.seed, "seed", d.seed)?,
            optimizer: cfg.pick(self.optimizer, "optimizer", d.optimizer)?,
        };
        h.validate()?;
        Ok(h)
    }
}

#[derive(Args)]
struct TrainArgs {
    /// Dataset manifest path
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    data_flags: DataFlags,
    /// Output directory (or $SEMZSL_OUT_DIR)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional key=value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    hyper: HyperArgs,
}

#[derive(Args)]
struct EvalArgs {
    /// Dataset manifest path
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    data_flags: DataFlags,
    /// Model checkpoint manifest path
    #[arg(long)]
    model: PathBuf,
    /// Output directory (or $SEMZSL_OUT_DIR)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Similarity used at inference
    #[arg(long, value_enum, default_value_t = ScoreArg::Cosine)]
    score: ScoreArg,
}

#[derive(Args)]
struct RetrieveArgs {
    /// Dataset manifest path
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    data_flags: DataFlags,
    /// Model checkpoint manifest path
    #[arg(long)]
    model: PathBuf,
    /// Output directory (or $SEMZSL_OUT_DIR)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also emit an SVG plot per class
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct GradcheckCliArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Central-difference step, in (0, 1e-3]
    #[arg(long, default_value_t = 1e-6)]
    step: f64,
    /// Max relative error allowed before exiting nonzero
    #[arg(long, default_value_t = 1e-5)]
    threshold: f64,
    #[arg(long, default_value_t = 1e-3)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 16)]
    d_f: usize,
    #[arg(long, default_value_t = 8)]
    d_a: usize,
    #[arg(long, default_value_t = 10)]
    classes: usize,
    /// Batch rows to check
    #[arg(long, default_value_t = 16)]
    batch: usize,
}

#[derive(Args)]
struct BaselineArgs {
    /// Dataset manifest path
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    data_flags: DataFlags,
    /// Which baseline to fit
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Output directory (or $SEMZSL_OUT_DIR)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional key=value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Feature-side ridge weight
    #[arg(long)]
    gamma: Option<f64>,
    /// Descriptor-side ridge weight (eszsl only)
    #[arg(long)]
    lam: Option<f64>,
    /// Grid the ridge weights over powers of ten and keep the best
    #[arg(long)]
    sweep: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoreArg {
    Cosine,
    Dot,
}

impl From<ScoreArg> for ScoreKind {
    fn from(s: ScoreArg) -> ScoreKind {
        match s {
            ScoreArg::Cosine => ScoreKind::Cosine,
            ScoreArg::Dot => ScoreKind::InnerProduct,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Lr,
    Rlr,
    Eszsl,
}

impl From<KindArg> for BaselineKind {
    fn from(k: KindArg) -> BaselineKind {
        match k {
            KindArg::Lr => BaselineKind::Lr,
            KindArg::Rlr => BaselineKind::Rlr,
            KindArg::Eszsl => BaselineKind::Eszsl,
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Gen(args) => {
            let cfg = ConfigMap::load(args.config.as_deref())?;
            let d = SyntheticSpec::default();
            let spec = SyntheticSpec {
                d_f: cfg.pick(args.d_f, "d_f", d.d_f)?,
                d_a: cfg.pick(args.d_a, "d_a", d.d_a)?,
                seen_classes: cfg.pick(args.seen, "seen", d.seen_classes)?,
                unseen_classes: cfg.pick(args.unseen, "unseen", d.unseen_classes)?,
                per_class: cfg.pick(args.per_class, "per_class", d.per_class)?,
                noise_sigma: cfg.pick(args.noise, "noise", d.noise_sigma)?,
                seed: cfg.pick(args.seed, "seed", d.seed)?,
            };
            let out = resolve_out_dir(args.out)?;
            cli::gen::run(&spec, &out)?;
            Ok(0)
        }
        Command::Train(args) => {
            let cfg = ConfigMap::load(args.config.as_deref())?;
            let h = args.hyper.resolve(&cfg)?;
            let out = resolve_out_dir(args.out)?;
            cli::train::run(&args.data, args.data_flags.options(), &h, &out)?;
            Ok(0)
        }
        Command::Eval(args) => {
            let out = resolve_out_dir(args.out)?;
            cli::eval::run(
                &args.data,
                args.data_flags.options(),
                &args.model,
                args.score.into(),
                &out,
            )?;
            Ok(0)
        }
        Command::Retrieve(args) => {
            let out = resolve_out_dir(args.out)?;
            cli::retrieve::run(
                &args.data,
                args.data_flags.options(),
                &args.model,
                args.svg,
                &out,
            )?;
            Ok(0)
        }
        Command::Gradcheck(args) => cli::gradcheck::run(&GradcheckArgs {
            seed: args.seed,
            step: args.step,
            threshold: args.threshold,
            lambda: args.lambda,
            beta: args.beta,
            alpha: args.alpha,
            d_f: args.d_f,
            d_a: args.d_a,
            classes: args.classes,
            batch: args.batch,
        }),
        Command::Baseline(args) => {
            let cfg = ConfigMap::load(args.config.as_deref())?;
            let gamma = cfg.pick(args.gamma, "gamma", 1.0)?;
            let lam = cfg.pick(args.lam, "lam", 1.0)?;
            let out = resolve_out_dir(args.out)?;
            cli::baseline::run(
                &args.data,
                args.data_flags.options(),
                args.kind.into(),
                gamma,
                lam,
                args.sweep,
                &out,
            )?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(cli::exit_code_for(&err) as u8)
        }
    }
}
