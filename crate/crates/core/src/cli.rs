//! Command-line front end. `run` parses nothing itself; `main` hands it a
//! parsed [`Cli`] and turns the result into an exit code.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{bench_csv, run_bench, BenchConfig};
use crate::classify::{cross_validate, train, CvReport, ForestConfig};
use crate::error::{Error, Result};
use crate::filtration::DescriptorKind;
use crate::graph::{load_dataset, save_dataset};
use crate::pipeline::{descriptor_for, transform_dataset, write_json, ModelBundle, Transformed};
use crate::synth::{generate_synthetic, si_dataset, SiTask, SynthConfig, TaskParams, WeightSampling};
use crate::weights::{WeightConfig, WeightKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CLASS_TOO_SMALL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "filtsurf",
    version,
    about = "Filtration surfaces for dynamic graph classification"
)]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic or SI-labelled dataset.
    Generate(GenerateArgs),
    /// Turn a dataset into filtration surfaces over a shared index.
    Transform(TransformArgs),
    /// Cross-validate a random forest on transformed surfaces.
    Evaluate(EvaluateArgs),
    /// Scaling benchmark over several dataset sizes.
    Bench(BenchArgs),
    /// Classify a dataset with a saved model bundle.
    Predict(PredictArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Task {
    Synthetic,
    Si1,
    Si2,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 10)]
    pub seed_nodes: usize,
    #[arg(long, default_value_t = 2)]
    pub ba_m: usize,
    #[arg(long, default_value_t = 10)]
    pub timesteps: usize,
    #[arg(long, default_value_t = 5)]
    pub nodes_per_step: usize,
    /// Draw real-valued instead of integer weights.
    #[arg(long)]
    pub continuous_weights: bool,
}

impl SynthArgs {
    fn config(&self, n: usize, seed: u64) -> SynthConfig {
        SynthConfig {
            n_graphs: n,
            seed_nodes: self.seed_nodes,
            ba_m: self.ba_m,
            timesteps: self.timesteps,
            nodes_per_step: self.nodes_per_step,
            weight_sampling: if self.continuous_weights {
                WeightSampling::Continuous
            } else {
                WeightSampling::Integer
            },
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = Task::Synthetic)]
    pub task: Task,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Node cap of the BFS subgraphs used by the SI tasks.
    #[arg(long, default_value_t = 50)]
    pub size_cap: usize,
    #[command(flatten)]
    pub synth: SynthArgs,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    #[arg(long, value_enum, default_value_t = WeightKind::Native)]
    pub weight: WeightKind,
    #[arg(long, default_value_t = 0.5)]
    pub ricci_alpha: f64,
    #[arg(long, default_value_t = 10.0)]
    pub hks_t: f64,
    #[arg(long, value_enum, default_value_t = DescriptorKind::LabelHistogram)]
    pub descriptor: DescriptorKind,
}

impl WeightArgs {
    fn config(&self) -> WeightConfig {
        WeightConfig {
            kind: self.weight,
            ricci_alpha: self.ricci_alpha,
            hks_t: self.hks_t,
        }
    }
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Dataset directory.
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub weights: WeightArgs,
    /// Add every snapshot node at the first threshold.
    #[arg(long)]
    pub include_isolated: bool,
    /// Replace every edge weight by this value before weighing.
    #[arg(long)]
    pub constant_weight: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ForestArgs {
    #[arg(long, default_value_t = 1000)]
    pub trees: usize,
    #[arg(long)]
    pub max_depth: Option<usize>,
}

impl ForestArgs {
    fn config(&self, seed: u64) -> ForestConfig {
        ForestConfig {
            max_depth: self.max_depth,
            ..ForestConfig::with_trees(self.trees, seed)
        }
    }
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Directory written by `transform`.
    #[arg(long)]
    pub surfaces: PathBuf,
    #[command(flatten)]
    pub forest: ForestArgs,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    /// Also train on all samples and save a model bundle here.
    #[arg(long)]
    pub save_model: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "100,1000")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub trees: usize,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[command(flatten)]
    pub synth: SynthArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Bundle written by `evaluate --save-model`.
    #[arg(long)]
    pub model: PathBuf,
    /// Dataset directory.
    #[arg(long)]
    pub data: PathBuf,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) => EXIT_CONFIG,
        Error::ClassTooSmall { .. } => EXIT_CLASS_TOO_SMALL,
        _ => EXIT_FAILURE,
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let out = cli.out.as_path();
    match &cli.command {
        Command::Generate(args) => generate(args, cli.seed, out),
        Command::Transform(args) => transform(args, out),
        Command::Evaluate(args) => evaluate(args, cli.seed, out),
        Command::Bench(args) => bench(args, cli.seed, out),
        Command::Predict(args) => predict(args, out),
    }
}

fn generate(args: &GenerateArgs, seed: u64, out: &Path) -> Result<()> {
    let params = TaskParams::default();
    let ds = match args.task {
        Task::Synthetic => generate_synthetic(&args.synth.config(args.n, seed))?,
        Task::Si1 => si_dataset(args.n, args.size_cap, SiTask::Dissemination, &params, seed)?,
        Task::Si2 => si_dataset(args.n, args.size_cap, SiTask::InfectionRate, &params, seed)?,
    };
    save_dataset(&ds, out)?;
    println!("wrote {} graphs to {}", ds.len(), out.display());
    Ok(())
}

fn transform(args: &TransformArgs, out: &Path) -> Result<()> {
    let mut ds = load_dataset(&args.data)?;
    if let Some(w) = args.constant_weight {
        ds = ds.with_constant_weight(w)?;
    }
    let desc = descriptor_for(&ds, args.weights.descriptor, args.include_isolated)?;
    let t = transform_dataset(&ds, &args.weights.config(), &desc)?;
    t.save(out)?;
    let m = t.manifest();
    println!("n_std={} m={} d={} n_features={}", m.n_std, m.m, m.d, m.n_features);
    Ok(())
}

#[derive(Serialize)]
struct EvaluateOutput<'a> {
    n_features: usize,
    n_trees: usize,
    seed: u64,
    #[serde(flatten)]
    report: &'a CvReport,
}

fn evaluate(args: &EvaluateArgs, seed: u64, out: &Path) -> Result<()> {
    let t = Transformed::load(&args.surfaces)?;
    let features = t.feature_matrix()?;
    let cfg = args.forest.config(seed);
    cfg.validate()?;
    let report = cross_validate(&features, &cfg, args.folds, args.reps)?;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    write_json(
        &out.join("cv_report.json"),
        &EvaluateOutput {
            n_features: features.n_features(),
            n_trees: cfg.n_trees,
            seed,
            report: &report,
        },
    )?;
    if let Some(path) = &args.save_model {
        let forest = train(&features, &cfg)?;
        let bytes = ModelBundle::new(&t, forest).to_bytes()?;
        fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    }
    println!("{}", report.summary());
    Ok(())
}

fn bench(args: &BenchArgs, seed: u64, out: &Path) -> Result<()> {
    let cfg = BenchConfig {
        sizes: args.sizes.clone(),
        synth: args.synth.config(0, seed),
        weights: args.weights.config(),
        descriptor: args.weights.descriptor,
        forest: ForestConfig::with_trees(args.trees, seed),
    };
    cfg.forest.validate()?;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let records = run_bench(&cfg, out)?;
    let csv = bench_csv(&records);
    let path = out.join("bench.csv");
    fs::write(&path, &csv).map_err(|e| Error::io(&path, e))?;
    print!("{csv}");
    Ok(())
}

fn predict(args: &PredictArgs, out: &Path) -> Result<()> {
    let bytes = fs::read(&args.model).map_err(|e| Error::io(&args.model, e))?;
    let bundle = ModelBundle::from_bytes(&bytes)?;
    let ds = load_dataset(&args.data)?;
    let predicted = bundle.predict(&ds)?;
    let mut csv = String::from("graph_id,class,predicted\n");
    let mut correct = 0;
    for (g, p) in ds.graphs().iter().zip(&predicted) {
        correct += usize::from(g.class() == *p);
        csv.push_str(&format!("{},{},{}\n", g.id(), g.class(), p));
    }
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let path = out.join("predictions.csv");
    fs::write(&path, csv).map_err(|e| Error::io(&path, e))?;
    println!("{correct}/{} predictions match the stored class", ds.len());
    Ok(())
}
