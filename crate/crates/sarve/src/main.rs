//! Command-line entry point binding the library into reproducible
//! workflows: dataset generation, recommendation, evaluation, threshold
//! sweeps, and dataset summaries.
//!
//! Exit codes: 0 success, 1 data/validation failure, 2 usage failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sarve::domain::{DegreePolicy, Thresholds};
use sarve::eval::{self, Axis, EvalSetup, Metrics, SplitSpec, TruthMode};
use sarve::generator::{self, GeneratorSpec};
use sarve::recommend::{resolve_conflicts, run_sarve, Stream};
use sarve::{format, Error};

const EXIT_DATA: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "sarve", version, about = "Socially-aware conference session recommender")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic conference dataset in the canonical format.
    GenDataset(GenDatasetArgs),
    /// Produce per-participant session recommendations and a conflict-free schedule.
    Recommend(RecommendArgs),
    /// Split, recommend on the training partition, and score both streams and baselines.
    Evaluate(EvaluateArgs),
    /// Evaluate along a threshold grid on one axis.
    Sweep(SweepArgs),
    /// Tabulate the duration/rating/frequency histograms of a dataset.
    Summarize(SummarizeArgs),
}

#[derive(Args)]
struct ThresholdArgs {
    /// Similarity threshold for the social-context stream, in [-1, 1].
    #[arg(long, default_value_t = 0.6)]
    gamma: f64,

    /// Tie-strength threshold for the social-relations stream, >= 0.
    #[arg(long, default_value_t = 0.5)]
    beta: f64,

    /// Popularity gate: `median`, `off`, or a fixed integer degree.
    #[arg(long, default_value = "median")]
    deg_cent_threshold: String,

    /// Only a participant's k most similar presenters feed the context
    /// stream. Omit to consider every presenter.
    #[arg(long)]
    k_neighbors: Option<usize>,

    /// Per-participant, per-stream list length.
    #[arg(long, default_value_t = 10)]
    top_n: usize,
}

impl ThresholdArgs {
    fn to_thresholds(&self) -> Result<Thresholds, Error> {
        let degree_policy: DegreePolicy = self
            .deg_cent_threshold
            .parse()
            .map_err(Error::InvalidConfig)?;
        let thresholds = Thresholds {
            gamma: self.gamma,
            beta: self.beta,
            degree_policy,
            k_neighbors: self.k_neighbors,
            top_n: self.top_n,
        };
        thresholds.validate()?;
        Ok(thresholds)
    }

    fn header_lines(&self, out: &mut String) {
        let _ = writeln!(out, "# gamma: {:.6}", self.gamma);
        let _ = writeln!(out, "# beta: {:.6}", self.beta);
        let _ = writeln!(out, "# deg-cent-threshold: {}", self.deg_cent_threshold);
        match self.k_neighbors {
            Some(k) => {
                let _ = writeln!(out, "# k-neighbors: {k}");
            }
            None => {
                let _ = writeln!(out, "# k-neighbors: all");
            }
        }
        let _ = writeln!(out, "# top-n: {}", self.top_n);
    }
}

#[derive(Args)]
struct EvalArgs {
    /// Seed for the train/test split.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Fraction of records kept for training.
    #[arg(long, default_value_t = 0.8)]
    train_fraction: f64,

    /// Ground-truth source: `labels` (dataset relevance labels) or `paper`
    /// (threshold-derived, circular; for comparison only).
    #[arg(long, default_value = "labels")]
    truth: String,
}

impl EvalArgs {
    fn to_setup(&self) -> Result<EvalSetup, Error> {
        let truth = match self.truth.as_str() {
            "labels" => TruthMode::Labels,
            "paper" => TruthMode::Paper,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "truth mode must be `labels` or `paper`, got `{other}`"
                )))
            }
        };
        let split = SplitSpec {
            train_fraction: self.train_fraction,
            seed: self.seed,
        };
        split.validate()?;
        Ok(EvalSetup { split, truth })
    }

    fn header_lines(&self, out: &mut String) {
        let _ = writeln!(out, "# seed: {}", self.seed);
        let _ = writeln!(out, "# train-fraction: {:.6}", self.train_fraction);
        let _ = writeln!(out, "# truth: {}", self.truth);
    }
}

#[derive(Args)]
struct OutDirArg {
    /// Directory artifacts are written into.
    #[arg(long, env = "SARVE_OUT_DIR", default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct GenDatasetArgs {
    /// Output path for the dataset file; a `.provenance` sidecar is written
    /// next to it.
    #[arg(long, default_value = "dataset.sarve")]
    out: PathBuf,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = 60)]
    presenters: usize,

    #[arg(long, default_value_t = 78)]
    participants: usize,

    #[arg(long, default_value_t = 5)]
    contacts_per_presenter: usize,

    /// Number of keyword items in the rating vocabulary.
    #[arg(long, default_value_t = 40)]
    items: usize,

    /// Number of latent interest clusters.
    #[arg(long, default_value_t = 4)]
    clusters: usize,

    /// Conference time frame in minutes.
    #[arg(long, default_value_t = 720)]
    t_total: u32,

    /// Comma-separated room names.
    #[arg(long, default_value = "RoomA,RoomB")]
    rooms: String,
}

#[derive(Args)]
struct RecommendArgs {
    #[arg(long)]
    dataset: PathBuf,

    #[command(flatten)]
    out: OutDirArg,

    #[command(flatten)]
    thresholds: ThresholdArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    dataset: PathBuf,

    #[command(flatten)]
    out: OutDirArg,

    #[command(flatten)]
    thresholds: ThresholdArgs,

    #[command(flatten)]
    eval: EvalArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    dataset: PathBuf,

    #[command(flatten)]
    out: OutDirArg,

    /// Threshold axis to walk: `gamma` or `beta`.
    #[arg(long)]
    axis: String,

    /// Grid as `start:end:step` (inclusive endpoints) or comma-separated
    /// values, ascending.
    #[arg(long)]
    grid: String,

    /// Also write per-metric plot data files (one per figure analog).
    #[arg(long)]
    emit_plot_data: bool,

    /// Worker threads for gridpoint fan-out. Outputs are identical for any
    /// worker count.
    #[arg(long)]
    workers: Option<usize>,

    #[command(flatten)]
    thresholds: ThresholdArgs,

    #[command(flatten)]
    eval: EvalArgs,
}

#[derive(Args)]
struct SummarizeArgs {
    #[arg(long)]
    dataset: PathBuf,

    #[command(flatten)]
    out: OutDirArg,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenDataset(args) => gen_dataset(args),
        Command::Recommend(args) => recommend(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Sweep(args) => sweep(args),
        Command::Summarize(args) => summarize(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("sarve: {err}");
            ExitCode::from(match err {
                AppError::Usage(_) => EXIT_USAGE,
                AppError::Data(_) => EXIT_DATA,
            })
        }
    }
}

enum AppError {
    Usage(String),
    Data(String),
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Usage(msg) | AppError::Data(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for AppError {
    fn from(err: Error) -> Self {
        match err {
            Error::InvalidConfig(_) => AppError::Usage(err.to_string()),
            other => AppError::Data(other.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(err: std::io::Error) -> Self {
        AppError::Data(err.to_string())
    }
}

fn header(subcommand: &str, dataset: Option<&Path>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# sarve {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# command: {subcommand}");
    if let Some(path) = dataset {
        let _ = writeln!(out, "# dataset: {}", path.display());
    }
    out
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, AppError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    println!("wrote {}", path.display());
    Ok(path)
}

fn load_dataset(path: &Path) -> Result<sarve::Dataset, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Data(format!("cannot read {}: {e}", path.display())))?;
    Ok(format::parse_dataset(&text)?)
}

fn gen_dataset(args: GenDatasetArgs) -> Result<(), AppError> {
    let spec = GeneratorSpec {
        n_presenters: args.presenters,
        n_participants: args.participants,
        contacts_per_presenter: args.contacts_per_presenter,
        n_items: args.items,
        n_interest_clusters: args.clusters,
        t_total: args.t_total,
        rooms: args.rooms.split(',').map(str::to_owned).collect(),
        seed: args.seed,
        ..GeneratorSpec::default()
    };
    let ds = generator::generate(&spec)?;

    // The dataset file itself stays pure canonical form (comments would not
    // survive a round-trip); provenance rides in the sidecar.
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(&args.out, format::serialize_dataset(&ds))?;
    println!("wrote {}", args.out.display());

    let mut sidecar = header("gen-dataset", None);
    let _ = writeln!(sidecar, "# out: {}", args.out.display());
    let _ = writeln!(sidecar, "seed {}", spec.seed);
    let _ = writeln!(sidecar, "presenters {}", spec.n_presenters);
    let _ = writeln!(sidecar, "participants {}", spec.n_participants);
    let _ = writeln!(sidecar, "contacts_per_presenter {}", spec.contacts_per_presenter);
    let _ = writeln!(sidecar, "items {}", spec.n_items);
    let _ = writeln!(sidecar, "clusters {}", spec.n_interest_clusters);
    let _ = writeln!(sidecar, "t_total {}", spec.t_total);
    let _ = writeln!(sidecar, "rooms {}", spec.rooms.join(","));
    let _ = writeln!(sidecar, "duration_range {} {}", spec.duration_range.0, spec.duration_range.1);
    let _ = writeln!(sidecar, "frequency_range {} {}", spec.frequency_range.0, spec.frequency_range.1);
    let _ = writeln!(sidecar, "rating_range {} {}", spec.rating_range.0, spec.rating_range.1);
    let mut sidecar_path = args.out.clone().into_os_string();
    sidecar_path.push(".provenance");
    fs::write(PathBuf::from(&sidecar_path), sidecar)?;
    println!("wrote {}", PathBuf::from(sidecar_path).display());
    Ok(())
}

fn recommend(args: RecommendArgs) -> Result<(), AppError> {
    let thresholds = args.thresholds.to_thresholds()?;
    let ds = load_dataset(&args.dataset)?;
    let recs = run_sarve(&ds, &thresholds)?;

    let mut head = header("recommend", Some(&args.dataset));
    args.thresholds.header_lines(&mut head);
    if let Some(resolved) = recs.resolved_degree_threshold {
        let _ = writeln!(head, "# resolved-degree-threshold: {resolved}");
    }
    let _ = writeln!(head, "# records: {}", recs.len());
    let _ = writeln!(
        head,
        "# weak (below-threshold, not emitted): context {} relations {}",
        recs.weak_context, recs.weak_relations
    );
    let _ = writeln!(head, "# fields: participant session stream score rank gate");

    let body = format!("{head}{}", recs.canonical_text());
    write_artifact(&args.out.out_dir, "recommendations.txt", &body)?;

    let proposal = resolve_conflicts(&recs, &ds.sessions);
    let mut head = header("recommend", Some(&args.dataset));
    args.thresholds.header_lines(&mut head);
    let _ = writeln!(head, "# fields: participant keep|drop session combined_score [conflicts-with session]");
    let body = format!("{head}{}", proposal.canonical_text());
    write_artifact(&args.out.out_dir, "schedule.txt", &body)?;
    Ok(())
}

fn metrics_row(label: &str, counts: &eval::ConfusionCounts, metrics: &Metrics) -> String {
    let fmt = |v: Option<f64>| match v {
        Some(v) => format!("{v:.6}"),
        None => "undefined".to_string(),
    };
    format!(
        "{label}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
        counts.e,
        counts.f,
        counts.g,
        counts.h,
        fmt(metrics.precision),
        fmt(metrics.recall),
        fmt(metrics.f_measure)
    )
}

fn evaluate(args: EvaluateArgs) -> Result<(), AppError> {
    let thresholds = args.thresholds.to_thresholds()?;
    let setup = args.eval.to_setup()?;
    let ds = load_dataset(&args.dataset)?;

    let relevant = eval::ground_truth(&ds, setup.truth, &thresholds)?;
    let universe = eval::decision_universe(&ds);
    let (train, _test) = eval::split(&ds, &setup.split)?;
    let recs = run_sarve(&train, &thresholds)?;
    let baselines = eval::run_baselines(&train, &thresholds)?;

    let mut out = header("evaluate", Some(&args.dataset));
    args.thresholds.header_lines(&mut out);
    args.eval.header_lines(&mut out);
    let _ = writeln!(
        out,
        "# universe: all participant x session pairs = {} x {} = {universe}",
        ds.participants().count(),
        ds.sessions.len()
    );
    if setup.truth == TruthMode::Paper {
        let _ = writeln!(
            out,
            "# note: `paper` truth derives relevance from the same thresholds it scores; circular by construction"
        );
    }
    let _ = writeln!(out, "# relevant: {}", relevant.len());
    let _ = writeln!(
        out,
        "# weak (train, below-threshold, not emitted): context {} relations {}",
        recs.weak_context, recs.weak_relations
    );
    out.push_str("system\te\tf\tg\th\tprecision\trecall\tf_measure\n");

    for (label, pairs) in [
        ("context", recs.pairs(Stream::Context)),
        ("relations", recs.pairs(Stream::Relations)),
        ("baseline:pearson-only", baselines.pearson_only.pairs(Stream::Context)),
        ("baseline:popularity-only", baselines.popularity_only.pairs(Stream::Relations)),
    ] {
        let counts = eval::score(&pairs, &relevant, universe);
        out.push_str(&metrics_row(label, &counts, &eval::metrics(&counts)));
    }
    write_artifact(&args.out.out_dir, "eval_report.txt", &out)?;
    Ok(())
}

fn parse_axis(s: &str) -> Result<Axis, AppError> {
    match s {
        "gamma" => Ok(Axis::Gamma),
        "beta" => Ok(Axis::Beta),
        other => Err(AppError::Usage(format!(
            "axis must be `gamma` or `beta`, got `{other}`"
        ))),
    }
}

/// Parse `start:end:step` (inclusive endpoints) or a comma-separated list.
/// Gridpoints are snapped to 1e-9 so stepped grids land exactly on their
/// printed values.
fn parse_grid(s: &str) -> Result<Vec<f64>, AppError> {
    let snap = |x: f64| (x * 1e9).round() / 1e9;
    let bad = |msg: String| AppError::Usage(msg);
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(format!("grid `{s}` must be start:end:step")));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad(format!("grid `{s}` has non-numeric fields")))?;
        let (start, end, step) = (nums[0], nums[1], nums[2]);
        if step <= 0.0 || end < start {
            return Err(bad(format!("grid `{s}` needs end >= start and step > 0")));
        }
        let mut grid = Vec::new();
        let mut i = 0u32;
        loop {
            let x = snap(start + f64::from(i) * step);
            if x > end + 1e-9 {
                break;
            }
            grid.push(x);
            i += 1;
        }
        Ok(grid)
    } else {
        let grid: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map(snap))
            .collect::<Result<_, _>>()
            .map_err(|_| bad(format!("grid `{s}` has non-numeric fields")))?;
        Ok(grid)
    }
}

fn sweep(args: SweepArgs) -> Result<(), AppError> {
    if let Some(workers) = args.workers {
        if workers == 0 {
            return Err(AppError::Usage("workers must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| AppError::Usage(format!("cannot configure {workers} workers: {e}")))?;
    }
    let axis = parse_axis(&args.axis)?;
    let grid = parse_grid(&args.grid)?;
    let thresholds = args.thresholds.to_thresholds()?;
    let setup = args.eval.to_setup()?;
    let ds = load_dataset(&args.dataset)?;

    let points = eval::sweep(&ds, axis, &grid, &thresholds, &setup).map_err(|e| match e {
        Error::InvalidConfig(msg) => AppError::Usage(msg),
        other => AppError::Data(other.to_string()),
    })?;

    let mut out = header("sweep", Some(&args.dataset));
    args.thresholds.header_lines(&mut out);
    args.eval.header_lines(&mut out);
    let _ = writeln!(out, "# axis: {}", axis.as_str());
    let _ = writeln!(out, "# grid: {}", args.grid);
    let _ = writeln!(
        out,
        "# universe: all participant x session pairs = {} x {} = {}",
        ds.participants().count(),
        ds.sessions.len(),
        eval::decision_universe(&ds)
    );
    out.push_str(&eval::sweep_table(&points));
    write_artifact(&args.out.out_dir, &format!("sweep_{}.txt", axis.as_str()), &out)?;

    if args.emit_plot_data {
        let baselines = eval::sweep_baselines(&ds, axis, &grid, &thresholds, &setup)?;
        let stream_name = axis.stream().as_str();
        let fmt = |v: Option<f64>| match v {
            Some(v) => format!("{v:.6}"),
            None => "undefined".to_string(),
        };
        let selectors: [(&str, fn(&Metrics) -> Option<f64>); 3] = [
            ("precision", |m| m.precision),
            ("recall", |m| m.recall),
            ("fmeasure", |m| m.f_measure),
        ];
        for (metric_name, select) in selectors {
            let mut plot = header("sweep", Some(&args.dataset));
            let _ = writeln!(plot, "# axis: {}", axis.as_str());
            let _ = writeln!(plot, "# metric: {metric_name} ({stream_name} stream)");
            plot.push_str("threshold\tsarve\tpearson_only\tpopularity_only\n");
            for (point, (threshold, pearson_m, popularity_m)) in points.iter().zip(&baselines) {
                debug_assert_eq!(point.threshold, *threshold);
                let _ = writeln!(
                    plot,
                    "{:.6}\t{}\t{}\t{}",
                    point.threshold,
                    fmt(select(&point.metrics)),
                    fmt(select(pearson_m)),
                    fmt(select(popularity_m))
                );
            }
            write_artifact(
                &args.out.out_dir,
                &format!("{metric_name}_{stream_name}.tsv"),
                &plot,
            )?;
        }
    }
    Ok(())
}

fn summarize(args: SummarizeArgs) -> Result<(), AppError> {
    let ds = load_dataset(&args.dataset)?;
    let summary = generator::summarize(&ds);
    let mut out = header("summarize", Some(&args.dataset));
    let _ = writeln!(out, "# contacts: {}", ds.contacts.len());
    let _ = writeln!(out, "# ratings: {}", ds.ratings.len());
    out.push_str(&summary.canonical_text());
    write_artifact(&args.out.out_dir, "dataset_summary.txt", &out)?;
    Ok(())
}
