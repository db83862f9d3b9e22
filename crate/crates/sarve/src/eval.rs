//! Offline evaluation: seeded train/test splits, confusion-matrix scoring
//! over the participant x session decision universe, precision / recall /
//! f-measure, threshold sweeps, and the two ablation baselines.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::context::match_context;
use crate::domain::{Dataset, PersonId, SessionId, Thresholds};
use crate::recommend::{run_variant, RecommendationSet, Stream, Variant};
use crate::similarity::{passes_gamma, pearson_lenient};
use crate::social::{passes_beta, tie_strength};
use crate::Error;

/// Confusion counts over recommendation decisions: `e` true positives,
/// `f` false positives, `g` false negatives, `h` true negatives.
/// `e + f + g + h` always equals the decision-universe size.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub e: u64,
    pub f: u64,
    pub g: u64,
    pub h: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.e + self.f + self.g + self.h
    }
}

/// Precision, recall, and f-measure. A metric whose denominator is zero is
/// `None`, never 0.0 — an undefined point must stay a gap, not a fake zero.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Metrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f_measure: Option<f64>,
}

/// Metrics at one threshold gridpoint, with the raw counts kept alongside.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricPoint {
    pub threshold: f64,
    pub counts: ConfusionCounts,
    pub metrics: Metrics,
}

/// Parameters of the train/test split. Splitting is stratified per person
/// over their rating records (and per presenter over contact records), so
/// everyone stays present in the training phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: 0.8,
            seed: 0,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if !self.train_fraction.is_finite() || !(0.0..=1.0).contains(&self.train_fraction) || self.train_fraction == 0.0 {
            return Err(Error::InvalidConfig(format!(
                "train_fraction must lie in (0, 1], got {}",
                self.train_fraction
            )));
        }
        Ok(())
    }
}

/// Where the relevance ground truth comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruthMode {
    /// Explicit per-participant labels carried by the dataset.
    Labels,
    /// Derive "good venues" from the full dataset with the evaluation
    /// thresholds themselves: similarity >= gamma AND tie >= beta AND
    /// availability match. Circular by construction (the truth shares the
    /// recommender's formulas), so reports must say which mode produced
    /// them; offered for comparability, not as an honest oracle.
    Paper,
}

impl TruthMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TruthMode::Labels => "labels",
            TruthMode::Paper => "paper",
        }
    }
}

/// Threshold axis a sweep walks along.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Gamma,
    Beta,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Gamma => "gamma",
            Axis::Beta => "beta",
        }
    }

    /// The recommendation stream this axis gates.
    pub fn stream(self) -> Stream {
        match self {
            Axis::Gamma => Stream::Context,
            Axis::Beta => Stream::Relations,
        }
    }
}

fn round_records(n: usize, fraction: f64) -> usize {
    ((n as f64) * fraction).round() as usize
}

/// Split a dataset into train and test partitions, deterministically under
/// the seed.
///
/// Rating records are stratified per person: everyone keeps at least one
/// training rating (a person with a single rating keeps it in train), so the
/// training partition stays usable by the engine. Contact records are
/// stratified per presenter the same way. Relevance labels are evaluation
/// data, not training evidence: they all travel to the test partition.
pub fn split(ds: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset), Error> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut train = ds.clone();
    let mut test = ds.clone();
    train.ratings = crate::domain::RatingMatrix::new();
    test.ratings = crate::domain::RatingMatrix::new();
    train.contacts = crate::domain::ContactLog::new(ds.t_total);
    test.contacts = crate::domain::ContactLog::new(ds.t_total);
    train.labels = BTreeSet::new();
    test.labels = ds.labels.clone();

    // Ratings, grouped per person in id order for determinism.
    for person in ds.persons.keys() {
        let Some(row) = ds.ratings.ratings_of(person) else {
            return Err(Error::TooSmallToStratify(person.to_string()));
        };
        let mut items: Vec<_> = row.keys().cloned().collect();
        items.shuffle(&mut rng);
        let keep = round_records(items.len(), spec.train_fraction).clamp(1, items.len());
        for (idx, item) in items.into_iter().enumerate() {
            let rating = row[&item];
            if idx < keep {
                train.ratings.insert(person.clone(), item, rating);
            } else {
                test.ratings.insert(person.clone(), item, rating);
            }
        }
    }

    // Contacts, grouped per presenter.
    let presenters: Vec<PersonId> = ds.presenters().cloned().collect();
    for presenter in presenters {
        let mut pairs: Vec<(PersonId, PersonId)> = ds
            .contacts
            .iter()
            .filter(|((p, _), _)| *p == presenter)
            .map(|(key, _)| key.clone())
            .collect();
        if pairs.is_empty() {
            continue;
        }
        pairs.shuffle(&mut rng);
        let keep = round_records(pairs.len(), spec.train_fraction).clamp(1, pairs.len());
        for (idx, (p, x)) in pairs.into_iter().enumerate() {
            let contact = *ds.contacts.get(&p, &x).expect("key came from the log");
            if idx < keep {
                train.contacts.insert(p, x, contact);
            } else {
                test.contacts.insert(p, x, contact);
            }
        }
    }

    Ok((train, test))
}

/// Number of (participant, session) decision pairs the scorer judges over.
pub fn decision_universe(ds: &Dataset) -> u64 {
    ds.participants().count() as u64 * ds.sessions.len() as u64
}

/// The relevance ground truth for an evaluation run, as (participant,
/// session) pairs drawn from the *full* dataset.
pub fn ground_truth(
    ds: &Dataset,
    mode: TruthMode,
    thresholds: &Thresholds,
) -> Result<BTreeSet<(PersonId, SessionId)>, Error> {
    match mode {
        TruthMode::Labels => {
            if ds.labels.is_empty() {
                return Err(Error::MissingLabels);
            }
            Ok(ds.labels.clone())
        }
        TruthMode::Paper => {
            let mut relevant = BTreeSet::new();
            for participant in ds.participants() {
                let windows = ds.windows_of(participant);
                for presenter in ds.presenters() {
                    let similarity = pearson_lenient(&ds.ratings, presenter, participant);
                    if !passes_gamma(&similarity, thresholds.gamma) {
                        continue;
                    }
                    let tie = tie_strength(&ds.contacts, presenter, participant)?;
                    if !passes_beta(&tie, thresholds.beta) {
                        continue;
                    }
                    for session in ds.sessions_of(presenter) {
                        if match_context(participant, windows, session).matched {
                            relevant.insert((participant.clone(), session.id.clone()));
                        }
                    }
                }
            }
            Ok(relevant)
        }
    }
}

/// Confusion counts of a recommended pair set against the relevant set over
/// a decision universe of `universe` pairs.
pub fn score(
    recommended: &BTreeSet<(PersonId, SessionId)>,
    relevant: &BTreeSet<(PersonId, SessionId)>,
    universe: u64,
) -> ConfusionCounts {
    let e = recommended.intersection(relevant).count() as u64;
    let f = recommended.len() as u64 - e;
    let g = relevant.len() as u64 - e;
    let h = universe.saturating_sub(e + f + g);
    ConfusionCounts { e, f, g, h }
}

/// F-measure from precision and recall; `None` when `p + r` is zero.
pub fn f_measure(p: f64, r: f64) -> Option<f64> {
    if p + r > 0.0 {
        Some(2.0 * p * r / (p + r))
    } else {
        None
    }
}

/// Precision `e/(e+f)`, recall `e/(e+g)`, and their f-measure. Division by
/// zero yields `None` for that metric.
pub fn metrics(c: &ConfusionCounts) -> Metrics {
    let ratio = |num: u64, den: u64| (den > 0).then(|| num as f64 / den as f64);
    let precision = ratio(c.e, c.e + c.f);
    let recall = ratio(c.e, c.e + c.g);
    let f = match (precision, recall) {
        (Some(p), Some(r)) => f_measure(p, r),
        _ => None,
    };
    Metrics {
        precision,
        recall,
        f_measure: f,
    }
}

/// Everything an evaluation run needs besides the dataset and thresholds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalSetup {
    pub split: SplitSpec,
    pub truth: TruthMode,
}

impl Default for EvalSetup {
    fn default() -> Self {
        Self {
            split: SplitSpec::default(),
            truth: TruthMode::Labels,
        }
    }
}

fn point_for(
    train: &Dataset,
    thresholds: &Thresholds,
    stream: Stream,
    relevant: &BTreeSet<(PersonId, SessionId)>,
    universe: u64,
    threshold_value: f64,
) -> Result<MetricPoint, Error> {
    let recs = run_variant(train, thresholds, Variant::Full)?;
    let counts = score(&recs.pairs(stream), relevant, universe);
    Ok(MetricPoint {
        threshold: threshold_value,
        counts,
        metrics: metrics(&counts),
    })
}

/// Walk one threshold axis over an ascending grid, holding every other
/// threshold fixed, and return one metric point per gridpoint.
///
/// Gridpoints are independent and run in parallel; results follow grid
/// order. Along the grid the recommended-pair count `e + f` must not grow
/// (the gates only close as the threshold rises); that shrinkage is
/// re-checked here as a hard internal assertion.
pub fn sweep(
    ds: &Dataset,
    axis: Axis,
    grid: &[f64],
    base: &Thresholds,
    setup: &EvalSetup,
) -> Result<Vec<MetricPoint>, Error> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("sweep grid is empty".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig(
            "sweep grid must be strictly ascending".into(),
        ));
    }

    let relevant = ground_truth(ds, setup.truth, base)?;
    let universe = decision_universe(ds);
    let (train, _test) = split(ds, &setup.split)?;

    let points: Result<Vec<MetricPoint>, Error> = grid
        .par_iter()
        .map(|&value| {
            let mut thresholds = base.clone();
            match axis {
                Axis::Gamma => thresholds.gamma = value,
                Axis::Beta => thresholds.beta = value,
            }
            thresholds.validate()?;
            point_for(&train, &thresholds, axis.stream(), &relevant, universe, value)
        })
        .collect();
    let points = points?;

    for pair in points.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        if hi.counts.e + hi.counts.f > lo.counts.e + lo.counts.f {
            return Err(Error::Internal(format!(
                "recommended count grew from {} to {} as {} rose from {} to {}",
                lo.counts.e + lo.counts.f,
                hi.counts.e + hi.counts.f,
                axis.as_str(),
                lo.threshold,
                hi.threshold
            )));
        }
    }
    Ok(points)
}

/// The two ablation baselines, generated from the same dataset and
/// thresholds through the same pair loop.
#[derive(Clone, Debug)]
pub struct BaselineSets {
    /// Similarity gate only: the availability post-filter is forced open.
    /// Untruncated, so it is always a superset of the context stream.
    pub pearson_only: RecommendationSet,
    /// Relations stream admitted solely by degree centrality. Untruncated.
    pub popularity_only: RecommendationSet,
}

/// Run both simplified baselines.
pub fn run_baselines(ds: &Dataset, thresholds: &Thresholds) -> Result<BaselineSets, Error> {
    Ok(BaselineSets {
        pearson_only: run_variant(ds, thresholds, Variant::PearsonOnly)?,
        popularity_only: run_variant(ds, thresholds, Variant::PopularityOnly)?,
    })
}

/// Baseline metrics along the same grid as [`sweep`], for side-by-side
/// reporting: `(threshold, pearson-only metrics, popularity-only metrics)`.
/// The pearson-only curve responds to the gamma axis; the popularity-only
/// curve is flat in both (its gate reads neither threshold).
pub fn sweep_baselines(
    ds: &Dataset,
    axis: Axis,
    grid: &[f64],
    base: &Thresholds,
    setup: &EvalSetup,
) -> Result<Vec<(f64, Metrics, Metrics)>, Error> {
    let relevant = ground_truth(ds, setup.truth, base)?;
    let universe = decision_universe(ds);
    let (train, _test) = split(ds, &setup.split)?;

    grid.par_iter()
        .map(|&value| {
            let mut thresholds = base.clone();
            match axis {
                Axis::Gamma => thresholds.gamma = value,
                Axis::Beta => thresholds.beta = value,
            }
            thresholds.validate()?;
            let baselines = run_baselines(&train, &thresholds)?;
            let pearson_counts = score(
                &baselines.pearson_only.pairs(Stream::Context),
                &relevant,
                universe,
            );
            let popularity_counts = score(
                &baselines.popularity_only.pairs(Stream::Relations),
                &relevant,
                universe,
            );
            Ok((value, metrics(&pearson_counts), metrics(&popularity_counts)))
        })
        .collect()
}

fn fmt_opt(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.6}"),
        None => "undefined".to_string(),
    }
}

/// Canonical sweep table: one row per gridpoint with
/// `threshold P R F e f g h`, tab-separated.
pub fn sweep_table(points: &[MetricPoint]) -> String {
    let mut out = String::from("threshold\tprecision\trecall\tf_measure\te\tf\tg\th\n");
    for p in points {
        let _ = writeln!(
            out,
            "{:.6}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            p.threshold,
            fmt_opt(p.metrics.precision),
            fmt_opt(p.metrics.recall),
            fmt_opt(p.metrics.f_measure),
            p.counts.e,
            p.counts.f,
            p.counts.g,
            p.counts.h
        );
    }
    out
}
