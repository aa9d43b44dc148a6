//! Accuracy sweeps over `m` and trials, and the bound-versus-simulation table
//! for the two-cone model.

use std::io::Write;
use std::path::PathBuf;

use crate::classify::{finish, Classification};
use crate::datasets::{load_csv_matrix, load_idx_dataset, split_per_class, LabeledDataset};
use crate::error::{Error, Result};
use crate::measure::{apply_centering, binarize, compute_centering, gaussian_matrix, BinaryCode};
use crate::model::{build_tables, check_training_inputs, layered_index_sets};
use crate::rng::{derive_seed, substream, Domain};
use crate::synthgen::{builtin_config, sample_clouds, ConeGeometry};
use crate::theory::{simulate_classification_probability, theorem_bound};

/// Header of the accuracy CSV.
pub const RESULTS_HEADER: [&str; 6] = [
    "m",
    "L",
    "train_per_class",
    "trials",
    "accuracy_mean",
    "accuracy_std",
];

/// Header of the theory CSV.
pub const THEORY_HEADER: [&str; 5] = ["m", "A12_deg", "bound", "simulated", "mc_sigma"];

/// Tables built and scored at a time by [`stream_classify`].
pub const TABLE_BATCH: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub enum DataSource {
    /// One of the built-in cloud layouts, sampled afresh each trial.
    Builtin(String),
    /// IDX image/label pair; `classes` keeps and renumbers the listed
    /// original labels (1-based, so digit `d` is `d + 1`).
    Idx {
        images: PathBuf,
        labels: PathBuf,
        classes: Option<Vec<usize>>,
    },
    /// `label,v1,...,vn` rows.
    Csv(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub source: DataSource,
    pub m_list: Vec<usize>,
    pub layers: usize,
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub trials: usize,
    pub master_seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("trials must be at least 1"));
        }
        if self.m_list.is_empty() || self.m_list.contains(&0) {
            return Err(Error::config(
                "m-list must be nonempty with positive entries",
            ));
        }
        if self.layers == 0 {
            return Err(Error::config("L must be at least 1"));
        }
        if let Some(&m) = self.m_list.iter().find(|&&m| m < self.layers) {
            return Err(Error::config(format!(
                "m = {m} is smaller than L = {}",
                self.layers
            )));
        }
        if self.train_per_class == 0 || self.test_per_class == 0 {
            return Err(Error::config(
                "train and test sizes per class must be positive",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub m: usize,
    pub layers: usize,
    pub train_per_class: usize,
    pub trials: usize,
    pub accuracy_mean: f64,
    /// Sample standard deviation across trials (0 for a single trial).
    pub accuracy_std: f64,
}

/// Classifies every column of `q_test` against tables trained on `q_train`
/// without holding all tables at once. Tables are built `TABLE_BATCH` at a
/// time and contributions are added in table order, so the result matches
/// classifying with the full trained model exactly.
pub fn stream_classify(
    q_train: &BinaryCode,
    labels: &[usize],
    classes: usize,
    layers: usize,
    master_seed: u64,
    q_test: &BinaryCode,
) -> Result<Vec<Classification>> {
    check_training_inputs(q_train, labels, classes, layers)?;
    if q_test.rows() != q_train.rows() {
        return Err(Error::Dimension {
            what: "test code rows",
            expected: q_train.rows(),
            got: q_test.rows(),
        });
    }
    let m = q_train.rows();
    let sets = layered_index_sets(m, layers, master_seed)?;
    let mut raw = vec![vec![0.0; classes]; q_test.cols()];
    let mut unseen = vec![0usize; q_test.cols()];
    for batch in sets.chunks(TABLE_BATCH) {
        let tables = build_tables(q_train, labels, classes, batch);
        for (j, (acc, miss)) in raw.iter_mut().zip(unseen.iter_mut()).enumerate() {
            let packed = q_test.packed_column(j);
            for table in &tables {
                match table.get_code(table.index_set().key_of(packed)) {
                    Some(entry) => {
                        for (a, r) in acc.iter_mut().zip(&entry.membership) {
                            *a += r;
                        }
                    }
                    None => *miss += 1,
                }
            }
        }
    }
    Ok(raw
        .into_iter()
        .zip(unseen)
        .map(|(r, u)| finish(r, layers * m, u))
        .collect())
}

fn load_source(source: &DataSource) -> Result<Option<LabeledDataset>> {
    match source {
        DataSource::Builtin(name) => {
            builtin_config(name)?;
            Ok(None)
        }
        DataSource::Idx {
            images,
            labels,
            classes,
        } => {
            let ds = load_idx_dataset(images, labels)?;
            Ok(Some(match classes {
                Some(keep) => ds.restrict_classes(keep)?,
                None => ds,
            }))
        }
        DataSource::Csv(path) => Ok(Some(load_csv_matrix(path)?)),
    }
}

fn trial_data(
    spec: &ExperimentSpec,
    loaded: &Option<LabeledDataset>,
    trial_seed: u64,
) -> Result<(LabeledDataset, LabeledDataset)> {
    match (loaded, &spec.source) {
        (Some(ds), _) => {
            let mut rng = substream(trial_seed, Domain::Split, 0, 0);
            split_per_class(ds, spec.train_per_class, spec.test_per_class, &mut rng)
        }
        (None, DataSource::Builtin(name)) => {
            let clouds = builtin_config(name)?;
            let mut rng = substream(trial_seed, Domain::Sample, 0, 0);
            let (train, train_labels) = sample_clouds(&clouds, spec.train_per_class, &mut rng)?;
            let (test, test_labels) = sample_clouds(&clouds, spec.test_per_class, &mut rng)?;
            let g = clouds.classes();
            Ok((
                LabeledDataset::new(train, train_labels, g)?,
                LabeledDataset::new(test, test_labels, g)?,
            ))
        }
        (None, _) => unreachable!("file sources are loaded up front"),
    }
}

/// Fraction of correct labels in one trial at one `m`.
fn trial_accuracy(
    train: &LabeledDataset,
    test: &LabeledDataset,
    m: usize,
    layers: usize,
    trial_seed: u64,
) -> Result<f64> {
    let a = gaussian_matrix(m, train.data.dim(), trial_seed)?;
    let mu = compute_centering(&train.data)?;
    let q_train = binarize(&a, &apply_centering(&train.data, &mu)?)?;
    let q_test = binarize(&a, &apply_centering(&test.data, &mu)?)?;
    let sets_seed = derive_seed(trial_seed, Domain::IndexSets, m as u64, 0);
    let out = stream_classify(
        &q_train,
        &train.labels,
        train.classes,
        layers,
        sets_seed,
        &q_test,
    )?;
    let correct = out
        .iter()
        .zip(&test.labels)
        .filter(|(c, &l)| c.label == l)
        .count();
    Ok(correct as f64 / test.len() as f64)
}

/// Per-trial accuracies, `result[i][t]` for `m_list[i]` and trial `t`.
pub fn run_trials(spec: &ExperimentSpec) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    let loaded = load_source(&spec.source)?;
    let mut acc = vec![Vec::with_capacity(spec.trials); spec.m_list.len()];
    for trial in 0..spec.trials {
        let trial_seed = derive_seed(spec.master_seed, Domain::Trial, trial as u64, 0);
        let (train, test) = trial_data(spec, &loaded, trial_seed)?;
        for (i, &m) in spec.m_list.iter().enumerate() {
            acc[i].push(trial_accuracy(&train, &test, m, spec.layers, trial_seed)?);
        }
    }
    Ok(acc)
}

/// Runs the sweep and aggregates one row per `m`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let acc = run_trials(spec)?;
    Ok(spec
        .m_list
        .iter()
        .zip(acc)
        .map(|(&m, a)| {
            let (mean, std) = mean_std(&a);
            ResultRow {
                m,
                layers: spec.layers,
                train_per_class: spec.train_per_class,
                trials: spec.trials,
                accuracy_mean: mean,
                accuracy_std: std,
            }
        })
        .collect())
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Range(format!("CSV output: {other:?}")),
    }
}

pub fn write_results_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.m.to_string(),
            r.layers.to_string(),
            r.train_per_class.to_string(),
            r.trials.to_string(),
            r.accuracy_mean.to_string(),
            r.accuracy_std.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn results_csv_string(rows: &[ResultRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_results_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoryRow {
    pub m: usize,
    /// Gap between the cones in degrees.
    pub a12_deg: f64,
    pub bound: f64,
    pub simulated: f64,
    pub mc_sigma: f64,
}

/// Bound and simulated probability for every `(A12, m)` pair; `geom` supplies
/// the cone widths and test point, each `A12` (radians) replaces its gap.
pub fn theory_table(
    geom: &ConeGeometry,
    m_list: &[usize],
    a12_list: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<TheoryRow>> {
    if trials == 0 {
        return Err(Error::config("trials must be at least 1"));
    }
    if m_list.is_empty() || a12_list.is_empty() {
        return Err(Error::config("m-list and A12-list must be nonempty"));
    }
    let mut rows = Vec::with_capacity(m_list.len() * a12_list.len());
    for (gi, &a12) in a12_list.iter().enumerate() {
        let g = ConeGeometry::new(geom.a1, geom.a2, a12, geom.theta1, geom.theta2)?;
        for &m in m_list {
            let bound = theorem_bound(m, &g)?;
            let sim_seed = derive_seed(seed, Domain::Hyperplanes, gi as u64, m as u64);
            let sim = simulate_classification_probability(m, &g, trials, sim_seed)?;
            rows.push(TheoryRow {
                m,
                a12_deg: a12.to_degrees(),
                bound: bound.lower_bound,
                simulated: sim.probability,
                mc_sigma: sim.std_error,
            });
        }
    }
    Ok(rows)
}

pub fn write_theory_csv<W: Write>(rows: &[TheoryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(THEORY_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.m.to_string(),
            r.a12_deg.to_string(),
            r.bound.to_string(),
            r.simulated.to_string(),
            r.mc_sigma.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
