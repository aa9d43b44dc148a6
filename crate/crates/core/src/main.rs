use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use onebit::classify::classify_batch;
use onebit::datasets::{load_csv_matrix, load_idx_dataset, subsample_per_class, LabeledDataset};
use onebit::experiment::{
    run_experiment, theory_table, write_results_csv, write_theory_csv, DataSource, ExperimentSpec,
};
use onebit::model::fit;
use onebit::persist::{load_model, save_model};
use onebit::plot::{emit_plot, Series};
use onebit::rng::{substream, Domain};
use onebit::synthgen::{builtin_config, sample_clouds, sample_cones, ConeGeometry, BUILTIN_NAMES};
use onebit::theory::{self, simulate::DEFAULT_TRIALS};
use onebit::{Error, Result};

#[derive(Parser)]
#[command(
    name = "onebit",
    version,
    about = "Classification from one-bit random projections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a synthetic dataset as `label,x,y` CSV rows.
    Synth(SynthArgs),
    /// Train a model and write it as JSON.
    Train(TrainArgs),
    /// Classify labeled points with a saved model and report accuracy.
    Classify(ClassifyArgs),
    /// Accuracy-versus-m sweep over independent trials.
    Experiment(ExperimentArgs),
    /// Two-cone analysis.
    #[command(subcommand)]
    Theory(TheoryCommand),
}

#[derive(Args)]
struct SourceArgs {
    /// Built-in cloud layout
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(BUILTIN_NAMES))]
    config: Option<String>,
    /// IDX image file (with --labels)
    #[arg(long, requires = "labels")]
    images: Option<PathBuf>,
    /// IDX label file (with --images)
    #[arg(long, requires = "images")]
    labels: Option<PathBuf>,
    /// Keep only these IDX label values, e.g. `--digits 0,1`
    #[arg(long, value_delimiter = ',', requires = "images")]
    digits: Vec<usize>,
    /// CSV file of `label,v1,...,vn` rows
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl SourceArgs {
    fn source(&self) -> Result<DataSource> {
        let given = [
            self.config.is_some(),
            self.images.is_some(),
            self.csv.is_some(),
        ];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(Error::Config(
                "give exactly one of --config, --images/--labels, --csv".into(),
            ));
        }
        if let Some(name) = &self.config {
            return Ok(DataSource::Builtin(name.clone()));
        }
        if let (Some(images), Some(labels)) = (&self.images, &self.labels) {
            let classes = if self.digits.is_empty() {
                None
            } else {
                Some(self.digits.iter().map(|d| d + 1).collect())
            };
            return Ok(DataSource::Idx {
                images: images.clone(),
                labels: labels.clone(),
                classes,
            });
        }
        Ok(DataSource::Csv(self.csv.clone().expect("checked above")))
    }

    /// Loads a file source, or samples `per_class` points from a built-in one.
    fn load(&self, per_class: Option<usize>, seed: u64) -> Result<LabeledDataset> {
        let mut rng = substream(seed, Domain::Sample, 0, 0);
        let ds = match self.source()? {
            DataSource::Builtin(name) => {
                let spec = builtin_config(&name)?;
                let count = per_class.ok_or_else(|| {
                    Error::Config("built-in sources need a per-class point count".into())
                })?;
                let (x, labels) = sample_clouds(&spec, count, &mut rng)?;
                return LabeledDataset::new(x, labels, spec.classes());
            }
            DataSource::Idx {
                images,
                labels,
                classes,
            } => {
                let ds = load_idx_dataset(images, labels)?;
                match classes {
                    Some(keep) => ds.restrict_classes(&keep)?,
                    None => ds,
                }
            }
            DataSource::Csv(path) => load_csv_matrix(path)?,
        };
        match per_class {
            Some(k) => subsample_per_class(&ds, k, &mut rng),
            None => Ok(ds),
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(BUILTIN_NAMES))]
    config: Option<String>,
    /// Two-cone data instead: `A1,A12` in degrees (equal cones)
    #[arg(long, value_delimiter = ',', num_args = 2, conflicts_with = "config")]
    cones: Vec<f64>,
    /// Points per class (clouds) or points per radian (cones)
    #[arg(long = "train-per-class", default_value_t = 50)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    layers: usize,
    /// Points per class to train on (all points of a file source if omitted)
    #[arg(long)]
    train_per_class: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output model file
    #[arg(long)]
    model: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    source: SourceArgs,
    /// Points per class (needed for built-in sources)
    #[arg(long)]
    test_per_class: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Per-point predictions as CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Comma-separated list of m values
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    layers: usize,
    #[arg(long)]
    train_per_class: usize,
    #[arg(long)]
    test_per_class: usize,
    #[arg(long, default_value_t = 30)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG plot of accuracy against m
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TheoryCommand {
    /// Lower bound for equal cones with the test point centered.
    Bound(BoundArgs),
    /// Bound next to the simulated probability on an (A12, m) grid.
    Simulate(SimulateArgs),
    /// Check the counting and special-function identities.
    Verify,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,50,60")]
    m: Vec<usize>,
    /// Cone width in degrees
    #[arg(long, default_value_t = 15.0)]
    a1: f64,
    /// Gap(s) between the cones in degrees
    #[arg(long, value_delimiter = ',', default_value = "20,40,80")]
    a12: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,50,60")]
    m: Vec<usize>,
    #[arg(long, default_value_t = 15.0)]
    a1: f64,
    #[arg(long, value_delimiter = ',', default_value = "20,40,80")]
    a12: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    plot: Option<PathBuf>,
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn synth(args: SynthArgs) -> Result<()> {
    let mut rng = substream(args.seed, Domain::Sample, 0, 0);
    let (x, labels) = match (&args.config, args.cones.as_slice()) {
        (Some(name), _) => sample_clouds(&builtin_config(name)?, args.count, &mut rng)?,
        (None, [a1, a12]) => {
            let geom = ConeGeometry::symmetric_degrees(*a1, *a12)?;
            sample_cones(&geom, args.count as f64, &mut rng)?
        }
        _ => return Err(Error::Config("give --config or --cones A1,A12".into())),
    };
    let mut w = csv::Writer::from_writer(output(&args.out)?);
    for (col, label) in x.columns().zip(&labels) {
        let mut record = vec![label.to_string()];
        record.extend(col.iter().map(|v| v.to_string()));
        w.write_record(&record)
            .map_err(|e| Error::Range(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn train_cmd(args: TrainArgs) -> Result<()> {
    let ds = args.source.load(args.train_per_class, args.seed)?;
    let model = fit(
        &ds.data,
        &ds.labels,
        ds.classes,
        args.m,
        args.layers,
        args.seed,
    )?;
    save_model(&model, &args.model)?;
    eprintln!(
        "trained on {} points ({} classes), m = {}, L = {}, {} tables -> {}",
        ds.len(),
        ds.classes,
        model.m(),
        model.layers(),
        model.tables().len(),
        args.model.display()
    );
    Ok(())
}

fn classify_cmd(args: ClassifyArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let ds = args.source.load(args.test_per_class, args.seed)?;
    let out = classify_batch(&model, &ds.data)?;
    let correct = out
        .iter()
        .zip(&ds.labels)
        .filter(|(c, &l)| c.label == l)
        .count();
    if args.out.is_some() {
        let mut w = csv::Writer::from_writer(output(&args.out)?);
        w.write_record(["index", "label", "predicted", "tied", "unseen"])
            .map_err(|e| Error::Range(e.to_string()))?;
        for (j, (c, l)) in out.iter().zip(&ds.labels).enumerate() {
            w.write_record([
                j.to_string(),
                l.to_string(),
                c.label.to_string(),
                (c.tied.len() > 1).to_string(),
                c.unseen.to_string(),
            ])
            .map_err(|e| Error::Range(e.to_string()))?;
        }
        w.flush()?;
    }
    println!(
        "accuracy {} ({correct}/{})",
        correct as f64 / ds.len() as f64,
        ds.len()
    );
    Ok(())
}

fn experiment_cmd(args: ExperimentArgs) -> Result<()> {
    let spec = ExperimentSpec {
        source: args.source.source()?,
        m_list: args.m,
        layers: args.layers,
        train_per_class: args.train_per_class,
        test_per_class: args.test_per_class,
        trials: args.trials,
        master_seed: args.seed,
    };
    let rows = run_experiment(&spec)?;
    write_results_csv(&rows, output(&args.out)?)?;
    if let Some(path) = &args.plot {
        let points = rows.iter().map(|r| (r.m as f64, r.accuracy_mean)).collect();
        emit_plot(
            &[Series::new(format!("L = {}", spec.layers), points)],
            "m",
            "accuracy",
            path,
        )?;
    }
    Ok(())
}

fn bound_cmd(args: BoundArgs) -> Result<()> {
    let mut w = csv::Writer::from_writer(output(&args.out)?);
    w.write_record([
        "m",
        "A12_deg",
        "bound",
        "terms_excluded",
        "enumeration_size",
    ])
    .map_err(|e| Error::Range(e.to_string()))?;
    for &a12 in &args.a12 {
        let geom = ConeGeometry::symmetric_degrees(args.a1, a12)?;
        for &m in &args.m {
            let b = theory::theorem_bound(m, &geom)?;
            w.write_record([
                m.to_string(),
                a12.to_string(),
                b.lower_bound.to_string(),
                b.terms_excluded.to_string(),
                b.enumeration_size.to_string(),
            ])
            .map_err(|e| Error::Range(e.to_string()))?;
        }
    }
    w.flush()?;
    Ok(())
}

fn simulate_cmd(args: SimulateArgs) -> Result<()> {
    let geom = ConeGeometry::symmetric_degrees(args.a1, 0.0)?;
    let a12: Vec<f64> = args.a12.iter().map(|d| d.to_radians()).collect();
    let rows = theory_table(&geom, &args.m, &a12, args.trials, args.seed)?;
    write_theory_csv(&rows, output(&args.out)?)?;
    if let Some(path) = &args.plot {
        let mut series = Vec::new();
        for &deg in &args.a12 {
            let pick = |f: fn(&onebit::experiment::TheoryRow) -> f64| {
                rows.iter()
                    .filter(|r| (r.a12_deg - deg).abs() < 1e-9)
                    .map(|r| (r.m as f64, f(r)))
                    .collect::<Vec<_>>()
            };
            series.push(Series::new(
                format!("simulated, A12 = {deg}"),
                pick(|r| r.simulated),
            ));
            series.push(Series::new(
                format!("bound, A12 = {deg}"),
                pick(|r| r.bound),
            ));
        }
        emit_plot(&series, "m", "P(correct)", path)?;
    }
    Ok(())
}

fn verify_cmd() -> Result<bool> {
    let mut ok = true;
    let mut check = |name: &str, pass: bool, detail: String| {
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    };
    let w1_agree =
        (0..=40).all(|m| theory::count_w1(m).ok() == theory::count_w1_bruteforce(m).ok());
    check(
        "W1 closed form vs enumeration, M = 0..40",
        w1_agree,
        format!(
            "W1(9) = {}, W1(10) = {}",
            theory::count_w1(9)?,
            theory::count_w1(10)?
        ),
    );
    for m in [19, 38] {
        let t = theory::max_trinomial_constrained(m);
        check(
            &format!("constrained trinomial maximizer, m = {m}"),
            t == (9 * m / 19, m / 19, 9 * m / 19),
            format!("{t:?}"),
        );
    }
    let geom = ConeGeometry::symmetric_degrees(15.0, 30.0)?;
    let b = theory::theorem_bound(1, &geom)?.lower_bound;
    check(
        "bound at m = 1",
        (b - 5.0 / 24.0).abs() < 1e-12,
        format!("{b} vs 5/24"),
    );
    let (total, _) = theory::excluded_mass(30, &geom, false)?;
    check(
        "all configurations sum to 1, m = 30",
        (total - 1.0).abs() < 1e-12,
        format!("{total}"),
    );
    let v = theory::mgf_uniform_square(1.0, 1.0, 0.0, 1.0, theory::ExponentSign::Minus)?;
    check(
        "E[exp(-U^2)], U ~ Uniform(0, 1)",
        (v - 0.746_824_132_812_427).abs() < 1e-12,
        format!("{v}"),
    );
    for m in [0, 9, 10, 20, 100] {
        println!(
            "INFO W2 formula vs direct triple count, m = {m}: {} vs {}",
            theory::count_w2_formula(m)?,
            theory::count_terms_equivalent(m)?
        );
    }
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Synth(a) => synth(a)?,
        Command::Train(a) => train_cmd(a)?,
        Command::Classify(a) => classify_cmd(a)?,
        Command::Experiment(a) => experiment_cmd(a)?,
        Command::Theory(TheoryCommand::Bound(a)) => bound_cmd(a)?,
        Command::Theory(TheoryCommand::Simulate(a)) => simulate_cmd(a)?,
        Command::Theory(TheoryCommand::Verify) => return verify_cmd(),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
