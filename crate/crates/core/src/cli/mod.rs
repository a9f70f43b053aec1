//! The `udeed` command-line tool: `train`, `predict`, `diversity` and
//! `evaluate`.

pub mod model_file;

use std::ffi::OsString;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{TrainConfig, Variant};
use crate::data::{parse_csv, parse_sparse, split_lut, RawDataset, SplitSpec};
use crate::diversity::{DiversityMeasures, Measure};
use crate::eval::{run_experiment, ExperimentConfig, Method, DEFAULT_ALPHA};
use crate::predict::{accuracy, predict};
use crate::udeed::{train_detailed, DiversitySetSelector};

use model_file::{read_model, write_model};

#[derive(Debug, Parser)]
#[command(name = "udeed", version, about = "Semi-supervised ensembles that use unlabeled data for diversity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train an ensemble on a seeded split and write the model file.
    Train(TrainArgs),
    /// Print `label margin` for every row of a dataset.
    Predict(ModelArgs),
    /// Print the oracle diversity measures of a model on a labeled dataset.
    Diversity(ModelArgs),
    /// Repeat split/train/test over many seeds and write a report.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataFormat {
    Csv,
    Sparse,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Dataset file.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: DataFormat,
    /// Min-max scale every feature to [0, 1] before use.
    #[arg(long)]
    pub scale: bool,
}

#[derive(Debug, Args)]
pub struct HyperArgs {
    /// Number of base classifiers.
    #[arg(long, default_value_t = 20)]
    pub m: usize,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Descent learning rate.
    #[arg(long, default_value_t = 0.25)]
    pub lr: f64,
    /// Maximum descent steps per stage.
    #[arg(long, default_value_t = 25)]
    pub steps: usize,
    /// Maximum steps of each bootstrap fit.
    #[arg(long, default_value_t = 100)]
    pub init_steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Share of the training pool that keeps its labels.
    #[arg(long, default_value_t = 0.25)]
    pub labeled_frac: f64,
    /// Share of all rows held out for testing.
    #[arg(long, default_value_t = 0.5)]
    pub test_frac: f64,
}

impl HyperArgs {
    fn train_config(&self, variant: Variant) -> TrainConfig {
        TrainConfig {
            m: self.m,
            gamma: self.gamma,
            lambda: self.lambda,
            learning_rate: self.lr,
            max_steps: self.steps,
            init_max_steps: self.init_steps,
            variant,
            seed: self.seed,
            ..TrainConfig::default()
        }
    }

    fn split_spec(&self) -> SplitSpec {
        SplitSpec {
            test_fraction: self.test_frac,
            labeled_fraction: self.labeled_frac,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value = "lcud")]
    pub variant: Variant,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Where to write the model file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 50)]
    pub runs: usize,
    #[arg(long, value_delimiter = ',', default_value = "lc,lcd,lcud,bagging")]
    pub methods: Vec<Method>,
    /// Significance level of the paired t-tests.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Report path; per-run records go to `<report>.jsonl`. Without it the
    /// report is printed.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn load_dataset(args: &DataArgs) -> Result<RawDataset> {
    let file = fs::File::open(&args.data).with_context(|| format!("cannot open {}", args.data.display()))?;
    let name = args
        .data
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    let reader = BufReader::new(file);
    let data = match args.format {
        DataFormat::Csv => parse_csv(&name, reader),
        DataFormat::Sparse => parse_sparse(&name, reader),
    }
    .with_context(|| format!("cannot parse {}", args.data.display()))?;
    Ok(if args.scale { data.min_max_scaled() } else { data })
}

fn load_model(path: &Path) -> Result<crate::types::EnsembleModel> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read model {}", path.display()))?;
    read_model(&text).with_context(|| format!("invalid model file {}", path.display()))
}

fn selector_name(selector: DiversitySetSelector) -> &'static str {
    match selector {
        DiversitySetSelector::Empty => "none",
        DiversitySetSelector::LabeledFeatures => "labeled",
        DiversitySetSelector::Unlabeled => "unlabeled",
    }
}

fn cmd_train(args: &TrainArgs, out: &mut dyn Write) -> Result<()> {
    let config = args.hyper.train_config(args.variant);
    config.validate()?;
    let spec = args.hyper.split_spec();
    spec.validate()?;
    let data = load_dataset(&args.data)?;
    let split = split_lut(&data, &spec)?;
    let training = split.training_data()?;
    let report = train_detailed(&training, &config)?;

    writeln!(
        out,
        "split: labeled {} unlabeled {} test {}",
        split.labeled.len(),
        split.unlabeled.len(),
        split.test.len()
    )?;
    if let Some(warning) = report.initial.warning {
        writeln!(out, "warning: {warning:?}")?;
    }
    for (i, stage) in report.stages.iter().enumerate() {
        let first = stage.descent.trace[0];
        let last = stage.descent.final_loss();
        writeln!(
            out,
            "stage {} ({}): steps {} stop {:?} v_emp {:.6} -> {:.6} v_div {:.6} -> {:.6}",
            i + 1,
            selector_name(stage.selector),
            stage.descent.accepted_steps,
            stage.descent.stop,
            first.v_emp,
            last.v_emp,
            first.v_div,
            last.v_div
        )?;
    }
    let model = report.model();
    writeln!(out, "test accuracy: {:.6}", accuracy(model, &split.test)?)?;
    fs::write(&args.out, write_model(model)).with_context(|| format!("cannot write {}", args.out.display()))?;
    writeln!(out, "model written to {}", args.out.display())?;
    Ok(())
}

fn cmd_predict(args: &ModelArgs, out: &mut dyn Write) -> Result<()> {
    let model = load_model(&args.model)?;
    let data = load_dataset(&args.data)?;
    for (i, ex) in data.examples()?.iter().enumerate() {
        let p = predict(&model, ex.features()).with_context(|| format!("row {}", i + 1))?;
        writeln!(out, "{} {:?}", p.label, p.margin)?;
    }
    Ok(())
}

fn cmd_diversity(args: &ModelArgs, out: &mut dyn Write) -> Result<()> {
    let model = load_model(&args.model)?;
    let data = load_dataset(&args.data)?;
    let measures = DiversityMeasures::of_model(&model, &data.examples()?)?;
    for m in Measure::ALL {
        writeln!(out, "{} {:?}", m.name(), measures.get(m))?;
    }
    Ok(())
}

fn cmd_evaluate(args: &EvaluateArgs, out: &mut dyn Write) -> Result<()> {
    let config = ExperimentConfig {
        train: args.hyper.train_config(Variant::Lcud),
        split: args.hyper.split_spec(),
        runs: args.runs,
        methods: args.methods.clone(),
        alpha: args.alpha,
    };
    config.validate()?;
    let data = load_dataset(&args.data)?;
    let report = run_experiment(&data, &config)?;
    let text = report.render_text();
    match &args.report {
        None => out.write_all(text.as_bytes())?,
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
            let mut records = path.clone().into_os_string();
            records.push(".jsonl");
            let records = PathBuf::from(records);
            fs::write(&records, report.render_records())
                .with_context(|| format!("cannot write {}", records.display()))?;
            writeln!(out, "report written to {}", path.display())?;
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command, writing
/// regular output to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    match &cli.command {
        Command::Train(a) => cmd_train(a, out),
        Command::Predict(a) => cmd_predict(a, out),
        Command::Diversity(a) => cmd_diversity(a, out),
        Command::Evaluate(a) => cmd_evaluate(a, out),
    }
}
