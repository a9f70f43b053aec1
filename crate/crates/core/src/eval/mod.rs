//! Repeated-split experiments: trains every requested method on the same
//! splits, compares accuracies with paired t-tests and tracks how LCUD moves
//! the oracle diversity of its initial ensemble.

mod report;
mod stats;

pub use stats::{mean_std, paired_t_test, t_distribution_p, ComparisonVerdict, Outcome};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{TrainConfig, Variant};
use crate::data::{split_lut, RawDataset, SplitSpec};
use crate::diversity::{DiversityMeasures, Measure};
use crate::error::{Error, Result};
use crate::predict::accuracy;
use crate::types::{EnsembleModel, LabeledExample};
use crate::udeed::{init_ensemble, refine};

/// Significance level of every comparison.
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Lcud,
    Lcd,
    Lc,
    Bagging,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Lcud, Method::Lcd, Method::Lc, Method::Bagging];

    pub fn name(self) -> &'static str {
        match self {
            Method::Lcud => "lcud",
            Method::Lcd => "lcd",
            Method::Lc => "lc",
            Method::Bagging => "bagging",
        }
    }

    fn variant(self) -> Option<Variant> {
        match self {
            Method::Lcud => Some(Variant::Lcud),
            Method::Lcd => Some(Variant::Lcd),
            Method::Lc => Some(Variant::Lc),
            Method::Bagging => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lcud" | "udeed" => Ok(Method::Lcud),
            "lcd" => Ok(Method::Lcd),
            "lc" => Ok(Method::Lc),
            "bagging" => Ok(Method::Bagging),
            other => Err(Error::InvalidConfig(format!("unknown method {other:?}"))),
        }
    }
}

/// Bootstrap-trained logistic ensemble without any descent refinement.
pub fn bagging_train(labeled: &[LabeledExample], config: &TrainConfig, rng: &mut impl RngCore) -> Result<EnsembleModel> {
    init_ensemble(labeled, config, rng).map(|init| init.model)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    /// Training hyperparameters; `seed` is the master seed of the experiment
    /// and `variant` is ignored.
    pub train: TrainConfig,
    /// Split fractions; the seed is derived per run.
    pub split: SplitSpec,
    pub runs: usize,
    pub methods: Vec<Method>,
    pub alpha: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            train: TrainConfig::default(),
            split: SplitSpec::default(),
            runs: 50,
            methods: Method::ALL.to_vec(),
            alpha: DEFAULT_ALPHA,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.train.validate()?;
        self.split.validate()?;
        if self.runs < 2 {
            return Err(Error::InvalidConfig(format!(
                "at least 2 runs are needed for the t-tests, got {}",
                self.runs
            )));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("no methods selected".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }

    /// Methods deduplicated in report order (LCUD, LCD, LC, Bagging).
    fn ordered_methods(&self) -> Vec<Method> {
        Method::ALL
            .into_iter()
            .filter(|m| self.methods.contains(m))
            .collect()
    }
}

/// `(split seed, training seed)` of run `run`: two draws from ChaCha8 seeded
/// with the master seed on stream `run`.
pub fn run_seeds(master_seed: u64, run: usize) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(run as u64);
    (rng.next_u64(), rng.next_u64())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    /// 1-based.
    pub run: usize,
    pub split_seed: u64,
    pub train_seed: u64,
    pub accuracy: BTreeMap<Method, f64>,
    /// Diversity of the bootstrap ensemble on the test set (LCUD runs only).
    pub initial_diversity: Option<DiversityMeasures>,
    /// Diversity of the final LCUD ensemble on the test set.
    pub final_diversity: Option<DiversityMeasures>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSummary {
    pub method: Method,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairComparison {
    pub method: Method,
    pub against: Method,
    pub verdict: ComparisonVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiversityComparison {
    pub measure: Measure,
    pub initial_mean: f64,
    pub initial_std: f64,
    pub final_mean: f64,
    pub final_std: f64,
    /// Final against initial.
    pub verdict: ComparisonVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub dataset: String,
    pub rows: usize,
    pub config: ExperimentConfig,
    pub runs: Vec<RunResult>,
    pub summaries: Vec<MethodSummary>,
    pub comparisons: Vec<PairComparison>,
    pub diversity: Vec<DiversityComparison>,
}

impl ExperimentReport {
    pub fn accuracies(&self, method: Method) -> Vec<f64> {
        self.runs
            .iter()
            .filter_map(|r| r.accuracy.get(&method).copied())
            .collect()
    }

    pub fn summary(&self, method: Method) -> Option<&MethodSummary> {
        self.summaries.iter().find(|s| s.method == method)
    }

    pub fn comparison(&self, method: Method, against: Method) -> Option<&PairComparison> {
        self.comparisons
            .iter()
            .find(|c| c.method == method && c.against == against)
    }

    pub fn diversity_comparison(&self, measure: Measure) -> Option<&DiversityComparison> {
        self.diversity.iter().find(|d| d.measure == measure)
    }
}

fn run_once(data: &RawDataset, config: &ExperimentConfig, methods: &[Method], run: usize) -> Result<RunResult> {
    let (split_seed, train_seed) = run_seeds(config.train.seed, run);
    let split = split_lut(data, &SplitSpec { seed: split_seed, ..config.split })?;
    let training = split.training_data()?;
    let base = TrainConfig { seed: train_seed, ..config.train.clone() };
    let init = init_ensemble(training.labeled(), &base, &mut ChaCha8Rng::seed_from_u64(train_seed))?;

    let mut accuracies = BTreeMap::new();
    let mut final_diversity = None;
    for &method in methods {
        let model = match method.variant() {
            None => init.model.clone(),
            Some(variant) => {
                let cfg = TrainConfig { variant, ..base.clone() };
                let stages = refine(&init.model, &training, &cfg)?;
                stages
                    .into_iter()
                    .last()
                    .map_or_else(|| init.model.clone(), |s| s.descent.model)
            }
        };
        accuracies.insert(method, accuracy(&model, &split.test)?);
        if method == Method::Lcud {
            final_diversity = Some(DiversityMeasures::of_model(&model, &split.test)?);
        }
    }
    let initial_diversity = match final_diversity {
        Some(_) => Some(DiversityMeasures::of_model(&init.model, &split.test)?),
        None => None,
    };
    Ok(RunResult {
        run,
        split_seed,
        train_seed,
        accuracy: accuracies,
        initial_diversity,
        final_diversity,
    })
}

/// Runs `config.runs` independent splits (in parallel) and aggregates them in
/// run order.
pub fn run_experiment(data: &RawDataset, config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let methods = config.ordered_methods();
    let outcomes: Vec<Result<RunResult>> = (1..=config.runs)
        .into_par_iter()
        .map(|run| {
            run_once(data, config, &methods, run).map_err(|e| Error::Run {
                run,
                source: Box::new(e),
            })
        })
        .collect();
    let runs = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

    let column = |method: Method| -> Vec<f64> { runs.iter().map(|r| r.accuracy[&method]).collect() };

    let summaries = methods
        .iter()
        .map(|&method| {
            let (mean, std) = mean_std(&column(method));
            MethodSummary { method, mean, std }
        })
        .collect();

    let mut comparisons = Vec::new();
    for (i, &a) in methods.iter().enumerate() {
        for &b in &methods[i + 1..] {
            comparisons.push(PairComparison {
                method: a,
                against: b,
                verdict: paired_t_test(&column(a), &column(b), config.alpha)?,
            });
        }
    }

    let mut diversity = Vec::new();
    if methods.contains(&Method::Lcud) {
        for measure in Measure::ALL {
            let initial: Vec<f64> = runs
                .iter()
                .filter_map(|r| r.initial_diversity.map(|d| d.get(measure)))
                .collect();
            let fin: Vec<f64> = runs
                .iter()
                .filter_map(|r| r.final_diversity.map(|d| d.get(measure)))
                .collect();
            let (initial_mean, initial_std) = mean_std(&initial);
            let (final_mean, final_std) = mean_std(&fin);
            diversity.push(DiversityComparison {
                measure,
                initial_mean,
                initial_std,
                final_mean,
                final_std,
                verdict: paired_t_test(&fin, &initial, config.alpha)?,
            });
        }
    }

    Ok(ExperimentReport {
        dataset: data.name.clone(),
        rows: data.len(),
        config: config.clone(),
        runs,
        summaries,
        comparisons,
        diversity,
    })
}
