//! Browser demo: trains LC and LCUD ensembles on a 2-D toy problem, scores
//! hand-drawn oracle matrices and evaluates t-test p-values.
//!
//! The `demo_*` functions are plain Rust (tested natively); the
//! `#[wasm_bindgen]` wrappers only convert errors for JavaScript.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use udeed::data::two_gaussians;
use udeed::diversity::{DiversityMeasures, Measure, OracleMatrix};
use udeed::eval::t_distribution_p;
use udeed::predict::accuracy;
use udeed::udeed::{init_ensemble, refine, LossBreakdown};
use udeed::{EnsembleModel, LabeledExample, TrainConfig, TrainingData, Variant};

/// Points generated for the held-out test set.
pub const TEST_POINTS: usize = 200;

#[derive(Debug, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    /// `+1`/`-1`.
    pub label: i8,
    /// `"labeled"`, `"unlabeled"` or `"test"`.
    pub role: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Diversity {
    pub dis: f64,
    pub df_complement: f64,
    pub ent: f64,
    pub cfd: f64,
}

impl From<DiversityMeasures> for Diversity {
    fn from(d: DiversityMeasures) -> Self {
        Diversity {
            dis: d.get(Measure::Dis),
            df_complement: d.get(Measure::DfComplement),
            ent: d.get(Measure::Ent),
            cfd: d.get(Measure::Cfd),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Ensemble {
    /// `[w_x, w_y, bias]` per member.
    pub weights: Vec<Vec<f64>>,
    pub accuracy: f64,
    pub diversity: Diversity,
    /// `v_total` before each accepted step and after the last.
    pub trace: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct DemoRun {
    pub points: Vec<Point>,
    pub initial: Ensemble,
    pub lc: Ensemble,
    pub lcud: Ensemble,
}

fn ensemble(model: &EnsembleModel, test: &[LabeledExample], trace: Vec<f64>) -> Result<Ensemble, String> {
    Ok(Ensemble {
        weights: model.weights().iter().map(|w| w.as_slice().to_vec()).collect(),
        accuracy: accuracy(model, test).map_err(|e| e.to_string())?,
        diversity: DiversityMeasures::of_model(model, test).map_err(|e| e.to_string())?.into(),
        trace,
    })
}

fn totals<'a>(traces: impl IntoIterator<Item = &'a [LossBreakdown]>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for trace in traces {
        // later stages restart from the previous stage's model
        let skip = usize::from(!out.is_empty());
        out.extend(trace.iter().skip(skip).map(|l| l.v_total));
    }
    out
}

/// Draws `labeled + unlabeled + TEST_POINTS` points from two unit Gaussians
/// centred at `±separation·(1, 1)`, fits one shared bootstrap ensemble and
/// refines it with LC and with LCUD.
pub fn demo_train(
    seed: u64,
    m: usize,
    gamma: f64,
    labeled: usize,
    unlabeled: usize,
    separation: f64,
) -> Result<DemoRun, String> {
    if labeled < 2 {
        return Err("need at least 2 labeled points".into());
    }
    if unlabeled == 0 {
        return Err("need at least 1 unlabeled point".into());
    }
    if !separation.is_finite() {
        return Err("separation must be finite".into());
    }
    let raw = two_gaussians(labeled + unlabeled + TEST_POINTS, 2, separation, seed);
    let examples = raw.examples().map_err(|e| e.to_string())?;
    let (l, rest) = examples.split_at(labeled);
    let (u, test) = rest.split_at(unlabeled);
    let data = TrainingData::new(l.to_vec(), u.iter().map(|e| e.features().clone()).collect())
        .map_err(|e| e.to_string())?;

    let config = TrainConfig { m, gamma, seed, ..TrainConfig::default() };
    config.validate().map_err(|e| e.to_string())?;
    let init = init_ensemble(data.labeled(), &config, &mut ChaCha8Rng::seed_from_u64(seed))
        .map_err(|e| e.to_string())?;

    let refined = |variant: Variant| -> Result<Ensemble, String> {
        let stages = refine(&init.model, &data, &TrainConfig { variant, ..config.clone() })
            .map_err(|e| e.to_string())?;
        let trace = totals(stages.iter().map(|s| s.descent.trace.as_slice()));
        let model = stages.last().map_or(&init.model, |s| &s.descent.model);
        ensemble(model, test, trace)
    };
    let lc = refined(Variant::Lc)?;
    let lcud = refined(Variant::Lcud)?;

    let role = |i: usize| match i {
        i if i < labeled => "labeled",
        i if i < labeled + unlabeled => "unlabeled",
        _ => "test",
    };
    let points = raw
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| Point {
            x: r.features[0],
            y: r.features[1],
            label: r.label.value() as i8,
            role: role(i),
        })
        .collect();

    Ok(DemoRun {
        points,
        initial: ensemble(&init.model, test, Vec::new())?,
        lc,
        lcud,
    })
}

/// Scores an oracle matrix given as `m` rows of `0`/`1` characters
/// (1 = correct) separated by newlines or spaces.
pub fn demo_diversity(matrix: &str) -> Result<Diversity, String> {
    let rows = matrix
        .split_whitespace()
        .map(|row| {
            row.chars()
                .map(|c| match c {
                    '1' => Ok(true),
                    '0' => Ok(false),
                    other => Err(format!("unexpected {other:?}; use 0 and 1")),
                })
                .collect::<Result<Vec<bool>, String>>()
        })
        .collect::<Result<Vec<_>, String>>()?;
    let o = OracleMatrix::new(rows).map_err(|e| e.to_string())?;
    Ok(DiversityMeasures::of(&o).into())
}

/// Two-sided p-value of a t statistic.
pub fn demo_p_value(t: f64, df: u32) -> Result<f64, String> {
    if df == 0 {
        return Err("df must be positive".into());
    }
    if !t.is_finite() {
        return Err("t must be finite".into());
    }
    Ok(t_distribution_p(t, df))
}

fn js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn train_ensembles(
    seed: u32,
    m: u32,
    gamma: f64,
    labeled: u32,
    unlabeled: u32,
    separation: f64,
) -> Result<String, JsValue> {
    js(demo_train(seed as u64, m as usize, gamma, labeled as usize, unlabeled as usize, separation))
}

#[wasm_bindgen]
pub fn diversity_of_matrix(matrix: &str) -> Result<String, JsValue> {
    js(demo_diversity(matrix))
}

#[wasm_bindgen]
pub fn t_test_p_value(t: f64, df: u32) -> Result<f64, JsValue> {
    demo_p_value(t, df).map_err(|e| JsValue::from_str(&e))
}
