//! Bootstrap initialization: one L2-regularized logistic fit per classifier,
//! each on its own bootstrap replicate of the labeled set.

use rand::RngCore;

use crate::config::TrainConfig;
use crate::data::bootstrap_indices;
use crate::error::{Error, Result};
use crate::logistic::{blh_coefficient, blh_from_score};
use crate::types::{check_dims, dot_slices, has_both_classes, DenseVector, EnsembleModel, LabeledExample};

/// Largest number of step halvings tried before an update is abandoned.
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitWarning {
    /// The labeled set holds a single class; members drift toward a constant
    /// output.
    SingleClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Initialization {
    pub model: EnsembleModel,
    pub warning: Option<InitWarning>,
}

/// `½‖w‖² + λ·Σ -BLH(w·x_i, y_i)` over the sample picked by `indices`.
fn regularized_objective(w: &[f64], examples: &[LabeledExample], indices: &[usize], lambda: f64) -> f64 {
    let norm = 0.5 * dot_slices(w, w);
    let nll: f64 = indices
        .iter()
        .map(|&i| {
            let ex = &examples[i];
            -blh_from_score(dot_slices(w, ex.features().as_slice()), ex.label())
        })
        .sum();
    norm + lambda * nll
}

fn regularized_gradient(w: &[f64], examples: &[LabeledExample], indices: &[usize], lambda: f64) -> Vec<f64> {
    let mut g = w.to_vec();
    for &i in indices {
        let ex = &examples[i];
        let x = ex.features().as_slice();
        let c = blh_coefficient(dot_slices(w, x), ex.label());
        for (gj, xj) in g.iter_mut().zip(x) {
            *gj -= lambda * c * xj;
        }
    }
    g
}

/// Gradient descent from the zero vector. A step that fails to lower the
/// objective is retried at half the step size, and the reduced step size is
/// kept for later iterations.
pub(crate) fn fit_regularized_logistic(
    examples: &[LabeledExample],
    indices: &[usize],
    config: &TrainConfig,
) -> DenseVector {
    let dim = examples[0].features().len();
    let mut w = vec![0.0; dim];
    let mut objective = regularized_objective(&w, examples, indices, config.lambda);
    let mut rate = config.init_learning_rate;
    for _ in 0..config.init_max_steps {
        let g = regularized_gradient(&w, examples, indices, config.lambda);
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let candidate: Vec<f64> = w.iter().zip(&g).map(|(wj, gj)| wj - rate * gj).collect();
            let value = regularized_objective(&candidate, examples, indices, config.lambda);
            if value < objective {
                accepted = Some((candidate, value));
                break;
            }
            rate *= 0.5;
        }
        let Some((candidate, value)) = accepted else {
            break;
        };
        let improvement = objective - value;
        w = candidate;
        objective = value;
        if improvement < config.init_tolerance {
            break;
        }
    }
    DenseVector::from_raw_unchecked(w)
}

/// Trains each of the `m` classifiers on a bootstrap replicate of `labeled`.
/// Replicates are drawn in classifier order from `rng`.
pub fn init_ensemble(
    labeled: &[LabeledExample],
    config: &TrainConfig,
    rng: &mut impl RngCore,
) -> Result<Initialization> {
    config.validate()?;
    let first = labeled.first().ok_or(Error::EmptyLabeled)?;
    let dim = first.features().len();
    for ex in labeled {
        check_dims(dim, ex.features().len())?;
    }
    let samples = (0..config.m)
        .map(|_| bootstrap_indices(labeled.len(), rng))
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<DenseVector> = samples
        .iter()
        .map(|indices| fit_regularized_logistic(labeled, indices, config))
        .collect();
    let warning = (!has_both_classes(labeled)).then_some(InitWarning::SingleClass);
    Ok(Initialization {
        model: EnsembleModel::new(weights)?,
        warning,
    })
}
