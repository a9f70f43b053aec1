use serde::Serialize;

use crate::config::TrainConfig;
use crate::error::{Error, Result};
use crate::types::{DenseVector, EnsembleModel, LabeledExample};

use super::objective::{DiversitySet, LossBreakdown, Objective};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    /// `max_steps` updates were all accepted.
    StepLimit,
    /// An update failed to strictly lower `V`; it was rolled back.
    LossStalled,
    /// An update failed to strictly lower `V_div`; it was rolled back.
    DiversityStalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Descent {
    pub model: EnsembleModel,
    pub accepted_steps: usize,
    /// Loss of the starting model followed by the loss after every accepted
    /// step.
    pub trace: Vec<LossBreakdown>,
    pub stop: StopReason,
}

impl Descent {
    pub fn final_loss(&self) -> LossBreakdown {
        *self.trace.last().expect("trace holds the starting loss")
    }
}

/// Fixed-rate gradient descent on `V_emp + γ·V_div`, updating every classifier
/// simultaneously.
///
/// Stops after `max_steps` accepted updates, or at the first update after
/// which `V` does not strictly decrease, or (when the diversity term is
/// active) `V_div` does not strictly decrease. That last update is discarded.
pub fn descend(
    model: &EnsembleModel,
    labeled: &[LabeledExample],
    set: DiversitySet<'_>,
    config: &TrainConfig,
) -> Result<Descent> {
    config.validate()?;
    let objective = Objective::new(model.dimension(), labeled, set, config.gamma)?;
    let track_diversity = objective.diversity_active();

    let mut weights: Vec<DenseVector> = model.weights().to_vec();
    let mut current = objective.loss(&weights);
    if !current.is_finite() {
        return Err(Error::NonFiniteLoss { step: 0 });
    }
    let mut trace = vec![current];
    let mut stop = StopReason::StepLimit;

    for step in 1..=config.max_steps {
        let grads = objective.gradient(&weights);
        let candidate: Vec<DenseVector> = weights
            .iter()
            .zip(&grads.per_classifier)
            .map(|(w, g)| w.step_against(g, config.learning_rate))
            .collect();
        let next = objective.loss(&candidate);
        if !next.is_finite() || !candidate.iter().all(DenseVector::all_finite) {
            return Err(Error::NonFiniteLoss { step });
        }
        if next.v_total >= current.v_total {
            stop = StopReason::LossStalled;
            break;
        }
        if track_diversity && next.v_div >= current.v_div {
            stop = StopReason::DiversityStalled;
            break;
        }
        weights = candidate;
        current = next;
        trace.push(current);
    }

    Ok(Descent {
        model: EnsembleModel::from_weights_unchecked(weights),
        accepted_steps: trace.len() - 1,
        trace,
        stop,
    })
}
