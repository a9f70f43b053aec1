//! Ensemble training: bootstrap initialization followed by gradient descent on
//! the accuracy-plus-diversity objective.

mod descent;
mod init;
mod objective;

pub use descent::{descend, Descent, StopReason};
pub use init::{init_ensemble, InitWarning, Initialization};
pub use objective::{
    diversity_loss, empirical_loss, loss_gradient, pair_diversity, resolve_selector, total_loss,
    DiversitySet, DiversitySetSelector, GradientSet, LossBreakdown,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{TrainConfig, Variant};
use crate::error::{Error, Result};
use crate::types::{EnsembleModel, TrainingData};

/// One descent stage of a training schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub selector: DiversitySetSelector,
    pub descent: Descent,
}

/// Everything produced by [`train_detailed`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub initial: Initialization,
    pub stages: Vec<Stage>,
}

impl TrainReport {
    pub fn model(&self) -> &EnsembleModel {
        self.stages
            .last()
            .map_or(&self.initial.model, |s| &s.descent.model)
    }

    pub fn into_model(self) -> EnsembleModel {
        match self.stages.into_iter().last() {
            Some(stage) => stage.descent.model,
            None => self.initial.model,
        }
    }
}

/// The descent schedule of a variant.
///
/// With `γ = 0` the objective does not depend on the diversity set, so the
/// second LCUD stage would only repeat the first one's objective; it is
/// skipped and all variants collapse to the same model.
pub fn schedule(variant: Variant, gamma: f64) -> Vec<DiversitySetSelector> {
    match variant {
        Variant::Lc => vec![DiversitySetSelector::Empty],
        Variant::Lcd => vec![DiversitySetSelector::LabeledFeatures],
        Variant::Lcud if gamma == 0.0 => vec![DiversitySetSelector::LabeledFeatures],
        Variant::Lcud => vec![
            DiversitySetSelector::LabeledFeatures,
            DiversitySetSelector::Unlabeled,
        ],
    }
}

fn check_data(data: &TrainingData, variant: Variant) -> Result<()> {
    if variant == Variant::Lcud && data.unlabeled().is_empty() {
        return Err(Error::EmptyUnlabeled);
    }
    Ok(())
}

/// Runs the descent stages of `config.variant` starting from an already
/// initialized ensemble.
pub fn refine(initial: &EnsembleModel, data: &TrainingData, config: &TrainConfig) -> Result<Vec<Stage>> {
    config.validate()?;
    check_data(data, config.variant)?;
    let labeled_features = data.labeled_features();
    let mut stages: Vec<Stage> = Vec::new();
    for selector in schedule(config.variant, config.gamma) {
        let start = stages.last().map_or(initial, |s| &s.descent.model);
        let set = resolve_selector(selector, data, &labeled_features);
        let descent = descend(start, data.labeled(), set, config)?;
        stages.push(Stage { selector, descent });
    }
    Ok(stages)
}

/// Initializes from `config.seed` and runs the variant's descent schedule,
/// keeping every intermediate result.
pub fn train_detailed(data: &TrainingData, config: &TrainConfig) -> Result<TrainReport> {
    config.validate()?;
    check_data(data, config.variant)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let initial = init_ensemble(data.labeled(), config, &mut rng)?;
    let stages = refine(&initial.model, data, config)?;
    Ok(TrainReport { initial, stages })
}

/// Trains an ensemble with the configured variant.
pub fn train(data: &TrainingData, config: &TrainConfig) -> Result<EnsembleModel> {
    train_detailed(data, config).map(TrainReport::into_model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{split_lut, two_gaussians, SplitSpec};

    fn data() -> TrainingData {
        let raw = two_gaussians(80, 3, 0.7, 4);
        split_lut(&raw, &SplitSpec { seed: 2, ..Default::default() })
            .unwrap()
            .training_data()
            .unwrap()
    }

    fn config(variant: Variant, gamma: f64) -> TrainConfig {
        TrainConfig { m: 5, gamma, variant, seed: 17, ..Default::default() }
    }

    #[test]
    fn variants_collapse_without_gamma() {
        let d = data();
        let lc = train(&d, &config(Variant::Lc, 0.0)).unwrap();
        let lcd = train(&d, &config(Variant::Lcd, 0.0)).unwrap();
        let lcud = train(&d, &config(Variant::Lcud, 0.0)).unwrap();
        assert_eq!(lc, lcd);
        assert_eq!(lc, lcud);
    }

    #[test]
    fn lcud_needs_unlabeled_data() {
        let d = data();
        let labeled_only = TrainingData::new(d.labeled().to_vec(), Vec::new()).unwrap();
        assert_eq!(
            train(&labeled_only, &config(Variant::Lcud, 1.0)).unwrap_err(),
            Error::EmptyUnlabeled
        );
        assert!(train(&labeled_only, &config(Variant::Lcd, 1.0)).is_ok());
    }

    #[test]
    fn lcud_on_duplicated_labeled_features_is_two_lcd_stages() {
        let d = data();
        let dup = TrainingData::new(d.labeled().to_vec(), d.labeled_features()).unwrap();
        let lcud = train(&dup, &config(Variant::Lcud, 1.0)).unwrap();
        let lcd = train(&dup, &config(Variant::Lcd, 1.0)).unwrap();
        let features = dup.labeled_features();
        let again = descend(&lcd, dup.labeled(), DiversitySet::Data(&features), &config(Variant::Lcd, 1.0))
            .unwrap()
            .model;
        assert_eq!(lcud, again);
    }

    #[test]
    fn training_is_deterministic() {
        let d = data();
        let a = train_detailed(&d, &config(Variant::Lcud, 1.0)).unwrap();
        let b = train_detailed(&d, &config(Variant::Lcud, 1.0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.stages.len(), 2);
        assert_eq!(a.stages[1].selector, DiversitySetSelector::Unlabeled);
    }

    #[test]
    fn lcud_second_stage_never_raises_loss() {
        let d = data();
        let report = train_detailed(&d, &config(Variant::Lcud, 1.0)).unwrap();
        let stage2 = &report.stages[1].descent;
        assert!(stage2.final_loss().v_total <= stage2.trace[0].v_total);
    }
}
