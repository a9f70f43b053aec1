//! The composite objective `V = V_emp + γ·V_div` and its gradient.
//!
//! All functions take the ensemble as a slice of weight vectors so that
//! single-classifier losses can be evaluated too; the diversity term itself
//! needs at least two classifiers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logistic::{blh_coefficient, blh_from_score, output_from_score};
use crate::types::{check_dims, dot_slices, DenseVector, LabeledExample, TrainingData};

/// Which set to measure diversity on, before it is bound to data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiversitySetSelector {
    Empty,
    LabeledFeatures,
    Unlabeled,
}

/// The diversity set `D` bound to concrete feature vectors.
#[derive(Debug, Clone, Copy)]
pub enum DiversitySet<'a> {
    Empty,
    Data(&'a [DenseVector]),
}

impl<'a> DiversitySet<'a> {
    pub fn is_empty(&self) -> bool {
        matches!(self, DiversitySet::Empty)
    }
}

/// Resolves a selector against training data. `labeled_features` must be the
/// label-stripped copy of `data.labeled()`.
pub fn resolve_selector<'a>(
    selector: DiversitySetSelector,
    data: &'a TrainingData,
    labeled_features: &'a [DenseVector],
) -> DiversitySet<'a> {
    match selector {
        DiversitySetSelector::Empty => DiversitySet::Empty,
        DiversitySetSelector::LabeledFeatures => DiversitySet::Data(labeled_features),
        DiversitySetSelector::Unlabeled => DiversitySet::Data(data.unlabeled()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossBreakdown {
    pub v_total: f64,
    pub v_emp: f64,
    pub v_div: f64,
}

impl LossBreakdown {
    pub fn is_finite(&self) -> bool {
        self.v_total.is_finite() && self.v_emp.is_finite() && self.v_div.is_finite()
    }
}

/// `∂V/∂w_k` for every classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSet {
    pub per_classifier: Vec<DenseVector>,
}

/// The diversity term contributes to the optimization only when it is both
/// weighted and measured on some data.
pub(crate) fn diversity_active(set: &DiversitySet<'_>, gamma: f64) -> bool {
    gamma != 0.0 && !set.is_empty()
}

fn check_weights(weights: &[DenseVector]) -> Result<usize> {
    let first = weights.first().ok_or(Error::TooFewClassifiers(0))?;
    let dim = first.len();
    for w in weights {
        check_dims(dim, w.len())?;
    }
    Ok(dim)
}

fn check_set(dim: usize, xs: &[DenseVector]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::EmptyDiversitySet);
    }
    xs.iter().try_for_each(|x| check_dims(dim, x.len()))
}

fn check_labeled(dim: usize, labeled: &[LabeledExample]) -> Result<()> {
    if labeled.is_empty() {
        return Err(Error::EmptyLabeled);
    }
    labeled
        .iter()
        .try_for_each(|ex| check_dims(dim, ex.features().len()))
}

/// Row `k` holds `f_k(x)` for every `x` in `xs`.
fn output_matrix(weights: &[DenseVector], xs: &[DenseVector]) -> Vec<Vec<f64>> {
    weights
        .iter()
        .map(|w| {
            xs.iter()
                .map(|x| output_from_score(dot_slices(w.as_slice(), x.as_slice())))
                .collect()
        })
        .collect()
}

fn mean_product(a: &[f64], b: &[f64]) -> f64 {
    let sum: f64 = a.iter().zip(b).map(|(p, q)| p * q).sum();
    sum / a.len() as f64
}

/// Mean negative binomial log-likelihood over all classifiers and labeled
/// examples.
pub fn empirical_loss(weights: &[DenseVector], labeled: &[LabeledExample]) -> Result<f64> {
    let dim = check_weights(weights)?;
    check_labeled(dim, labeled)?;
    Ok(empirical_loss_unchecked(weights, labeled))
}

fn empirical_loss_unchecked(weights: &[DenseVector], labeled: &[LabeledExample]) -> f64 {
    let mut total = 0.0;
    for w in weights {
        for ex in labeled {
            let s = dot_slices(w.as_slice(), ex.features().as_slice());
            total -= blh_from_score(s, ex.label());
        }
    }
    total / (weights.len() * labeled.len()) as f64
}

/// Mean product of the two classifiers' confidences over `xs`. Larger means
/// more agreement.
pub fn pair_diversity(w_p: &DenseVector, w_q: &DenseVector, xs: &[DenseVector]) -> Result<f64> {
    check_dims(w_p.len(), w_q.len())?;
    check_set(w_p.len(), xs)?;
    let rows = output_matrix(&[w_p.clone(), w_q.clone()], xs);
    Ok(mean_product(&rows[0], &rows[1]))
}

/// Average of [`pair_diversity`] over all unordered classifier pairs; zero
/// for the empty set.
pub fn diversity_loss(weights: &[DenseVector], set: DiversitySet<'_>) -> Result<f64> {
    let m = weights.len();
    if m < 2 {
        return Err(Error::TooFewClassifiers(m));
    }
    let dim = check_weights(weights)?;
    match set {
        DiversitySet::Empty => Ok(0.0),
        DiversitySet::Data(xs) => {
            check_set(dim, xs)?;
            Ok(diversity_loss_unchecked(&output_matrix(weights, xs)))
        }
    }
}

fn diversity_loss_unchecked(outputs: &[Vec<f64>]) -> f64 {
    let m = outputs.len();
    let mut sum = 0.0;
    for p in 0..m {
        for q in p + 1..m {
            sum += mean_product(&outputs[p], &outputs[q]);
        }
    }
    2.0 / (m * (m - 1)) as f64 * sum
}

/// `V_emp`, `V_div` and `V = V_emp + γ·V_div`.
pub fn total_loss(
    weights: &[DenseVector],
    labeled: &[LabeledExample],
    set: DiversitySet<'_>,
    gamma: f64,
) -> Result<LossBreakdown> {
    let v_emp = empirical_loss(weights, labeled)?;
    let v_div = diversity_loss(weights, set)?;
    Ok(LossBreakdown {
        v_total: v_emp + gamma * v_div,
        v_emp,
        v_div,
    })
}

/// Analytic gradient of [`total_loss`] with respect to each weight vector.
pub fn loss_gradient(
    weights: &[DenseVector],
    labeled: &[LabeledExample],
    set: DiversitySet<'_>,
    gamma: f64,
) -> Result<GradientSet> {
    let m = weights.len();
    if m < 2 {
        return Err(Error::TooFewClassifiers(m));
    }
    let dim = check_weights(weights)?;
    check_labeled(dim, labeled)?;
    if let DiversitySet::Data(xs) = set {
        check_set(dim, xs)?;
    }
    Ok(loss_gradient_unchecked(weights, labeled, set, gamma))
}

fn loss_gradient_unchecked(
    weights: &[DenseVector],
    labeled: &[LabeledExample],
    set: DiversitySet<'_>,
    gamma: f64,
) -> GradientSet {
    let m = weights.len();
    let dim = weights[0].len();
    let emp_scale = 1.0 / (m * labeled.len()) as f64;

    let mut grads: Vec<Vec<f64>> = weights
        .iter()
        .map(|w| {
            let mut g = vec![0.0; dim];
            for ex in labeled {
                let x = ex.features().as_slice();
                let c = blh_coefficient(dot_slices(w.as_slice(), x), ex.label());
                for (gj, xj) in g.iter_mut().zip(x) {
                    *gj -= emp_scale * c * xj;
                }
            }
            g
        })
        .collect();

    if let (true, DiversitySet::Data(xs)) = (diversity_active(&set, gamma), set) {
        let outputs = output_matrix(weights, xs);
        // Σ_{k'≠k} f_{k'}(x) = S(x) - f_k(x)
        let column_sums: Vec<f64> = (0..xs.len())
            .map(|j| outputs.iter().map(|row| row[j]).sum())
            .collect();
        let scale = 2.0 * gamma / (m * (m - 1)) as f64 / (2.0 * xs.len() as f64);
        for (k, g) in grads.iter_mut().enumerate() {
            for (j, x) in xs.iter().enumerate() {
                let fk = outputs[k][j];
                let others = column_sums[j] - fk;
                let c = scale * others * (1.0 - fk * fk);
                for (gj, xj) in g.iter_mut().zip(x.as_slice()) {
                    *gj += c * xj;
                }
            }
        }
    }

    GradientSet {
        per_classifier: grads
            .into_iter()
            .map(DenseVector::from_raw_unchecked)
            .collect(),
    }
}

/// Loss and gradient evaluation bound to one labeled set, diversity set and
/// `γ`, with inputs validated once up front.
pub(crate) struct Objective<'a> {
    labeled: &'a [LabeledExample],
    set: DiversitySet<'a>,
    gamma: f64,
}

impl<'a> Objective<'a> {
    pub(crate) fn new(
        dim: usize,
        labeled: &'a [LabeledExample],
        set: DiversitySet<'a>,
        gamma: f64,
    ) -> Result<Self> {
        check_labeled(dim, labeled)?;
        if let DiversitySet::Data(xs) = set {
            check_set(dim, xs)?;
        }
        Ok(Objective { labeled, set, gamma })
    }

    pub(crate) fn diversity_active(&self) -> bool {
        diversity_active(&self.set, self.gamma)
    }

    pub(crate) fn loss(&self, weights: &[DenseVector]) -> LossBreakdown {
        let v_emp = empirical_loss_unchecked(weights, self.labeled);
        let v_div = match self.set {
            DiversitySet::Empty => 0.0,
            DiversitySet::Data(xs) => diversity_loss_unchecked(&output_matrix(weights, xs)),
        };
        LossBreakdown {
            v_total: v_emp + self.gamma * v_div,
            v_emp,
            v_div,
        }
    }

    pub(crate) fn gradient(&self, weights: &[DenseVector]) -> GradientSet {
        loss_gradient_unchecked(weights, self.labeled, self.set, self.gamma)
    }
}
