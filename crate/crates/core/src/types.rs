//! Shared numeric and dataset types.
//!
//! Feature vectors are bias-augmented when they enter the system: a trailing
//! constant `1` is appended so the bias lives in the last weight component and
//! every formula downstream is a plain inner product.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

/// A fixed-length vector of finite `f64` values.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(DenseVector(values))
    }

    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "zero-length vector");
        DenseVector(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn dot(&self, other: &DenseVector) -> Result<f64> {
        check_dims(self.len(), other.len())?;
        Ok(dot_slices(&self.0, &other.0))
    }

    /// `self - step * direction`, used by the descent loops.
    pub(crate) fn step_against(&self, direction: &DenseVector, step: f64) -> DenseVector {
        debug_assert_eq!(self.len(), direction.len());
        DenseVector(
            self.0
                .iter()
                .zip(&direction.0)
                .map(|(w, g)| w - step * g)
                .collect(),
        )
    }

    pub(crate) fn all_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub(crate) fn from_raw_unchecked(values: Vec<f64>) -> Self {
        DenseVector(values)
    }
}

impl Index<usize> for DenseVector {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.0[index]
    }
}

impl AsRef<[f64]> for DenseVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn dot_slices(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Inner product of two equal-length vectors.
pub fn dot(a: &DenseVector, b: &DenseVector) -> Result<f64> {
    a.dot(b)
}

/// Appends the bias constant `1` to a raw feature vector.
pub fn augment_bias(raw: &[f64]) -> Result<DenseVector> {
    if let Some(index) = raw.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let mut values = Vec::with_capacity(raw.len() + 1);
    values.extend_from_slice(raw);
    values.push(1.0);
    Ok(DenseVector(values))
}

/// Binary class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    /// The label as `-1.0` or `+1.0`.
    pub fn value(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }

    /// Sign rule used for every vote in the crate: `sign(0) = +1`.
    pub fn from_score(score: f64) -> Label {
        if score >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

impl TryFrom<i32> for Label {
    type Error = Error;

    fn try_from(value: i32) -> Result<Label> {
        match value {
            1 => Ok(Label::Positive),
            -1 => Ok(Label::Negative),
            other => Err(Error::InvalidLabel(other.to_string())),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Positive => f.write_str("+1"),
            Label::Negative => f.write_str("-1"),
        }
    }
}

/// A bias-augmented feature vector with its label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledExample {
    features: DenseVector,
    label: Label,
}

impl LabeledExample {
    pub fn new(features: DenseVector, label: Label) -> Result<Self> {
        let last = features[features.len() - 1];
        if last != 1.0 {
            return Err(Error::MissingBias { found: last });
        }
        Ok(LabeledExample { features, label })
    }

    /// Builds an example from raw (unaugmented) features.
    pub fn from_raw(raw: &[f64], label: Label) -> Result<Self> {
        Ok(LabeledExample {
            features: augment_bias(raw)?,
            label,
        })
    }

    pub fn features(&self) -> &DenseVector {
        &self.features
    }

    pub fn label(&self) -> Label {
        self.label
    }
}

/// Labeled set `L`, unlabeled set `U`, and the shared augmented dimension.
#[derive(Debug, Clone)]
pub struct TrainingData {
    labeled: Vec<LabeledExample>,
    unlabeled: Vec<DenseVector>,
    dimension: usize,
}

impl TrainingData {
    pub fn new(labeled: Vec<LabeledExample>, unlabeled: Vec<DenseVector>) -> Result<Self> {
        let first = labeled.first().ok_or(Error::EmptyLabeled)?;
        let dimension = first.features().len();
        for ex in &labeled {
            check_dims(dimension, ex.features().len())?;
        }
        for x in &unlabeled {
            check_dims(dimension, x.len())?;
            let last = x[x.len() - 1];
            if last != 1.0 {
                return Err(Error::MissingBias { found: last });
            }
        }
        Ok(TrainingData {
            labeled,
            unlabeled,
            dimension,
        })
    }

    pub fn labeled(&self) -> &[LabeledExample] {
        &self.labeled
    }

    pub fn unlabeled(&self) -> &[DenseVector] {
        &self.unlabeled
    }

    /// Augmented dimension (raw features + 1).
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// The labeled features with labels stripped.
    pub fn labeled_features(&self) -> Vec<DenseVector> {
        self.labeled.iter().map(|ex| ex.features().clone()).collect()
    }

    pub fn has_both_classes(&self) -> bool {
        has_both_classes(&self.labeled)
    }
}

pub(crate) fn has_both_classes(examples: &[LabeledExample]) -> bool {
    let pos = examples.iter().any(|e| e.label() == Label::Positive);
    let neg = examples.iter().any(|e| e.label() == Label::Negative);
    pos && neg
}

/// The `m` weight vectors of a trained ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleModel {
    weights: Vec<DenseVector>,
}

impl EnsembleModel {
    pub fn new(weights: Vec<DenseVector>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::TooFewClassifiers(weights.len()));
        }
        let dim = weights[0].len();
        for w in &weights {
            check_dims(dim, w.len())?;
            if !w.all_finite() {
                return Err(Error::NonFinite { index: 0 });
            }
        }
        Ok(EnsembleModel { weights })
    }

    pub fn zeros(m: usize, dimension: usize) -> Result<Self> {
        EnsembleModel::new(vec![DenseVector::zeros(dimension); m])
    }

    pub fn weights(&self) -> &[DenseVector] {
        &self.weights
    }

    /// Number of base classifiers.
    pub fn size(&self) -> usize {
        self.weights.len()
    }

    /// Augmented dimension of every weight vector.
    pub fn dimension(&self) -> usize {
        self.weights[0].len()
    }

    pub(crate) fn from_weights_unchecked(weights: Vec<DenseVector>) -> Self {
        EnsembleModel { weights }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(values: &[f64]) -> DenseVector {
        DenseVector::new(values.to_vec()).unwrap()
    }

    #[test]
    fn dot_examples() {
        assert_eq!(dot(&v(&[1.0, 2.0]), &v(&[3.0, 4.0])).unwrap(), 11.0);
        assert_eq!(dot(&v(&[0.0, 0.0]), &v(&[5.0, 7.0])).unwrap(), 0.0);
        assert_eq!(dot(&v(&[1.0]), &v(&[1.0])).unwrap(), 1.0);
    }

    #[test]
    fn dot_rejects_mismatched_lengths() {
        let err = dot(&v(&[1.0, 2.0]), &v(&[1.0])).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn augment_bias_examples() {
        assert_eq!(augment_bias(&[2.5]).unwrap().as_slice(), &[2.5, 1.0]);
        assert_eq!(augment_bias(&[]).unwrap().as_slice(), &[1.0]);
        assert_eq!(
            augment_bias(&[1.0, 2.0, 3.0]).unwrap().as_slice(),
            &[1.0, 2.0, 3.0, 1.0]
        );
    }

    #[test]
    fn augment_bias_rejects_non_finite() {
        assert_eq!(
            augment_bias(&[1.0, f64::NAN]).unwrap_err(),
            Error::NonFinite { index: 1 }
        );
        assert!(DenseVector::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn labeled_example_requires_bias() {
        assert!(LabeledExample::new(v(&[1.0, 2.0]), Label::Positive).is_err());
        assert!(LabeledExample::new(v(&[1.0, 1.0]), Label::Positive).is_ok());
    }

    #[test]
    fn ensemble_needs_two_members() {
        assert_eq!(
            EnsembleModel::zeros(1, 3).unwrap_err(),
            Error::TooFewClassifiers(1)
        );
        assert_eq!(EnsembleModel::zeros(2, 3).unwrap().size(), 2);
    }

    #[test]
    fn training_data_checks_dimensions() {
        let l = vec![LabeledExample::from_raw(&[1.0], Label::Positive).unwrap()];
        let u = vec![augment_bias(&[1.0, 2.0]).unwrap()];
        assert!(TrainingData::new(l.clone(), u).is_err());
        assert!(TrainingData::new(Vec::new(), Vec::new()).is_err());
        let data = TrainingData::new(l, vec![augment_bias(&[3.0]).unwrap()]).unwrap();
        assert_eq!(data.dimension(), 2);
        assert_eq!(data.labeled_features()[0].as_slice(), &[1.0, 1.0]);
    }

    proptest! {
        #[test]
        fn augment_appends_single_one(raw in prop::collection::vec(-1e6f64..1e6, 0..8)) {
            let x = augment_bias(&raw).unwrap();
            prop_assert_eq!(x.len(), raw.len() + 1);
            prop_assert_eq!(x[raw.len()], 1.0);
            prop_assert_eq!(&x.as_slice()[..raw.len()], raw.as_slice());
        }

        #[test]
        fn dot_is_symmetric(pairs in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..10)) {
            let a = DenseVector::new(pairs.iter().map(|p| p.0).collect()).unwrap();
            let b = DenseVector::new(pairs.iter().map(|p| p.1).collect()).unwrap();
            prop_assert_eq!(a.dot(&b).unwrap(), b.dot(&a).unwrap());
        }
    }
}
