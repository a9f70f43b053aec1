//! Weighted-vote prediction and accuracy.

use crate::error::{Error, Result};
use crate::logistic::output_from_score;
use crate::types::{check_dims, dot_slices, DenseVector, EnsembleModel, Label, LabeledExample};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: Label,
    /// Sum of the members' confidences.
    pub margin: f64,
}

fn member_outputs<'a>(model: &'a EnsembleModel, z: &'a DenseVector) -> impl Iterator<Item = f64> + 'a {
    model
        .weights()
        .iter()
        .map(move |w| output_from_score(dot_slices(w.as_slice(), z.as_slice())))
}

/// Sign of the summed member confidences, with a zero margin voting `+1`.
pub fn predict(model: &EnsembleModel, z: &DenseVector) -> Result<Prediction> {
    check_dims(model.dimension(), z.len())?;
    let margin: f64 = member_outputs(model, z).sum();
    Ok(Prediction {
        label: Label::from_score(margin),
        margin,
    })
}

/// Majority of the members' hard votes. Diagnostic only; evaluation uses
/// [`predict`].
pub fn predict_unweighted(model: &EnsembleModel, z: &DenseVector) -> Result<Label> {
    check_dims(model.dimension(), z.len())?;
    let votes: f64 = member_outputs(model, z)
        .map(|f| Label::from_score(f).value())
        .sum();
    Ok(Label::from_score(votes))
}

fn count_correct(model: &EnsembleModel, test: &[LabeledExample]) -> Result<usize> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let mut correct = 0;
    for ex in test {
        if predict(model, ex.features())?.label == ex.label() {
            correct += 1;
        }
    }
    Ok(correct)
}

/// Fraction of `test` predicted correctly.
pub fn accuracy(model: &EnsembleModel, test: &[LabeledExample]) -> Result<f64> {
    Ok(count_correct(model, test)? as f64 / test.len() as f64)
}

pub fn error_rate(model: &EnsembleModel, test: &[LabeledExample]) -> Result<f64> {
    Ok((test.len() - count_correct(model, test)?) as f64 / test.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::augment_bias;
    use proptest::prelude::*;

    fn v(values: &[f64]) -> DenseVector {
        DenseVector::new(values.to_vec()).unwrap()
    }

    /// Weight on the bias slot giving `f = target` at any `x` with zero
    /// first feature.
    fn with_output(target: f64) -> DenseVector {
        let g: f64 = (target + 1.0) / 2.0;
        v(&[0.0, (g / (1.0 - g)).ln()])
    }

    #[test]
    fn zero_model_predicts_positive() {
        let model = EnsembleModel::zeros(3, 2).unwrap();
        let p = predict(&model, &augment_bias(&[5.0]).unwrap()).unwrap();
        assert_eq!(p.margin, 0.0);
        assert_eq!(p.label, Label::Positive);
    }

    #[test]
    fn margin_examples() {
        let z = augment_bias(&[0.0]).unwrap();
        let model = EnsembleModel::new(vec![with_output(0.9), with_output(-0.1)]).unwrap();
        let p = predict(&model, &z).unwrap();
        assert!((p.margin - 0.8).abs() < 1e-12);
        assert_eq!(p.label, Label::Positive);

        let model =
            EnsembleModel::new(vec![with_output(-0.2), with_output(-0.2), with_output(0.3)]).unwrap();
        let p = predict(&model, &z).unwrap();
        assert!((p.margin + 0.1).abs() < 1e-12);
        assert_eq!(p.label, Label::Negative);
        // hard votes: two negatives outvote one positive as well
        assert_eq!(predict_unweighted(&model, &z).unwrap(), Label::Negative);
    }

    #[test]
    fn accuracy_examples() {
        let model = EnsembleModel::new(vec![v(&[1.0, 0.0]), v(&[2.0, 0.0])]).unwrap();
        let test: Vec<LabeledExample> = [(1.0, Label::Positive), (-1.0, Label::Negative)]
            .iter()
            .map(|(x, y)| LabeledExample::from_raw(&[*x], *y).unwrap())
            .collect();
        assert_eq!(accuracy(&model, &test).unwrap(), 1.0);

        let zero = EnsembleModel::zeros(2, 2).unwrap();
        let labels = [1, 1, 1, -1, -1];
        let set: Vec<LabeledExample> = labels
            .iter()
            .enumerate()
            .map(|(i, &y)| LabeledExample::from_raw(&[i as f64], Label::try_from(y).unwrap()).unwrap())
            .collect();
        assert_eq!(accuracy(&zero, &set).unwrap(), 0.6);

        let wrong = vec![LabeledExample::from_raw(&[3.0], Label::Negative).unwrap()];
        assert_eq!(accuracy(&model, &wrong).unwrap(), 0.0);
        assert_eq!(accuracy(&model, &[]).unwrap_err(), Error::EmptyTestSet);
        assert!(predict(&model, &v(&[1.0])).is_err());
    }

    proptest! {
        #[test]
        fn accuracy_and_error_sum_to_one(
            w in prop::collection::vec(-3.0f64..3.0, 6),
            xs in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0, any::<bool>()), 1..20),
        ) {
            let model = EnsembleModel::new(vec![v(&w[..3]), v(&w[3..])]).unwrap();
            let test: Vec<LabeledExample> = xs
                .iter()
                .map(|(a, b, pos)| {
                    let y = if *pos { Label::Positive } else { Label::Negative };
                    LabeledExample::from_raw(&[*a, *b], y).unwrap()
                })
                .collect();
            let total = accuracy(&model, &test).unwrap() + error_rate(&model, &test).unwrap();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        #[test]
        fn label_is_invariant_to_positive_scaling(
            outputs in prop::collection::vec(-0.99f64..0.99, 2..6),
            scale in 0.01f64..1.0,
        ) {
            let z = augment_bias(&[0.0]).unwrap();
            let base = EnsembleModel::new(outputs.iter().map(|&f| with_output(f)).collect()).unwrap();
            let scaled = EnsembleModel::new(outputs.iter().map(|&f| with_output(f * scale)).collect()).unwrap();
            let a = predict(&base, &z).unwrap();
            let b = predict(&scaled, &z).unwrap();
            // skip margins so close to zero that rounding decides the sign
            prop_assume!(a.margin.abs() > 1e-9);
            prop_assert_eq!(a.label, b.label);
        }
    }
}
