//! Logistic base learner: output transform, binomial log-likelihood and its
//! gradient.
//!
//! The scalar helpers work on the score `s = w·x`; the public functions take
//! the weight and (bias-augmented) feature vectors and check dimensions.

use crate::error::Result;
use crate::types::{check_dims, dot_slices, DenseVector, Label};

/// Floor applied to the logistic probability on both sides.
pub const PROBABILITY_FLOOR: f64 = 1e-15;

/// `ln(1 + e^z)` without overflow.
#[inline]
pub(crate) fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Clamped `1 / (1 + e^{-s})`.
#[inline]
pub(crate) fn logistic_from_score(score: f64) -> f64 {
    let g = if score >= 0.0 {
        1.0 / (1.0 + (-score).exp())
    } else {
        let e = score.exp();
        e / (1.0 + e)
    };
    g.clamp(PROBABILITY_FLOOR, 1.0 - PROBABILITY_FLOOR)
}

/// Base output `f = 2g - 1` in `(-1, 1)`.
#[inline]
pub(crate) fn output_from_score(score: f64) -> f64 {
    2.0 * logistic_from_score(score) - 1.0
}

#[inline]
pub(crate) fn blh_from_score(score: f64, label: Label) -> f64 {
    let y = label.value();
    -((1.0 + y) / 2.0) * softplus(-score) - ((1.0 - y) / 2.0) * softplus(score)
}

/// Scalar `c` with `∂BLH/∂w = c·x`.
///
/// `c = (1+y)(1-f)/4 - (1-y)(1+f)/4`; `(1-f)/2` and `(1+f)/2` are evaluated
/// as `1-g` and `g` straight from the score to avoid cancellation near
/// saturation.
#[inline]
pub(crate) fn blh_coefficient(score: f64, label: Label) -> f64 {
    let y = label.value();
    let g = logistic_from_score(score);
    let one_minus_g = logistic_from_score(-score);
    (1.0 + y) * one_minus_g / 2.0 - (1.0 - y) * g / 2.0
}

fn score(w: &DenseVector, x: &DenseVector) -> Result<f64> {
    check_dims(w.len(), x.len())?;
    Ok(dot_slices(w.as_slice(), x.as_slice()))
}

/// Logistic probability `g(x) = 1/(1+e^{-w·x})`, clamped to
/// `[1e-15, 1 - 1e-15]`.
pub fn logistic_g(w: &DenseVector, x: &DenseVector) -> Result<f64> {
    score(w, x).map(logistic_from_score)
}

/// Confidence `f(x) = 2·g(x) - 1`.
pub fn base_output_f(w: &DenseVector, x: &DenseVector) -> Result<f64> {
    score(w, x).map(output_from_score)
}

/// Binomial log-likelihood of `x` having label `y`. Always `<= 0`.
pub fn blh(w: &DenseVector, x: &DenseVector, y: Label) -> Result<f64> {
    score(w, x).map(|s| blh_from_score(s, y))
}

/// Gradient of [`blh`] with respect to `w`.
pub fn blh_gradient(w: &DenseVector, x: &DenseVector, y: Label) -> Result<DenseVector> {
    let c = blh_coefficient(score(w, x)?, y);
    Ok(DenseVector::from_raw_unchecked(
        x.iter().map(|xi| c * xi).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(values: &[f64]) -> DenseVector {
        DenseVector::new(values.to_vec()).unwrap()
    }

    const LN_HALF: f64 = -std::f64::consts::LN_2;

    #[test]
    fn logistic_g_examples() {
        let x = v(&[3.0, -2.0, 1.0]);
        assert_eq!(logistic_g(&DenseVector::zeros(3), &x).unwrap(), 0.5);
        let g = logistic_g(&v(&[50.0]), &v(&[1.0])).unwrap();
        assert!(g <= 1.0 - PROBABILITY_FLOOR && g > 1.0 - 1e-14);
        assert_eq!(logistic_g(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(), 0.5);
    }

    #[test]
    fn base_output_examples() {
        assert_eq!(base_output_f(&v(&[0.0]), &v(&[4.0])).unwrap(), 0.0);
        let f = base_output_f(&v(&[3f64.ln()]), &v(&[1.0])).unwrap();
        assert!((f - 0.5).abs() < 1e-15);
        let f = base_output_f(&v(&[60.0]), &v(&[1.0])).unwrap();
        assert!(f < 1.0 && f > 1.0 - 1e-13);
    }

    #[test]
    fn blh_examples() {
        let zero = v(&[0.0, 0.0]);
        let x = v(&[1.0, 1.0]);
        assert!((blh(&zero, &x, Label::Positive).unwrap() - LN_HALF).abs() < 1e-15);
        assert!((blh(&zero, &x, Label::Negative).unwrap() - LN_HALF).abs() < 1e-15);
        let w = v(&[3f64.ln()]);
        let b = blh(&w, &v(&[1.0]), Label::Positive).unwrap();
        assert!((b - 0.75f64.ln()).abs() < 1e-15);
        assert!((b + 0.287682).abs() < 1e-6);
    }

    #[test]
    fn blh_gradient_examples() {
        let zero = v(&[0.0, 0.0]);
        let x = v(&[1.0, 1.0]);
        assert_eq!(
            blh_gradient(&zero, &x, Label::Positive).unwrap().as_slice(),
            &[0.5, 0.5]
        );
        assert_eq!(
            blh_gradient(&zero, &x, Label::Negative).unwrap().as_slice(),
            &[-0.5, -0.5]
        );
        let g = blh_gradient(&v(&[40.0, 0.0]), &x, Label::Positive).unwrap();
        assert!(g.iter().all(|c| c.abs() < 1e-14));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(logistic_g(&v(&[1.0]), &v(&[1.0, 1.0])).is_err());
        assert!(blh(&v(&[1.0]), &v(&[1.0, 1.0]), Label::Positive).is_err());
        assert!(blh_gradient(&v(&[1.0]), &v(&[1.0, 1.0]), Label::Positive).is_err());
    }

    #[test]
    fn stable_for_large_scores() {
        for s in [-700.0, -300.0, 300.0, 700.0] {
            let w = v(&[s]);
            let x = v(&[1.0]);
            for y in [Label::Positive, Label::Negative] {
                let b = blh(&w, &x, y).unwrap();
                assert!(b.is_finite() && b <= 0.0);
                assert!(blh_gradient(&w, &x, y).unwrap().all_finite());
            }
        }
        assert!((blh(&v(&[700.0]), &v(&[1.0]), Label::Negative).unwrap() + 700.0).abs() < 1e-9);
    }

    // Central differences of blh against the analytic gradient.
    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 1e-5;
        for _ in 0..100 {
            let d = rng.gen_range(1..=6);
            let w: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..=2.0)).collect();
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..=2.0)).collect();
            let y = if rng.gen_bool(0.5) { Label::Positive } else { Label::Negative };
            let x = v(&x);
            let analytic = blh_gradient(&v(&w), &x, y).unwrap();
            for j in 0..d {
                let mut plus = w.clone();
                let mut minus = w.clone();
                plus[j] += h;
                minus[j] -= h;
                let numeric = (blh(&v(&plus), &x, y).unwrap() - blh(&v(&minus), &x, y).unwrap())
                    / (2.0 * h);
                let diff = (analytic[j] - numeric).abs();
                let scale = analytic[j].abs().max(numeric.abs());
                assert!(
                    diff <= 1e-8 || diff <= 1e-4 * scale,
                    "component {j}: analytic {} vs numeric {numeric}",
                    analytic[j]
                );
            }
        }
    }

    proptest! {
        #[test]
        fn outputs_stay_in_range(s in -800.0f64..800.0) {
            let f = output_from_score(s);
            prop_assert!(f > -1.0 && f < 1.0);
            prop_assert!(blh_from_score(s, Label::Positive) <= 0.0);
            prop_assert!(blh_from_score(s, Label::Negative) <= 0.0);
            let g = logistic_from_score(s);
            prop_assert!(((f + 1.0) / 2.0 - g).abs() < 1e-15);
        }

        #[test]
        fn blh_label_symmetry(s in -50.0f64..50.0) {
            prop_assert_eq!(blh_from_score(s, Label::Positive), blh_from_score(-s, Label::Negative));
        }
    }
}
