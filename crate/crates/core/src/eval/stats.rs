//! Student-t tail probabilities and the paired t-test.

use serde::Serialize;
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Two-tailed p-value `P(|T| >= |t|)` for Student's t with `df` degrees of
/// freedom, via `I_{df/(df+t²)}(df/2, 1/2)`.
pub fn t_distribution_p(t: f64, df: u32) -> f64 {
    assert!(df >= 1, "degrees of freedom must be positive");
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let df = f64::from(df);
    let x = df / (df + t * t);
    beta_reg(df / 2.0, 0.5, x).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    Win,
    Tie,
    Loss,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Win => "win",
            Outcome::Tie => "tie",
            Outcome::Loss => "loss",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonVerdict {
    pub outcome: Outcome,
    pub t_statistic: f64,
    pub p_value: f64,
    /// Mean of `a_i - b_i`.
    pub mean_difference: f64,
    /// Sample standard deviation of `a_i - b_i`.
    pub sd_difference: f64,
}

/// Paired two-tailed t-test of `a` against `b`.
///
/// `Win`/`Loss` when `p <= alpha` and the mean difference is
/// positive/negative. Zero-variance differences are decided by the sign of
/// the mean alone.
pub fn paired_t_test(a: &[f64], b: &[f64], alpha: f64) -> Result<ComparisonVerdict> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let nf = n as f64;
    let mean = diffs.iter().sum::<f64>() / nf;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    let sd = var.sqrt();

    let by_sign = |mean: f64| {
        if mean > 0.0 {
            Outcome::Win
        } else if mean < 0.0 {
            Outcome::Loss
        } else {
            Outcome::Tie
        }
    };

    if sd == 0.0 {
        let outcome = by_sign(mean);
        let (t, p) = match outcome {
            Outcome::Tie => (0.0, 1.0),
            _ => (mean.signum() * f64::INFINITY, 0.0),
        };
        return Ok(ComparisonVerdict {
            outcome,
            t_statistic: t,
            p_value: p,
            mean_difference: mean,
            sd_difference: 0.0,
        });
    }

    let t = mean / (sd / nf.sqrt());
    let p = t_distribution_p(t, (n - 1) as u32);
    let outcome = if p <= alpha { by_sign(mean) } else { Outcome::Tie };
    Ok(ComparisonVerdict {
        outcome,
        t_statistic: t,
        p_value: p,
        mean_difference: mean,
        sd_difference: sd,
    })
}

/// Mean and sample standard deviation (`n - 1` denominator; 0 for a single
/// value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_value_examples() {
        for df in [1, 2, 7, 49] {
            assert_eq!(t_distribution_p(0.0, df), 1.0);
        }
        assert!((t_distribution_p(1.0, 1) - 0.5).abs() < 1e-12);
        assert!((t_distribution_p(-1.0, 1) - 0.5).abs() < 1e-12);
        assert!(t_distribution_p(1e6, 5) < 1e-20);
        assert_eq!(t_distribution_p(f64::INFINITY, 5), 0.0);
        // two-sided 5% critical value for df = 10
        assert!((t_distribution_p(2.228_138_851_986, 10) - 0.05).abs() < 1e-9);
    }

    #[test]
    fn identical_sequences_tie() {
        let a = [0.7, 0.8, 0.75];
        let v = paired_t_test(&a, &a, 0.05).unwrap();
        assert_eq!(v.outcome, Outcome::Tie);
        assert_eq!(v.p_value, 1.0);
    }

    #[test]
    fn constant_shift_wins() {
        let b = [0.5, 0.5, 0.5, 0.5];
        let a: Vec<f64> = b.iter().map(|x| x + 0.01).collect();
        assert_eq!(paired_t_test(&a, &b, 0.05).unwrap().outcome, Outcome::Win);
        assert_eq!(paired_t_test(&b, &a, 0.05).unwrap().outcome, Outcome::Loss);
    }

    #[test]
    fn swapping_flips_outcome() {
        let a = [0.71, 0.74, 0.69, 0.77, 0.73, 0.75];
        let b = [0.70, 0.70, 0.68, 0.72, 0.71, 0.70];
        let ab = paired_t_test(&a, &b, 0.05).unwrap();
        let ba = paired_t_test(&b, &a, 0.05).unwrap();
        assert_eq!(ab.outcome, Outcome::Win);
        assert_eq!(ba.outcome, Outcome::Loss);
        assert_eq!(ab.p_value, ba.p_value);
        assert_eq!(ab.t_statistic, -ba.t_statistic);
    }

    #[test]
    fn noisy_difference_ties() {
        let a = [0.7, 0.6, 0.8, 0.65];
        let b = [0.65, 0.7, 0.72, 0.66];
        let v = paired_t_test(&a, &b, 0.05).unwrap();
        assert_eq!(v.outcome, Outcome::Tie);
        assert!(v.p_value > 0.05);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(
            paired_t_test(&[1.0], &[1.0], 0.05),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(matches!(
            paired_t_test(&[1.0, 2.0], &[1.0], 0.05),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn mean_std_values() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
