use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which data set the diversity term is measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// No diversity data; descent refines the empirical loss only.
    Lc,
    /// Diversity measured on the labeled features.
    Lcd,
    /// Labeled features first, then a second stage on the unlabeled set.
    Lcud,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Lc => "lc",
            Variant::Lcd => "lcd",
            Variant::Lcud => "lcud",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s.to_ascii_lowercase().as_str() {
            "lc" => Ok(Variant::Lc),
            "lcd" => Ok(Variant::Lcd),
            "lcud" => Ok(Variant::Lcud),
            other => Err(Error::InvalidConfig(format!("unknown variant {other:?}"))),
        }
    }
}

/// Hyperparameters for one ensemble training call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Number of base classifiers.
    pub m: usize,
    /// Weight of the diversity term.
    pub gamma: f64,
    /// Likelihood weight in the bootstrap initialization objective.
    pub lambda: f64,
    pub learning_rate: f64,
    /// Descent step cap, per stage.
    pub max_steps: usize,
    /// Starting step size of the initialization optimizer.
    pub init_learning_rate: f64,
    pub init_max_steps: usize,
    /// Initialization stops once the objective improves by less than this.
    pub init_tolerance: f64,
    pub variant: Variant,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            m: 20,
            gamma: 1.0,
            lambda: 1.0,
            learning_rate: 0.25,
            max_steps: 25,
            init_learning_rate: 0.25,
            init_max_steps: 100,
            init_tolerance: 1e-8,
            variant: Variant::Lcud,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.m < 2 {
            return bad(format!("m must be at least 2, got {}", self.m));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return bad(format!("gamma must be finite and >= 0, got {}", self.gamma));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return bad(format!("lambda must be finite and >= 0, got {}", self.lambda));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return bad(format!(
                "learning rate must be finite and > 0, got {}",
                self.learning_rate
            ));
        }
        if !(self.init_learning_rate.is_finite() && self.init_learning_rate > 0.0) {
            return bad(format!(
                "init learning rate must be finite and > 0, got {}",
                self.init_learning_rate
            ));
        }
        if self.init_max_steps == 0 {
            return bad("init_max_steps must be positive".into());
        }
        if !(self.init_tolerance.is_finite() && self.init_tolerance >= 0.0) {
            return bad(format!(
                "init tolerance must be finite and >= 0, got {}",
                self.init_tolerance
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_protocol() {
        let c = TrainConfig::default();
        assert_eq!(c.gamma, 1.0);
        assert_eq!(c.lambda, 1.0);
        assert_eq!(c.learning_rate, 0.25);
        assert_eq!(c.max_steps, 25);
        assert_eq!(c.m, 20);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects_out_of_range() {
        let c = TrainConfig { m: 1, ..Default::default() };
        assert!(c.validate().is_err());
        let c = TrainConfig { gamma: -1.0, ..Default::default() };
        assert!(c.validate().is_err());
        let c = TrainConfig { learning_rate: 0.0, ..Default::default() };
        assert!(c.validate().is_err());
        let c = TrainConfig { lambda: f64::NAN, ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("LCUD".parse::<Variant>().unwrap(), Variant::Lcud);
        assert_eq!("lc".parse::<Variant>().unwrap(), Variant::Lc);
        assert!("bagging".parse::<Variant>().is_err());
    }
}
