//! Semi-supervised ensemble learning with logistic-regression members.
//!
//! Members are initialized on bootstrap replicates of the labeled data and
//! then refined by gradient descent on a loss that rewards accuracy on labeled
//! examples and disagreement (low confidence products) on a chosen data set,
//! typically the unlabeled examples.
//!
//! ```
//! use udeed::{data, predict, udeed::train, TrainConfig, Variant};
//!
//! let raw = data::two_gaussians(120, 4, 0.8, 1);
//! let split = data::split_lut(&raw, &data::SplitSpec::default()).unwrap();
//! let config = TrainConfig { m: 5, variant: Variant::Lcud, ..Default::default() };
//! let model = train(&split.training_data().unwrap(), &config).unwrap();
//! let acc = predict::accuracy(&model, &split.test).unwrap();
//! assert!(acc > 0.5);
//! ```

pub mod cli;
pub mod config;
pub mod data;
pub mod diversity;
pub mod error;
pub mod eval;
pub mod logistic;
pub mod predict;
pub mod types;
pub mod udeed;

pub use config::{TrainConfig, Variant};
pub use error::{Error, Result};
pub use types::{augment_bias, dot, DenseVector, EnsembleModel, Label, LabeledExample, TrainingData};
