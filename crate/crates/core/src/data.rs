//! Dataset parsing, seeded labeled/unlabeled/test splitting and bootstrap
//! sampling.
//!
//! All randomness comes from [`ChaCha8Rng`] (rand_chacha 0.3) driven through
//! rand 0.8's `gen_range` and `SliceRandom::shuffle`; a seed therefore maps to
//! the same split on every platform.

use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::types::{augment_bias, has_both_classes, DenseVector, Label, LabeledExample, TrainingData};

/// How many times the labeled part is re-drawn before giving up on getting
/// both classes into it.
pub const MAX_SPLIT_RETRIES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    pub label: Label,
    pub features: Vec<f64>,
}

/// Labeled rows with raw (not yet bias-augmented) features.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    pub name: String,
    pub rows: Vec<RawRow>,
    pub dimension: usize,
}

impl RawDataset {
    pub fn new(name: impl Into<String>, rows: Vec<RawRow>) -> Result<Self> {
        let dimension = rows.first().map_or(0, |r| r.features.len());
        for (i, row) in rows.iter().enumerate() {
            if row.features.len() != dimension {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!(
                        "expected {dimension} features, found {}",
                        row.features.len()
                    ),
                });
            }
        }
        Ok(RawDataset {
            name: name.into(),
            rows,
            dimension,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Every row as a bias-augmented labeled example.
    pub fn examples(&self) -> Result<Vec<LabeledExample>> {
        self.rows
            .iter()
            .map(|r| LabeledExample::from_raw(&r.features, r.label))
            .collect()
    }

    /// Rescales every feature column to `[0, 1]` using the column range over
    /// all rows. Constant columns become 0.
    pub fn min_max_scaled(&self) -> RawDataset {
        let d = self.dimension;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for row in &self.rows {
            for (j, &v) in row.features.iter().enumerate() {
                lo[j] = lo[j].min(v);
                hi[j] = hi[j].max(v);
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|row| RawRow {
                label: row.label,
                features: row
                    .features
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let span = hi[j] - lo[j];
                        if span > 0.0 {
                            (v - lo[j]) / span
                        } else {
                            0.0
                        }
                    })
                    .collect(),
            })
            .collect();
        RawDataset {
            name: self.name.clone(),
            rows,
            dimension: d,
        }
    }
}

fn parse_label(field: &str, line: usize) -> Result<Label> {
    let bad = || Error::Parse {
        line,
        message: format!("invalid label {field:?}: expected -1/+1 or 0/1"),
    };
    let value: f64 = field.trim().parse().map_err(|_| bad())?;
    if value == 1.0 {
        Ok(Label::Positive)
    } else if value == -1.0 || value == 0.0 {
        Ok(Label::Negative)
    } else {
        Err(bad())
    }
}

fn parse_value(field: &str, line: usize) -> Result<f64> {
    let value: f64 = field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("non-numeric field {field:?}"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("non-finite value {field:?}"),
        });
    }
    Ok(value)
}

fn io_error(line: usize, err: std::io::Error) -> Error {
    Error::Parse {
        line,
        message: err.to_string(),
    }
}

/// Skips blank lines and `#` comments, yielding `(1-based line, content)`.
fn content_lines(reader: impl BufRead) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Err(e) => Some(Err(io_error(i + 1, e))),
            Ok(text) => {
                let trimmed = text.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    None
                } else {
                    Some(Ok((i + 1, trimmed.to_string())))
                }
            }
        })
}

/// Parses `label,feat1,...,featd` lines.
pub fn parse_csv(name: &str, reader: impl BufRead) -> Result<RawDataset> {
    let mut rows = Vec::new();
    let mut dimension: Option<usize> = None;
    for item in content_lines(reader) {
        let (line, text) = item?;
        let mut fields = text.split(',');
        let label = parse_label(fields.next().unwrap_or(""), line)?;
        let features = fields
            .map(|f| parse_value(f, line))
            .collect::<Result<Vec<f64>>>()?;
        match dimension {
            None => dimension = Some(features.len()),
            Some(d) if d != features.len() => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {d} features, found {}", features.len()),
                })
            }
            _ => {}
        }
        rows.push(RawRow { label, features });
    }
    RawDataset::new(name, rows)
}

/// Parses `label idx:val ...` lines (1-based, strictly ascending indices) and
/// densifies them to the largest index seen.
pub fn parse_sparse(name: &str, reader: impl BufRead) -> Result<RawDataset> {
    let mut sparse_rows: Vec<(Label, Vec<(usize, f64)>)> = Vec::new();
    let mut dimension = 0;
    for item in content_lines(reader) {
        let (line, text) = item?;
        let mut tokens = text.split_whitespace();
        let label = parse_label(tokens.next().unwrap_or(""), line)?;
        let mut entries = Vec::new();
        let mut previous = 0usize;
        for token in tokens {
            let (idx, val) = token.split_once(':').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected index:value, found {token:?}"),
            })?;
            let idx: usize = idx.parse().map_err(|_| Error::Parse {
                line,
                message: format!("invalid index {idx:?}"),
            })?;
            if idx == 0 {
                return Err(Error::Parse {
                    line,
                    message: "indices are 1-based".into(),
                });
            }
            if idx == previous {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate index {idx}"),
                });
            }
            if idx < previous {
                return Err(Error::Parse {
                    line,
                    message: format!("index {idx} after {previous} is not ascending"),
                });
            }
            previous = idx;
            entries.push((idx, parse_value(val, line)?));
        }
        dimension = dimension.max(previous);
        sparse_rows.push((label, entries));
    }
    let rows = sparse_rows
        .into_iter()
        .map(|(label, entries)| {
            let mut features = vec![0.0; dimension];
            for (idx, val) in entries {
                features[idx - 1] = val;
            }
            RawRow { label, features }
        })
        .collect();
    RawDataset::new(name, rows)
}

/// Split fractions for the labeled/unlabeled/test protocol.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SplitSpec {
    /// Share of all rows that goes to the test set.
    pub test_fraction: f64,
    /// Share of the remaining training rows that keeps its labels.
    pub labeled_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            test_fraction: 0.5,
            labeled_fraction: 0.25,
            seed: 0,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "test fraction must lie in (0, 1), got {}",
                self.test_fraction
            )));
        }
        // 1.0 is allowed: it leaves U empty, which only LCUD rejects.
        if !(self.labeled_fraction > 0.0 && self.labeled_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "labeled fraction must lie in (0, 1], got {}",
                self.labeled_fraction
            )));
        }
        Ok(())
    }
}

/// Bias-augmented labeled, unlabeled and test parts of one split.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub labeled: Vec<LabeledExample>,
    pub unlabeled: Vec<DenseVector>,
    pub test: Vec<LabeledExample>,
}

impl Split {
    pub fn training_data(&self) -> Result<TrainingData> {
        TrainingData::new(self.labeled.clone(), self.unlabeled.clone())
    }
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Sizes `(|T|, |L|, |U|)` for `n` rows.
pub fn split_sizes(n: usize, spec: &SplitSpec) -> (usize, usize, usize) {
    let test = round_half_up(spec.test_fraction * n as f64).min(n);
    let train = n - test;
    let labeled = round_half_up(spec.labeled_fraction * train as f64).min(train);
    (test, labeled, train - labeled)
}

/// Seeded labeled/unlabeled/test split.
///
/// Rows are shuffled once; the first `|T|` become the test set. The rest form
/// the training pool whose first `|L|` rows keep their labels. When that
/// labeled part misses a class the pool is reshuffled (same stream) up to
/// [`MAX_SPLIT_RETRIES`] times.
pub fn split_lut(data: &RawDataset, spec: &SplitSpec) -> Result<Split> {
    spec.validate()?;
    let n = data.len();
    if n < 4 {
        return Err(Error::InvalidSplit(format!("need at least 4 rows, got {n}")));
    }
    let positives = data.rows.iter().filter(|r| r.label == Label::Positive).count();
    if positives == 0 || positives == n {
        return Err(Error::InvalidSplit("dataset contains a single class".into()));
    }
    let (n_test, n_labeled, _) = split_sizes(n, spec);
    if n_test == 0 || n_test == n {
        return Err(Error::InvalidSplit(format!(
            "test set of size {n_test} out of {n} rows"
        )));
    }
    if n_labeled < 2 {
        return Err(Error::InvalidSplit(format!(
            "labeled set of size {n_labeled} needs at least 2 examples"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let (test_idx, pool) = order.split_at_mut(n_test);

    let label_of = |i: usize| data.rows[i].label;
    let pool_has_both = pool.iter().any(|&i| label_of(i) == Label::Positive)
        && pool.iter().any(|&i| label_of(i) == Label::Negative);
    let mut retries = 0;
    loop {
        let head = &pool[..n_labeled];
        let both = head.iter().any(|&i| label_of(i) == Label::Positive)
            && head.iter().any(|&i| label_of(i) == Label::Negative);
        if both {
            break;
        }
        if !pool_has_both || retries == MAX_SPLIT_RETRIES {
            return Err(Error::SplitExhausted { retries });
        }
        pool.shuffle(&mut rng);
        retries += 1;
    }

    let example = |i: usize| LabeledExample::from_raw(&data.rows[i].features, data.rows[i].label);
    let test = test_idx.iter().map(|&i| example(i)).collect::<Result<Vec<_>>>()?;
    let labeled = pool[..n_labeled]
        .iter()
        .map(|&i| example(i))
        .collect::<Result<Vec<_>>>()?;
    let unlabeled = pool[n_labeled..]
        .iter()
        .map(|&i| augment_bias(&data.rows[i].features))
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(has_both_classes(&labeled));
    Ok(Split {
        labeled,
        unlabeled,
        test,
    })
}

/// `n` indices drawn uniformly with replacement from `0..n`.
pub fn bootstrap_indices(n: usize, rng: &mut impl RngCore) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::EmptyLabeled);
    }
    Ok((0..n).map(|_| rng.gen_range(0..n)).collect())
}

/// A bootstrap replicate of `labeled`: `|L|` draws with replacement.
pub fn bootstrap_sample(labeled: &[LabeledExample], rng: &mut impl RngCore) -> Result<Vec<LabeledExample>> {
    Ok(bootstrap_indices(labeled.len(), rng)?
        .into_iter()
        .map(|i| labeled[i].clone())
        .collect())
}

/// Two isotropic unit-variance Gaussian classes with means `±shift·1`,
/// balanced and interleaved, labels `+1` for the positive mean.
pub fn two_gaussians(n: usize, dimension: usize, shift: f64, seed: u64) -> RawDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|i| {
            let label = if i % 2 == 0 { Label::Positive } else { Label::Negative };
            let center = shift * label.value();
            let features = (0..dimension)
                .map(|_| center + rng.sample::<f64, _>(StandardNormal))
                .collect();
            RawRow { label, features }
        })
        .collect();
    RawDataset {
        name: format!("two-gaussians-n{n}-d{dimension}"),
        rows,
        dimension,
    }
}
