//! Oracle-output diversity measures: disagreement, double-fault (reported as
//! `1 - DF`), entropy and coincident failure diversity.
//!
//! Each measure is evaluated from per-example counts of correct members and
//! reduced to a single integer ratio, so the only rounding is the final
//! division.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logistic::output_from_score;
use crate::types::{check_dims, dot_slices, EnsembleModel, Label, LabeledExample};

/// `m × N` matrix with entry `(i, j)` set iff classifier `i` gets test
/// example `j` right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleMatrix {
    m: usize,
    n: usize,
    correct: Vec<bool>,
}

impl OracleMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let m = rows.len();
        if m < 2 {
            return Err(Error::TooFewClassifiers(m));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::InvalidOracleMatrix("no test examples".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidOracleMatrix("ragged rows".into()));
        }
        Ok(OracleMatrix {
            m,
            n,
            correct: rows.into_iter().flatten().collect(),
        })
    }

    /// Member `i` is correct on example `j` iff `sign(f_i(x_j)) = y_j`, with
    /// `sign(0) = +1`.
    pub fn from_model(model: &EnsembleModel, test: &[LabeledExample]) -> Result<Self> {
        if test.is_empty() {
            return Err(Error::EmptyTestSet);
        }
        for ex in test {
            check_dims(model.dimension(), ex.features().len())?;
        }
        let rows = model
            .weights()
            .iter()
            .map(|w| {
                test.iter()
                    .map(|ex| {
                        let f = output_from_score(dot_slices(w.as_slice(), ex.features().as_slice()));
                        Label::from_score(f) == ex.label()
                    })
                    .collect()
            })
            .collect();
        OracleMatrix::new(rows)
    }

    pub fn classifiers(&self) -> usize {
        self.m
    }

    pub fn examples(&self) -> usize {
        self.n
    }

    pub fn get(&self, classifier: usize, example: usize) -> bool {
        self.correct[classifier * self.n + example]
    }

    /// Number of correct classifiers on each example.
    fn column_counts(&self) -> Vec<u64> {
        (0..self.n)
            .map(|j| (0..self.m).filter(|&i| self.get(i, j)).count() as u64)
            .collect()
    }
}

/// Oracle matrix of `model` on `test`.
pub fn oracle_matrix(model: &EnsembleModel, test: &[LabeledExample]) -> Result<OracleMatrix> {
    OracleMatrix::from_model(model, test)
}

/// Averaged pairwise disagreement.
pub fn dis(o: &OracleMatrix) -> f64 {
    let m = o.m as u64;
    // each example contributes c·(m-c) disagreeing pairs
    let pairs: u64 = o.column_counts().iter().map(|&c| c * (m - c)).sum();
    (2 * pairs) as f64 / (m * (m - 1) * o.n as u64) as f64
}

/// `1 - DF`, where DF is the averaged pairwise rate of joint failure.
pub fn df_complement(o: &OracleMatrix) -> f64 {
    let m = o.m as u64;
    let joint: u64 = o
        .column_counts()
        .iter()
        .map(|&c| {
            let wrong = m - c;
            wrong * wrong.saturating_sub(1)
        })
        .sum();
    let total = m * (m - 1) * o.n as u64;
    (total - joint) as f64 / total as f64
}

/// Entropy measure: mean over examples of `min(c, m-c) / (m - ⌈m/2⌉)`.
pub fn ent(o: &OracleMatrix) -> f64 {
    let m = o.m as u64;
    let half_floor = m - m.div_ceil(2);
    let sum: u64 = o.column_counts().iter().map(|&c| c.min(m - c)).sum();
    sum as f64 / (o.n as u64 * half_floor) as f64
}

/// Coincident failure diversity. Zero when every example is classified
/// correctly by all members.
pub fn cfd(o: &OracleMatrix) -> f64 {
    let m = o.m as u64;
    let counts = o.column_counts();
    let all_correct = counts.iter().filter(|&&c| c == m).count() as u64;
    if all_correct == o.n as u64 {
        return 0.0;
    }
    // Σ_i (m-i)·#{examples with i failures}; an example with i failures has
    // c = m-i correct members
    let numerator: u64 = counts.iter().filter(|&&c| c < m).sum();
    numerator as f64 / ((m - 1) * (o.n as u64 - all_correct)) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Measure {
    Dis,
    DfComplement,
    Ent,
    Cfd,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Dis, Measure::DfComplement, Measure::Ent, Measure::Cfd];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Dis => "DIS",
            Measure::DfComplement => "1-DF",
            Measure::Ent => "ENT",
            Measure::Cfd => "CFD",
        }
    }

    pub fn evaluate(self, o: &OracleMatrix) -> f64 {
        match self {
            Measure::Dis => dis(o),
            Measure::DfComplement => df_complement(o),
            Measure::Ent => ent(o),
            Measure::Cfd => cfd(o),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// All four measures of one ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiversityMeasures {
    pub dis: f64,
    pub df_complement: f64,
    pub ent: f64,
    pub cfd: f64,
}

impl DiversityMeasures {
    pub fn of(o: &OracleMatrix) -> Self {
        DiversityMeasures {
            dis: dis(o),
            df_complement: df_complement(o),
            ent: ent(o),
            cfd: cfd(o),
        }
    }

    pub fn of_model(model: &EnsembleModel, test: &[LabeledExample]) -> Result<Self> {
        Ok(Self::of(&OracleMatrix::from_model(model, test)?))
    }

    pub fn get(&self, measure: Measure) -> f64 {
        match measure {
            Measure::Dis => self.dis,
            Measure::DfComplement => self.df_complement,
            Measure::Ent => self.ent,
            Measure::Cfd => self.cfd,
        }
    }
}
