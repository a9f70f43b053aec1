//! Text and JSON-lines renderings of an [`ExperimentReport`].
//!
//! Text layout (format version 1): a `key: value` header, then `[accuracy]`,
//! `[comparisons]`, `[diversity]` and `[runs]` tables with whitespace
//! separated columns. Records: one JSON object per run, in run order.

use std::fmt::Write as _;

use super::{ExperimentReport, Method};
use crate::diversity::Measure;

pub const REPORT_MAGIC: &str = "# udeed experiment report";
pub const REPORT_VERSION: u32 = 1;

fn fixed(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.6}")
    } else {
        format!("{x}")
    }
}

impl ExperimentReport {
    /// Human-readable report. Byte-identical for identical inputs.
    pub fn render_text(&self) -> String {
        let c = &self.config;
        let t = &c.train;
        let mut out = String::new();
        let methods: Vec<Method> = self.summaries.iter().map(|s| s.method).collect();

        let _ = writeln!(out, "{REPORT_MAGIC}");
        let _ = writeln!(out, "version: {REPORT_VERSION}");
        let _ = writeln!(out, "dataset: {}", self.dataset);
        let _ = writeln!(out, "rows: {}", self.rows);
        let _ = writeln!(out, "runs: {}", c.runs);
        let _ = writeln!(
            out,
            "methods: {}",
            methods.iter().map(|m| m.name()).collect::<Vec<_>>().join(",")
        );
        let _ = writeln!(out, "m: {}", t.m);
        let _ = writeln!(out, "gamma: {}", t.gamma);
        let _ = writeln!(out, "lambda: {}", t.lambda);
        let _ = writeln!(out, "learning_rate: {}", t.learning_rate);
        let _ = writeln!(out, "max_steps: {}", t.max_steps);
        let _ = writeln!(out, "init_max_steps: {}", t.init_max_steps);
        let _ = writeln!(out, "test_fraction: {}", c.split.test_fraction);
        let _ = writeln!(out, "labeled_fraction: {}", c.split.labeled_fraction);
        let _ = writeln!(out, "seed: {}", t.seed);
        let _ = writeln!(out, "alpha: {}", c.alpha);

        let _ = writeln!(out, "\n[accuracy]");
        let _ = writeln!(out, "{:<10} {:>10} {:>10}", "method", "mean", "std");
        for s in &self.summaries {
            let _ = writeln!(out, "{:<10} {:>10} {:>10}", s.method.name(), fixed(s.mean), fixed(s.std));
        }

        let _ = writeln!(out, "\n[comparisons]");
        let _ = writeln!(
            out,
            "{:<10} {:<10} {:>10} {:>10} {:>12} {:>10} {:>8}",
            "method", "against", "mean_diff", "std_diff", "t", "p", "outcome"
        );
        for cmp in &self.comparisons {
            let v = &cmp.verdict;
            let _ = writeln!(
                out,
                "{:<10} {:<10} {:>10} {:>10} {:>12} {:>10} {:>8}",
                cmp.method.name(),
                cmp.against.name(),
                fixed(v.mean_difference),
                fixed(v.sd_difference),
                fixed(v.t_statistic),
                fixed(v.p_value),
                v.outcome.name()
            );
        }

        let _ = writeln!(out, "\n[diversity]");
        let _ = writeln!(
            out,
            "{:<8} {:>12} {:>12} {:>12} {:>12} {:>12} {:>10} {:>8}",
            "measure", "initial", "initial_std", "final", "final_std", "t", "p", "outcome"
        );
        for d in &self.diversity {
            let v = &d.verdict;
            let _ = writeln!(
                out,
                "{:<8} {:>12} {:>12} {:>12} {:>12} {:>12} {:>10} {:>8}",
                d.measure.name(),
                fixed(d.initial_mean),
                fixed(d.initial_std),
                fixed(d.final_mean),
                fixed(d.final_std),
                fixed(v.t_statistic),
                fixed(v.p_value),
                v.outcome.name()
            );
        }

        let _ = writeln!(out, "\n[runs]");
        let mut header = format!("{:<5}", "run");
        for m in &methods {
            let _ = write!(header, " {:>10}", m.name());
        }
        let _ = writeln!(out, "{header}");
        for r in &self.runs {
            let mut line = format!("{:<5}", r.run);
            for m in &methods {
                let _ = write!(line, " {:>10}", fixed(r.accuracy[m]));
            }
            let _ = writeln!(out, "{line}");
        }
        out
    }

    /// One JSON object per run:
    /// `{"run", "split_seed", "train_seed", "accuracy": {method: value},
    /// "initial_diversity", "final_diversity"}`; diversity objects use the
    /// keys `DIS`, `1-DF`, `ENT`, `CFD` and are `null` when LCUD was not run.
    pub fn render_records(&self) -> String {
        let mut out = String::new();
        for r in &self.runs {
            let diversity = |d: Option<crate::diversity::DiversityMeasures>| match d {
                None => serde_json::Value::Null,
                Some(d) => serde_json::Value::Object(
                    Measure::ALL
                        .iter()
                        .map(|&m| (m.name().to_string(), serde_json::json!(d.get(m))))
                        .collect(),
                ),
            };
            let record = serde_json::json!({
                "run": r.run,
                "split_seed": r.split_seed,
                "train_seed": r.train_seed,
                "accuracy": r.accuracy,
                "initial_diversity": diversity(r.initial_diversity),
                "final_diversity": diversity(r.final_diversity),
            });
            out.push_str(&record.to_string());
            out.push('\n');
        }
        out
    }
}
