//! Plain-text model files.
//!
//! ```text
//! UDEED-MODEL 1
//! m <classifiers> d <augmented dimension>
//! w_1[0] w_1[1] ... w_1[d-1]
//! ...
//! ```
//!
//! Weights are written in Rust's shortest round-trip decimal form, so reading
//! a file back yields bit-identical weights.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::types::{DenseVector, EnsembleModel};

pub const MODEL_MAGIC: &str = "UDEED-MODEL";
pub const MODEL_VERSION: u32 = 1;

pub fn write_model(model: &EnsembleModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MODEL_MAGIC} {MODEL_VERSION}");
    let _ = writeln!(out, "m {} d {}", model.size(), model.dimension());
    for w in model.weights() {
        let row: Vec<String> = w.iter().map(|v| format!("{v:?}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_model(text: &str) -> Result<EnsembleModel> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty model file"))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(MODEL_MAGIC) {
        return Err(parse_err(1, format!("missing {MODEL_MAGIC} header")));
    }
    match parts.next().map(str::parse::<u32>) {
        Some(Ok(MODEL_VERSION)) => {}
        _ => return Err(parse_err(1, format!("unsupported model version in {header:?}"))),
    }

    let (_, shape) = lines.next().ok_or_else(|| parse_err(2, "missing shape line"))?;
    let fields: Vec<&str> = shape.split_whitespace().collect();
    let (m, d) = match fields.as_slice() {
        ["m", m, "d", d] => (
            m.parse::<usize>().map_err(|_| parse_err(2, "invalid m"))?,
            d.parse::<usize>().map_err(|_| parse_err(2, "invalid d"))?,
        ),
        _ => return Err(parse_err(2, format!("expected `m <int> d <int>`, found {shape:?}"))),
    };

    let mut weights = Vec::with_capacity(m);
    for (line, text) in lines.filter(|(_, l)| !l.is_empty()) {
        let row = text
            .split_whitespace()
            .map(|v| v.parse::<f64>().map_err(|_| parse_err(line, format!("invalid weight {v:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != d {
            return Err(parse_err(line, format!("expected {d} weights, found {}", row.len())));
        }
        weights.push(DenseVector::new(row).map_err(|e| parse_err(line, e.to_string()))?);
    }
    if weights.len() != m {
        return Err(parse_err(
            text.lines().count(),
            format!("expected {m} weight rows, found {}", weights.len()),
        ));
    }
    EnsembleModel::new(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn layout() {
        let model = EnsembleModel::zeros(2, 3).unwrap();
        assert_eq!(write_model(&model), "UDEED-MODEL 1\nm 2 d 3\n0.0 0.0 0.0\n0.0 0.0 0.0\n");
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(read_model("").is_err());
        assert!(read_model("NOPE 1\nm 2 d 1\n0\n0\n").is_err());
        assert!(read_model("UDEED-MODEL 2\nm 2 d 1\n0\n0\n").is_err());
        assert!(read_model("UDEED-MODEL 1\nm 2 d 2\n0 1\n0\n").is_err());
        assert!(read_model("UDEED-MODEL 1\nm 3 d 1\n0\n0\n").is_err());
        assert!(read_model("UDEED-MODEL 1\nm 2 d 1\n0\nx\n").is_err());
        assert!(read_model("UDEED-MODEL 1\nm 1 d 1\n0\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(raw in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 6)) {
            let model = EnsembleModel::new(vec![
                DenseVector::new(raw[..3].to_vec()).unwrap(),
                DenseVector::new(raw[3..].to_vec()).unwrap(),
            ]).unwrap();
            let back = read_model(&write_model(&model)).unwrap();
            for (a, b) in model.weights().iter().zip(back.weights()) {
                for (x, y) in a.iter().zip(b.iter()) {
                    prop_assert_eq!(x.to_bits(), y.to_bits());
                }
            }
        }
    }
}
