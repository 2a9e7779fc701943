// SPDX-License-Identifier: Apache-2.0

//! JSON payload files.
//!
//! ```json
//! {
//!   "dog":   [0.9, 0.1],
//!   "bites": {"shape": [2, 2, 2, 2], "data": [...], "data_im": [...]},
//!   "fluffy": {"density": [[0.8, 0.0], [0.0, 0.2]]},
//!   "noise": {"kraus": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]},
//!   "likes": {"shape": [3, 3], "subset": [[0, 1], [2, 2]]}
//! }
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Deserialize;

use super::{EvalError, Matrix, Payload, Tensor};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum PayloadFile {
    Vector(Vec<f64>),
    Dense {
        shape: Vec<usize>,
        data: Vec<f64>,
        #[serde(default)]
        data_im: Option<Vec<f64>>,
    },
    Density {
        density: Vec<Vec<f64>>,
    },
    Kraus {
        kraus: Vec<Vec<Vec<f64>>>,
    },
    Subset {
        shape: Vec<usize>,
        subset: Vec<Vec<usize>>,
    },
}

fn matrix(rows: &[Vec<f64>], what: &str) -> Result<Matrix, EvalError> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if n == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(EvalError::InvalidPayload(format!("{what}: ragged or empty matrix")));
    }
    Ok(Matrix::from_fn(n, m, |i, j| rows[i][j]))
}

impl PayloadFile {
    pub fn into_payload(self, name: &str) -> Result<Payload, EvalError> {
        let bad = |m: String| EvalError::InvalidPayload(format!("{name}: {m}"));
        match self {
            PayloadFile::Vector(v) => Ok(Payload::Real(Tensor::new(vec![v.len()], v))),
            PayloadFile::Dense {
                shape,
                data,
                data_im,
            } => {
                let n: usize = shape.iter().product();
                if data.len() != n {
                    return Err(bad(format!("{} entries for shape {shape:?}", data.len())));
                }
                match data_im {
                    None => Ok(Payload::Real(Tensor::new(shape, data))),
                    Some(im) if im.len() == n => Ok(Payload::Complex(Tensor::new(
                        shape,
                        data.iter()
                            .zip(&im)
                            .map(|(&r, &i)| Complex64::new(r, i))
                            .collect(),
                    ))),
                    Some(im) => Err(bad(format!("{} imaginary entries, expected {n}", im.len()))),
                }
            }
            PayloadFile::Density { density } => {
                let m = matrix(&density, name)?;
                if !m.is_square() {
                    return Err(bad("density matrix is not square".into()));
                }
                super::density::check_density(&m, name)?;
                Ok(Payload::Density(m))
            }
            PayloadFile::Kraus { kraus } => {
                let ks = kraus
                    .iter()
                    .map(|k| matrix(k, name))
                    .collect::<Result<Vec<_>, _>>()?;
                let Some(first) = ks.first() else {
                    return Err(bad("empty Kraus list".into()));
                };
                let s = first.shape();
                if ks.iter().any(|k| k.shape() != s) {
                    return Err(bad("Kraus operators differ in shape".into()));
                }
                Ok(Payload::Kraus(ks))
            }
            PayloadFile::Subset { shape, subset } => {
                let mut t = vec![0.0; shape.iter().product()];
                for idx in &subset {
                    if idx.len() != shape.len() || idx.iter().zip(&shape).any(|(i, d)| i >= d) {
                        return Err(bad(format!("index {idx:?} outside shape {shape:?}")));
                    }
                    let flat = idx.iter().zip(&shape).fold(0, |acc, (i, d)| acc * d + i);
                    t[flat] = 1.0;
                }
                Ok(Payload::Real(Tensor::new(shape, t)))
            }
        }
    }
}

/// Parses a JSON object of named payloads.
pub fn parse_payloads(json: &str) -> Result<BTreeMap<String, Payload>, EvalError> {
    let raw: BTreeMap<String, PayloadFile> = serde_json::from_str(json)
        .map_err(|e| EvalError::InvalidPayload(format!("payload file: {e}")))?;
    raw.into_iter()
        .map(|(k, v)| {
            let p = v.into_payload(&k)?;
            Ok((k, p))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_form() {
        let p = parse_payloads(
            r#"{
              "v": [1, 2],
              "c": {"shape": [2], "data": [1, 0], "data_im": [0, 1]},
              "r": {"density": [[0.5, 0], [0, 0.5]]},
              "k": {"kraus": [[[1, 0], [0, 1]]]},
              "s": {"shape": [2, 2], "subset": [[0, 1]]}
            }"#,
        )
        .unwrap();
        assert!(matches!(p["v"], Payload::Real(_)));
        assert!(matches!(p["c"], Payload::Complex(_)));
        assert!(matches!(p["r"], Payload::Density(_)));
        assert!(matches!(p["k"], Payload::Kraus(_)));
        match &p["s"] {
            Payload::Real(t) => assert_eq!(t.data(), &[0.0, 1.0, 0.0, 0.0]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_payloads() {
        assert!(parse_payloads(r#"{"x": {"shape": [3], "data": [1, 2]}}"#).is_err());
        assert!(parse_payloads(r#"{"x": {"density": [[0, 1], [1, 0]]}}"#).is_err());
        assert!(parse_payloads(r#"{"x": {"shape": [2], "subset": [[2]]}}"#).is_err());
    }
}
