// SPDX-License-Identifier: Apache-2.0

//! Functorial semantics: diagrams evaluated as tensors.
//!
//! Three backends share one contraction engine:
//!
//! * `Matrix` — real or complex linear maps (complex as soon as any payload
//!   has an imaginary part);
//! * `Relational` — relations, i.e. tensors over the Boolean semiring;
//! * `Cpm` — completely positive maps: every wire of dimension `d` becomes a
//!   doubled wire of dimension `d²` (index `i*d + j`), discarding is the
//!   trace and payloads may be density matrices or Kraus families.

mod contract;
pub mod density;
mod eval;
mod payload;
mod tensor;

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};

pub use contract::{contract, Node, EXACT_LIMIT};
pub use density::Matrix;
pub use payload::{parse_payloads, PayloadFile};
pub use tensor::{Scalar, Tensor};

/// Reserved state name: the uninformative state of a wire (all-ones vector,
/// full relation, or maximally mixed density), unless a payload overrides it.
pub const NO_PRIOR: &str = "no-prior";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Matrix,
    Relational,
    Cpm,
}

impl std::str::FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "matrix" => Ok(Backend::Matrix),
            "rel" | "relational" => Ok(Backend::Relational),
            "cpm" => Ok(Backend::Cpm),
            other => Err(format!("unknown backend {other:?} (matrix, rel, cpm)")),
        }
    }
}

/// How a CPM spider that merges state-fed inputs into one output is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MergeMode {
    /// The doubled spider, read literally.
    Spider,
    /// Each state-fed input acts as `ρ ↦ Σ pᵢ Pᵢ ρ Pᵢ` over its spectral
    /// projectors, applied to the remaining input.
    #[default]
    Mixed,
    /// Like `Mixed`, but a merge of exactly two states averages both orders.
    Symmetrized,
}

impl std::str::FromStr for MergeMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "spider" => Ok(MergeMode::Spider),
            "mixed" => Ok(MergeMode::Mixed),
            "symmetrized" => Ok(MergeMode::Symmetrized),
            other => Err(format!(
                "unknown merge mode {other:?} (spider, mixed, symmetrized)"
            )),
        }
    }
}

/// The meaning attached to a generic box name.
///
/// Tensor payloads list legs as the box's domain followed by its codomain.
#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Real(Tensor<f64>),
    Complex(Tensor<Complex64>),
    /// A mixed state on the box's codomain (CPM only).
    Density(Matrix),
    /// A CP map `ρ ↦ Σ K ρ Kᵀ`; each `K` is `cod × dom` (CPM only).
    Kraus(Vec<Matrix>),
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no payload for box {0:?}")]
    MissingPayload(String),
    #[error("no dimension for wire label {0:?}")]
    MissingDimension(String),
    #[error("payload {name:?} has shape {found:?}, box needs {expected:?}")]
    PayloadShape {
        name: String,
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    #[error("invalid payload: {0}")]
    InvalidPayload(String),
    #[error("{0}")]
    Shape(String),
    #[error("cannot cut negation: {0}")]
    NegationCut(String),
    #[error("scale error: {0}")]
    Scale(String),
    #[error("not a projector")]
    NotAProjector,
    #[error("bad subsystem selection {0}")]
    BadSubsystem(String),
    #[error("{0} is not supported by this backend")]
    Unsupported(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Dimensions per wire label plus payloads per box name.
#[derive(Clone, Debug, Default)]
pub struct Interpretation {
    pub backend: Backend,
    pub merge: MergeMode,
    pub dims: BTreeMap<String, usize>,
    pub payloads: BTreeMap<String, Payload>,
}

impl Interpretation {
    pub fn new(backend: Backend) -> Self {
        Interpretation {
            backend,
            ..Default::default()
        }
    }

    pub fn with_dim(mut self, label: &str, d: usize) -> Self {
        self.dims.insert(label.to_string(), d);
        self
    }

    pub fn with_payload(mut self, name: &str, p: Payload) -> Self {
        self.payloads.insert(name.to_string(), p);
        self
    }

    pub fn dim(&self, label: &str) -> Result<usize, EvalError> {
        self.dims
            .get(label)
            .copied()
            .ok_or_else(|| EvalError::MissingDimension(label.to_string()))
    }

    pub fn evaluate(&self, d: &Diagram) -> Result<Value, EvalError> {
        eval::evaluate(self, d)
    }
}

/// A CPM value: a real tensor on doubled legs plus the undoubled leg dims.
#[derive(Clone, Debug, PartialEq)]
pub struct CpmValue {
    pub tensor: Tensor<f64>,
    /// Base dimension of every leg, inputs first.
    pub dims: Vec<usize>,
    pub n_inputs: usize,
}

impl CpmValue {
    /// The operator `Σ T[(i,j)...] |I⟩⟨J|` carried by a state.
    pub fn density(&self) -> Result<Matrix, EvalError> {
        if self.n_inputs != 0 {
            return Err(EvalError::Shape("density of a non-state".into()));
        }
        let total: usize = self.dims.iter().product();
        let mut m = Matrix::zeros(total, total);
        let mut idx = vec![0usize; self.dims.len()];
        let shape: Vec<usize> = self.dims.iter().map(|d| d * d).collect();
        let data = self.tensor.data();
        for &v in data {
            let (mut r, mut c) = (0, 0);
            for (k, &p) in idx.iter().enumerate() {
                r = r * self.dims[k] + p / self.dims[k];
                c = c * self.dims[k] + p % self.dims[k];
            }
            m[(r, c)] += v;
            if !tensor::next_index(&mut idx, &shape) {
                break;
            }
        }
        Ok(m)
    }

    /// The scalar of a closed diagram.
    pub fn scalar(&self) -> Option<f64> {
        (self.tensor.rank() == 0).then(|| self.tensor.data()[0])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Real(Tensor<f64>),
    Complex(Tensor<Complex64>),
    Relation(Tensor<bool>),
    Cpm(CpmValue),
}

impl Value {
    /// Leg dimensions as seen by the backend (doubled in CPM).
    pub fn shape(&self) -> &[usize] {
        match self {
            Value::Real(t) => t.shape(),
            Value::Complex(t) => t.shape(),
            Value::Relation(t) => t.shape(),
            Value::Cpm(c) => c.tensor.shape(),
        }
    }

    /// Widens real values to complex ones.
    pub fn to_complex(&self) -> Option<Tensor<Complex64>> {
        match self {
            Value::Real(t) => Some(t.map(Complex64::from_f64)),
            Value::Complex(t) => Some(t.clone()),
            _ => None,
        }
    }

    /// The number for a closed diagram (for relations: 1 or 0; complex: the
    /// real part only when the imaginary part vanishes).
    pub fn as_real_scalar(&self) -> Option<f64> {
        if !self.shape().is_empty() {
            return None;
        }
        match self {
            Value::Real(t) => Some(t.data()[0]),
            Value::Complex(t) => {
                let z = t.data()[0];
                (z.im.abs() < 1e-12).then_some(z.re)
            }
            Value::Relation(t) => Some(if t.data()[0] { 1.0 } else { 0.0 }),
            Value::Cpm(c) => c.scalar(),
        }
    }

    /// Maximum absolute difference between two values of the same kind.
    pub fn distance(&self, other: &Value) -> Option<f64> {
        if self.shape() != other.shape() {
            return None;
        }
        match (self, other) {
            (Value::Relation(a), Value::Relation(b)) => Some(
                if a == b { 0.0 } else { 1.0 },
            ),
            (Value::Cpm(a), Value::Cpm(b)) => Some(a.tensor.max_abs_diff(&b.tensor)),
            _ => Some(self.to_complex()?.max_abs_diff(&other.to_complex()?)),
        }
    }
}
