// SPDX-License-Identifier: Apache-2.0

//! Comparing meanings, graded entailment, and what a circuit says about
//! groups of nouns.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::compiler::Circuit;
use crate::diagram::Diagram;
use crate::semantics::density::{self, PSD_TOL};
use crate::semantics::{EvalError, Interpretation, Matrix, Value};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("zero state cannot be rescaled")]
    ZeroState,
    #[error("not a projector")]
    NotAProjector,
    #[error("{0:?} is not an output wire")]
    UnknownNoun(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Hilbert–Schmidt product `Tr(a b)` of two real symmetric matrices.
pub fn trace_inner(a: &Matrix, b: &Matrix) -> Result<f64, AnalysisError> {
    if a.shape() != b.shape() {
        return Err(AnalysisError::Shape(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(a.component_mul(b).sum())
}

/// Inner product of two meanings of the same kind: `Tr(σ₂σ₁)` for CPM
/// states, `Re⟨a, b⟩` for tensors, and `|a ∩ b| / √(|a||b|)` for relations
/// (0 when either is empty).
pub fn similarity(a: &Value, b: &Value) -> Result<f64, AnalysisError> {
    if a.shape() != b.shape() {
        return Err(AnalysisError::Shape(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    match (a, b) {
        (Value::Cpm(x), Value::Cpm(y)) => trace_inner(&x.density()?, &y.density()?),
        (Value::Relation(x), Value::Relation(y)) => {
            let count = |f: &dyn Fn(usize) -> bool| (0..x.data().len()).filter(|&i| f(i)).count();
            let both = count(&|i| x.data()[i] && y.data()[i]) as f64;
            let nx = count(&|i| x.data()[i]) as f64;
            let ny = count(&|i| y.data()[i]) as f64;
            Ok(if nx == 0.0 || ny == 0.0 {
                0.0
            } else {
                both / (nx * ny).sqrt()
            })
        }
        (Value::Relation(_), _) | (_, Value::Relation(_)) | (Value::Cpm(_), _) | (_, Value::Cpm(_)) => {
            Err(AnalysisError::Shape("meanings from different backends".into()))
        }
        _ => {
            let (x, y) = (a.to_complex().unwrap(), b.to_complex().unwrap());
            Ok(x.data()
                .iter()
                .zip(y.data())
                .map(|(p, q)| (p.conj() * q).re)
                .sum())
        }
    }
}

/// [`similarity`] divided by the geometric mean of the self-similarities:
/// 1 for identical meanings whatever their scale.
pub fn normalized_similarity(a: &Value, b: &Value) -> Result<f64, AnalysisError> {
    let s = similarity(a, b)?;
    let n = (similarity(a, a)? * similarity(b, b)?).sqrt();
    if n == 0.0 {
        return Err(AnalysisError::ZeroState);
    }
    Ok(s / n)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntailmentResult {
    /// Largest `k` with `σ₂ − kσ₁ ⪰ 0`.
    pub k: f64,
    /// `k > 0` and the two states are not mutually entailing at grade 1.
    pub strict: bool,
}

/// Orthonormal basis (columns) of the eigenvectors with eigenvalue > `tol`.
fn support(m: &Matrix, tol: f64) -> Matrix {
    let eig = m.clone().symmetric_eigen();
    let cols: Vec<_> = (0..m.nrows())
        .filter(|&i| eig.eigenvalues[i] > tol)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        Matrix::zeros(m.nrows(), 0)
    } else {
        Matrix::from_columns(&cols)
    }
}

fn max_grade(s1: &Matrix, s2: &Matrix) -> Result<f64, AnalysisError> {
    let scale = s1.norm().max(s2.norm()).max(1.0);
    let tol = PSD_TOL * scale;
    if density::max_eigenvalue(s1) <= tol {
        return Err(AnalysisError::ZeroState);
    }
    let v = support(s2, tol);
    let outside = Matrix::identity(s1.nrows(), s1.nrows()) - &v * v.transpose();
    if (&outside * s1 * &outside).norm() > tol {
        return Ok(0.0);
    }
    // On the support of σ₂: k = 1 / λmax(A^{-1/2} B A^{-1/2}).
    let a = v.transpose() * s2 * &v;
    let b = v.transpose() * s1 * &v;
    let eig = a.symmetric_eigen();
    let inv_sqrt = Matrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    let w = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    let lmax = density::max_eigenvalue(&(&w * b * &w));
    if lmax <= 0.0 {
        return Err(AnalysisError::ZeroState);
    }
    Ok(1.0 / lmax)
}

/// Graded Löwner entailment `σ₁ ≤ₖ σ₂`.
pub fn graded_entailment(s1: &Matrix, s2: &Matrix) -> Result<EntailmentResult, AnalysisError> {
    if s1.shape() != s2.shape() || !s1.is_square() {
        return Err(AnalysisError::Shape(format!(
            "{:?} vs {:?}",
            s1.shape(),
            s2.shape()
        )));
    }
    let k = max_grade(s1, s2)?;
    let back = max_grade(s2, s1)?;
    let mutual = k >= 1.0 - 1e-9 && back >= 1.0 - 1e-9;
    Ok(EntailmentResult {
        k,
        strict: k > 0.0 && !mutual,
    })
}

/// `p₁ ≤ p₂` for projectors: `p₁ p₂ = p₁`.
pub fn projector_entails(p1: &Matrix, p2: &Matrix) -> Result<bool, AnalysisError> {
    if p1.shape() != p2.shape() {
        return Err(AnalysisError::Shape(format!(
            "{:?} vs {:?}",
            p1.shape(),
            p2.shape()
        )));
    }
    if !density::is_projector(p1, PSD_TOL) || !density::is_projector(p2, PSD_TOL) {
        return Err(AnalysisError::NotAProjector);
    }
    Ok((p1 * p2 - p1).amax() <= PSD_TOL)
}

pub fn scale_trace_one(rho: &Matrix) -> Result<Matrix, AnalysisError> {
    let t = rho.trace();
    if t.abs() <= PSD_TOL {
        return Err(AnalysisError::ZeroState);
    }
    Ok(rho / t)
}

pub fn scale_max_eig_one(rho: &Matrix) -> Result<Matrix, AnalysisError> {
    let l = density::max_eigenvalue(rho);
    if l <= PSD_TOL {
        return Err(AnalysisError::ZeroState);
    }
    Ok(rho / l)
}

/// The meaning of the nouns in `keep`: every other output of `state` is
/// discarded before evaluation. In the CPM model this is the partial trace.
pub fn subgroup_meaning(
    state: &Diagram,
    outputs: &[String],
    keep: &[String],
    interp: &Interpretation,
) -> Result<Value, AnalysisError> {
    if let Some(x) = keep.iter().find(|x| !outputs.contains(x)) {
        return Err(AnalysisError::UnknownNoun(x.clone()));
    }
    if state.cod().len() != outputs.len() {
        return Err(AnalysisError::Shape(format!(
            "{} outputs named for a diagram with {}",
            outputs.len(),
            state.cod().len()
        )));
    }
    let layer: Vec<Diagram> = outputs
        .iter()
        .zip(state.cod())
        .map(|(x, l)| {
            if keep.contains(x) {
                Diagram::id(std::slice::from_ref(l))
            } else {
                Diagram::discard(l)
            }
        })
        .collect();
    let d = state
        .then(&Diagram::tensor_all(layer.iter()))
        .map_err(EvalError::from)?;
    Ok(interp.evaluate(&d)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: String,
    pub b: String,
    /// Sentences whose gate links the two nouns.
    pub sentences: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NounNetwork {
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
    /// Connected components, each in node order.
    pub clusters: Vec<Vec<String>>,
}

struct Components(Vec<usize>);

impl Components {
    fn find(&mut self, i: usize) -> usize {
        let p = self.0[i];
        if p == i {
            return i;
        }
        let r = self.find(p);
        self.0[i] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a.max(b)] = a.min(b);
    }
}

/// Nouns are linked when some gate's internal wiring connects their wires.
pub fn extract_network(circuit: &Circuit) -> NounNetwork {
    let nodes = circuit.wire_order.clone();
    let idx = |x: &str| nodes.iter().position(|y| y == x);
    let mut found: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let boxes = circuit.diagram.boxes().len();
    for g in &circuit.gates {
        let mut comp = Components((0..boxes).collect());
        for w in circuit.diagram.wires() {
            if let (Some(a), Some(b)) = (w.src.box_index(), w.tgt.box_index()) {
                if g.boxes.contains(&a) && g.boxes.contains(&b) {
                    comp.union(a, b);
                }
            }
        }
        for (i, (x, bx)) in g.entries.iter().enumerate() {
            for (y, by) in &g.entries[i + 1..] {
                if x == y || comp.find(*bx) != comp.find(*by) {
                    continue;
                }
                if let (Some(p), Some(q)) = (idx(x), idx(y)) {
                    let key = (p.min(q), p.max(q));
                    let list = found.entry(key).or_default();
                    if !list.contains(&g.sentence) {
                        list.push(g.sentence);
                    }
                }
            }
        }
    }
    let mut comp = Components((0..nodes.len()).collect());
    let edges = found
        .into_iter()
        .map(|((p, q), sentences)| {
            comp.union(p, q);
            Edge {
                a: nodes[p].clone(),
                b: nodes[q].clone(),
                sentences,
            }
        })
        .collect();
    let mut by_root: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (i, x) in nodes.iter().enumerate() {
        by_root.entry(comp.find(i)).or_default().push(x.clone());
    }
    NounNetwork {
        nodes,
        edges,
        clusters: by_root.into_values().collect(),
    }
}

const PALETTE: [&str; 8] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
];

impl NounNetwork {
    /// Undirected graph, nodes filled by cluster.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph network {\n  node [style=filled];\n");
        for (c, cluster) in self.clusters.iter().enumerate() {
            for x in cluster {
                let _ = writeln!(
                    out,
                    "  {} [fillcolor=\"{}\"];",
                    quote(x),
                    PALETTE[c % PALETTE.len()]
                );
            }
        }
        for e in &self.edges {
            let label = e
                .sentences
                .iter()
                .map(|s| (s + 1).to_string())
                .collect::<Vec<_>>()
                .join(",");
            let _ = writeln!(out, "  {} -- {} [label=\"{label}\"];", quote(&e.a), quote(&e.b));
        }
        out.push_str("}\n");
        out
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("string serialises")
}
