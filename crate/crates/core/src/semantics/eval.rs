// SPDX-License-Identifier: Apache-2.0

//! Diagram → tensor network → tensor.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use super::contract::{contract, Node};
use super::density::{self, Matrix};
use super::tensor::{Scalar, Tensor};
use super::{Backend, CpmValue, EvalError, Interpretation, MergeMode, Payload, Value, NO_PRIOR};
use crate::diagram::{BoxKind, DBox, Diagram, Port, Wire, WireLabel};

type Overlay<T> = BTreeMap<String, Tensor<T>>;

/// What differs between backends: leg dimensions and box tensors. Every
/// tensor lists its legs as the box's domain followed by its codomain.
trait Model {
    type T: Scalar;
    fn interp(&self) -> &Interpretation;
    fn base_dim(&self, x: &WireLabel) -> Result<usize, EvalError> {
        self.interp().dim(x.as_str())
    }
    fn leg_dim(&self, x: &WireLabel) -> Result<usize, EvalError>;
    /// Spider with `legs` legs; a legless spider is the loop value.
    fn spider(&self, legs: usize, x: &WireLabel) -> Result<Tensor<Self::T>, EvalError>;
    fn discard(&self, x: &WireLabel) -> Result<Tensor<Self::T>, EvalError>;
    /// Payload tensor for an undaggered generic box with the given legs.
    fn payload(&self, b: &DBox, legs: &[WireLabel]) -> Result<Tensor<Self::T>, EvalError>;
    fn no_prior(&self, legs: &[WireLabel]) -> Result<Tensor<Self::T>, EvalError>;
    fn negate(&self, v: Tensor<Self::T>, x: &WireLabel) -> Result<Tensor<Self::T>, EvalError>;
}

fn leg_dims<M: Model>(m: &M, legs: &[WireLabel]) -> Result<Vec<usize>, EvalError> {
    legs.iter().map(|x| m.leg_dim(x)).collect()
}

fn check_shape<T: Scalar>(name: &str, t: &Tensor<T>, expected: &[usize]) -> Result<(), EvalError> {
    if t.shape() != expected {
        return Err(EvalError::PayloadShape {
            name: name.to_string(),
            expected: expected.to_vec(),
            found: t.shape().to_vec(),
        });
    }
    Ok(())
}

fn box_tensor<M: Model>(
    m: &M,
    b: &DBox,
    overlay: &Overlay<M::T>,
) -> Result<Tensor<M::T>, EvalError> {
    let legs: Vec<WireLabel> = b.dom.iter().chain(&b.cod).cloned().collect();
    match b.kind {
        BoxKind::Spider => m.spider(b.legs(), &b.spider_label()),
        BoxKind::Cap | BoxKind::Cup => m.spider(2, &b.spider_label()),
        BoxKind::Discard => m.discard(&b.spider_label()),
        BoxKind::Swap => {
            let dims = leg_dims(m, &legs)?;
            Ok(Tensor::from_fn(dims, |i| {
                if i[0] == i[3] && i[1] == i[2] {
                    M::T::one()
                } else {
                    M::T::zero()
                }
            }))
        }
        BoxKind::Negation => Err(EvalError::Unsupported(
            "an uncut negation box".to_string(),
        )),
        BoxKind::Generic => {
            let expected = leg_dims(m, &legs)?;
            if let Some(t) = overlay.get(&b.name) {
                check_shape(&b.name, t, &expected)?;
                return Ok(t.clone());
            }
            // Payloads are stored for the undaggered box: legs cod ++ dom of
            // a daggered one.
            let (orig_dom, orig_cod) = if b.dagger {
                (&b.cod, &b.dom)
            } else {
                (&b.dom, &b.cod)
            };
            let orig_legs: Vec<WireLabel> = orig_dom.iter().chain(orig_cod).cloned().collect();
            let t = if b.name == NO_PRIOR && !m.interp().payloads.contains_key(NO_PRIOR) {
                m.no_prior(&orig_legs)?
            } else {
                m.payload(b, &orig_legs)?
            };
            check_shape(&b.name, &t, &leg_dims(m, &orig_legs)?)?;
            if !b.dagger {
                return Ok(t);
            }
            let (nd, nc) = (b.dom.len(), b.cod.len());
            let perm: Vec<usize> = (0..nd).map(|k| nc + k).chain(0..nc).collect();
            Ok(t.permute(&perm).conj())
        }
    }
}

/// Contracts a negation-free diagram.
fn network<M: Model>(m: &M, d: &Diagram, overlay: &Overlay<M::T>) -> Result<Tensor<M::T>, EvalError> {
    let mut nodes = Vec::new();
    let mut id_of: BTreeMap<Port, usize> = BTreeMap::new();
    let mut next = 0;
    for w in d.wires() {
        let boundary = |p: Port| p.box_index().is_none();
        if boundary(w.src) && boundary(w.tgt) {
            let x = d.port_label(w.src).expect("wire has a label");
            nodes.push(Node {
                tensor: Tensor::delta(2, m.leg_dim(x)?),
                indices: vec![next, next + 1],
            });
            id_of.insert(w.src, next);
            id_of.insert(w.tgt, next + 1);
            next += 2;
        } else {
            id_of.insert(w.src, next);
            id_of.insert(w.tgt, next);
            next += 1;
        }
    }
    for (i, b) in d.boxes().iter().enumerate() {
        let indices: Vec<usize> = (0..b.dom.len())
            .map(|k| id_of[&Port::BoxIn(i, k)])
            .chain((0..b.cod.len()).map(|k| id_of[&Port::BoxOut(i, k)]))
            .collect();
        if b.kind == BoxKind::Spider && indices.len() > 3 {
            // A dense many-legged spider is exponential in its legs; fuse a
            // chain of three-legged ones instead.
            let three = m.spider(3, &b.spider_label())?;
            let last = indices.len() - 1;
            let mut carry = indices[0];
            for &leg in &indices[1..last - 1] {
                nodes.push(Node {
                    tensor: three.clone(),
                    indices: vec![carry, leg, next],
                });
                carry = next;
                next += 1;
            }
            nodes.push(Node {
                tensor: three,
                indices: vec![carry, indices[last - 1], indices[last]],
            });
            continue;
        }
        let tensor = box_tensor(m, b, overlay)?;
        nodes.push(Node { tensor, indices });
    }
    let open: Vec<usize> = (0..d.dom().len())
        .map(|k| id_of[&Port::Input(k)])
        .chain((0..d.cod().len()).map(|k| id_of[&Port::Output(k)]))
        .collect();
    Ok(contract(nodes, &open))
}

fn fresh_name<T>(prefix: &str, overlay: &Overlay<T>) -> String {
    (0..)
        .map(|k| format!("#{prefix}{k}"))
        .find(|n| !overlay.contains_key(n))
        .expect("unbounded supply of names")
}

/// Replaces the closed component feeding a negation box by a synthetic
/// state carrying the negated value.
fn cut_negation<M: Model>(
    m: &M,
    d: &Diagram,
    neg: usize,
    overlay: &mut Overlay<M::T>,
) -> Result<Diagram, EvalError> {
    let cut_err = |s: &str| EvalError::NegationCut(s.to_string());
    let feed = d
        .neighbour(Port::BoxIn(neg, 0))
        .ok_or_else(|| cut_err("unconnected input"))?;
    let start = match feed {
        Port::BoxOut(b, _) if b != neg => b,
        Port::BoxOut(..) => return Err(cut_err("the negation feeds itself")),
        _ => return Err(cut_err("its input comes from the diagram boundary")),
    };
    let mut comp = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(b) = stack.pop() {
        let bx = &d.boxes()[b];
        let ports = (0..bx.dom.len())
            .map(|k| Port::BoxIn(b, k))
            .chain((0..bx.cod.len()).map(|k| Port::BoxOut(b, k)));
        for p in ports {
            let q = d.neighbour(p).expect("valid diagrams wire every port");
            match q.box_index() {
                None => return Err(cut_err("its input depends on the diagram boundary")),
                Some(x) if x == neg => {
                    if !(p == feed && q == Port::BoxIn(neg, 0)) {
                        return Err(cut_err("its input is connected to its output"));
                    }
                }
                Some(x) => {
                    if comp.insert(x) {
                        stack.push(x);
                    }
                }
            }
        }
    }
    let order: Vec<usize> = comp.iter().copied().collect();
    let local = |p: Port| match p {
        Port::BoxIn(b, k) => Port::BoxIn(order.binary_search(&b).unwrap(), k),
        Port::BoxOut(b, k) => Port::BoxOut(order.binary_search(&b).unwrap(), k),
        p => p,
    };
    let inside = |p: Port| p.box_index().is_some_and(|b| comp.contains(&b));
    let mut wires: Vec<Wire> = d
        .wires()
        .iter()
        .filter(|w| inside(w.src) && inside(w.tgt))
        .map(|w| Wire {
            src: local(w.src),
            tgt: local(w.tgt),
        })
        .collect();
    wires.push(Wire {
        src: local(feed),
        tgt: Port::Output(0),
    });
    let x = d.boxes()[neg].dom[0].clone();
    let sub = Diagram::from_parts(
        order.iter().map(|&b| d.boxes()[b].clone()).collect(),
        wires,
        vec![],
        vec![x.clone()],
    )?;
    let value = eval_model(m, &sub, overlay)?;
    let negated = m.negate(value, &x)?;
    let name = fresh_name("neg", overlay);
    overlay.insert(name.clone(), negated);
    let target = d
        .neighbour(Port::BoxOut(neg, 0))
        .ok_or_else(|| cut_err("unconnected output"))?;
    let mut remove = order;
    remove.push(neg);
    Ok(d.splice(
        &remove,
        vec![DBox::generic(name, vec![], vec![x])],
        vec![Wire {
            src: Port::BoxOut(d.boxes().len(), 0),
            tgt: target,
        }],
    ))
}

fn eval_model<M: Model>(
    m: &M,
    d: &Diagram,
    overlay: &mut Overlay<M::T>,
) -> Result<Tensor<M::T>, EvalError> {
    let mut d = d.clone();
    while let Some(neg) = d.boxes().iter().position(|b| b.kind == BoxKind::Negation) {
        d = cut_negation(m, &d, neg, overlay)?;
    }
    network(m, &d, overlay)
}

// ---------------------------------------------------------------- matrix

struct MatrixModel<'a, T> {
    interp: &'a Interpretation,
    _t: std::marker::PhantomData<T>,
}

trait FromPayload: Scalar {
    fn from_payload(p: &Payload, name: &str) -> Result<Tensor<Self>, EvalError>;
}

impl FromPayload for f64 {
    fn from_payload(p: &Payload, name: &str) -> Result<Tensor<f64>, EvalError> {
        match p {
            Payload::Real(t) => Ok(t.clone()),
            Payload::Complex(_) => Err(EvalError::Unsupported(format!(
                "complex payload {name:?} in a real evaluation"
            ))),
            _ => Err(EvalError::Unsupported(format!(
                "density or Kraus payload {name:?} outside the CPM backend"
            ))),
        }
    }
}

impl FromPayload for Complex64 {
    fn from_payload(p: &Payload, name: &str) -> Result<Tensor<Complex64>, EvalError> {
        match p {
            Payload::Real(t) => Ok(t.map(Complex64::from_f64)),
            Payload::Complex(t) => Ok(t.clone()),
            _ => Err(EvalError::Unsupported(format!(
                "density or Kraus payload {name:?} outside the CPM backend"
            ))),
        }
    }
}

impl FromPayload for bool {
    fn from_payload(p: &Payload, name: &str) -> Result<Tensor<bool>, EvalError> {
        match p {
            Payload::Real(t) => Ok(t.map(|x| x != 0.0)),
            Payload::Complex(t) => Ok(t.map(|z: Complex64| z.norm() != 0.0)),
            _ => Err(EvalError::Unsupported(format!(
                "density or Kraus payload {name:?} in the relational backend"
            ))),
        }
    }
}

trait Negate: Scalar {
    fn negate(self) -> Self;
}

impl Negate for f64 {
    fn negate(self) -> Self {
        1.0 - self
    }
}

impl Negate for Complex64 {
    fn negate(self) -> Self {
        Complex64::new(1.0, 0.0) - self
    }
}

impl Negate for bool {
    fn negate(self) -> Self {
        !self
    }
}

impl<T: FromPayload + Negate> Model for MatrixModel<'_, T> {
    type T = T;

    fn interp(&self) -> &Interpretation {
        self.interp
    }

    fn leg_dim(&self, x: &WireLabel) -> Result<usize, EvalError> {
        self.base_dim(x)
    }

    fn spider(&self, legs: usize, x: &WireLabel) -> Result<Tensor<T>, EvalError> {
        let d = self.base_dim(x)?;
        if legs == 0 {
            // Loop value: d summed ones.
            return Ok(Tensor::scalar(
                (0..d).fold(T::zero(), |acc, _| acc.add(T::one())),
            ));
        }
        Ok(Tensor::delta(legs, d))
    }

    fn discard(&self, x: &WireLabel) -> Result<Tensor<T>, EvalError> {
        Ok(Tensor::from_fn(vec![self.base_dim(x)?], |_| T::one()))
    }

    fn payload(&self, b: &DBox, _legs: &[WireLabel]) -> Result<Tensor<T>, EvalError> {
        let p = self
            .interp
            .payloads
            .get(&b.name)
            .ok_or_else(|| EvalError::MissingPayload(b.name.clone()))?;
        T::from_payload(p, &b.name)
    }

    fn no_prior(&self, legs: &[WireLabel]) -> Result<Tensor<T>, EvalError> {
        Ok(Tensor::from_fn(leg_dims(self, legs)?, |_| T::one()))
    }

    fn negate(&self, v: Tensor<T>, _x: &WireLabel) -> Result<Tensor<T>, EvalError> {
        Ok(v.map(Negate::negate))
    }
}

// ---------------------------------------------------------------- CPM

struct CpmModel<'a> {
    interp: &'a Interpretation,
}

/// Doubled tensor of an operator on legs with base dims `dims`:
/// `T[(i₁j₁),…] = op(I, J)`.
fn doubled(dims: &[usize], op: impl Fn(usize, usize) -> f64) -> Tensor<f64> {
    let shape: Vec<usize> = dims.iter().map(|d| d * d).collect();
    Tensor::from_fn(shape, |idx| {
        let (mut r, mut c) = (0, 0);
        for (k, &p) in idx.iter().enumerate() {
            r = r * dims[k] + p / dims[k];
            c = c * dims[k] + p % dims[k];
        }
        op(r, c)
    })
}

/// Doubled tensor of the CP map with the given Kraus operators; legs are the
/// inputs (`din`) followed by the outputs (`dout`).
fn kraus_doubled(kraus: &[Matrix], din: &[usize], dout: &[usize]) -> Tensor<f64> {
    let all: Vec<usize> = din.iter().chain(dout).copied().collect();
    let n_in = din.len();
    let shape: Vec<usize> = all.iter().map(|d| d * d).collect();
    Tensor::from_fn(shape, |idx| {
        let (mut ai, mut bi, mut ao, mut bo) = (0, 0, 0, 0);
        for (k, &p) in idx.iter().enumerate() {
            let d = all[k];
            if k < n_in {
                ai = ai * d + p / d;
                bi = bi * d + p % d;
            } else {
                ao = ao * d + p / d;
                bo = bo * d + p % d;
            }
        }
        kraus.iter().map(|k| k[(ao, ai)] * k[(bo, bi)]).sum()
    })
}

/// Density operator of a doubled state tensor.
fn undouble(t: &Tensor<f64>, dims: &[usize]) -> Matrix {
    CpmValue {
        tensor: t.clone(),
        dims: dims.to_vec(),
        n_inputs: 0,
    }
    .density()
    .expect("a state")
}

impl Model for CpmModel<'_> {
    type T = f64;

    fn interp(&self) -> &Interpretation {
        self.interp
    }

    fn leg_dim(&self, x: &WireLabel) -> Result<usize, EvalError> {
        let d = self.base_dim(x)?;
        Ok(d * d)
    }

    fn spider(&self, legs: usize, x: &WireLabel) -> Result<Tensor<f64>, EvalError> {
        let d = self.base_dim(x)?;
        if legs == 0 {
            return Ok(Tensor::scalar((d * d) as f64));
        }
        // Equal doubled indices means equal ket and bra halves.
        Ok(Tensor::delta(legs, d * d))
    }

    fn discard(&self, x: &WireLabel) -> Result<Tensor<f64>, EvalError> {
        let d = self.base_dim(x)?;
        Ok(doubled(&[d], |i, j| if i == j { 1.0 } else { 0.0 }))
    }

    fn payload(&self, b: &DBox, legs: &[WireLabel]) -> Result<Tensor<f64>, EvalError> {
        let p = self
            .interp
            .payloads
            .get(&b.name)
            .ok_or_else(|| EvalError::MissingPayload(b.name.clone()))?;
        let (n_dom, n_cod) = if b.dagger {
            (b.cod.len(), b.dom.len())
        } else {
            (b.dom.len(), b.cod.len())
        };
        let base: Vec<usize> = legs
            .iter()
            .map(|x| self.base_dim(x))
            .collect::<Result<_, _>>()?;
        let (din, dout) = base.split_at(n_dom);
        let din_n: usize = din.iter().product();
        let dout_n: usize = dout.iter().product();
        debug_assert_eq!(n_cod, dout.len());
        let mismatch = |found: Vec<usize>| EvalError::PayloadShape {
            name: b.name.clone(),
            expected: vec![dout_n, din_n],
            found,
        };
        match p {
            Payload::Real(t) => {
                if t.shape() != base {
                    return Err(EvalError::PayloadShape {
                        name: b.name.clone(),
                        expected: base.clone(),
                        found: t.shape().to_vec(),
                    });
                }
                // A pure map: its single Kraus operator is the matrix (out × in).
                let k = Matrix::from_fn(dout_n, din_n, |o, i| t.data()[i * dout_n + o]);
                Ok(kraus_doubled(&[k], din, dout))
            }
            Payload::Complex(_) => Err(EvalError::Unsupported(format!(
                "complex payload {:?} in the CPM backend",
                b.name
            ))),
            Payload::Density(rho) => {
                if n_dom != 0 {
                    return Err(EvalError::InvalidPayload(format!(
                        "density payload {:?} on a box with inputs",
                        b.name
                    )));
                }
                if rho.nrows() != dout_n {
                    return Err(mismatch(vec![rho.nrows(), rho.ncols()]));
                }
                Ok(doubled(dout, |r, c| rho[(r, c)]))
            }
            Payload::Kraus(ks) => {
                let s = ks[0].shape();
                if s != (dout_n, din_n) {
                    return Err(mismatch(vec![s.0, s.1]));
                }
                Ok(kraus_doubled(ks, din, dout))
            }
        }
    }

    fn no_prior(&self, legs: &[WireLabel]) -> Result<Tensor<f64>, EvalError> {
        let dims: Vec<usize> = legs
            .iter()
            .map(|x| self.base_dim(x))
            .collect::<Result<_, _>>()?;
        let total: usize = dims.iter().product();
        Ok(doubled(&dims, |r, c| {
            if r == c {
                1.0 / total as f64
            } else {
                0.0
            }
        }))
    }

    fn negate(&self, v: Tensor<f64>, x: &WireLabel) -> Result<Tensor<f64>, EvalError> {
        let d = self.base_dim(x)?;
        let rho = undouble(&v, &[d]);
        let n = density::negation(&rho)?;
        Ok(doubled(&[d], |r, c| n[(r, c)]))
    }
}

/// Density of a generic state box usable as an adjective, if it is one.
fn adjective_density(m: &CpmModel, b: &DBox) -> Option<Matrix> {
    if b.kind != BoxKind::Generic || b.dagger || !b.dom.is_empty() || b.cod.len() != 1 {
        return None;
    }
    let d = m.base_dim(&b.cod[0]).ok()?;
    match m.interp.payloads.get(&b.name) {
        Some(Payload::Density(rho)) if rho.nrows() == d => Some(rho.clone()),
        Some(Payload::Real(t)) if t.shape() == [d] => Some(density::pure(t.data())),
        None if b.name == NO_PRIOR => Some(density::maximally_mixed(d)),
        _ => None,
    }
}

/// Rewrites every merging spider whose extra inputs are states into a
/// single-input process (or a state) implementing the non-commutative merge.
fn apply_merge_mode(
    m: &CpmModel,
    d: &Diagram,
    overlay: &mut Overlay<f64>,
) -> Result<Diagram, EvalError> {
    let mut d = d.clone();
    'outer: loop {
        for (s, b) in d.boxes().iter().enumerate() {
            if b.kind != BoxKind::Spider || b.cod.len() != 1 || b.dom.len() < 2 {
                continue;
            }
            let feeds: Vec<Port> = (0..b.dom.len())
                .map(|k| d.neighbour(Port::BoxIn(s, k)).expect("wired"))
                .collect();
            let adj: Vec<Option<(usize, Matrix)>> = feeds
                .iter()
                .map(|p| match *p {
                    Port::BoxOut(x, 0) if x != s => {
                        adjective_density(m, &d.boxes()[x]).map(|r| (x, r))
                    }
                    _ => None,
                })
                .collect();
            let mains: Vec<usize> = (0..feeds.len()).filter(|&k| adj[k].is_none()).collect();
            if mains.len() > 1 {
                continue;
            }
            let x = b.cod[0].clone();
            let dim = m.base_dim(&x)?;
            let target = d.neighbour(Port::BoxOut(s, 0)).expect("wired");
            let mut remove = vec![s];
            remove.extend(adj.iter().flatten().map(|(x, _)| *x));
            let new_port = Port::BoxOut(d.boxes().len(), 0);
            let name = fresh_name("merge", overlay);
            let mut extra = vec![Wire {
                src: new_port,
                tgt: target,
            }];
            let new_box = if let [main] = mains[..] {
                let adjs: Vec<&Matrix> = adj.iter().flatten().map(|(_, r)| r).collect();
                // With row r = (ain, aout) and column c = (bin, bout),
                // `doubled` lays legs out as (ain bin)(aout bout).
                let t = doubled(&[dim, dim], |r, c| {
                    let (ain, aout) = (r / dim, r % dim);
                    let (bin, bout) = (c / dim, c % dim);
                    let mut e = Matrix::zeros(dim, dim);
                    e[(ain, bin)] = 1.0;
                    let out = adjs.iter().fold(e, |acc, a| density::mixed_adjective(a, &acc));
                    out[(aout, bout)]
                });
                overlay.insert(name.clone(), t);
                extra.push(Wire {
                    src: feeds[main],
                    tgt: Port::BoxIn(d.boxes().len(), 0),
                });
                DBox::generic(name, vec![x.clone()], vec![x])
            } else {
                let states: Vec<&Matrix> = adj.iter().flatten().map(|(_, r)| r).collect();
                let apply = |main: &Matrix, rest: &[&Matrix]| {
                    rest.iter()
                        .fold(main.clone(), |acc, a| density::mixed_adjective(a, &acc))
                };
                let rho = if m.interp.merge == MergeMode::Symmetrized && states.len() == 2 {
                    (apply(states[0], &[states[1]]) + apply(states[1], &[states[0]])) * 0.5
                } else {
                    apply(states[0], &states[1..])
                };
                overlay.insert(name.clone(), doubled(&[dim], |r, c| rho[(r, c)]));
                DBox::generic(name, vec![], vec![x])
            };
            d = d.splice(&remove, vec![new_box], extra);
            continue 'outer;
        }
        return Ok(d);
    }
}

// ---------------------------------------------------------------- entry

fn uses_complex(interp: &Interpretation, d: &Diagram) -> bool {
    d.boxes().iter().any(|b| {
        b.kind == BoxKind::Generic && matches!(interp.payloads.get(&b.name), Some(Payload::Complex(_)))
    })
}

pub(super) fn evaluate(interp: &Interpretation, d: &Diagram) -> Result<Value, EvalError> {
    match interp.backend {
        Backend::Matrix if uses_complex(interp, d) => {
            let m = MatrixModel::<Complex64> {
                interp,
                _t: Default::default(),
            };
            Ok(Value::Complex(eval_model(&m, d, &mut BTreeMap::new())?))
        }
        Backend::Matrix => {
            let m = MatrixModel::<f64> {
                interp,
                _t: Default::default(),
            };
            Ok(Value::Real(eval_model(&m, d, &mut BTreeMap::new())?))
        }
        Backend::Relational => {
            let m = MatrixModel::<bool> {
                interp,
                _t: Default::default(),
            };
            Ok(Value::Relation(eval_model(&m, d, &mut BTreeMap::new())?))
        }
        Backend::Cpm => {
            let m = CpmModel { interp };
            let mut overlay = BTreeMap::new();
            let d = if interp.merge == MergeMode::Spider {
                d.clone()
            } else {
                let n = crate::rewrite::normalize_with(d, crate::rewrite::NormalizeOptions::cpm_safe());
                apply_merge_mode(&m, &n.diagram, &mut overlay)?
            };
            let tensor = eval_model(&m, &d, &mut overlay)?;
            let dims = d
                .dom()
                .iter()
                .chain(d.cod())
                .map(|x| m.base_dim(x))
                .collect::<Result<_, _>>()?;
            Ok(Value::Cpm(CpmValue {
                tensor,
                dims,
                n_inputs: d.dom().len(),
            }))
        }
    }
}
