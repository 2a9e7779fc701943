// SPDX-License-Identifier: Apache-2.0

//! String diagrams as typed port graphs.
//!
//! A [`Diagram`] is a set of boxes plus a set of directed wires. Every wire
//! runs from a *source* port (a boundary input or a box output) to a *target*
//! port (a boundary output or a box input), and every port is the endpoint of
//! exactly one wire. Caps and cups are ordinary boxes, so outputs can still be
//! connected to outputs by routing through a cup.
//!
//! Two diagrams are the same when their connectivity and labels agree; see
//! [`Diagram::equal_up_to_iso`].

mod dot;
mod iso;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dot::to_dot;
pub use text::ParseDiagramError;

/// Atomic wire type, e.g. `n` or `s`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WireLabel(pub String);

impl WireLabel {
    pub fn new(name: impl Into<String>) -> Self {
        WireLabel(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for WireLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for WireLabel {
    fn from(s: &str) -> Self {
        WireLabel(s.to_string())
    }
}

impl From<String> for WireLabel {
    fn from(s: String) -> Self {
        WireLabel(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BoxKind {
    Generic,
    Spider,
    Cap,
    Cup,
    Swap,
    Discard,
    Negation,
}

impl BoxKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoxKind::Generic => "generic",
            BoxKind::Spider => "spider",
            BoxKind::Cap => "cap",
            BoxKind::Cup => "cup",
            BoxKind::Swap => "swap",
            BoxKind::Discard => "discard",
            BoxKind::Negation => "negation",
        }
    }

    pub fn parse(s: &str) -> Option<BoxKind> {
        Some(match s {
            "generic" => BoxKind::Generic,
            "spider" => BoxKind::Spider,
            "cap" => BoxKind::Cap,
            "cup" => BoxKind::Cup,
            "swap" => BoxKind::Swap,
            "discard" => BoxKind::Discard,
            "negation" => BoxKind::Negation,
            _ => return None,
        })
    }

    /// Kinds that behave as spiders of the standard basis: they fuse.
    pub fn is_spider_like(self) -> bool {
        matches!(
            self,
            BoxKind::Spider | BoxKind::Cap | BoxKind::Cup | BoxKind::Discard
        )
    }
}

/// A box in a diagram. `name` is the payload reference for generic boxes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DBox {
    pub name: String,
    pub kind: BoxKind,
    pub dom: Vec<WireLabel>,
    pub cod: Vec<WireLabel>,
    /// Set when the box is the vertical flip of the named box.
    pub dagger: bool,
}

impl DBox {
    pub fn generic(name: impl Into<String>, dom: Vec<WireLabel>, cod: Vec<WireLabel>) -> Self {
        DBox {
            name: name.into(),
            kind: BoxKind::Generic,
            dom,
            cod,
            dagger: false,
        }
    }

    pub fn spider(m: usize, n: usize, x: &WireLabel) -> Self {
        DBox {
            name: x.0.clone(),
            kind: BoxKind::Spider,
            dom: vec![x.clone(); m],
            cod: vec![x.clone(); n],
            dagger: false,
        }
    }

    pub fn cap(x: &WireLabel) -> Self {
        DBox {
            name: String::new(),
            kind: BoxKind::Cap,
            dom: vec![],
            cod: vec![x.clone(), x.clone()],
            dagger: false,
        }
    }

    pub fn cup(x: &WireLabel) -> Self {
        DBox {
            name: String::new(),
            kind: BoxKind::Cup,
            dom: vec![x.clone(), x.clone()],
            cod: vec![],
            dagger: false,
        }
    }

    pub fn swap(x: &WireLabel, y: &WireLabel) -> Self {
        DBox {
            name: String::new(),
            kind: BoxKind::Swap,
            dom: vec![x.clone(), y.clone()],
            cod: vec![y.clone(), x.clone()],
            dagger: false,
        }
    }

    pub fn discard(x: &WireLabel) -> Self {
        DBox {
            name: String::new(),
            kind: BoxKind::Discard,
            dom: vec![x.clone()],
            cod: vec![],
            dagger: false,
        }
    }

    /// The dagger of a discard: a one-legged state.
    pub fn codiscard(x: &WireLabel) -> Self {
        DBox::discard(x).flipped()
    }

    pub fn negation(x: &WireLabel) -> Self {
        DBox {
            name: "¬".to_string(),
            kind: BoxKind::Negation,
            dom: vec![x.clone()],
            cod: vec![x.clone()],
            dagger: false,
        }
    }

    pub fn legs(&self) -> usize {
        self.dom.len() + self.cod.len()
    }

    /// The common label of a spider-like box. A legless spider keeps its
    /// label in `name`, which is what gives it a value (the dimension).
    pub fn spider_label(&self) -> WireLabel {
        self.dom
            .first()
            .or(self.cod.first())
            .cloned()
            .unwrap_or_else(|| WireLabel(self.name.clone()))
    }

    fn flipped(&self) -> DBox {
        let kind = match self.kind {
            BoxKind::Cap => BoxKind::Cup,
            BoxKind::Cup => BoxKind::Cap,
            k => k,
        };
        let dagger = match self.kind {
            BoxKind::Generic | BoxKind::Discard => !self.dagger,
            _ => self.dagger,
        };
        DBox {
            name: self.name.clone(),
            kind,
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            dagger,
        }
    }

    fn check_shape(&self) -> Result<(), String> {
        let same = |v: &[WireLabel], x: &WireLabel| v.iter().all(|l| l == x);
        match self.kind {
            BoxKind::Generic => Ok(()),
            BoxKind::Spider => {
                let x = self.spider_label();
                if same(&self.dom, &x) && same(&self.cod, &x) {
                    Ok(())
                } else {
                    Err("spider legs carry different labels".into())
                }
            }
            BoxKind::Cap => {
                if self.dom.is_empty() && self.cod.len() == 2 && self.cod[0] == self.cod[1] {
                    Ok(())
                } else {
                    Err("cap must have empty domain and codomain [x, x]".into())
                }
            }
            BoxKind::Cup => {
                if self.cod.is_empty() && self.dom.len() == 2 && self.dom[0] == self.dom[1] {
                    Ok(())
                } else {
                    Err("cup must have domain [x, x] and empty codomain".into())
                }
            }
            BoxKind::Swap => {
                if self.dom.len() == 2
                    && self.cod.len() == 2
                    && self.dom[0] == self.cod[1]
                    && self.dom[1] == self.cod[0]
                {
                    Ok(())
                } else {
                    Err("swap must map [x, y] to [y, x]".into())
                }
            }
            BoxKind::Discard => {
                let (one, none) = if self.dagger {
                    (&self.cod, &self.dom)
                } else {
                    (&self.dom, &self.cod)
                };
                if one.len() == 1 && none.is_empty() {
                    Ok(())
                } else {
                    Err("discard must have a single leg".into())
                }
            }
            BoxKind::Negation => {
                if self.dom.len() == 1 && self.dom == self.cod {
                    Ok(())
                } else {
                    Err("negation must map [x] to [x]".into())
                }
            }
        }
    }
}

/// An endpoint of a wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Port {
    /// k-th boundary input (a source).
    Input(usize),
    /// k-th boundary output (a target).
    Output(usize),
    /// k-th input of box b (a target).
    BoxIn(usize, usize),
    /// k-th output of box b (a source).
    BoxOut(usize, usize),
}

impl Port {
    pub fn is_source(self) -> bool {
        matches!(self, Port::Input(_) | Port::BoxOut(..))
    }

    pub fn box_index(self) -> Option<usize> {
        match self {
            Port::BoxIn(b, _) | Port::BoxOut(b, _) => Some(b),
            _ => None,
        }
    }

    fn flipped(self) -> Port {
        match self {
            Port::Input(k) => Port::Output(k),
            Port::Output(k) => Port::Input(k),
            Port::BoxIn(b, k) => Port::BoxOut(b, k),
            Port::BoxOut(b, k) => Port::BoxIn(b, k),
        }
    }

    fn shift_boxes(self, offset: usize) -> Port {
        match self {
            Port::BoxIn(b, k) => Port::BoxIn(b + offset, k),
            Port::BoxOut(b, k) => Port::BoxOut(b + offset, k),
            p => p,
        }
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Port::Input(k) => write!(f, "in:{k}"),
            Port::Output(k) => write!(f, "out:{k}"),
            Port::BoxIn(b, k) => write!(f, "b{b}.in:{k}"),
            Port::BoxOut(b, k) => write!(f, "b{b}.out:{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Wire {
    pub src: Port,
    pub tgt: Port,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagramError {
    #[error("type mismatch at position {position}: {left} vs {right}")]
    TypeMismatch {
        position: usize,
        left: String,
        right: String,
    },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("malformed diagram: {0}")]
    Malformed(String),
}

/// First position where two boundary types differ.
pub(crate) fn type_mismatch(a: &[WireLabel], b: &[WireLabel]) -> Option<DiagramError> {
    let n = a.len().max(b.len());
    (0..n).find_map(|i| {
        let l = a.get(i);
        let r = b.get(i);
        if l != r {
            Some(DiagramError::TypeMismatch {
                position: i,
                left: l.map_or("<none>".into(), |x| x.to_string()),
                right: r.map_or("<none>".into(), |x| x.to_string()),
            })
        } else {
            None
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Diagram {
    boxes: Vec<DBox>,
    /// Kept sorted so structural equality ignores construction order.
    wires: Vec<Wire>,
    dom: Vec<WireLabel>,
    cod: Vec<WireLabel>,
}

impl Diagram {
    /// Builds a diagram from raw parts, checking every invariant.
    pub fn from_parts(
        boxes: Vec<DBox>,
        wires: Vec<Wire>,
        dom: Vec<WireLabel>,
        cod: Vec<WireLabel>,
    ) -> Result<Diagram, DiagramError> {
        let mut wires = wires;
        wires.sort();
        let d = Diagram {
            boxes,
            wires,
            dom,
            cod,
        };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn raw(
        boxes: Vec<DBox>,
        mut wires: Vec<Wire>,
        dom: Vec<WireLabel>,
        cod: Vec<WireLabel>,
    ) -> Diagram {
        wires.sort();
        let d = Diagram {
            boxes,
            wires,
            dom,
            cod,
        };
        debug_assert!(d.validate().is_ok(), "{:?}", d.validate());
        d
    }

    /// The empty diagram (unit of the tensor).
    pub fn empty() -> Diagram {
        Diagram::raw(vec![], vec![], vec![], vec![])
    }

    pub fn id(labels: &[WireLabel]) -> Diagram {
        let wires = (0..labels.len())
            .map(|k| Wire {
                src: Port::Input(k),
                tgt: Port::Output(k),
            })
            .collect();
        Diagram::raw(vec![], wires, labels.to_vec(), labels.to_vec())
    }

    /// A diagram holding a single box, its legs wired to the boundary.
    pub fn from_box(b: DBox) -> Diagram {
        let mut wires = Vec::with_capacity(b.legs());
        for k in 0..b.dom.len() {
            wires.push(Wire {
                src: Port::Input(k),
                tgt: Port::BoxIn(0, k),
            });
        }
        for k in 0..b.cod.len() {
            wires.push(Wire {
                src: Port::BoxOut(0, k),
                tgt: Port::Output(k),
            });
        }
        let dom = b.dom.clone();
        let cod = b.cod.clone();
        Diagram::raw(vec![b], wires, dom, cod)
    }

    pub fn state(name: impl Into<String>, cod: Vec<WireLabel>) -> Diagram {
        Diagram::from_box(DBox::generic(name, vec![], cod))
    }

    pub fn effect(name: impl Into<String>, dom: Vec<WireLabel>) -> Diagram {
        Diagram::from_box(DBox::generic(name, dom, vec![]))
    }

    pub fn process(name: impl Into<String>, dom: Vec<WireLabel>, cod: Vec<WireLabel>) -> Diagram {
        Diagram::from_box(DBox::generic(name, dom, cod))
    }

    pub fn cap(x: &WireLabel) -> Diagram {
        Diagram::from_box(DBox::cap(x))
    }

    pub fn cup(x: &WireLabel) -> Diagram {
        Diagram::from_box(DBox::cup(x))
    }

    pub fn swap(x: &WireLabel, y: &WireLabel) -> Diagram {
        Diagram::from_box(DBox::swap(x, y))
    }

    pub fn discard(x: &WireLabel) -> Diagram {
        Diagram::from_box(DBox::discard(x))
    }

    pub fn negation(x: &WireLabel) -> Diagram {
        Diagram::from_box(DBox::negation(x))
    }

    /// A spider with `m` inputs and `n` outputs on `x`.
    pub fn spider(m: usize, n: usize, x: &WireLabel) -> Result<Diagram, DiagramError> {
        if m + n == 0 {
            return Err(DiagramError::Shape("spider needs at least one leg".into()));
        }
        Ok(Diagram::from_box(DBox::spider(m, n, x)))
    }

    pub fn copy(x: &WireLabel) -> Diagram {
        Diagram::from_box(DBox::spider(1, 2, x))
    }

    pub fn merge(x: &WireLabel) -> Diagram {
        Diagram::from_box(DBox::spider(2, 1, x))
    }

    pub fn boxes(&self) -> &[DBox] {
        &self.boxes
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn dom(&self) -> &[WireLabel] {
        &self.dom
    }

    pub fn cod(&self) -> &[WireLabel] {
        &self.cod
    }

    pub fn is_state(&self) -> bool {
        self.dom.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        self.dom.is_empty() && self.cod.is_empty()
    }

    pub fn port_label(&self, p: Port) -> Option<&WireLabel> {
        match p {
            Port::Input(k) => self.dom.get(k),
            Port::Output(k) => self.cod.get(k),
            Port::BoxIn(b, k) => self.boxes.get(b).and_then(|bx| bx.dom.get(k)),
            Port::BoxOut(b, k) => self.boxes.get(b).and_then(|bx| bx.cod.get(k)),
        }
    }

    /// Map from every port to the index of its wire.
    pub fn port_index(&self) -> BTreeMap<Port, usize> {
        let mut m = BTreeMap::new();
        for (i, w) in self.wires.iter().enumerate() {
            m.insert(w.src, i);
            m.insert(w.tgt, i);
        }
        m
    }

    /// The port at the other end of the wire touching `p`.
    pub fn neighbour(&self, p: Port) -> Option<Port> {
        self.wires.iter().find_map(|w| {
            if w.src == p {
                Some(w.tgt)
            } else if w.tgt == p {
                Some(w.src)
            } else {
                None
            }
        })
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        let bad = |m: String| Err(DiagramError::Malformed(m));
        for (i, b) in self.boxes.iter().enumerate() {
            if let Err(e) = b.check_shape() {
                return bad(format!("box {i} ({}): {e}", b.kind.as_str()));
            }
        }
        let mut seen = BTreeMap::new();
        for w in &self.wires {
            if !w.src.is_source() || w.tgt.is_source() {
                return bad(format!("wire {} -> {} has the wrong direction", w.src, w.tgt));
            }
            for p in [w.src, w.tgt] {
                if self.port_label(p).is_none() {
                    return bad(format!("port {p} does not exist"));
                }
                if seen.insert(p, ()).is_some() {
                    return bad(format!("port {p} is used twice"));
                }
            }
            if self.port_label(w.src) != self.port_label(w.tgt) {
                return bad(format!(
                    "wire {} -> {} joins {} to {}",
                    w.src,
                    w.tgt,
                    self.port_label(w.src).unwrap(),
                    self.port_label(w.tgt).unwrap()
                ));
            }
        }
        let ports = self.dom.len()
            + self.cod.len()
            + self.boxes.iter().map(DBox::legs).sum::<usize>();
        if seen.len() != ports {
            return bad(format!("{} of {ports} ports are connected", seen.len()));
        }
        Ok(())
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Diagram) -> Result<Diagram, DiagramError> {
        if let Some(e) = type_mismatch(&self.cod, &other.dom) {
            return Err(e);
        }
        let offset = self.boxes.len();
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());

        let mut into_out = vec![None; self.cod.len()];
        let mut wires = Vec::with_capacity(self.wires.len() + other.wires.len());
        for w in &self.wires {
            match w.tgt {
                Port::Output(k) => into_out[k] = Some(w.src),
                _ => wires.push(*w),
            }
        }
        for w in &other.wires {
            let tgt = w.tgt.shift_boxes(offset);
            match w.src {
                Port::Input(k) => {
                    let src = into_out[k].expect("validated diagram");
                    wires.push(Wire { src, tgt });
                }
                src => wires.push(Wire {
                    src: src.shift_boxes(offset),
                    tgt,
                }),
            }
        }
        Ok(Diagram::raw(
            boxes,
            wires,
            self.dom.clone(),
            other.cod.clone(),
        ))
    }

    /// `self` beside `other`.
    pub fn tensor(&self, other: &Diagram) -> Diagram {
        let boff = self.boxes.len();
        let ioff = self.dom.len();
        let ooff = self.cod.len();
        let shift = |p: Port| match p {
            Port::Input(k) => Port::Input(k + ioff),
            Port::Output(k) => Port::Output(k + ooff),
            p => p.shift_boxes(boff),
        };
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        let mut wires = self.wires.clone();
        wires.extend(other.wires.iter().map(|w| Wire {
            src: shift(w.src),
            tgt: shift(w.tgt),
        }));
        let mut dom = self.dom.clone();
        dom.extend(other.dom.iter().cloned());
        let mut cod = self.cod.clone();
        cod.extend(other.cod.iter().cloned());
        Diagram::raw(boxes, wires, dom, cod)
    }

    /// Tensor product of a sequence of diagrams.
    pub fn tensor_all<'a>(parts: impl IntoIterator<Item = &'a Diagram>) -> Diagram {
        parts
            .into_iter()
            .fold(Diagram::empty(), |acc, d| acc.tensor(d))
    }

    /// Vertical flip. An involution on the nose.
    pub fn dagger(&self) -> Diagram {
        let boxes = self.boxes.iter().map(DBox::flipped).collect();
        let wires = self
            .wires
            .iter()
            .map(|w| Wire {
                src: w.tgt.flipped(),
                tgt: w.src.flipped(),
            })
            .collect();
        Diagram::raw(boxes, wires, self.cod.clone(), self.dom.clone())
    }

    /// Bends the single input of a one-in-one-out diagram up with a cap.
    pub fn transpose_to_state(&self) -> Result<Diagram, DiagramError> {
        if self.dom.len() != 1 || self.cod.len() != 1 {
            return Err(DiagramError::Shape(format!(
                "box-state duality needs one input and one output, got {} and {}",
                self.dom.len(),
                self.cod.len()
            )));
        }
        Ok(self.to_state())
    }

    /// Map-state duality: bends every input up with a cap. The result is a
    /// state whose outputs are the old inputs followed by the old outputs.
    pub fn to_state(&self) -> Diagram {
        let caps = Diagram::tensor_all(self.dom.iter().map(Diagram::cap).collect::<Vec<_>>().iter());
        // caps: [] -> [x0 x0 x1 x1 ...]; route the second leg of each cap into self.
        let n = self.dom.len();
        let mut perm = Vec::with_capacity(2 * n);
        // output order wanted: x0 x1 ... (first legs), then the inputs of self (second legs)
        for k in 0..n {
            perm.push(2 * k);
        }
        for k in 0..n {
            perm.push(2 * k + 1);
        }
        let caps = caps.permute_outputs(&perm).expect("valid permutation");
        let body = Diagram::id(&self.dom).tensor(self);
        caps.then(&body).expect("types agree by construction")
    }

    /// Inverse of [`Diagram::transpose_to_state`]: a two-output state becomes a box.
    pub fn state_to_box(&self) -> Result<Diagram, DiagramError> {
        if !self.dom.is_empty() || self.cod.len() != 2 {
            return Err(DiagramError::Shape(
                "state_to_box needs a state with two outputs".into(),
            ));
        }
        let x = self.cod[0].clone();
        let y = self.cod[1].clone();
        let lhs = Diagram::id(std::slice::from_ref(&x)).tensor(self);
        let rhs = Diagram::cup(&x).tensor(&Diagram::id(&[y]));
        lhs.then(&rhs)
    }

    /// Reorders boundary outputs: new output `k` is old output `perm[k]`.
    pub fn permute_outputs(&self, perm: &[usize]) -> Result<Diagram, DiagramError> {
        let inv = invert(perm, self.cod.len())?;
        let wires = self
            .wires
            .iter()
            .map(|w| match w.tgt {
                Port::Output(k) => Wire {
                    src: w.src,
                    tgt: Port::Output(inv[k]),
                },
                _ => *w,
            })
            .collect();
        let cod = perm.iter().map(|&k| self.cod[k].clone()).collect();
        Ok(Diagram::raw(self.boxes.clone(), wires, self.dom.clone(), cod))
    }

    /// Reorders boundary inputs: new input `k` is old input `perm[k]`.
    pub fn permute_inputs(&self, perm: &[usize]) -> Result<Diagram, DiagramError> {
        let inv = invert(perm, self.dom.len())?;
        let wires = self
            .wires
            .iter()
            .map(|w| match w.src {
                Port::Input(k) => Wire {
                    src: Port::Input(inv[k]),
                    tgt: w.tgt,
                },
                _ => *w,
            })
            .collect();
        let dom = perm.iter().map(|&k| self.dom[k].clone()).collect();
        Ok(Diagram::raw(self.boxes.clone(), wires, dom, self.cod.clone()))
    }

    /// Same diagram with one box replaced by a box of identical shape.
    pub fn with_box(&self, index: usize, b: DBox) -> Result<Diagram, DiagramError> {
        let old = self
            .boxes
            .get(index)
            .ok_or_else(|| DiagramError::Shape(format!("no box {index}")))?;
        if old.dom != b.dom || old.cod != b.cod {
            return Err(DiagramError::Shape("replacement box has another type".into()));
        }
        let mut boxes = self.boxes.clone();
        boxes[index] = b;
        Diagram::from_parts(boxes, self.wires.clone(), self.dom.clone(), self.cod.clone())
    }

    /// Counts of boxes by kind, for quick inspection and tests.
    pub fn count_kind(&self, kind: BoxKind) -> usize {
        self.boxes.iter().filter(|b| b.kind == kind).count()
    }

    pub fn equal_up_to_iso(&self, other: &Diagram) -> bool {
        iso::isomorphic(self, other)
    }

    /// A hash invariant under isomorphism.
    pub fn iso_hash(&self) -> u64 {
        iso::invariant_hash(self)
    }

    pub fn to_text(&self) -> String {
        text::write(self)
    }

    pub fn from_text(s: &str) -> Result<Diagram, ParseDiagramError> {
        text::read(s)
    }

    /// Removes the listed boxes and rewires with `extra` wires.
    ///
    /// Wires touching removed boxes are dropped; `extra` must reconnect every
    /// port left dangling. Ports in `extra` refer to the old box numbering.
    pub(crate) fn splice(
        &self,
        remove: &[usize],
        new_boxes: Vec<DBox>,
        extra: Vec<Wire>,
    ) -> Diagram {
        // New boxes are appended after the survivors and use indices
        // self.boxes.len() + i in `extra`.
        let n_old = self.boxes.len();
        let mut remap = vec![usize::MAX; n_old + new_boxes.len()];
        let mut boxes = Vec::with_capacity(n_old + new_boxes.len());
        for (i, b) in self.boxes.iter().enumerate() {
            if !remove.contains(&i) {
                remap[i] = boxes.len();
                boxes.push(b.clone());
            }
        }
        for (j, b) in new_boxes.into_iter().enumerate() {
            remap[n_old + j] = boxes.len();
            boxes.push(b);
        }
        let fix = |p: Port| match p {
            Port::BoxIn(b, k) => Port::BoxIn(remap[b], k),
            Port::BoxOut(b, k) => Port::BoxOut(remap[b], k),
            p => p,
        };
        let touches = |p: Port| p.box_index().is_some_and(|b| remove.contains(&b));
        let mut wires: Vec<Wire> = self
            .wires
            .iter()
            .filter(|w| !touches(w.src) && !touches(w.tgt))
            .map(|w| Wire {
                src: fix(w.src),
                tgt: fix(w.tgt),
            })
            .collect();
        wires.extend(extra.into_iter().map(|w| Wire {
            src: fix(w.src),
            tgt: fix(w.tgt),
        }));
        Diagram::raw(boxes, wires, self.dom.clone(), self.cod.clone())
    }
}

fn invert(perm: &[usize], n: usize) -> Result<Vec<usize>, DiagramError> {
    if perm.len() != n {
        return Err(DiagramError::Shape(format!(
            "permutation of length {} for {n} wires",
            perm.len()
        )));
    }
    let mut inv = vec![usize::MAX; n];
    for (new, &old) in perm.iter().enumerate() {
        if old >= n || inv[old] != usize::MAX {
            return Err(DiagramError::Shape("not a permutation".into()));
        }
        inv[old] = new;
    }
    Ok(inv)
}
