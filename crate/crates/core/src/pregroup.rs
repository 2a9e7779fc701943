// SPDX-License-Identifier: Apache-2.0

//! Pregroup types and reductions.
//!
//! A simple type is a basic type with an integer adjoint order `z`: `0` is the
//! plain type, `-1` the left adjoint (`x^l`), `+1` the right adjoint (`x^r`),
//! and further iterates are `x^ll`, `x^rr`, ... A factor `(x, z)` cancels with
//! a following `(x, z + 1)`, so `n . n^r` and `n^l . n` both vanish.
//!
//! Reductions are non-crossing partial matchings over the flattened factors in
//! which every link encloses only linked positions; the unlinked positions, in
//! order, must spell the target type.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{DBox, Diagram, Port, Wire, WireLabel};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasicType(pub String);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimpleType {
    pub base: BasicType,
    pub adjoint: i32,
}

impl SimpleType {
    pub fn new(base: &str, adjoint: i32) -> Self {
        SimpleType {
            base: BasicType(base.to_string()),
            adjoint,
        }
    }

    /// Whether `self` followed by `other` cancels.
    pub fn contracts_with(&self, other: &SimpleType) -> bool {
        self.base == other.base && self.adjoint + 1 == other.adjoint
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base.0)?;
        match self.adjoint {
            0 => Ok(()),
            z if z < 0 => write!(f, "^{}", "l".repeat(z.unsigned_abs() as usize)),
            z => write!(f, "^{}", "r".repeat(z as usize)),
        }
    }
}

/// A product of simple types; the empty product is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PregroupType {
    pub factors: Vec<SimpleType>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TypeParseError {
    #[error("empty factor in type {0:?}")]
    EmptyFactor(String),
    #[error("bad adjoint marker {marker:?} in factor {factor:?}")]
    BadAdjoint { factor: String, marker: String },
}

impl PregroupType {
    pub fn unit() -> Self {
        PregroupType::default()
    }

    pub fn simple(base: &str, adjoint: i32) -> Self {
        PregroupType {
            factors: vec![SimpleType::new(base, adjoint)],
        }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn concat(&self, other: &PregroupType) -> PregroupType {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        PregroupType { factors }
    }

    fn shifted_reverse(&self, dz: i32) -> PregroupType {
        PregroupType {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|f| SimpleType {
                    base: f.base.clone(),
                    adjoint: f.adjoint + dz,
                })
                .collect(),
        }
    }

    pub fn left_adjoint(&self) -> PregroupType {
        self.shifted_reverse(-1)
    }

    pub fn right_adjoint(&self) -> PregroupType {
        self.shifted_reverse(1)
    }
}

impl fmt::Display for PregroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, t) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" . ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for PregroupType {
    type Err = TypeParseError;

    /// Parses `"n^r . s . n^l"`; `"1"` or the empty string is the unit.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(PregroupType::unit());
        }
        let mut factors = Vec::new();
        for part in s.split('.') {
            let part = part.trim();
            let (base, marker) = part.split_once('^').unwrap_or((part, ""));
            let base = base.trim();
            if base.is_empty() {
                return Err(TypeParseError::EmptyFactor(s.to_string()));
            }
            let marker = marker.trim();
            let adjoint = if marker.is_empty() {
                0
            } else if marker.chars().all(|c| c == 'l') {
                -(marker.len() as i32)
            } else if marker.chars().all(|c| c == 'r') {
                marker.len() as i32
            } else {
                return Err(TypeParseError::BadAdjoint {
                    factor: part.to_string(),
                    marker: marker.to_string(),
                });
            };
            factors.push(SimpleType::new(base, adjoint));
        }
        Ok(PregroupType { factors })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("no reduction of {input} to {target}")]
pub struct NoReduction {
    pub input: String,
    pub target: String,
}

/// A witness that a sequence of word types reduces to a target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionProof {
    pub word_types: Vec<PregroupType>,
    /// Links `(i, j)`, `i < j`, over flattened positions, sorted.
    pub links: Vec<(usize, usize)>,
    /// Unlinked positions in order.
    pub survivors: Vec<usize>,
}

impl ReductionProof {
    pub fn flattened(&self) -> Vec<SimpleType> {
        flatten(&self.word_types)
    }

    /// The type spelled by the survivors.
    pub fn target(&self) -> PregroupType {
        let flat = self.flattened();
        PregroupType {
            factors: self.survivors.iter().map(|&i| flat[i].clone()).collect(),
        }
    }

    /// Word index and offset within the word of a flattened position.
    pub fn locate(&self, pos: usize) -> (usize, usize) {
        let mut start = 0;
        for (w, t) in self.word_types.iter().enumerate() {
            if pos < start + t.len() {
                return (w, pos - start);
            }
            start += t.len();
        }
        panic!("position {pos} out of range");
    }

    /// Checks every structural invariant against `target`.
    pub fn check(&self, target: &PregroupType) -> Result<(), String> {
        let flat = self.flattened();
        let n = flat.len();
        let mut partner = vec![None; n];
        for &(i, j) in &self.links {
            if !(i < j && j < n) {
                return Err(format!("link ({i}, {j}) out of order or range"));
            }
            if partner[i].is_some() || partner[j].is_some() {
                return Err(format!("link ({i}, {j}) reuses a position"));
            }
            partner[i] = Some(j);
            partner[j] = Some(i);
            if !flat[i].contracts_with(&flat[j]) {
                return Err(format!("{} at {i} does not cancel {} at {j}", flat[i], flat[j]));
            }
        }
        for &(i, j) in &self.links {
            for (k, p) in partner.iter().enumerate().take(j).skip(i + 1) {
                match p {
                    None => return Err(format!("survivor {k} inside link ({i}, {j})")),
                    Some(l) if *l < i || *l > j => {
                        return Err(format!("links ({i}, {j}) and ({k}, {l}) cross"))
                    }
                    _ => {}
                }
            }
        }
        let survivors: Vec<usize> = (0..n).filter(|&k| partner[k].is_none()).collect();
        if survivors != self.survivors {
            return Err("survivor list disagrees with links".into());
        }
        if &self.target() != target {
            return Err(format!("survivors spell {} not {target}", self.target()));
        }
        Ok(())
    }
}

pub fn flatten(types: &[PregroupType]) -> Vec<SimpleType> {
    types.iter().flat_map(|t| t.factors.iter().cloned()).collect()
}

struct Search<'a> {
    flat: &'a [SimpleType],
    target: &'a [SimpleType],
    /// Lexicographically least perfect matching of `[i, j)`, if any.
    block: HashMap<(usize, usize), Option<Vec<(usize, usize)>>>,
    tail: HashMap<(usize, usize), Option<Vec<(usize, usize)>>>,
}

impl Search<'_> {
    fn block(&mut self, i: usize, j: usize) -> Option<Vec<(usize, usize)>> {
        if i == j {
            return Some(Vec::new());
        }
        if (j - i) % 2 == 1 {
            return None;
        }
        if let Some(r) = self.block.get(&(i, j)) {
            return r.clone();
        }
        // `i` links to the smallest feasible partner: its link comes first in
        // any proof of the interval, and the remaining lists have fixed length.
        let mut result = None;
        for k in (i + 1..j).step_by(2) {
            if !self.flat[i].contracts_with(&self.flat[k]) {
                continue;
            }
            let Some(inner) = self.block(i + 1, k) else { continue };
            let Some(rest) = self.block(k + 1, j) else { continue };
            let mut links = vec![(i, k)];
            links.extend(inner);
            links.extend(rest);
            result = Some(links);
            break;
        }
        self.block.insert((i, j), result.clone());
        result
    }

    /// Positions `[p, n)` reduce to `target[q..]`.
    fn tail(&mut self, p: usize, q: usize) -> Option<Vec<(usize, usize)>> {
        let n = self.flat.len();
        if p == n {
            return (q == self.target.len()).then(Vec::new);
        }
        if let Some(r) = self.tail.get(&(p, q)) {
            return r.clone();
        }
        // Every proof has the same number of links, so opening a link at `p`
        // always beats leaving `p` as a survivor.
        let mut result = None;
        for k in (p + 1..n).step_by(2) {
            if !self.flat[p].contracts_with(&self.flat[k]) {
                continue;
            }
            let Some(inner) = self.block(p + 1, k) else { continue };
            let Some(rest) = self.tail(k + 1, q) else { continue };
            let mut links = vec![(p, k)];
            links.extend(inner);
            links.extend(rest);
            result = Some(links);
            break;
        }
        if result.is_none() && q < self.target.len() && self.flat[p] == self.target[q] {
            result = self.tail(p + 1, q + 1);
        }
        self.tail.insert((p, q), result.clone());
        result
    }
}

fn proof_from_links(
    types: &[PregroupType],
    mut links: Vec<(usize, usize)>,
) -> ReductionProof {
    links.sort_unstable();
    let n: usize = types.iter().map(PregroupType::len).sum();
    let mut linked = vec![false; n];
    for &(i, j) in &links {
        linked[i] = true;
        linked[j] = true;
    }
    ReductionProof {
        word_types: types.to_vec(),
        links,
        survivors: (0..n).filter(|&k| !linked[k]).collect(),
    }
}

/// Finds the reduction of `types` to `target` whose sorted link list is
/// lexicographically least.
pub fn reduce(types: &[PregroupType], target: &PregroupType) -> Result<ReductionProof, NoReduction> {
    let flat = flatten(types);
    let mut search = Search {
        flat: &flat,
        target: &target.factors,
        block: HashMap::new(),
        tail: HashMap::new(),
    };
    match search.tail(0, 0) {
        Some(links) => Ok(proof_from_links(types, links)),
        None => Err(NoReduction {
            input: types
                .iter()
                .map(|t| format!("[{t}]"))
                .collect::<Vec<_>>()
                .join(" "),
            target: target.to_string(),
        }),
    }
}

/// Every reduction of `types` to `target`, sorted by link list.
pub fn all_proofs(types: &[PregroupType], target: &PregroupType) -> Vec<ReductionProof> {
    fn blocks(flat: &[SimpleType], i: usize, j: usize) -> Vec<Vec<(usize, usize)>> {
        if i == j {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for k in (i + 1..j).step_by(2) {
            if !flat[i].contracts_with(&flat[k]) {
                continue;
            }
            for inner in blocks(flat, i + 1, k) {
                for rest in blocks(flat, k + 1, j) {
                    let mut l = vec![(i, k)];
                    l.extend(inner.iter().copied());
                    l.extend(rest);
                    out.push(l);
                }
            }
        }
        out
    }
    fn tails(
        flat: &[SimpleType],
        target: &[SimpleType],
        p: usize,
        q: usize,
    ) -> Vec<Vec<(usize, usize)>> {
        if p == flat.len() {
            return if q == target.len() { vec![Vec::new()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for k in (p + 1..flat.len()).step_by(2) {
            if !flat[p].contracts_with(&flat[k]) {
                continue;
            }
            for inner in blocks(flat, p + 1, k) {
                for rest in tails(flat, target, k + 1, q) {
                    let mut l = vec![(p, k)];
                    l.extend(inner.iter().copied());
                    l.extend(rest);
                    out.push(l);
                }
            }
        }
        if q < target.len() && flat[p] == target[q] {
            out.extend(tails(flat, target, p + 1, q + 1));
        }
        out
    }
    let flat = flatten(types);
    let mut proofs: Vec<ReductionProof> = tails(&flat, &target.factors, 0, 0)
        .into_iter()
        .map(|l| proof_from_links(types, l))
        .collect();
    proofs.sort_by(|a, b| a.links.cmp(&b.links));
    proofs
}

/// The cancellation wiring of a proof: one input per flattened factor, a cup
/// per link and a through-wire per survivor. Wires carry the basic type.
pub fn reduction_to_diagram(proof: &ReductionProof) -> Diagram {
    let flat = proof.flattened();
    let dom: Vec<WireLabel> = flat.iter().map(|f| WireLabel(f.base.0.clone())).collect();
    let cod: Vec<WireLabel> = proof.survivors.iter().map(|&i| dom[i].clone()).collect();
    let mut boxes = Vec::new();
    let mut wires = Vec::new();
    for (b, &(i, j)) in proof.links.iter().enumerate() {
        boxes.push(DBox::cup(&dom[i]));
        wires.push(Wire {
            src: Port::Input(i),
            tgt: Port::BoxIn(b, 0),
        });
        wires.push(Wire {
            src: Port::Input(j),
            tgt: Port::BoxIn(b, 1),
        });
    }
    for (k, &i) in proof.survivors.iter().enumerate() {
        wires.push(Wire {
            src: Port::Input(i),
            tgt: Port::Output(k),
        });
    }
    Diagram::from_parts(boxes, wires, dom, cod).expect("proof wiring is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> PregroupType {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        let v = t("n^r . s . n^l");
        assert_eq!(v.factors[0], SimpleType::new("n", 1));
        assert_eq!(v.factors[2], SimpleType::new("n", -1));
        assert_eq!(v.to_string(), "n^r . s . n^l");
        assert_eq!(t("n^ll").factors[0].adjoint, -2);
        assert_eq!(t("1"), PregroupType::unit());
        assert_eq!(PregroupType::unit().to_string(), "1");
        assert!("n^x".parse::<PregroupType>().is_err());
        assert!("n . . s".parse::<PregroupType>().is_err());
    }

    #[test]
    fn adjoints() {
        assert_eq!(PregroupType::unit().left_adjoint(), PregroupType::unit());
        assert_eq!(t("n").left_adjoint(), t("n^l"));
        assert_eq!(t("n").right_adjoint(), t("n^r"));
        assert_eq!(t("n . s").left_adjoint(), t("s^l . n^l"));
        assert_eq!(t("n . s").left_adjoint().right_adjoint(), t("n . s"));
    }

    #[test]
    fn transitive_sentence() {
        let p = reduce(&[t("n"), t("n^r . s . n^l"), t("n")], &t("s")).unwrap();
        assert_eq!(p.links, vec![(0, 1), (3, 4)]);
        assert_eq!(p.survivors, vec![2]);
        p.check(&t("s")).unwrap();
    }

    #[test]
    fn trivial_and_adjective() {
        let p = reduce(&[t("s")], &t("s")).unwrap();
        assert!(p.links.is_empty());
        let p = reduce(&[t("n . n^l"), t("n")], &t("n")).unwrap();
        assert_eq!(p.links, vec![(1, 2)]);
        assert_eq!(all_proofs(&[t("n . n^l"), t("n")], &t("n")).len(), 1);
    }

    #[test]
    fn ungrammatical_input_fails() {
        assert!(reduce(&[t("n"), t("n")], &t("s")).is_err());
        assert!(reduce(&[t("n^l"), t("n")], &t("s")).is_err());
    }

    #[test]
    fn nested_links_are_allowed() {
        // Alice who hates Bob: n, n^r n s^l n, n^r s n^l, n
        let ws = [t("n"), t("n^r . n . s^l . n"), t("n^r . s . n^l"), t("n")];
        let p = reduce(&ws, &t("n")).unwrap();
        p.check(&t("n")).unwrap();
        assert_eq!(p.links, vec![(0, 1), (3, 6), (4, 5), (7, 8)]);
    }

    #[test]
    fn lexicographic_choice_among_ambiguous_proofs() {
        let ws = [t("s^l . s"), t("s^l . s")];
        let all = all_proofs(&ws, &t("s^l . s"));
        assert_eq!(all.len(), 2);
        let best = reduce(&ws, &t("s^l . s")).unwrap();
        assert_eq!(best, all[0]);
        assert_eq!(best.links, vec![(0, 1)]);
    }

    #[test]
    fn diagram_of_transitive_sentence() {
        let p = reduce(&[t("n"), t("n^r . s . n^l"), t("n")], &t("s")).unwrap();
        let d = reduction_to_diagram(&p);
        assert_eq!(d.dom().len(), 5);
        assert_eq!(d.cod(), &[WireLabel::from("s")]);
        assert_eq!(d.boxes().len(), 2);
    }
}
