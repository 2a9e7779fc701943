// SPDX-License-Identifier: Apache-2.0

//! One sentence → one gate.
//!
//! Every word becomes a gadget (see [`crate::wirings`]); the gadgets are laid
//! side by side, the reduction's links become cups between matching legs, and
//! what survives is sorted into noun wires:
//!
//! ```text
//!   participants ──P──▶ holes ──gadgets ; cups──▶ survivors ──Q──▶ outputs
//! ```
//!
//! `P` copies a dynamic noun mentioned more than once; `Q` merges every leg
//! carrying the same dynamic noun and discards the rest (or keeps legs of
//! static nouns, for the all-static DisCoCat reading).

use std::collections::{BTreeMap, BTreeSet};

use crate::diagram::{DBox, Diagram, Port, Wire, WireLabel};
use crate::lexicon::WordKind;
use crate::pregroup::{self, PregroupType};
use crate::wirings::{self, Binding, Gadget, Schema};

use super::{CompileError, TaggedWord};

pub(crate) const NOUN: &str = "n";

/// How words without a wiring are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Noun wires only; sentence types are bundles of noun wires.
    Circ,
    /// Every word is a state on its flattened type; nothing is discarded.
    Cat,
}

#[derive(Clone, Debug)]
pub(crate) struct GateSpec<'a> {
    pub sentence: usize,
    pub words: &'a [TaggedWord],
    pub target: &'a PregroupType,
    /// Dynamic nouns that are still alive, in wire order.
    pub live: &'a [String],
    /// Dynamic nouns whose wires have ended.
    pub vanished: &'a BTreeSet<String>,
    pub mode: Mode,
    /// Keep (rather than discard) outputs bound to static nouns.
    pub keep_static: bool,
}

#[derive(Clone, Debug)]
pub struct Gate {
    /// `dom` = participants, `cod` = outputs then kept statics.
    pub diagram: Diagram,
    /// Dynamic nouns the sentence mentions, in wire order.
    pub participants: Vec<String>,
    /// Participants whose wire ends here.
    pub terminated: Vec<String>,
    /// Participants that carry on, in wire order.
    pub outputs: Vec<String>,
    /// Static nouns with a kept output, in order of first mention.
    pub kept: Vec<String>,
    /// Static nouns the sentence had something to say about.
    pub updated_statics: Vec<String>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
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

pub(crate) fn compile_gate(spec: &GateSpec) -> Result<Gate, CompileError> {
    let i = spec.sentence;
    let words = spec.words;
    let types: Vec<PregroupType> = words.iter().map(|w| w.entry.ty.clone()).collect();
    let proof = pregroup::reduce(&types, spec.target).map_err(|source| CompileError::Grammar {
        sentence: i,
        source,
    })?;
    let flat = proof.flattened();
    let n = flat.len();
    let starts: Vec<usize> = types
        .iter()
        .scan(0, |acc, t| {
            let v = *acc;
            *acc += t.len();
            Some(v)
        })
        .collect();
    let pos = |w: usize, f: usize| starts[w] + f;
    let mut partner = vec![None; n];
    for &(a, b) in &proof.links {
        partner[a] = Some(b);
        partner[b] = Some(a);
    }
    let is_noun = |p: usize| flat[p].base.0 == NOUN;
    let bundle_err = |msg: String| CompileError::Bundle { sentence: i, msg };

    // Sentence-type positions fall into classes that share one bundle.
    let mut uf = UnionFind::new(n);
    for &(a, b) in &proof.links {
        uf.union(a, b);
    }
    for (w, word) in words.iter().enumerate() {
        if let WordKind::Schema(s) = &word.entry.kind {
            for (a, b) in s.tied_factors() {
                uf.union(pos(w, a), pos(w, b));
            }
        }
    }
    let mut declared: BTreeMap<usize, (usize, String)> = BTreeMap::new();
    let mut declare = |uf: &mut UnionFind, p: usize, k: usize, who: &str| {
        let c = uf.find(p);
        match declared.get(&c) {
            Some((k0, w0)) if *k0 != k => Err(bundle_err(format!(
                "{w0:?} needs a sentence bundle of {k0} wire(s), {who:?} needs {k}"
            ))),
            _ => {
                declared.insert(c, (k, who.to_string()));
                Ok(())
            }
        }
    };
    // Cat mode labels: "s" by default, "n" where a wiring spiders sentence
    // legs together with noun legs.
    let mut needs_noun_label = BTreeSet::new();
    let mut has_cat_state = BTreeSet::new();
    for (w, word) in words.iter().enumerate() {
        let e = &word.entry;
        match &e.kind {
            WordKind::Noun => {}
            WordKind::Schema(s) => {
                for (f, k) in s.bundle_sizes() {
                    declare(&mut uf, pos(w, f), k, &e.word)?;
                }
                if !matches!(s, Schema::Does | Schema::Not | Schema::RelativePronoun) {
                    for f in 0..e.ty.len() {
                        if !is_noun(pos(w, f)) {
                            needs_noun_label.insert(uf.find(pos(w, f)));
                        }
                    }
                }
            }
            WordKind::Generic { outputs } => {
                for (f, t) in e.ty.factors.iter().enumerate() {
                    let p = pos(w, f);
                    if is_noun(p) {
                        continue;
                    }
                    let k = if spec.mode == Mode::Circ && t.adjoint == 0 {
                        outputs.len()
                    } else {
                        1
                    };
                    declare(&mut uf, p, k, &e.word)?;
                    if spec.mode == Mode::Cat {
                        has_cat_state.insert(uf.find(p));
                    }
                }
            }
        }
    }
    let mut size = vec![1; n];
    let mut label = vec![WireLabel::new(NOUN); n];
    for p in 0..n {
        if is_noun(p) {
            continue;
        }
        let c = uf.find(p);
        size[p] = declared.get(&c).map_or(1, |d| d.0);
        if spec.mode == Mode::Cat && !needs_noun_label.contains(&c) {
            label[p] = WireLabel::new(flat[p].base.0.clone());
        }
        if needs_noun_label.contains(&c) && has_cat_state.contains(&c) {
            return Err(bundle_err(format!(
                "sentence wire at position {p} must be both a noun wire and a {} wire",
                flat[p].base.0
            )));
        }
    }
    let mut leg_start = vec![0; n + 1];
    for p in 0..n {
        leg_start[p + 1] = leg_start[p] + size[p];
    }
    let total_legs = leg_start[n];

    // Gadgets, holes and per-leg bindings.
    let x = WireLabel::new(NOUN);
    let mut gadgets = Vec::with_capacity(words.len());
    let mut holes: Vec<String> = Vec::new();
    let mut mentioned_statics: Vec<String> = Vec::new();
    let mut terminating = false;
    for (w, word) in words.iter().enumerate() {
        let e = &word.entry;
        let sizes: Vec<usize> = (0..e.ty.len()).map(|f| size[pos(w, f)]).collect();
        let g = match &e.kind {
            WordKind::Noun => {
                let dynamic = spec.mode == Mode::Circ && spec.live.contains(&e.word);
                if spec.mode == Mode::Circ && spec.vanished.contains(&e.word) {
                    return Err(CompileError::VanishedNoun {
                        sentence: i,
                        noun: e.word.clone(),
                    });
                }
                let diagram = if dynamic {
                    holes.push(e.word.clone());
                    Diagram::id(std::slice::from_ref(&x))
                } else {
                    if !mentioned_statics.contains(&e.word) {
                        mentioned_statics.push(e.word.clone());
                    }
                    Diagram::state(e.payload.clone(), vec![x.clone()])
                };
                Gadget {
                    diagram,
                    bindings: vec![Binding::Noun(e.word.clone())],
                }
            }
            WordKind::Schema(s) => {
                terminating |= s.is_terminating();
                let s_label = (0..e.ty.len())
                    .map(|f| pos(w, f))
                    .find(|&p| !is_noun(p))
                    .map_or(x.clone(), |p| label[p].clone());
                s.gadget_labelled(&sizes, &x, &s_label)
                    .map_err(|source| CompileError::Wiring {
                        sentence: i,
                        word: e.word.clone(),
                        source,
                    })?
            }
            WordKind::Generic { outputs } => match spec.mode {
                Mode::Circ => {
                    terminating |= outputs.len() < e.arity();
                    wirings::generic_gadget(&e.payload, &e.ty, outputs, &sizes, &x).map_err(
                        |source| CompileError::Wiring {
                            sentence: i,
                            word: e.word.clone(),
                            source,
                        },
                    )?
                }
                Mode::Cat => {
                    let labels = (0..e.ty.len())
                        .flat_map(|f| {
                            let p = pos(w, f);
                            std::iter::repeat(label[p].clone()).take(size[p])
                        })
                        .collect();
                    wirings::state_gadget(&format!("{}@cat", e.payload), labels)
                }
            },
        };
        gadgets.push(g);
    }
    let mut bindings = Vec::with_capacity(total_legs);
    for g in &gadgets {
        bindings.extend(g.bindings.iter().cloned());
    }
    let words_diagram = Diagram::tensor_all(gadgets.iter().map(|g| &g.diagram));
    debug_assert_eq!(words_diagram.cod().len(), total_legs);

    // Cups for every link, leg by leg.
    let leg_labels = words_diagram.cod().to_vec();
    let mut boxes = Vec::new();
    let mut wires = Vec::new();
    for &(a, b) in &proof.links {
        if size[a] != size[b] {
            return Err(bundle_err(format!(
                "linked positions {a} and {b} carry {} and {} wires",
                size[a], size[b]
            )));
        }
        for e in 0..size[a] {
            let (la, lb) = (leg_start[a] + e, leg_start[b] + e);
            let c = boxes.len();
            boxes.push(DBox::cup(&leg_labels[la]));
            wires.push(Wire {
                src: Port::Input(la),
                tgt: Port::BoxIn(c, 0),
            });
            wires.push(Wire {
                src: Port::Input(lb),
                tgt: Port::BoxIn(c, 1),
            });
        }
    }
    let survivors: Vec<usize> = proof
        .survivors
        .iter()
        .flat_map(|&p| leg_start[p]..leg_start[p + 1])
        .collect();
    for (k, &l) in survivors.iter().enumerate() {
        wires.push(Wire {
            src: Port::Input(l),
            tgt: Port::Output(k),
        });
    }
    let survivor_labels: Vec<WireLabel> = survivors.iter().map(|&l| leg_labels[l].clone()).collect();
    let cups = Diagram::from_parts(boxes, wires, leg_labels.clone(), survivor_labels.clone())?;
    let body = words_diagram.then(&cups)?;

    if spec.mode == Mode::Cat {
        return Ok(Gate {
            diagram: body,
            participants: vec![],
            terminated: vec![],
            outputs: vec![],
            kept: vec![],
            updated_statics: vec![],
        });
    }

    // Which noun each surviving leg carries.
    let leg_pos = |l: usize| leg_start.partition_point(|&s| s <= l) - 1;
    let word_of = |p: usize| starts.partition_point(|&s| s <= p) - 1;
    let resolve = |mut l: usize| -> Option<String> {
        for _ in 0..=total_legs {
            match &bindings[l] {
                Binding::Noun(x) => return Some(x.clone()),
                Binding::Unbound => return None,
                Binding::Follow { factor, elem } => {
                    let w = word_of(leg_pos(l));
                    let q = partner[pos(w, *factor)]?;
                    if *elem >= size[q] {
                        return None;
                    }
                    l = leg_start[q] + elem;
                }
            }
        }
        None
    };
    let carried: Vec<Option<String>> = survivors.iter().map(|&l| resolve(l)).collect();

    let participants: Vec<String> = spec
        .live
        .iter()
        .filter(|x| holes.contains(x))
        .cloned()
        .collect();
    let legs_of = |x: &str| -> Vec<usize> {
        (0..survivors.len())
            .filter(|&k| carried[k].as_deref() == Some(x))
            .collect()
    };
    let outputs: Vec<String> = participants
        .iter()
        .filter(|x| !legs_of(x).is_empty())
        .cloned()
        .collect();
    let terminated: Vec<String> = participants
        .iter()
        .filter(|x| !outputs.contains(x))
        .cloned()
        .collect();
    if let Some(x) = terminated.first() {
        if !terminating {
            return Err(CompileError::Signature {
                sentence: i,
                msg: format!("dynamic noun {x:?} has no output path and no word here ends it"),
            });
        }
    }
    let updated_statics: Vec<String> = mentioned_statics
        .iter()
        .filter(|x| !legs_of(x).is_empty())
        .cloned()
        .collect();
    let kept = if spec.keep_static {
        updated_statics.clone()
    } else {
        vec![]
    };

    // P: copy participants onto their holes.
    let mut p_parts = Vec::new();
    let mut p_slots: Vec<(String, usize)> = Vec::new();
    for x in &participants {
        let m = holes.iter().filter(|h| *h == x).count();
        p_parts.push(if m == 1 {
            Diagram::id(&[WireLabel::new(NOUN)])
        } else {
            Diagram::spider(1, m, &WireLabel::new(NOUN))?
        });
        p_slots.extend((0..m).map(|j| (x.clone(), j)));
    }
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    let perm: Vec<usize> = holes
        .iter()
        .map(|h| {
            let j = seen.entry(h).or_default();
            let k = p_slots.iter().position(|(x, jj)| x == h && jj == j).unwrap();
            *j += 1;
            k
        })
        .collect();
    let copy = Diagram::tensor_all(p_parts.iter()).permute_outputs(&perm)?;

    // Q: merge legs per noun, discard the rest.
    let mut boxes = Vec::new();
    let mut wires = Vec::new();
    let mut cod = Vec::new();
    let mut used = vec![false; survivors.len()];
    for x in outputs.iter().chain(&kept) {
        let legs = legs_of(x);
        let out = Port::Output(cod.len());
        cod.push(WireLabel::new(NOUN));
        if legs.len() == 1 {
            wires.push(Wire {
                src: Port::Input(legs[0]),
                tgt: out,
            });
        } else {
            let s = boxes.len();
            boxes.push(DBox::spider(legs.len(), 1, &WireLabel::new(NOUN)));
            for (j, &k) in legs.iter().enumerate() {
                wires.push(Wire {
                    src: Port::Input(k),
                    tgt: Port::BoxIn(s, j),
                });
            }
            wires.push(Wire {
                src: Port::BoxOut(s, 0),
                tgt: out,
            });
        }
        for k in legs {
            used[k] = true;
        }
    }
    for (k, u) in used.iter().enumerate() {
        if !u {
            let d = boxes.len();
            boxes.push(DBox::discard(&survivor_labels[k]));
            wires.push(Wire {
                src: Port::Input(k),
                tgt: Port::BoxIn(d, 0),
            });
        }
    }
    let sort = Diagram::from_parts(boxes, wires, survivor_labels, cod)?;
    let diagram = copy.then(&body)?.then(&sort)?;
    Ok(Gate {
        diagram,
        participants,
        terminated,
        outputs,
        kept,
        updated_statics,
    })
}
