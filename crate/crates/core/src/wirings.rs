// SPDX-License-Identifier: Apache-2.0

//! Wiring schemata: internal structure for functional words and verb classes.
//!
//! A word's *gadget* is a diagram whose outputs ("legs") are its pregroup
//! factors, expanded so that a sentence-type factor becomes a bundle of noun
//! wires (one per noun the sentence updates). Each leg carries a [`Binding`]
//! saying which noun flows out of it; the compiler follows bindings through
//! the grammatical links to decide which circuit wire a gate output belongs
//! to.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagram::{DBox, Diagram, Port, Wire, WireLabel};
use crate::pregroup::PregroupType;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WiringError {
    #[error("unknown wiring {0:?}")]
    UnknownSchema(String),
    #[error("wiring {schema}: missing parameter {param:?}")]
    MissingParam { schema: String, param: String },
    #[error("wiring {schema}: parameter {param:?} has value {value:?}")]
    BadParam {
        schema: String,
        param: String,
        value: String,
    },
    #[error("wiring {schema} needs a sentence bundle of {expected} wire(s), got {found}")]
    BundleSize {
        schema: String,
        expected: usize,
        found: usize,
    },
    #[error("word with type {ty} has no plain factor to output")]
    NoOutputFactor { ty: String },
    #[error("wiring {schema} cannot carry sentence wires labelled {label:?}")]
    Label { schema: String, label: String },
    #[error("output index {index} out of range for {args} argument(s)")]
    BadOutput { index: usize, args: usize },
}

/// Which noun a gadget leg carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    /// The word itself is this noun.
    Noun(String),
    /// Whatever arrives through the grammatical link at `factor`, bundle
    /// element `elem`, of the same word.
    Follow { factor: usize, elem: usize },
    Unbound,
}

#[derive(Clone, Debug)]
pub struct Gadget {
    /// `dom` is empty except for dynamic-noun holes; `cod` lists the legs.
    pub diagram: Diagram,
    pub bindings: Vec<Binding>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schema {
    /// Determiners: a plain cap, passing the noun through.
    Identity,
    Does,
    Not,
    RelativePronoun,
    IntersectiveAdjective { property: String },
    ToBe,
    Knows,
    /// `wear`: the shape of `to be`, applied to a worn item.
    Wear,
    SemiCartesian { subject: String, object: String },
    Correlated { joint: String },
    Terminating { subject: String },
    /// Correlated verb whose object vanishes: the joint state's second leg
    /// absorbs the object.
    TerminatingCorrelated { joint: String },
    Tells,
    /// Transitive `tells` completed by a `to` phrase: the object is copied
    /// into the subject and passed on in the sentence bundle.
    TellsTo,
    /// `to`: the first wire of the incoming bundle passes through, the
    /// second is merged with the prepositional object.
    ToPreposition,
    BinaryRelation { knows: bool },
    /// Non-linear conjunction of two noun phrases.
    And,
}

fn param(
    schema: &str,
    params: &BTreeMap<String, String>,
    key: &str,
) -> Result<String, WiringError> {
    params
        .get(key)
        .cloned()
        .ok_or_else(|| WiringError::MissingParam {
            schema: schema.to_string(),
            param: key.to_string(),
        })
}

impl Schema {
    pub fn parse(name: &str, params: &BTreeMap<String, String>) -> Result<Schema, WiringError> {
        let p = |k: &str| param(name, params, k);
        Ok(match name {
            "identity" => Schema::Identity,
            "does" => Schema::Does,
            "not" => Schema::Not,
            "relative_pronoun" => Schema::RelativePronoun,
            "intersective_adjective" => Schema::IntersectiveAdjective {
                property: p("property")?,
            },
            "to_be" => Schema::ToBe,
            "knows" => Schema::Knows,
            "wear" => Schema::Wear,
            "semi_cartesian" => Schema::SemiCartesian {
                subject: p("subject")?,
                object: p("object")?,
            },
            "correlated" => Schema::Correlated { joint: p("joint")? },
            "terminating" => Schema::Terminating {
                subject: p("subject")?,
            },
            "terminating_correlated" => Schema::TerminatingCorrelated { joint: p("joint")? },
            "tells" => Schema::Tells,
            "tells_to" => Schema::TellsTo,
            "to_preposition" => Schema::ToPreposition,
            "binary_relation" => {
                let kind = p("kind")?;
                match kind.as_str() {
                    "knows" => Schema::BinaryRelation { knows: true },
                    "doesnt_know" => Schema::BinaryRelation { knows: false },
                    _ => {
                        return Err(WiringError::BadParam {
                            schema: name.into(),
                            param: "kind".into(),
                            value: kind,
                        })
                    }
                }
            }
            "and" => Schema::And,
            other => return Err(WiringError::UnknownSchema(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Schema::Identity => "identity",
            Schema::Does => "does",
            Schema::Not => "not",
            Schema::RelativePronoun => "relative_pronoun",
            Schema::IntersectiveAdjective { .. } => "intersective_adjective",
            Schema::ToBe => "to_be",
            Schema::Knows => "knows",
            Schema::Wear => "wear",
            Schema::SemiCartesian { .. } => "semi_cartesian",
            Schema::Correlated { .. } => "correlated",
            Schema::Terminating { .. } => "terminating",
            Schema::TerminatingCorrelated { .. } => "terminating_correlated",
            Schema::Tells => "tells",
            Schema::TellsTo => "tells_to",
            Schema::ToPreposition => "to_preposition",
            Schema::BinaryRelation { .. } => "binary_relation",
            Schema::And => "and",
        }
    }

    /// The pregroup type a word with this wiring must have.
    pub fn expected_type(&self) -> PregroupType {
        let s = match self {
            Schema::Identity | Schema::IntersectiveAdjective { .. } => "n . n^l",
            Schema::Does | Schema::Not => "n^r . s . s^l . n",
            Schema::RelativePronoun => "n^r . n . s^l . n",
            Schema::Tells => "n^r . s . n^l . n^l",
            Schema::ToPreposition => "s^r . s . n^l",
            Schema::And => "n^r . n . n^l",
            _ => "n^r . s . n^l",
        };
        s.parse().expect("schema types parse")
    }

    /// Sentence-bundle sizes this schema fixes, by factor.
    pub fn bundle_sizes(&self) -> Vec<(usize, usize)> {
        match self {
            Schema::ToBe | Schema::Knows | Schema::Wear => vec![(1, 1)],
            Schema::Terminating { .. } | Schema::TerminatingCorrelated { .. } => vec![(1, 1)],
            Schema::SemiCartesian { .. }
            | Schema::Correlated { .. }
            | Schema::BinaryRelation { .. }
            | Schema::Tells
            | Schema::TellsTo => vec![(1, 2)],
            Schema::ToPreposition => vec![(0, 2), (1, 2)],
            Schema::Not => vec![(1, 1)],
            _ => vec![],
        }
    }

    /// Pairs of this word's factors that carry the same bundle.
    pub fn tied_factors(&self) -> Vec<(usize, usize)> {
        match self {
            Schema::Does | Schema::Not => vec![(1, 2)],
            _ => vec![],
        }
    }

    /// Whether the verb ends its object's wire.
    pub fn is_terminating(&self) -> bool {
        matches!(
            self,
            Schema::Terminating { .. } | Schema::TerminatingCorrelated { .. }
        )
    }

    /// Payload states the gadget refers to.
    pub fn states(&self) -> Vec<&str> {
        match self {
            Schema::IntersectiveAdjective { property } => vec![property],
            Schema::SemiCartesian { subject, object } => vec![subject, object],
            Schema::Correlated { joint } | Schema::TerminatingCorrelated { joint } => vec![joint],
            Schema::Terminating { subject } => vec![subject],
            _ => vec![],
        }
    }

    /// Builds the gadget; `sizes[f]` is the number of legs of factor `f`,
    /// all labelled `x`.
    pub fn gadget(&self, sizes: &[usize], x: &WireLabel) -> Result<Gadget, WiringError> {
        self.gadget_labelled(sizes, x, x)
    }

    /// Like [`Schema::gadget`], with sentence-type legs labelled `s`. Only
    /// schemas that merely pass sentence wires along accept `s != x`.
    pub fn gadget_labelled(
        &self,
        sizes: &[usize],
        x: &WireLabel,
        s: &WireLabel,
    ) -> Result<Gadget, WiringError> {
        let ty = self.expected_type();
        let passes_sentences = matches!(self, Schema::Does | Schema::Not | Schema::RelativePronoun);
        if s != x && !passes_sentences {
            return Err(WiringError::Label {
                schema: self.name().into(),
                label: s.to_string(),
            });
        }
        assert_eq!(sizes.len(), ty.len(), "one size per factor");
        for (f, want) in self.bundle_sizes() {
            if sizes[f] != want {
                return Err(WiringError::BundleSize {
                    schema: self.name().into(),
                    expected: want,
                    found: sizes[f],
                });
            }
        }
        for (a, b) in self.tied_factors() {
            assert_eq!(sizes[a], sizes[b], "tied factors share a bundle");
        }
        let total: usize = sizes.iter().sum();
        let start: Vec<usize> = sizes
            .iter()
            .scan(0, |acc, &s| {
                let v = *acc;
                *acc += s;
                Some(v)
            })
            .collect();
        let leg = |f: usize, e: usize| Port::Output(start[f] + e);
        let labels: Vec<WireLabel> = ty
            .factors
            .iter()
            .zip(sizes)
            .flat_map(|(f, &k)| {
                let l = if f.base.0 == "n" { x } else { s };
                std::iter::repeat(l.clone()).take(k)
            })
            .collect();
        let mut g = Builder::new(vec![], labels);
        let mut bind = vec![Binding::Unbound; total];
        let follow = |factor, elem| Binding::Follow { factor, elem };
        let state = |g: &mut Builder, name: &str, legs: usize| {
            g.add(DBox::generic(name, vec![], vec![x.clone(); legs]))
        };
        match self {
            Schema::Identity => {
                g.cap(x, leg(0, 0), leg(1, 0));
                bind[0] = follow(1, 0);
            }
            Schema::Does | Schema::Not => {
                let k = sizes[1];
                g.cap(x, leg(0, 0), leg(3, 0));
                for a in 0..k {
                    if matches!(self, Schema::Not) {
                        let c = g.add(DBox::cap(s));
                        let n = g.add(DBox::negation(s));
                        g.wire(Port::BoxOut(c, 0), Port::BoxIn(n, 0));
                        g.wire(Port::BoxOut(n, 0), leg(1, a));
                        g.wire(Port::BoxOut(c, 1), leg(2, a));
                    } else {
                        g.cap(s, leg(1, a), leg(2, a));
                    }
                    bind[start[1] + a] = follow(2, a);
                }
                bind[start[3]] = follow(0, 0);
            }
            Schema::RelativePronoun => {
                g.spider_to(x, None, &[leg(0, 0), leg(1, 0), leg(3, 0)]);
                for a in 0..sizes[2] {
                    let d = g.add(DBox::codiscard(s));
                    g.wire(Port::BoxOut(d, 0), leg(2, a));
                }
                bind[start[1]] = follow(0, 0);
                bind[start[3]] = follow(0, 0);
            }
            Schema::IntersectiveAdjective { property } => {
                let p = state(&mut g, property, 1);
                g.spider_to(x, Some(Port::BoxOut(p, 0)), &[leg(0, 0), leg(1, 0)]);
                bind[0] = follow(1, 0);
            }
            Schema::ToBe | Schema::Knows | Schema::Wear => {
                g.spider_to(x, None, &[leg(0, 0), leg(1, 0), leg(2, 0)]);
                bind[start[1]] = follow(0, 0);
            }
            Schema::SemiCartesian { subject, object } => {
                let vs = state(&mut g, subject, 1);
                let vo = state(&mut g, object, 1);
                g.spider_to(x, Some(Port::BoxOut(vs, 0)), &[leg(0, 0), leg(1, 0)]);
                g.spider_to(x, Some(Port::BoxOut(vo, 0)), &[leg(2, 0), leg(1, 1)]);
                bind[start[1]] = follow(0, 0);
                bind[start[1] + 1] = follow(2, 0);
            }
            Schema::Correlated { joint } => {
                let j = state(&mut g, joint, 2);
                g.spider_to(x, Some(Port::BoxOut(j, 0)), &[leg(0, 0), leg(1, 0)]);
                g.spider_to(x, Some(Port::BoxOut(j, 1)), &[leg(2, 0), leg(1, 1)]);
                bind[start[1]] = follow(0, 0);
                bind[start[1] + 1] = follow(2, 0);
            }
            Schema::Terminating { subject } => {
                let vs = state(&mut g, subject, 1);
                g.spider_to(x, Some(Port::BoxOut(vs, 0)), &[leg(0, 0), leg(1, 0)]);
                let d = g.add(DBox::codiscard(x));
                g.wire(Port::BoxOut(d, 0), leg(2, 0));
                bind[start[1]] = follow(0, 0);
            }
            Schema::TerminatingCorrelated { joint } => {
                let j = state(&mut g, joint, 2);
                g.spider_to(x, Some(Port::BoxOut(j, 0)), &[leg(0, 0), leg(1, 0)]);
                g.wire(Port::BoxOut(j, 1), leg(2, 0));
                bind[start[1]] = follow(0, 0);
            }
            Schema::Tells => {
                // Copy the secret to the teller's and the listener's side.
                let c = g.add(DBox::spider(0, 3, x));
                g.wire(Port::BoxOut(c, 0), leg(2, 0));
                g.spider_to(x, Some(Port::BoxOut(c, 1)), &[leg(0, 0), leg(1, 0)]);
                g.spider_to(x, Some(Port::BoxOut(c, 2)), &[leg(3, 0), leg(1, 1)]);
                bind[start[1]] = follow(0, 0);
                bind[start[1] + 1] = follow(3, 0);
            }
            Schema::TellsTo => {
                let c = g.add(DBox::spider(0, 3, x));
                g.wire(Port::BoxOut(c, 0), leg(2, 0));
                g.spider_to(x, Some(Port::BoxOut(c, 1)), &[leg(0, 0), leg(1, 0)]);
                g.wire(Port::BoxOut(c, 2), leg(1, 1));
                bind[start[1]] = follow(0, 0);
                bind[start[1] + 1] = follow(2, 0);
            }
            Schema::ToPreposition => {
                g.cap(x, leg(0, 0), leg(1, 0));
                g.spider_to(x, None, &[leg(0, 1), leg(2, 0), leg(1, 1)]);
                bind[start[1]] = follow(0, 0);
                bind[start[1] + 1] = follow(2, 0);
            }
            Schema::BinaryRelation { knows } => {
                let a = g.spider_to(x, None, &[leg(0, 0), leg(1, 0)]);
                let b = g.spider_to(x, None, &[leg(2, 0), leg(1, 1)]);
                // Each spider gets one extra output feeding the relation.
                let (pa, pb) = (g.extra_out(a), g.extra_out(b));
                if *knows {
                    let u = g.add(DBox::cup(x));
                    g.wire(pa, Port::BoxIn(u, 0));
                    g.wire(pb, Port::BoxIn(u, 1));
                } else {
                    for p in [pa, pb] {
                        let d = g.add(DBox::discard(x));
                        g.wire(p, Port::BoxIn(d, 0));
                    }
                }
                bind[start[1]] = follow(0, 0);
                bind[start[1] + 1] = follow(2, 0);
            }
            Schema::And => {
                g.spider_to(x, None, &[leg(0, 0), leg(1, 0), leg(2, 0)]);
                bind[start[1]] = follow(0, 0);
            }
        }
        Ok(Gadget {
            diagram: g.finish(),
            bindings: bind,
        })
    }
}

/// Gadget of a word without a schema: a black-box process from its
/// argument nouns to the nouns listed in `outputs`, bent so that every
/// adjoint factor becomes a leg.
pub fn generic_gadget(
    payload: &str,
    ty: &PregroupType,
    outputs: &[usize],
    sizes: &[usize],
    x: &WireLabel,
) -> Result<Gadget, WiringError> {
    let args: Vec<usize> = (0..ty.len()).filter(|&f| ty.factors[f].adjoint != 0).collect();
    let plains: Vec<usize> = (0..ty.len()).filter(|&f| ty.factors[f].adjoint == 0).collect();
    let &[plain] = plains.as_slice() else {
        return Err(WiringError::NoOutputFactor { ty: ty.to_string() });
    };
    if let Some(&index) = outputs.iter().find(|&&i| i >= args.len()) {
        return Err(WiringError::BadOutput {
            index,
            args: args.len(),
        });
    }
    if sizes[plain] != outputs.len() {
        return Err(WiringError::BundleSize {
            schema: "generic".into(),
            expected: outputs.len(),
            found: sizes[plain],
        });
    }
    let total: usize = sizes.iter().sum();
    let mut g = Builder::new(vec![], vec![x.clone(); total]);
    let f = g.add(DBox::generic(
        payload,
        vec![x.clone(); args.len()],
        vec![x.clone(); outputs.len()],
    ));
    let mut bind = vec![Binding::Unbound; total];
    let mut at = 0;
    for factor in 0..ty.len() {
        if factor == plain {
            for (e, &o) in outputs.iter().enumerate() {
                g.wire(Port::BoxOut(f, e), Port::Output(at + e));
                bind[at + e] = Binding::Follow {
                    factor: args[o],
                    elem: 0,
                };
            }
        } else {
            let a = args.iter().position(|&x| x == factor).unwrap();
            let c = g.add(DBox::cap(x));
            g.wire(Port::BoxOut(c, 0), Port::Output(at));
            g.wire(Port::BoxOut(c, 1), Port::BoxIn(f, a));
        }
        at += sizes[factor];
    }
    Ok(Gadget {
        diagram: g.finish(),
        bindings: bind,
    })
}

/// A word kept whole as a state on its flattened type (DisCoCat reading).
pub fn state_gadget(name: &str, labels: Vec<WireLabel>) -> Gadget {
    let n = labels.len();
    Gadget {
        diagram: Diagram::state(name, labels),
        bindings: vec![Binding::Unbound; n],
    }
}

/// Incremental construction of a port graph with fixed boundaries.
struct Builder {
    boxes: Vec<DBox>,
    wires: Vec<Wire>,
    dom: Vec<WireLabel>,
    cod: Vec<WireLabel>,
}

impl Builder {
    fn new(dom: Vec<WireLabel>, cod: Vec<WireLabel>) -> Self {
        Builder {
            boxes: vec![],
            wires: vec![],
            dom,
            cod,
        }
    }

    fn add(&mut self, b: DBox) -> usize {
        self.boxes.push(b);
        self.boxes.len() - 1
    }

    fn wire(&mut self, src: Port, tgt: Port) {
        self.wires.push(Wire { src, tgt });
    }

    fn cap(&mut self, x: &WireLabel, a: Port, b: Port) {
        let c = self.add(DBox::cap(x));
        self.wire(Port::BoxOut(c, 0), a);
        self.wire(Port::BoxOut(c, 1), b);
    }

    /// A spider with an optional input and one output per target.
    fn spider_to(&mut self, x: &WireLabel, input: Option<Port>, targets: &[Port]) -> usize {
        let s = self.add(DBox::spider(usize::from(input.is_some()), targets.len(), x));
        if let Some(p) = input {
            self.wire(p, Port::BoxIn(s, 0));
        }
        for (k, &t) in targets.iter().enumerate() {
            self.wire(Port::BoxOut(s, k), t);
        }
        s
    }

    /// Adds one more output leg to spider `s` and returns it.
    fn extra_out(&mut self, s: usize) -> Port {
        let x = self.boxes[s].spider_label();
        let k = self.boxes[s].cod.len();
        self.boxes[s].cod.push(x);
        Port::BoxOut(s, k)
    }

    fn finish(self) -> Diagram {
        Diagram::from_parts(self.boxes, self.wires, self.dom, self.cod)
            .expect("schema wiring is well formed")
    }
}

// ---------------------------------------------------------------- standalone forms

fn standard(schema: &Schema, x: &WireLabel) -> Diagram {
    let ty = schema.expected_type();
    let mut sizes = vec![1; ty.len()];
    for (f, k) in schema.bundle_sizes() {
        sizes[f] = k;
    }
    schema
        .gadget(&sizes, x)
        .expect("standard sizes satisfy the schema")
        .diagram
}

/// Caps passing subject and sentence through `does`.
pub fn does_wiring(x: &WireLabel) -> Diagram {
    standard(&Schema::Does, x)
}

/// `does` with a negation box on the sentence wire.
pub fn not_wiring(x: &WireLabel) -> Diagram {
    standard(&Schema::Not, x)
}

pub fn relative_pronoun_wiring(x: &WireLabel) -> Diagram {
    standard(&Schema::RelativePronoun, x)
}

pub fn to_be_wiring(x: &WireLabel) -> Diagram {
    standard(&Schema::ToBe, x)
}

/// Same shape as [`to_be_wiring`].
pub fn knows_wiring(x: &WireLabel) -> Diagram {
    standard(&Schema::Knows, x)
}

pub fn tells_wiring(x: &WireLabel) -> Diagram {
    standard(&Schema::Tells, x)
}

pub fn to_preposition_wiring(x: &WireLabel) -> Diagram {
    standard(&Schema::ToPreposition, x)
}

/// `merge(noun, adj)` as a process on the noun wire.
pub fn intersective_adjective(adj: &str, x: &WireLabel) -> Diagram {
    let s = Diagram::id(std::slice::from_ref(x)).tensor(&Diagram::state(adj, vec![x.clone()]));
    s.then(&Diagram::merge(x)).expect("types agree")
}

/// Prior understanding adjoined like an adjective.
pub fn initial_process(state: &str, x: &WireLabel) -> Diagram {
    intersective_adjective(state, x)
}

pub fn semi_cartesian_verb(vs: &str, vo: &str, x: &WireLabel) -> Diagram {
    intersective_adjective(vs, x).tensor(&intersective_adjective(vo, x))
}

pub fn correlated_verb(joint: &str, x: &WireLabel) -> Diagram {
    let one = std::slice::from_ref(x);
    let j = Diagram::state(joint, vec![x.clone(), x.clone()]);
    // inputs: subject, object; joint legs interleave with them.
    let layer = Diagram::id(one).tensor(&j).tensor(&Diagram::id(one));
    let layer = layer.permute_outputs(&[0, 1, 3, 2]).expect("permutation");
    layer
        .then(&Diagram::merge(x).tensor(&Diagram::merge(x)))
        .expect("types agree")
}

pub fn terminating_verb(vs: &str, x: &WireLabel) -> Diagram {
    intersective_adjective(vs, x).tensor(&Diagram::discard(x))
}

pub fn nonlinear_and(x: &WireLabel) -> Diagram {
    Diagram::merge(x)
}

/// `knows`: a cup linking two noun wires; `doesn't know`: two discards.
pub fn binary_relation_effect(knows: bool, x: &WireLabel) -> Diagram {
    if knows {
        Diagram::cup(x)
    } else {
        Diagram::discard(x).tensor(&Diagram::discard(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::BoxKind;

    fn x() -> WireLabel {
        "n".into()
    }

    #[test]
    fn schema_types_match_gadget_legs() {
        let all = [
            Schema::Identity,
            Schema::Does,
            Schema::Not,
            Schema::RelativePronoun,
            Schema::IntersectiveAdjective {
                property: "p".into(),
            },
            Schema::ToBe,
            Schema::SemiCartesian {
                subject: "a".into(),
                object: "b".into(),
            },
            Schema::Correlated { joint: "j".into() },
            Schema::Terminating {
                subject: "a".into(),
            },
            Schema::TerminatingCorrelated { joint: "j".into() },
            Schema::Tells,
            Schema::TellsTo,
            Schema::ToPreposition,
            Schema::BinaryRelation { knows: true },
            Schema::BinaryRelation { knows: false },
            Schema::And,
        ];
        for s in all {
            let d = standard(&s, &x());
            let ty = s.expected_type();
            let mut legs = ty.len();
            for (_, k) in s.bundle_sizes() {
                legs += k - 1;
            }
            assert_eq!(d.cod().len(), legs, "{}", s.name());
            assert!(d.dom().is_empty());
        }
    }

    #[test]
    fn not_has_one_negation_and_needs_single_bundle() {
        assert_eq!(not_wiring(&x()).count_kind(BoxKind::Negation), 1);
        assert!(Schema::Not.gadget(&[1, 2, 2, 1], &x()).is_err());
    }

    #[test]
    fn relative_pronoun_spider_has_three_legs() {
        let d = relative_pronoun_wiring(&x());
        let s = d.boxes().iter().find(|b| b.kind == BoxKind::Spider).unwrap();
        assert_eq!(s.legs(), 3);
    }

    #[test]
    fn terminating_verb_drops_a_wire() {
        let d = terminating_verb("k", &x());
        assert_eq!(d.cod().len() + 1, d.dom().len());
    }

    #[test]
    fn generic_gadget_binds_outputs_to_arguments() {
        let ty: PregroupType = "n^r . s . n^l".parse().unwrap();
        let g = generic_gadget("hates", &ty, &[0, 1], &[1, 2, 1], &x()).unwrap();
        assert_eq!(g.bindings[1], Binding::Follow { factor: 0, elem: 0 });
        assert_eq!(g.bindings[2], Binding::Follow { factor: 2, elem: 0 });
        assert!(generic_gadget("hates", &ty, &[2], &[1, 1, 1], &x()).is_err());
    }

    #[test]
    fn parses_parameters() {
        let mut p = BTreeMap::new();
        p.insert("kind".to_string(), "doesnt_know".to_string());
        assert_eq!(
            Schema::parse("binary_relation", &p).unwrap(),
            Schema::BinaryRelation { knows: false }
        );
        assert!(Schema::parse("semi_cartesian", &p).is_err());
        assert!(Schema::parse("teleport", &p).is_err());
    }
}
