// SPDX-License-Identifier: Apache-2.0

//! Text → circuit.
//!
//! 1. split the text into sentences on `.`, `!` and `?`;
//! 2. tag each token with its lexicon entry (longest multi-word match first);
//! 3. pick the dynamic nouns (declared, or proper nouns that occur);
//! 4. compile each sentence to a gate on the dynamic nouns it mentions;
//! 5. pad gates with passive wires and compose them in order.

mod file;
mod gate;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Port, WireLabel};
use crate::lexicon::{Entry, Lexicon, WordKind};
use crate::pregroup::{NoReduction, PregroupType};
use crate::semantics::NO_PRIOR;
use crate::wirings::{Schema, WiringError};

pub use file::CircuitFileError;
pub use gate::Gate;
use gate::{compile_gate, GateSpec, Mode, NOUN};

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("empty document")]
    EmptyDocument,
    #[error("sentence {sentence}, token {position}: unknown word {token:?}")]
    UnknownWord {
        sentence: usize,
        position: usize,
        token: String,
    },
    #[error("sentence {sentence}: {source}")]
    Grammar {
        sentence: usize,
        source: NoReduction,
    },
    #[error("sentence {sentence}: word {word:?}: {source}")]
    Wiring {
        sentence: usize,
        word: String,
        source: WiringError,
    },
    #[error("sentence {sentence}: {msg}")]
    Bundle { sentence: usize, msg: String },
    #[error("sentence {sentence}: {msg}")]
    Signature { sentence: usize, msg: String },
    #[error("sentence {sentence}: mention of vanished noun {noun:?}")]
    VanishedNoun { sentence: usize, noun: String },
    #[error(
        "sentence {sentence}: static noun {noun:?} was updated by an earlier sentence; \
         declare it dynamic"
    )]
    StaticNounUpdated { sentence: usize, noun: String },
    #[error("sentence {sentence}: conjoined subjects share the noun {noun:?}")]
    LinearAnd { sentence: usize, noun: String },
    #[error("{0:?} is not a noun in the lexicon")]
    UnknownNoun(String),
    #[error("no initial state for wire {0:?}")]
    UnresolvedState(String),
    #[error("sentence {sentence}: {msg}")]
    NotASentenceState { sentence: usize, msg: String },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Splits on sentence-final punctuation; empty segments are dropped.
pub fn segment_sentences(raw: &str) -> Result<Vec<String>, CompileError> {
    let out: Vec<String> = raw
        .split(['.', '!', '?'])
        .map(|s| s.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|s| !s.is_empty())
        .collect();
    if out.is_empty() {
        return Err(CompileError::EmptyDocument);
    }
    Ok(out)
}

/// Whitespace tokens with commas removed.
pub fn tokenize(sentence: &str) -> Vec<String> {
    sentence
        .split_whitespace()
        .map(|t| t.replace(',', ""))
        .filter(|t| !t.is_empty())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaggedWord {
    /// The text as written (joined for multi-word entries).
    pub surface: String,
    pub entry: Entry,
}

/// Looks every token up, preferring the longest multi-word entry.
pub fn tag_types(
    sentence: usize,
    tokens: &[String],
    lexicon: &Lexicon,
) -> Result<Vec<TaggedWord>, CompileError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let longest = lexicon.max_words().min(tokens.len() - i);
        let hit = (1..=longest).rev().find_map(|len| {
            let key = tokens[i..i + len].join(" ");
            lexicon.get(&key).map(|e| (len, key, e.clone()))
        });
        let Some((len, surface, entry)) = hit else {
            return Err(CompileError::UnknownWord {
                sentence,
                position: i,
                token: tokens[i].clone(),
            });
        };
        out.push(TaggedWord { surface, entry });
        i += len;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Declared,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicNouns {
    pub nouns: Vec<String>,
    pub origin: Vec<Origin>,
}

/// Declared nouns win; otherwise every proper noun that occurs. Ordered by
/// first occurrence (declared nouns that never occur go last).
pub fn identify_dynamic_nouns(
    sentences: &[Vec<TaggedWord>],
    lexicon: &Lexicon,
    declared: Option<&[String]>,
) -> Result<DynamicNouns, CompileError> {
    let mut order: Vec<String> = Vec::new();
    for w in sentences.iter().flatten() {
        if w.entry.kind == WordKind::Noun && !order.contains(&w.entry.word) {
            order.push(w.entry.word.clone());
        }
    }
    let (nouns, origin) = match declared {
        Some(decl) => {
            let mut keys = Vec::new();
            for d in decl {
                match lexicon.get(d) {
                    Some(e) if e.kind == WordKind::Noun => keys.push(e.word.clone()),
                    _ => return Err(CompileError::UnknownNoun(d.clone())),
                }
            }
            let mut nouns: Vec<String> = order.iter().filter(|n| keys.contains(n)).cloned().collect();
            for k in keys {
                if !nouns.contains(&k) {
                    nouns.push(k);
                }
            }
            let origin = vec![Origin::Declared; nouns.len()];
            (nouns, origin)
        }
        None => {
            let nouns: Vec<String> = order
                .into_iter()
                .filter(|n| lexicon.get(n).is_some_and(|e| e.proper))
                .collect();
            let origin = vec![Origin::Heuristic; nouns.len()];
            (nouns, origin)
        }
    };
    Ok(DynamicNouns { nouns, origin })
}

/// Where a sentence's gate sits in the circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateInfo {
    pub sentence: usize,
    /// Boxes of the circuit diagram contributed by this gate.
    pub boxes: Range<usize>,
    pub participants: Vec<String>,
    pub terminated: Vec<String>,
    /// Circuit boxes where each participant's wire enters the gate.
    pub entries: Vec<(String, usize)>,
}

/// The meaning of a text: a process on its dynamic-noun wires.
#[derive(Clone, Debug)]
pub struct Circuit {
    pub diagram: Diagram,
    /// Input wires, one per dynamic noun.
    pub wire_order: Vec<String>,
    /// Output wires: `wire_order` minus terminated nouns.
    pub outputs: Vec<String>,
    pub gates: Vec<GateInfo>,
    /// Sentences with no dynamic noun, as closed diagrams.
    pub scalars: Vec<(usize, Diagram)>,
}

impl Circuit {
    pub fn identity(wire_order: Vec<String>) -> Circuit {
        let labels = vec![WireLabel::new(NOUN); wire_order.len()];
        Circuit {
            diagram: Diagram::id(&labels),
            outputs: wire_order.clone(),
            wire_order,
            gates: vec![],
            scalars: vec![],
        }
    }

    /// The circuit with its detached scalars tensored on.
    pub fn full_diagram(&self) -> Diagram {
        self.scalars
            .iter()
            .fold(self.diagram.clone(), |d, (_, s)| d.tensor(s))
    }

    pub fn to_file(&self) -> String {
        file::write(self)
    }

    pub fn from_file(src: &str) -> Result<Circuit, CircuitFileError> {
        file::read(src)
    }
}

#[derive(Clone, Debug, Default)]
pub struct CompileOptions {
    /// Dynamic nouns; `None` means the proper-noun heuristic.
    pub dynamic: Option<Vec<String>>,
}

/// Parses and tags a whole document.
pub fn tag_document(raw: &str, lexicon: &Lexicon) -> Result<Vec<Vec<TaggedWord>>, CompileError> {
    segment_sentences(raw)?
        .iter()
        .enumerate()
        .map(|(i, s)| tag_types(i, &tokenize(s), lexicon))
        .collect()
}

pub fn compile_text(
    raw: &str,
    lexicon: &Lexicon,
    opts: &CompileOptions,
) -> Result<Circuit, CompileError> {
    let sentences = tag_document(raw, lexicon)?;
    let dynamic = identify_dynamic_nouns(&sentences, lexicon, opts.dynamic.as_deref())?;
    compose_sentences(&sentences, &dynamic.nouns, &lexicon.target)
}

/// Compiles tagged sentences onto the given wires and composes the gates.
pub fn compose_sentences(
    sentences: &[Vec<TaggedWord>],
    wire_order: &[String],
    target: &PregroupType,
) -> Result<Circuit, CompileError> {
    let mut circuit = Circuit::identity(wire_order.to_vec());
    let mut vanished = BTreeSet::new();
    let mut updated_statics: BTreeSet<String> = BTreeSet::new();
    for (i, words) in sentences.iter().enumerate() {
        for w in words {
            if w.entry.kind == WordKind::Noun && updated_statics.contains(&w.entry.word) {
                return Err(CompileError::StaticNounUpdated {
                    sentence: i,
                    noun: w.entry.word.clone(),
                });
            }
        }
        let gate = compile_sentence_gate(i, words, &circuit.outputs, &vanished, target)?;
        updated_statics.extend(gate.updated_statics.iter().cloned());
        if gate.participants.is_empty() {
            circuit.scalars.push((i, gate.diagram));
            continue;
        }
        let (padded, live) = pad_passive_wires(&gate, &circuit.outputs)?;
        let before = circuit.diagram.boxes().len();
        let entries = padded
            .wires()
            .iter()
            .filter_map(|w| match (w.src, w.tgt) {
                (Port::Input(k), Port::BoxIn(b, _)) => Some((circuit.outputs[k].clone(), before + b)),
                _ => None,
            })
            .collect();
        circuit.diagram = circuit.diagram.then(&padded)?;
        circuit.gates.push(GateInfo {
            sentence: i,
            boxes: before..circuit.diagram.boxes().len(),
            participants: gate.participants.clone(),
            terminated: gate.terminated.clone(),
            entries,
        });
        vanished.extend(gate.terminated.iter().cloned());
        circuit.outputs = live;
    }
    Ok(circuit)
}

/// The gate of one sentence over the live dynamic nouns. Conjoined subjects
/// ("X and Y verb ...") give the tensor of one gate per conjunct.
pub fn compile_sentence_gate(
    sentence: usize,
    words: &[TaggedWord],
    live: &[String],
    vanished: &BTreeSet<String>,
    target: &PregroupType,
) -> Result<Gate, CompileError> {
    if let Some((left, right)) = split_linear_and(words) {
        let a = compile_sentence_gate(sentence, &left, live, vanished, target)?;
        let b = compile_sentence_gate(sentence, &right, live, vanished, target)?;
        return tensor_gates(sentence, a, b, live);
    }
    compile_gate(&GateSpec {
        sentence,
        words,
        target,
        live,
        vanished,
        mode: Mode::Circ,
        keep_static: false,
    })
}

/// Index of the first word with a plain sentence factor.
fn head_verb(words: &[TaggedWord]) -> Option<usize> {
    words.iter().position(|w| {
        w.entry
            .ty
            .factors
            .iter()
            .any(|f| f.adjoint == 0 && f.base.0 != NOUN)
    })
}

/// "X and Y rest" → ("X rest", "Y rest") when the `and` comes before the
/// head verb, i.e. conjoins subjects rather than properties.
fn split_linear_and(words: &[TaggedWord]) -> Option<(Vec<TaggedWord>, Vec<TaggedWord>)> {
    let head = head_verb(words)?;
    let a = words[..head]
        .iter()
        .position(|w| w.entry.kind == WordKind::Schema(Schema::And))?;
    if a == 0 || a + 1 >= head {
        return None;
    }
    let rest = &words[head..];
    let left = words[..a].iter().chain(rest).cloned().collect();
    let right = words[a + 1..head].iter().chain(rest).cloned().collect();
    Some((left, right))
}

fn tensor_gates(sentence: usize, a: Gate, b: Gate, live: &[String]) -> Result<Gate, CompileError> {
    if let Some(x) = a.participants.iter().find(|x| b.participants.contains(x)) {
        return Err(CompileError::LinearAnd {
            sentence,
            noun: x.clone(),
        });
    }
    let in_order = |v: &[String]| -> Vec<String> {
        live.iter().filter(|x| v.contains(x)).cloned().collect()
    };
    let d = a.diagram.tensor(&b.diagram);
    let ins: Vec<String> = a.participants.iter().chain(&b.participants).cloned().collect();
    let participants = in_order(&ins);
    let perm_in: Vec<usize> = participants
        .iter()
        .map(|x| ins.iter().position(|y| y == x).unwrap())
        .collect();
    // Outputs: participants that carry on, in wire order; kept statics after.
    let na = a.outputs.len() + a.kept.len();
    let outs: Vec<String> = a.outputs.iter().chain(&b.outputs).cloned().collect();
    let outputs = in_order(&outs);
    let mut perm_out: Vec<usize> = outputs
        .iter()
        .map(|x| {
            a.outputs
                .iter()
                .position(|y| y == x)
                .unwrap_or_else(|| na + b.outputs.iter().position(|y| y == x).unwrap())
        })
        .collect();
    perm_out.extend((0..a.kept.len()).map(|k| a.outputs.len() + k));
    perm_out.extend((0..b.kept.len()).map(|k| na + b.outputs.len() + k));
    let diagram = d.permute_inputs(&perm_in)?.permute_outputs(&perm_out)?;
    let mut terminated = a.terminated;
    terminated.extend(b.terminated);
    let mut kept = a.kept;
    kept.extend(b.kept);
    let mut updated_statics = a.updated_statics;
    updated_statics.extend(b.updated_statics);
    Ok(Gate {
        diagram,
        terminated: in_order(&terminated),
        participants,
        outputs,
        kept,
        updated_statics,
    })
}

/// Places a gate among the live wires: identities on everything it does not
/// touch, routed into wire order. Returns the padded gate and the wires
/// alive after it.
pub fn pad_passive_wires(gate: &Gate, live: &[String]) -> Result<(Diagram, Vec<String>), CompileError> {
    let passive: Vec<String> = live
        .iter()
        .filter(|x| !gate.participants.contains(x))
        .cloned()
        .collect();
    let labels = vec![WireLabel::new(NOUN); passive.len()];
    let d = gate.diagram.tensor(&Diagram::id(&labels));
    let ins: Vec<&String> = gate.participants.iter().chain(&passive).collect();
    let perm_in: Vec<usize> = live
        .iter()
        .map(|x| ins.iter().position(|y| *y == x).unwrap())
        .collect();
    let after: Vec<String> = live
        .iter()
        .filter(|x| !gate.terminated.contains(x))
        .cloned()
        .collect();
    let outs: Vec<&String> = gate.outputs.iter().chain(&passive).collect();
    let perm_out: Vec<usize> = after
        .iter()
        .map(|x| outs.iter().position(|y| *y == x).unwrap())
        .collect();
    Ok((d.permute_inputs(&perm_in)?.permute_outputs(&perm_out)?, after))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitialState {
    /// A named state (payload reference).
    State(String),
    /// No prior understanding.
    NoPrior,
}

/// Feeds initial states into the assigned input wires; unassigned wires stay
/// open.
pub fn apply_initial_states(
    circuit: &Circuit,
    assignments: &BTreeMap<String, InitialState>,
) -> Result<Diagram, CompileError> {
    if let Some(x) = assignments.keys().find(|x| !circuit.wire_order.contains(x)) {
        return Err(CompileError::UnresolvedState(x.clone()));
    }
    let n = [WireLabel::new(NOUN)];
    let layer: Vec<Diagram> = circuit
        .wire_order
        .iter()
        .map(|x| match assignments.get(x) {
            Some(InitialState::State(s)) => Diagram::state(s.clone(), n.to_vec()),
            Some(InitialState::NoPrior) => Diagram::state(NO_PRIOR, n.to_vec()),
            None => Diagram::id(&n),
        })
        .collect();
    Ok(Diagram::tensor_all(layer.iter()).then(&circuit.diagram)?)
}

/// The two DisCoCat readings of one sentence.
#[derive(Clone, Debug)]
pub struct Recovered {
    /// Every noun a state; outputs of bound nouns kept.
    pub all_static: Diagram,
    /// Bound nouns as wires, fed their lexicon states.
    pub with_initial_states: Diagram,
    /// The nouns labelling the outputs of both diagrams.
    pub nouns: Vec<String>,
}

/// A sentence gate with every noun a state, split on conjoined subjects
/// like [`compile_sentence_gate`].
fn static_gate(words: &[TaggedWord], target: &PregroupType) -> Result<Gate, CompileError> {
    if let Some((left, right)) = split_linear_and(words) {
        let a = static_gate(&left, target)?;
        let b = static_gate(&right, target)?;
        return tensor_gates(0, a, b, &[]);
    }
    gate::compile_gate(&GateSpec {
        sentence: 0,
        words,
        target,
        live: &[],
        vanished: &BTreeSet::new(),
        mode: Mode::Circ,
        keep_static: true,
    })
}

pub fn recover_discocat(
    words: &[TaggedWord],
    target: &PregroupType,
) -> Result<Recovered, CompileError> {
    let a = static_gate(words, target)?;
    let nouns = a.kept.clone();
    let circuit = compose_sentences(&[words.to_vec()], &nouns, target)?;
    let states = nouns
        .iter()
        .map(|x| {
            let payload = words
                .iter()
                .find(|w| &w.entry.word == x)
                .map(|w| w.entry.payload.clone())
                .expect("kept nouns occur in the sentence");
            (x.clone(), InitialState::State(payload))
        })
        .collect();
    let b = apply_initial_states(&circuit, &states)?;
    Ok(Recovered {
        all_static: a.diagram,
        with_initial_states: b,
        nouns,
    })
}

/// The plain DisCoCat diagram: every word a state on its flattened type,
/// connected by the reduction's cups.
pub fn discocat_diagram(
    sentence: usize,
    words: &[TaggedWord],
    target: &PregroupType,
) -> Result<Diagram, CompileError> {
    let none = BTreeSet::new();
    Ok(gate::compile_gate(&GateSpec {
        sentence,
        words,
        target,
        live: &[],
        vanished: &none,
        mode: Mode::Cat,
        keep_static: true,
    })?
    .diagram)
}

/// All sentence states merged on their single output wire.
pub fn bag_of_sentences(
    sentences: &[Vec<TaggedWord>],
    target: &PregroupType,
) -> Result<Diagram, CompileError> {
    let mut states = Vec::new();
    for (i, words) in sentences.iter().enumerate() {
        let d = discocat_diagram(i, words, target)?;
        if d.cod().len() != 1 {
            return Err(CompileError::NotASentenceState {
                sentence: i,
                msg: format!("sentence state has {} output wires, expected 1", d.cod().len()),
            });
        }
        states.push(d);
    }
    let Some(first) = states.first() else {
        return Err(CompileError::EmptyDocument);
    };
    let label = first.cod()[0].clone();
    if let Some((i, d)) = states.iter().enumerate().find(|(_, d)| d.cod()[0] != label) {
        return Err(CompileError::NotASentenceState {
            sentence: i,
            msg: format!("output wire {} differs from {label}", d.cod()[0]),
        });
    }
    let all = Diagram::tensor_all(states.iter());
    if states.len() == 1 {
        return Ok(all);
    }
    Ok(all.then(&Diagram::spider(states.len(), 1, &label)?)?)
}
