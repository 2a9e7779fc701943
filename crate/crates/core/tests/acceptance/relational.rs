// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};

use discocirc::compiler::{compile_text, CompileOptions};
use discocirc::semantics::{Backend, Interpretation, Payload, Tensor, Value};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::common::lexicon;
use crate::{ensure, rng, Outcome};

const TEXTS: usize = 100;
const NAMES: [&str; 3] = ["Alice", "Bob", "Claudio"];
const PROPERTIES: [&[&str]; 4] = [&["dog"], &["person"], &["sad", "dog"], &["sad", "person"]];

#[derive(Clone, Debug)]
enum Sentence {
    Hates(usize, usize),
    Runs(usize),
    Is(usize, &'static [&'static str]),
    Bites(usize, usize),
}

impl Sentence {
    fn random(r: &mut impl Rng) -> Sentence {
        let x = r.gen_range(0..NAMES.len());
        let y = (x + r.gen_range(1..NAMES.len())) % NAMES.len();
        match r.gen_range(0..4) {
            0 => Sentence::Hates(x, y),
            1 => Sentence::Runs(x),
            2 => Sentence::Is(x, PROPERTIES.choose(r).unwrap()),
            _ => Sentence::Bites(x, y),
        }
    }

    fn text(&self) -> String {
        match *self {
            Sentence::Hates(x, y) => format!("{} hates {}.", NAMES[x], NAMES[y]),
            Sentence::Runs(x) => format!("{} runs.", NAMES[x]),
            Sentence::Is(x, p) => format!("{} is a {}.", NAMES[x], p.join(" ")),
            Sentence::Bites(x, y) => format!("{} bites {}.", NAMES[x], NAMES[y]),
        }
    }
}

/// A random relation as a 0/1 tensor, returned with its set of tuples.
fn random_relation(shape: Vec<usize>, r: &mut impl Rng) -> (Payload, BTreeSet<Vec<usize>>) {
    let t = Tensor::from_fn(shape, |_| if r.gen_bool(0.5) { 1.0 } else { 0.0 });
    let set = tuples(t.shape(), t.data().iter().map(|&x| x != 0.0));
    (Payload::Real(t), set)
}

fn tuples(shape: &[usize], data: impl Iterator<Item = bool>) -> BTreeSet<Vec<usize>> {
    let mut all = vec![vec![]];
    for &d in shape {
        all = all
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..d).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    all.into_iter().zip(data).filter(|(_, b)| *b).map(|(t, _)| t).collect()
}

/// The text's meaning computed directly on sets of tuples over `wires`.
fn oracle(
    text: &[Sentence],
    wires: &[String],
    u: usize,
    rel: &BTreeMap<&str, BTreeSet<Vec<usize>>>,
) -> BTreeSet<Vec<usize>> {
    let pos = |x: usize| wires.iter().position(|w| w == NAMES[x]).unwrap();
    let mut state = tuples(&vec![u; wires.len()], std::iter::repeat(true));
    let has = |name: &str, t: Vec<usize>| rel[name].contains(&t);
    for s in text {
        state = match *s {
            Sentence::Is(x, ps) => state
                .into_iter()
                .filter(|t| ps.iter().all(|p| has(p, vec![t[pos(x)]])))
                .collect(),
            Sentence::Bites(x, y) => state
                .into_iter()
                .filter(|t| has("bites.subject", vec![t[pos(x)]]) && has("bites.object", vec![t[pos(y)]]))
                .collect(),
            Sentence::Runs(x) => {
                let i = pos(x);
                let mut next = BTreeSet::new();
                for t in &state {
                    for a in 0..u {
                        if has("runs", vec![t[i], a]) {
                            let mut t2 = t.clone();
                            t2[i] = a;
                            next.insert(t2);
                        }
                    }
                }
                next
            }
            Sentence::Hates(x, y) => {
                let (i, j) = (pos(x), pos(y));
                let mut next = BTreeSet::new();
                for t in &state {
                    for a in 0..u {
                        for b in 0..u {
                            if has("hates", vec![t[i], t[j], a, b]) {
                                let mut t2 = t.clone();
                                t2[i] = a;
                                t2[j] = b;
                                next.insert(t2);
                            }
                        }
                    }
                }
                next
            }
        };
    }
    state
}

pub fn criterion() -> Outcome {
    let lex = lexicon();
    let mut r = rng(9);
    let mut nonempty = 0;
    for n in 0..TEXTS {
        let u = r.gen_range(1..=6);
        let len = r.gen_range(1..=3);
        let text: Vec<Sentence> = (0..len).map(|_| Sentence::random(&mut r)).collect();
        let raw: Vec<String> = text.iter().map(Sentence::text).collect();
        let raw = raw.join(" ");
        let c = compile_text(&raw, &lex, &CompileOptions::default())
            .map_err(|e| format!("{raw:?}: {e}"))?;
        let mut interp = Interpretation::new(Backend::Relational);
        interp.dims.insert("n".into(), u);
        let mut sets = BTreeMap::new();
        for (name, arity) in [
            ("dog", 1),
            ("person", 1),
            ("sad", 1),
            ("bites.subject", 1),
            ("bites.object", 1),
            ("runs", 2),
            ("hates", 4),
        ] {
            let (p, set) = random_relation(vec![u; arity], &mut r);
            interp.payloads.insert(name.to_string(), p);
            sets.insert(name, set);
        }
        let init = c
            .wire_order
            .iter()
            .map(|x| (x.clone(), discocirc::compiler::InitialState::NoPrior))
            .collect();
        let state = discocirc::compiler::apply_initial_states(&c, &init).map_err(|e| e.to_string())?;
        let got = match interp.evaluate(&state).map_err(|e| format!("{raw:?}: {e}"))? {
            Value::Relation(t) => tuples(t.shape(), t.data().iter().copied()),
            other => return Err(format!("{raw:?}: not a relation: {other:?}")),
        };
        let want = oracle(&text, &c.outputs, u, &sets);
        ensure!(got == want, "text {n} {raw:?} over {u} elements: {got:?} vs oracle {want:?}");
        if !want.is_empty() {
            nonempty += 1;
        }
    }
    Ok(format!("{TEXTS} random texts agree with the set-theoretic oracle ({nonempty} non-empty)"))
}
