// SPDX-License-Identifier: Apache-2.0

use discocirc::compiler::{apply_initial_states, compile_text, Circuit, CompileOptions, InitialState};
use discocirc::diagram::BoxKind;
use discocirc::semantics::density::{is_trace_preserving, min_eigenvalue};
use discocirc::semantics::{Backend, Interpretation, Matrix, Payload, Value, NO_PRIOR};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::common::lexicon;
use crate::{ensure, rng, Outcome};

const CIRCUITS: usize = 500;
const TOL: f64 = 1e-9;
const NAMES: [&str; 3] = ["Alice", "Bob", "Claudio"];

/// Sentence templates; `true` marks those whose gate is trace-preserving
/// under trace-preserving payloads. Negation is not a CP map and is only
/// defined on closed arguments, so it is drawn separately below.
const TEMPLATES: [(&str, bool); 9] = [
    ("X hates Y", true),
    ("X loves Y", true),
    ("X runs", true),
    ("X is a dog", false),
    ("X is a sad person", false),
    ("X bites Y", false),
    ("X married Y", false),
    ("X wears hat", false),
    ("X tells Y a secret", false),
];

fn random_density(d: usize, rng: &mut impl Rng) -> Matrix {
    let r = rng.gen_range(1..=d);
    let a = Matrix::from_fn(d, r, |_, _| rng.gen_range(-1.0..1.0));
    let rho = &a * a.transpose();
    let t = rho.trace();
    rho / t
}

/// Kraus operators of a random trace-preserving map: the blocks of a random
/// isometry.
fn random_channel(din: usize, dout: usize, rng: &mut impl Rng) -> Vec<Matrix> {
    let k = 2.max(din.div_ceil(dout));
    let g = Matrix::from_fn(k * dout, din, |_, _| rng.gen_range(-1.0..1.0));
    let v = g.qr().q();
    (0..k).map(|i| v.rows(i * dout, dout).into_owned()).collect()
}

/// Every tenth text ends in a negated sentence whose argument only sees
/// separable (adjective-like) updates of its two nouns.
fn random_text(rng: &mut impl Rng, negated: bool) -> (String, bool) {
    let len = rng.gen_range(1..=4);
    let mut tp = true;
    let pool: Vec<(&str, bool)> = match negated {
        false => TEMPLATES.to_vec(),
        true => TEMPLATES.iter().copied().filter(|(t, _)| t.starts_with("X is") || *t == "X bites Y").collect(),
    };
    let mut sentences: Vec<String> = (0..len)
        .map(|_| {
            let (t, ok) = pool.choose(rng).unwrap();
            tp &= ok;
            let x = rng.gen_range(0..NAMES.len());
            let y = (x + rng.gen_range(1..NAMES.len())) % NAMES.len();
            format!("{}.", t.replace('X', NAMES[x]).replace('Y', NAMES[y]))
        })
        .collect();
    if negated {
        let x = rng.gen_range(0..NAMES.len());
        let y = (x + rng.gen_range(1..NAMES.len())) % NAMES.len();
        sentences.push(format!("{} does not love {}.", NAMES[x], NAMES[y]));
        tp = false;
    }
    (sentences.join(" "), tp)
}

fn interpretation(c: &Circuit, d: usize, rng: &mut impl Rng) -> Result<Interpretation, String> {
    let mut interp = Interpretation::new(Backend::Cpm);
    interp.dims.insert("n".into(), d);
    interp.dims.insert("s".into(), d);
    for b in c.diagram.boxes() {
        if b.kind != BoxKind::Generic || b.name == NO_PRIOR || interp.payloads.contains_key(&b.name) {
            continue;
        }
        let dim = |ls: &[discocirc::diagram::WireLabel]| ls.iter().map(|_| d).product::<usize>();
        let (din, dout) = (dim(&b.dom), dim(&b.cod));
        let p = if b.dom.is_empty() {
            Payload::Density(random_density(dout, rng))
        } else {
            let ks = random_channel(din, dout, rng);
            ensure!(is_trace_preserving(&ks, 1e-12), "generated channel for {} is not TP", b.name);
            Payload::Kraus(ks)
        };
        interp.payloads.insert(b.name.clone(), p);
    }
    Ok(interp)
}

pub fn criterion() -> Outcome {
    let lex = lexicon();
    let mut r = rng(6);
    let (mut done, mut tp_checked) = (0, 0);
    let mut worst_eig: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    while done < CIRCUITS {
        let (raw, tp) = random_text(&mut r, done % 10 == 9);
        // Random texts may mention a noun after it is gone; draw again.
        let Ok(c) = compile_text(&raw, &lex, &CompileOptions::default()) else {
            continue;
        };
        let d = r.gen_range(2..=3);
        let interp = interpretation(&c, d, &mut r)?;
        let init = c
            .wire_order
            .iter()
            .map(|x| (x.clone(), InitialState::NoPrior))
            .collect();
        let state = c
            .scalars
            .iter()
            .fold(apply_initial_states(&c, &init).map_err(|e| e.to_string())?, |acc, (_, s)| {
                acc.tensor(s)
            });
        let rho = match interp.evaluate(&state).map_err(|e| format!("{raw:?}: {e}"))? {
            Value::Cpm(v) => v.density().map_err(|e| e.to_string())?,
            other => return Err(format!("{raw:?}: not a CPM value: {other:?}")),
        };
        let eig = min_eigenvalue(&rho);
        ensure!(eig >= -TOL, "{raw:?} at dim {d}: eigenvalue {eig:e}");
        worst_eig = worst_eig.min(eig);
        if tp {
            let gap = (rho.trace() - 1.0).abs();
            ensure!(gap <= TOL, "{raw:?} at dim {d}: trace off by {gap:e}");
            worst_trace = worst_trace.max(gap);
            tp_checked += 1;
        }
        done += 1;
    }
    Ok(format!(
        "{CIRCUITS} circuits PSD (lowest eigenvalue {worst_eig:.1e}); {tp_checked} trace-preserving ones keep trace within {worst_trace:.1e}"
    ))
}
