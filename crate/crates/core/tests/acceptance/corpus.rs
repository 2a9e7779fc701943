// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use discocirc::analysis::extract_network;
use discocirc::compiler::{recover_discocat, tag_document, Circuit};
use discocirc::diagram::{to_dot, Diagram};
use discocirc::rewrite::{equivalent, normalize};
use discocirc::semantics::Interpretation;

use crate::common::{compile, lexicon, text, text_names};
use crate::{ensure, matrix_interp, random_real_payloads, rel_diff, rng, Outcome};

const TOL: f64 = 1e-12;

/// Evaluates `a` and `b` under one set of random payloads at dim 2 and
/// returns their relative difference.
fn matrix_gap(a: &Diagram, b: &Diagram, seed: u64) -> Result<f64, String> {
    let mut interp: Interpretation = matrix_interp(&[("n", 2), ("s", 2)]);
    random_real_payloads(&mut interp, &[a, b], &mut rng(seed));
    let va = interp.evaluate(a).map_err(|e| e.to_string())?;
    let vb = interp.evaluate(b).map_err(|e| e.to_string())?;
    rel_diff(&va, &vb).ok_or_else(|| "values have different shapes".into())
}

pub fn relative_clause() -> Outcome {
    let text_c = compile("dog_bites");
    let rel = compile("dog_bites_relative");
    let swapped = compile("dog_bites_swapped");
    let (a, b) = (normalize(&text_c.diagram).diagram, normalize(&rel.diagram).diagram);
    ensure!(a.equal_up_to_iso(&b), "text and relative-clause sentence normalize differently");
    ensure!(
        !equivalent(&text_c.diagram, &swapped.diagram).map_err(|e| e.to_string())?,
        "swapped text reported equivalent"
    );
    let same = matrix_gap(&text_c.diagram, &rel.diagram, 3)?;
    ensure!(same <= TOL, "text vs relative clause differ by {same:e}");
    let gap = matrix_gap(&text_c.diagram, &swapped.diagram, 3)?;
    ensure!(gap > 1e-6, "swapped text evaluates the same (gap {gap:e})");
    Ok(format!(
        "normal forms isomorphic; swapped text inequivalent, matrix gap {gap:.3} at dim 2"
    ))
}

pub fn discocat_recovery() -> Outcome {
    let lex = lexicon();
    let mut n = 0;
    let mut worst: f64 = 0.0;
    for name in text_names() {
        let doc = tag_document(&text(&name), &lex).map_err(|e| e.to_string())?;
        for (i, words) in doc.iter().enumerate() {
            let r = recover_discocat(words, &lex.target)
                .map_err(|e| format!("{name} sentence {i}: {e}"))?;
            ensure!(
                equivalent(&r.all_static, &r.with_initial_states).map_err(|e| e.to_string())?,
                "{name} sentence {i}: routes not rewrite-equivalent"
            );
            let gap = matrix_gap(&r.all_static, &r.with_initial_states, 4 + n as u64)?;
            ensure!(gap <= TOL, "{name} sentence {i}: routes differ by {gap:e}");
            worst = worst.max(gap);
            n += 1;
        }
    }
    Ok(format!("{n} corpus sentences, worst relative difference {worst:.1e}"))
}

pub fn western() -> Outcome {
    let c = compile("western");
    ensure!(c.wire_order.len() == 4, "{} wires", c.wire_order.len());
    ensure!(c.gates.len() == 5, "{} gates", c.gates.len());
    ensure!(
        c.gates[1].terminated == ["Claudio"],
        "gate 2 terminates {:?}",
        c.gates[1].terminated
    );
    ensure!(
        c.gates.iter().enumerate().all(|(g, info)| g == 1 || info.terminated.is_empty()),
        "another gate terminates a wire"
    );
    ensure!(!c.outputs.contains(&"Claudio".to_string()), "Claudio's wire survives");
    let got: BTreeSet<(String, String)> = extract_network(&c)
        .edges
        .into_iter()
        .map(|e| if e.a < e.b { (e.a, e.b) } else { (e.b, e.a) })
        .collect();
    let want: BTreeSet<(String, String)> = [
        ("Claudio", "Harmonica"),
        ("Claudio", "Frank"),
        ("Frank", "Snaky"),
        ("Harmonica", "Snaky"),
        ("Frank", "Harmonica"),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    ensure!(got == want, "network edges {got:?}");
    Ok("4 wires, 5 gates, Claudio ends at gate 2; 5-edge network".into())
}

pub fn equalities() -> Outcome {
    let mut worst: f64 = 0.0;
    for (k, (a, b)) in [
        ("tells", "tells_to"),
        ("hat_and_scarf", "hat_and_scarf_split"),
        ("alice_and_bob", "alice_and_bob_split"),
    ]
    .into_iter()
    .enumerate()
    {
        let (ca, cb) = (compile(a), compile(b));
        ensure!(
            equivalent(&ca.diagram, &cb.diagram).map_err(|e| e.to_string())?,
            "{a} and {b} are not rewrite-equivalent"
        );
        let gap = matrix_gap(&ca.diagram, &cb.diagram, 40 + k as u64)?;
        ensure!(gap <= TOL, "{a} and {b} differ by {gap:e} at dim 2");
        worst = worst.max(gap);
    }
    Ok(format!(
        "tells/to, hat-and-scarf, Alice-and-Bob equivalent; worst matrix difference {worst:.1e}"
    ))
}

fn render_corpus() -> Vec<String> {
    text_names()
        .iter()
        .flat_map(|name| {
            let c = compile(name);
            let back = Circuit::from_file(&c.to_file()).expect("circuit file loads");
            vec![
                c.to_file(),
                to_dot(&c.full_diagram(), name),
                to_dot(&back.full_diagram(), name),
                extract_network(&c).to_dot(),
            ]
        })
        .collect()
}

pub fn determinism() -> Outcome {
    let first = render_corpus();
    let second = render_corpus();
    ensure!(first == second, "corpus outputs differ between runs");
    let n = text_names().len();
    ensure!(first.chunks(4).all(|c| c[1] == c[2]), "rendering changes after a file round trip");
    let bytes: usize = first.iter().map(String::len).sum();
    Ok(format!("{n} texts compiled and rendered twice, {bytes} bytes identical"))
}
