// SPDX-License-Identifier: Apache-2.0

use discocirc::analysis::{graded_entailment, projector_entails, scale_max_eig_one, scale_trace_one};
use discocirc::semantics::density::min_eigenvalue;
use discocirc::semantics::Matrix;
use rand::Rng;

use crate::{ensure, rng, Outcome};

const PAIRS: usize = 200;
const STEP: f64 = 1e-6;

/// `A Aᵀ` for a random `d × r` matrix `A`: PSD of rank `r` (almost surely).
fn random_psd(d: usize, r: usize, rng: &mut impl Rng) -> Matrix {
    let a = Matrix::from_fn(d, r, |_, _| rng.gen_range(-1.0..1.0));
    &a * a.transpose()
}

fn random_orthogonal(d: usize, rng: &mut impl Rng) -> Matrix {
    Matrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0)).qr().q()
}

fn bracketing(r: &mut impl Rng) -> Result<usize, String> {
    let mut escaped = 0;
    for i in 0..PAIRS {
        let d = r.gen_range(1..=4);
        let (r1, r2) = (r.gen_range(1..=d), r.gen_range(1..=d));
        let s1 = random_psd(d, r1, r);
        // Every fourth pair puts s1 inside s2's support.
        let s2 = if i % 4 == 0 {
            &s1 * r.gen_range(0.5..2.0) + random_psd(d, r2, r) * 0.1
        } else {
            random_psd(d, r2, r)
        };
        let k = graded_entailment(&s1, &s2).map_err(|e| e.to_string())?.k;
        let scale = s1.amax().max(s2.amax());
        let at = min_eigenvalue(&(&s2 - &s1 * k));
        let past = min_eigenvalue(&(&s2 - &s1 * (k + STEP)));
        ensure!(at >= -1e-9 * scale, "pair {i}: s2 - k s1 has eigenvalue {at:e} (k = {k})");
        ensure!(past < 0.0, "pair {i}: s2 - (k + {STEP}) s1 is still PSD (k = {k})");
        if k == 0.0 {
            escaped += 1;
        }
        let m = scale_max_eig_one(&s1).map_err(|e| e.to_string())?;
        let kk = graded_entailment(&m, &m).map_err(|e| e.to_string())?.k;
        ensure!(kk >= 1.0 - 1e-9, "pair {i}: k(σ, σ) = {kk} under max-eig scaling");
    }
    Ok(escaped)
}

/// Distinct trace-one states never compare with k ≥ 1.
fn trace_one_sweep(r: &mut impl Rng) -> Result<usize, String> {
    let mut counterexamples = 0;
    for _ in 0..PAIRS {
        let d = r.gen_range(2..=4);
        let s1 = scale_trace_one(&random_psd(d, r.gen_range(1..=d), r)).map_err(|e| e.to_string())?;
        let s2 = scale_trace_one(&random_psd(d, r.gen_range(1..=d), r)).map_err(|e| e.to_string())?;
        for (a, b) in [(&s1, &s2), (&s2, &s1)] {
            if graded_entailment(a, b).map_err(|e| e.to_string())?.k >= 1.0 - 1e-9 {
                counterexamples += 1;
            }
        }
    }
    Ok(counterexamples)
}

/// Coordinate projectors of every subset of a random basis, checked against
/// subset inclusion.
fn projector_families(r: &mut impl Rng) -> Result<usize, String> {
    let mut checked = 0;
    for d in 1..=3 {
        for _ in 0..4 {
            let q = random_orthogonal(d, r);
            let family: Vec<(u32, Matrix)> = (0..1u32 << d)
                .map(|mask| {
                    let diag = Matrix::from_fn(d, d, |i, j| {
                        if i == j && mask >> i & 1 == 1 { 1.0 } else { 0.0 }
                    });
                    (mask, &q * diag * q.transpose())
                })
                .collect();
            for (s, p) in &family {
                for (t, pt) in &family {
                    let got = projector_entails(p, pt).map_err(|e| e.to_string())?;
                    let want = s & !t == 0;
                    ensure!(got == want, "dim {d}: subsets {s:b} ⊆ {t:b} is {want}, got {got}");
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

pub fn criterion() -> Outcome {
    let mut r = rng(7);
    let escaped = bracketing(&mut r)?;
    let bad = trace_one_sweep(&mut r)?;
    ensure!(bad == 0, "{bad} strict comparisons between distinct trace-one states");
    let pairs = projector_families(&mut r)?;
    Ok(format!(
        "{PAIRS} pairs bracketed ({escaped} with k = 0); 0 trace-one counterexamples; {pairs} projector pairs match inclusion"
    ))
}
