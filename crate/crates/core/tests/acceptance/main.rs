// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria 1–10, one pass/fail line each.
//!
//! Runs without the libtest harness so every line reaches the terminal;
//! the process fails if any criterion fails.

#[path = "../common/mod.rs"]
mod common;

mod corpus;
mod cpm;
mod grammar;
mod lowner;
mod relational;
mod rewrite;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use discocirc::diagram::{BoxKind, Diagram};
use discocirc::semantics::{Backend, Interpretation, Payload, Tensor, Value, NO_PRIOR};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Outcome = Result<String, String>;

/// Fails the criterion with a formatted message unless `cond` holds.
#[macro_export]
macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Uniform entries in [-1, 1] for every generic box of `ds` not yet in
/// `interp`, shaped domain-then-codomain (of the undaggered box).
pub fn random_real_payloads(interp: &mut Interpretation, ds: &[&Diagram], rng: &mut impl Rng) {
    for d in ds {
        for b in d.boxes() {
            if b.kind != BoxKind::Generic
                || b.name == NO_PRIOR
                || interp.payloads.contains_key(&b.name)
            {
                continue;
            }
            let (dom, cod) = if b.dagger { (&b.cod, &b.dom) } else { (&b.dom, &b.cod) };
            let shape: Vec<usize> = dom
                .iter()
                .chain(cod)
                .map(|l| interp.dims[&l.0])
                .collect();
            let n = shape.iter().product();
            let data = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            interp
                .payloads
                .insert(b.name.clone(), Payload::Real(Tensor::new(shape, data)));
        }
    }
}

pub fn matrix_interp(dims: &[(&str, usize)]) -> Interpretation {
    let mut i = Interpretation::new(Backend::Matrix);
    i.dims = dims.iter().map(|(l, d)| (l.to_string(), *d)).collect::<BTreeMap<_, _>>();
    i
}

/// Largest entry difference relative to the larger magnitude (at least 1).
pub fn rel_diff(a: &Value, b: &Value) -> Option<f64> {
    let (x, y) = (a.to_complex()?, b.to_complex()?);
    if x.shape() != y.shape() {
        return None;
    }
    let scale = x
        .data()
        .iter()
        .chain(y.data())
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    Some(x.max_abs_diff(&y) / scale)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("grammar reduction and brute-force oracle", grammar::criterion),
        ("rewrite soundness", rewrite::criterion),
        ("relative clause text equality", corpus::relative_clause),
        ("DisCoCat recovery", corpus::discocat_recovery),
        ("western text and network", corpus::western),
        ("CPM closure", cpm::criterion),
        ("Löwner suite", lowner::criterion),
        ("epistemic and conjunction equalities", corpus::equalities),
        ("relational oracle", relational::criterion),
        ("determinism and runtime", corpus::determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    // ACCEPTANCE_ONLY=3,6 runs a subset.
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    for (k, (name, f)) in criteria.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(k + 1))) {
            continue;
        }
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|e| Err(format!("panicked: {}", panic_text(&e))));
        let n = k + 1;
        match res {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail} [{:.2?}]", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {why} [{:.2?}]", t.elapsed());
            }
        }
    }
    let total = start.elapsed();
    println!("acceptance total runtime {total:.2?} (limit 5 min)");
    if total > Duration::from_secs(300) {
        println!("acceptance FAIL: total runtime over limit");
        failed += 1;
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn panic_text(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown panic".into())
}
