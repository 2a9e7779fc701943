// SPDX-License-Identifier: Apache-2.0

//! Deterministic text rendering of evaluated meanings.

use std::fmt::Write;

use anyhow::Result;
use discocirc::semantics::{Scalar, Tensor, Value};

/// Fixed nine-digit decimal; negative zero prints as zero.
pub fn num(x: f64) -> String {
    let s = format!("{x:.9}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn indices(shape: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &d in shape {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..d).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

fn entries<T: Scalar>(t: &Tensor<T>, mut line: impl FnMut(&[usize], T) -> Option<String>) -> String {
    let mut out = String::new();
    for (idx, &v) in indices(t.shape()).iter().zip(t.data()) {
        if let Some(s) = line(idx, v) {
            let _ = writeln!(out, "{idx:?} {s}");
        }
    }
    out
}

pub fn value(v: &Value) -> Result<String> {
    let mut out = String::new();
    match v {
        Value::Real(t) => {
            let _ = writeln!(out, "real tensor shape {:?}", t.shape());
            out += &entries(t, |_, x| Some(num(x)));
        }
        Value::Complex(t) => {
            let _ = writeln!(out, "complex tensor shape {:?}", t.shape());
            out += &entries(t, |_, z| Some(format!("{} {}", num(z.re), num(z.im))));
        }
        Value::Relation(t) => {
            let n = t.data().iter().filter(|&&b| b).count();
            let _ = writeln!(out, "relation shape {:?}, {n} tuples", t.shape());
            out += &entries(t, |_, b| b.then(String::new)).replace(" \n", "\n");
        }
        Value::Cpm(c) if c.n_inputs == 0 => {
            let m = c.density()?;
            let _ = writeln!(out, "density matrix dims {:?}, trace {}", c.dims, num(m.trace()));
            for i in 0..m.nrows() {
                let row: Vec<String> = (0..m.ncols()).map(|j| num(m[(i, j)])).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        Value::Cpm(c) => {
            let _ = writeln!(
                out,
                "cp map dims {:?} ({} inputs), doubled tensor shape {:?}",
                c.dims,
                c.n_inputs,
                c.tensor.shape()
            );
            out += &entries(&c.tensor, |_, x| Some(num(x)));
        }
    }
    Ok(out)
}
