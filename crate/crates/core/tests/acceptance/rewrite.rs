// SPDX-License-Identifier: Apache-2.0

use discocirc::diagram::{DBox, Diagram, WireLabel};
use discocirc::rewrite::{rewrite_once, NormalizeOptions, Rule};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::{ensure, matrix_interp, random_real_payloads, rel_diff, rng, Outcome};

const PER_RULE: usize = 200;
const TOL: f64 = 1e-12;

struct Gen<'a, R: Rng> {
    rng: &'a mut R,
    labels: [WireLabel; 2],
    names: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn label(&mut self) -> WireLabel {
        self.labels.choose(self.rng).unwrap().clone()
    }

    fn labels(&mut self, n: usize) -> Vec<WireLabel> {
        (0..n).map(|_| self.label()).collect()
    }

    fn generic(&mut self, dom: Vec<WireLabel>) -> Diagram {
        self.names += 1;
        let n = self.rng.gen_range(0..=2);
        let cod = self.labels(n);
        Diagram::from_box(DBox::generic(format!("g{}", self.names), dom, cod))
    }

    /// Applies `piece` to the wires `k..k + piece.dom().len()` of `d`.
    fn place(d: &Diagram, k: usize, piece: &Diagram) -> Diagram {
        let cod = d.cod();
        let pre = Diagram::id(&cod[..k]);
        let post = Diagram::id(&cod[k + piece.dom().len()..]);
        d.then(&pre.tensor(piece).tensor(&post)).expect("boundaries match")
    }

    /// A random context layer: a generic box, spider, cap, cup or swap.
    fn layer(&mut self, d: &Diagram) -> Diagram {
        let w = d.cod().len();
        let k = self.rng.gen_range(0..=w);
        let fits2 = k + 2 <= w;
        // Past four wires, only shrinking layers.
        if w >= 4 {
            let k = self.rng.gen_range(0..w - 1);
            let piece = match d.cod()[k] == d.cod()[k + 1] {
                true => Diagram::cup(&d.cod()[k]),
                false => self.generic(d.cod()[k..k + 2].to_vec()),
            };
            return Self::place(d, k, &piece);
        }
        match self.rng.gen_range(0..5) {
            1 if k < w => {
                let x = d.cod()[k].clone();
                let n = self.rng.gen_range(0..=3);
                Self::place(d, k, &Diagram::spider(1, n, &x).unwrap())
            }
            2 => Self::place(d, k, &Diagram::cap(&self.label())),
            3 if fits2 && d.cod()[k] == d.cod()[k + 1] => {
                Self::place(d, k, &Diagram::cup(&d.cod()[k].clone()))
            }
            4 if fits2 => {
                let (x, y) = (d.cod()[k].clone(), d.cod()[k + 1].clone());
                Self::place(d, k, &Diagram::swap(&x, &y))
            }
            _ => {
                let m = self.rng.gen_range(0..=2.min(w - k));
                let piece = self.generic(d.cod()[k..k + m].to_vec());
                Self::place(d, k, &piece)
            }
        }
    }

    /// A redex for `rule` applied at a random position.
    fn redex(&mut self, d: &Diagram, rule: Rule) -> Diagram {
        let w = d.cod().len();
        let d = if w == 0 { Self::place(d, 0, &Diagram::cap(&self.label())) } else { d.clone() };
        let w = d.cod().len();
        let k = self.rng.gen_range(0..w);
        let x = d.cod()[k].clone();
        match rule {
            Rule::Fuse => {
                let mid = self.rng.gen_range(1..=2);
                let first = Diagram::spider(1, mid + 1, &x).unwrap();
                let second = Diagram::spider(mid, self.rng.gen_range(0..=2), &x).unwrap();
                let step = Self::place(&d, k, &first);
                Self::place(&step, k, &second)
            }
            Rule::Yank => {
                let left = self.rng.gen_bool(0.5);
                let snake = if left {
                    Diagram::id(&[x.clone()])
                        .tensor(&Diagram::cap(&x))
                        .then(&Diagram::cup(&x).tensor(&Diagram::id(&[x.clone()])))
                } else {
                    Diagram::cap(&x)
                        .tensor(&Diagram::id(&[x.clone()]))
                        .then(&Diagram::id(&[x.clone()]).tensor(&Diagram::cup(&x)))
                };
                Self::place(&d, k, &snake.unwrap())
            }
            Rule::Elim => {
                let (m, n) = *[(1, 1), (0, 2), (2, 0), (1, 0), (0, 1)].choose(self.rng).unwrap();
                let s = Diagram::spider(m, n, &x).unwrap();
                match m {
                    // Bring a second x-wire next to wire k first.
                    2 => Self::place(&Self::place(&d, k, &Diagram::cap(&x)), k + 1, &s),
                    _ => Self::place(&d, k + 1 - m.min(1), &s),
                }
            }
            Rule::Swap => {
                let y = self.label();
                let d = Self::place(&d, k, &Diagram::id(&[x.clone()]).tensor(&Diagram::cap(&y)));
                Self::place(&d, k + 1, &Diagram::swap(&y, &y))
            }
        }
    }

    fn diagram(&mut self, rule: Rule) -> Diagram {
        let w = self.rng.gen_range(1..=3);
        let mut d = Diagram::id(&self.labels(w));
        let before = self.rng.gen_range(0..=3);
        let after = self.rng.gen_range(0..=3);
        for _ in 0..before {
            d = self.layer(&d);
        }
        d = self.redex(&d, rule);
        for _ in 0..after {
            d = self.layer(&d);
        }
        d
    }
}

pub fn criterion() -> Outcome {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for rule in Rule::ALL {
        let mut done = 0;
        let mut tries = 0;
        while done < PER_RULE {
            tries += 1;
            ensure!(tries < 20 * PER_RULE, "{rule}: too few redexes generated");
            let dims = [("x", r.gen_range(1..=4)), ("y", r.gen_range(1..=4))];
            let mut g = Gen {
                rng: &mut r,
                labels: [WireLabel::new("x"), WireLabel::new("y")],
                names: 0,
            };
            let d = g.diagram(rule);
            if d.dom().len() + d.cod().len() > 8 {
                continue;
            }
            let Some(after) = rewrite_once(&d, rule, NormalizeOptions::default()) else {
                continue;
            };
            let mut interp = matrix_interp(&dims);
            random_real_payloads(&mut interp, &[&d], &mut r);
            let a = interp.evaluate(&d).map_err(|e| format!("{rule}: {e}"))?;
            let b = interp.evaluate(&after).map_err(|e| format!("{rule} (rewritten): {e}"))?;
            let diff = rel_diff(&a, &b).ok_or_else(|| format!("{rule}: shapes differ"))?;
            ensure!(diff <= TOL, "{rule}: relative difference {diff:e}\n{}", d.to_text());
            worst = worst.max(diff);
            done += 1;
        }
    }
    Ok(format!(
        "{PER_RULE} instances per rule ({}), worst relative difference {worst:.1e}",
        Rule::ALL.map(|r| r.as_str()).join(", ")
    ))
}
