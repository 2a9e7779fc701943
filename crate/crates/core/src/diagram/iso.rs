// SPDX-License-Identifier: Apache-2.0

//! Isomorphism of diagrams.
//!
//! A diagram is turned into a vertex-coloured graph: one vertex per box, one
//! per box leg and one per boundary port. Legs of spider-like boxes share a
//! colour (their order is irrelevant), legs of other boxes carry their index.
//! Boundary vertices get unique colours so they stay fixed. Colour refinement
//! prunes the search and individualisation with backtracking makes it
//! complete; every candidate mapping is verified edge by edge.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use super::{Diagram, Port};

struct Graph {
    colors: Vec<u64>,
    adj: Vec<Vec<usize>>,
}

fn h<T: Hash>(t: T) -> u64 {
    let mut s = DefaultHasher::new();
    t.hash(&mut s);
    s.finish()
}

fn build(d: &Diagram) -> Graph {
    let mut colors = Vec::new();
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut port_vertex = BTreeMap::new();
    let add = |c: u64, colors: &mut Vec<u64>, adj: &mut Vec<Vec<usize>>| {
        colors.push(c);
        adj.push(Vec::new());
        colors.len() - 1
    };
    for (k, l) in d.dom.iter().enumerate() {
        let v = add(h(("in", k, l)), &mut colors, &mut adj);
        port_vertex.insert(Port::Input(k), v);
    }
    for (k, l) in d.cod.iter().enumerate() {
        let v = add(h(("out", k, l)), &mut colors, &mut adj);
        port_vertex.insert(Port::Output(k), v);
    }
    for (b, bx) in d.boxes.iter().enumerate() {
        let unordered = bx.kind.is_spider_like();
        let bc = if unordered {
            h((
                bx.kind,
                bx.spider_label(),
                bx.dom.len(),
                bx.cod.len(),
                bx.dagger,
            ))
        } else {
            h((bx.kind, &bx.name, bx.dagger, &bx.dom, &bx.cod))
        };
        let bv = add(bc, &mut colors, &mut adj);
        for k in 0..bx.dom.len() {
            let c = if unordered { h(("leg-in", bc)) } else { h(("leg-in", bc, k)) };
            let v = add(c, &mut colors, &mut adj);
            adj[bv].push(v);
            adj[v].push(bv);
            port_vertex.insert(Port::BoxIn(b, k), v);
        }
        for k in 0..bx.cod.len() {
            let c = if unordered { h(("leg-out", bc)) } else { h(("leg-out", bc, k)) };
            let v = add(c, &mut colors, &mut adj);
            adj[bv].push(v);
            adj[v].push(bv);
            port_vertex.insert(Port::BoxOut(b, k), v);
        }
    }
    for w in &d.wires {
        let a = port_vertex[&w.src];
        let b = port_vertex[&w.tgt];
        adj[a].push(b);
        adj[b].push(a);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    Graph { colors, adj }
}

/// One round of colour refinement over a family of graphs sharing a palette.
fn refine_once(colors: &[Vec<u64>], graphs: &[&Graph]) -> Vec<Vec<u64>> {
    graphs
        .iter()
        .zip(colors)
        .map(|(g, col)| {
            (0..col.len())
                .map(|v| {
                    let mut nb: Vec<u64> = g.adj[v].iter().map(|&u| col[u]).collect();
                    nb.sort_unstable();
                    h((col[v], nb))
                })
                .collect()
        })
        .collect()
}

fn class_count(colors: &[Vec<u64>]) -> usize {
    let mut all: Vec<u64> = colors.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

fn refine(mut colors: Vec<Vec<u64>>, graphs: &[&Graph]) -> Vec<Vec<u64>> {
    let mut classes = class_count(&colors);
    loop {
        let next = refine_once(&colors, graphs);
        let c = class_count(&next);
        colors = next;
        if c == classes {
            return colors;
        }
        classes = c;
    }
}

fn histogram(c: &[u64]) -> Vec<u64> {
    let mut v = c.to_vec();
    v.sort_unstable();
    v
}

/// Isomorphism-invariant hash: the histogram of stable colours.
pub(super) fn invariant_hash(d: &Diagram) -> u64 {
    let g = build(d);
    let colors = refine(vec![g.colors.clone()], &[&g]);
    h(histogram(&colors[0]))
}

pub(super) fn isomorphic(a: &Diagram, b: &Diagram) -> bool {
    if a.dom != b.dom
        || a.cod != b.cod
        || a.boxes.len() != b.boxes.len()
        || a.wires.len() != b.wires.len()
    {
        return false;
    }
    let ga = build(a);
    let gb = build(b);
    if ga.colors.len() != gb.colors.len() {
        return false;
    }
    search(&ga, &gb, vec![ga.colors.clone(), gb.colors.clone()], 0)
}

fn search(ga: &Graph, gb: &Graph, colors: Vec<Vec<u64>>, depth: u64) -> bool {
    let colors = refine(colors, &[ga, gb]);
    if histogram(&colors[0]) != histogram(&colors[1]) {
        return false;
    }
    // Smallest non-singleton class in the first graph.
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for &c in &colors[0] {
        *counts.entry(c).or_default() += 1;
    }
    let target = counts
        .iter()
        .filter(|(_, &n)| n > 1)
        .min_by_key(|(&c, &n)| (n, c))
        .map(|(&c, _)| c);
    let Some(target) = target else {
        return verify(ga, gb, &colors);
    };
    let v = colors[0].iter().position(|&c| c == target).unwrap();
    let fresh = h(("individual", depth, target));
    for w in (0..colors[1].len()).filter(|&w| colors[1][w] == target) {
        let mut next = colors.clone();
        next[0][v] = fresh;
        next[1][w] = fresh;
        if search(ga, gb, next, depth + 1) {
            return true;
        }
    }
    false
}

/// With all classes singletons the colouring is a bijection; check it.
fn verify(ga: &Graph, gb: &Graph, colors: &[Vec<u64>]) -> bool {
    let pos: BTreeMap<u64, usize> = colors[1].iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let map: Option<Vec<usize>> = colors[0].iter().map(|c| pos.get(c).copied()).collect();
    let Some(map) = map else { return false };
    for v in 0..ga.colors.len() {
        if ga.colors[v] != gb.colors[map[v]] {
            return false;
        }
        let mut image: Vec<usize> = ga.adj[v].iter().map(|&u| map[u]).collect();
        image.sort_unstable();
        if image != gb.adj[map[v]] {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::super::{DBox, Diagram, WireLabel};

    fn x() -> WireLabel {
        "x".into()
    }

    #[test]
    fn spider_legs_are_unordered() {
        let s = Diagram::state("a", vec![x()]);
        let t = Diagram::state("b", vec![x()]);
        let m = Diagram::merge(&x());
        let d1 = s.tensor(&t).then(&m).unwrap();
        let d2 = t.tensor(&s).then(&m).unwrap();
        assert!(d1.equal_up_to_iso(&d2));
        assert_eq!(d1.iso_hash(), d2.iso_hash());
    }

    #[test]
    fn generic_legs_are_ordered() {
        let s = Diagram::state("a", vec![x()]);
        let t = Diagram::state("b", vec![x()]);
        let f = Diagram::from_box(DBox::generic("f", vec![x(), x()], vec![]));
        let d1 = s.tensor(&t).then(&f).unwrap();
        let d2 = t.tensor(&s).then(&f).unwrap();
        assert!(!d1.equal_up_to_iso(&d2));
    }

    #[test]
    fn symmetric_structures_need_backtracking() {
        // Two identical disconnected loops of spiders: refinement alone cannot
        // split them, the search must individualise.
        let ring = |n: usize| {
            let mut d = Diagram::spider(0, 2, &x()).unwrap();
            for _ in 0..n {
                d = d
                    .then(&Diagram::id(&[x()]).tensor(&Diagram::spider(1, 1, &x()).unwrap()))
                    .unwrap();
            }
            d.then(&Diagram::spider(2, 0, &x()).unwrap()).unwrap()
        };
        let a = ring(3).tensor(&ring(3));
        let b = ring(3).tensor(&ring(3));
        assert!(a.equal_up_to_iso(&b));
        assert!(!a.equal_up_to_iso(&ring(2).tensor(&ring(4))));
    }

    #[test]
    fn boundary_order_matters() {
        let a = Diagram::state("a", vec![x()]).tensor(&Diagram::state("b", vec![x()]));
        let b = Diagram::state("b", vec![x()]).tensor(&Diagram::state("a", vec![x()]));
        assert!(!a.equal_up_to_iso(&b));
        assert!(a.equal_up_to_iso(&a.clone()));
    }
}
