// SPDX-License-Identifier: Apache-2.0

//! Tensor-network contraction.
//!
//! Every index id appears at most twice across the network; an index seen
//! twice is summed, an index seen once is open. Networks of up to
//! [`EXACT_LIMIT`] tensors are contracted in an order that is optimal for the
//! pairwise cost model (subset dynamic programming); larger ones greedily merge
//! the pair with the smallest intermediate.

use std::collections::BTreeMap;

use super::tensor::{next_index, strides, Scalar, Tensor};

pub const EXACT_LIMIT: usize = 12;

#[derive(Clone, Debug)]
pub struct Node<T> {
    pub tensor: Tensor<T>,
    pub indices: Vec<usize>,
}

/// Sums over repeated indices within one tensor (self-loops).
fn trace_repeated<T: Scalar>(node: Node<T>) -> Node<T> {
    let mut first: BTreeMap<usize, usize> = BTreeMap::new();
    let mut pairs = Vec::new();
    for (axis, &id) in node.indices.iter().enumerate() {
        if let Some(&a) = first.get(&id) {
            pairs.push((a, axis));
        } else {
            first.insert(id, axis);
        }
    }
    if pairs.is_empty() {
        return node;
    }
    let traced: Vec<bool> = (0..node.indices.len())
        .map(|a| pairs.iter().any(|&(x, y)| a == x || a == y))
        .collect();
    let keep: Vec<usize> = (0..node.indices.len()).filter(|&a| !traced[a]).collect();
    let shape = node.tensor.shape().to_vec();
    let out_shape: Vec<usize> = keep.iter().map(|&a| shape[a]).collect();
    let mut out = vec![T::zero(); out_shape.iter().product()];
    let ost = strides(&out_shape);
    let mut idx = vec![0; shape.len()];
    let data = node.tensor.data();
    let mut flat = 0;
    loop {
        if pairs.iter().all(|&(x, y)| idx[x] == idx[y]) {
            let o: usize = keep.iter().zip(&ost).map(|(&a, s)| idx[a] * s).sum();
            out[o] = out[o].add(data[flat]);
        }
        flat += 1;
        if !next_index(&mut idx, &shape) {
            break;
        }
    }
    Node {
        tensor: Tensor::new(out_shape, out),
        indices: keep.iter().map(|&a| node.indices[a]).collect(),
    }
}

/// Contracts two nodes over their shared indices.
fn contract_pair<T: Scalar>(a: &Node<T>, b: &Node<T>) -> Node<T> {
    let shared: Vec<usize> = a
        .indices
        .iter()
        .copied()
        .filter(|i| b.indices.contains(i))
        .collect();
    let a_only: Vec<usize> = (0..a.indices.len())
        .filter(|&k| !shared.contains(&a.indices[k]))
        .collect();
    let b_only: Vec<usize> = (0..b.indices.len())
        .filter(|&k| !shared.contains(&b.indices[k]))
        .collect();
    let a_sh: Vec<usize> = shared
        .iter()
        .map(|i| a.indices.iter().position(|x| x == i).unwrap())
        .collect();
    let b_sh: Vec<usize> = shared
        .iter()
        .map(|i| b.indices.iter().position(|x| x == i).unwrap())
        .collect();
    let pa: Vec<usize> = a_only.iter().chain(&a_sh).copied().collect();
    let pb: Vec<usize> = b_sh.iter().chain(&b_only).copied().collect();
    let ta = a.tensor.permute(&pa);
    let tb = b.tensor.permute(&pb);
    let rows: usize = a_only.iter().map(|&k| a.tensor.shape()[k]).product();
    let inner: usize = a_sh.iter().map(|&k| a.tensor.shape()[k]).product();
    let cols: usize = b_only.iter().map(|&k| b.tensor.shape()[k]).product();
    let (da, db) = (ta.data(), tb.data());
    let mut out = vec![T::zero(); rows * cols];
    for r in 0..rows {
        for k in 0..inner {
            let x = da[r * inner + k];
            if x == T::zero() {
                continue;
            }
            let row = &db[k * cols..(k + 1) * cols];
            let dst = &mut out[r * cols..(r + 1) * cols];
            for (d, &y) in dst.iter_mut().zip(row) {
                *d = d.add(x.mul(y));
            }
        }
    }
    let mut shape: Vec<usize> = a_only.iter().map(|&k| a.tensor.shape()[k]).collect();
    shape.extend(b_only.iter().map(|&k| b.tensor.shape()[k]));
    let mut indices: Vec<usize> = a_only.iter().map(|&k| a.indices[k]).collect();
    indices.extend(b_only.iter().map(|&k| b.indices[k]));
    Node {
        tensor: Tensor::new(shape, out),
        indices,
    }
}

/// Indices of a subset that stay open after contracting it.
fn open_of(mask: u32, nodes: &[Vec<usize>]) -> Vec<usize> {
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, idx) in nodes.iter().enumerate() {
        if mask & (1 << k) != 0 {
            for &i in idx {
                *count.entry(i).or_default() += 1;
            }
        }
    }
    count.into_iter().filter(|&(_, c)| c == 1).map(|(i, _)| i).collect()
}

/// Optimal pairwise contraction tree for a small network.
fn exact_order(indices: &[Vec<usize>], dims: &BTreeMap<usize, usize>) -> Vec<(u32, u32)> {
    let n = indices.len();
    let full = (1u32 << n) - 1;
    let size = |ids: &[usize]| ids.iter().map(|i| dims[i] as f64).product::<f64>();
    let open: Vec<Vec<usize>> = (0..=full).map(|m| open_of(m, indices)).collect();
    let mut best = vec![f64::INFINITY; (full + 1) as usize];
    let mut split = vec![0u32; (full + 1) as usize];
    for k in 0..n {
        best[1 << k] = 0.0;
    }
    for mask in 1..=full {
        if mask.count_ones() < 2 {
            continue;
        }
        let low = mask & mask.wrapping_neg();
        // Enumerate sub-masks containing the lowest bit: each split once.
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let s1 = sub | low;
            if s1 != mask {
                let s2 = mask ^ s1;
                let mut all = open[s1 as usize].clone();
                all.extend(open[s2 as usize].iter().copied());
                all.sort_unstable();
                all.dedup();
                let c = best[s1 as usize] + best[s2 as usize] + size(&all);
                if c < best[mask as usize] {
                    best[mask as usize] = c;
                    split[mask as usize] = s1;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let mut order = Vec::new();
    fn walk(mask: u32, split: &[u32], order: &mut Vec<(u32, u32)>) {
        if mask.count_ones() < 2 {
            return;
        }
        let s1 = split[mask as usize];
        let s2 = mask ^ s1;
        walk(s1, split, order);
        walk(s2, split, order);
        order.push((s1, s2));
    }
    walk(full, &split, &mut order);
    order
}

/// Contracts the network; the result's axes follow `open`.
pub fn contract<T: Scalar>(nodes: Vec<Node<T>>, open: &[usize]) -> Tensor<T> {
    let nodes: Vec<Node<T>> = nodes.into_iter().map(trace_repeated).collect();
    if nodes.is_empty() {
        assert!(open.is_empty(), "open indices without tensors");
        return Tensor::scalar(T::one());
    }
    let mut dims = BTreeMap::new();
    for n in &nodes {
        for (&i, &d) in n.indices.iter().zip(n.tensor.shape()) {
            dims.insert(i, d);
        }
    }
    let result = if nodes.len() <= EXACT_LIMIT {
        let indices: Vec<Vec<usize>> = nodes.iter().map(|n| n.indices.clone()).collect();
        let order = exact_order(&indices, &dims);
        let mut pool: BTreeMap<u32, Node<T>> = nodes
            .into_iter()
            .enumerate()
            .map(|(k, n)| (1u32 << k, n))
            .collect();
        for (s1, s2) in order {
            let a = pool.remove(&s1).expect("subtree computed");
            let b = pool.remove(&s2).expect("subtree computed");
            pool.insert(s1 | s2, contract_pair(&a, &b));
        }
        pool.into_values().next().expect("one tensor remains")
    } else {
        greedy(nodes, &dims)
    };
    let perm: Vec<usize> = open
        .iter()
        .map(|i| {
            result
                .indices
                .iter()
                .position(|x| x == i)
                .expect("open index survives contraction")
        })
        .collect();
    assert_eq!(perm.len(), result.indices.len(), "dangling indices remain");
    result.tensor.permute(&perm)
}

fn greedy<T: Scalar>(mut nodes: Vec<Node<T>>, dims: &BTreeMap<usize, usize>) -> Node<T> {
    while nodes.len() > 1 {
        let mut best: Option<(f64, bool, usize, usize)> = None;
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                let shares = nodes[i].indices.iter().any(|x| nodes[j].indices.contains(x));
                let size: f64 = nodes[i]
                    .indices
                    .iter()
                    .chain(&nodes[j].indices)
                    .filter(|x| {
                        !(nodes[i].indices.contains(x) && nodes[j].indices.contains(x))
                    })
                    .map(|x| dims[x] as f64)
                    .product();
                let key = (size, !shares, i, j);
                // Prefer connected pairs, then the smallest result.
                let better = match best {
                    None => true,
                    Some((s, ns, _, _)) => (!shares, size) < (ns, s),
                };
                if better {
                    best = Some(key);
                }
            }
        }
        let (_, _, i, j) = best.unwrap();
        let b = nodes.remove(j);
        let a = nodes.remove(i);
        nodes.push(contract_pair(&a, &b));
    }
    nodes.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(shape: Vec<usize>, data: Vec<f64>, idx: Vec<usize>) -> Node<f64> {
        Node {
            tensor: Tensor::new(shape, data),
            indices: idx,
        }
    }

    #[test]
    fn matrix_product() {
        let a = node(vec![2, 2], vec![1., 2., 3., 4.], vec![0, 1]);
        let b = node(vec![2, 2], vec![5., 6., 7., 8.], vec![1, 2]);
        let c = contract(vec![a, b], &[0, 2]);
        assert_eq!(c.data(), &[19., 22., 43., 50.]);
    }

    #[test]
    fn self_trace() {
        let a = node(vec![2, 2], vec![1., 2., 3., 4.], vec![0, 0]);
        assert_eq!(contract(vec![a], &[]).data(), &[5.]);
    }

    #[test]
    fn greedy_matches_exact_on_a_chain() {
        let mut nodes = Vec::new();
        for k in 0..14 {
            nodes.push(node(
                vec![2, 2],
                vec![1.0 + k as f64, 0.5, -0.25, 1.0],
                vec![k, k + 1],
            ));
        }
        let exact = contract(nodes[..12].to_vec(), &[0, 12]);
        let mut brute = Tensor::<f64>::delta(2, 2);
        for n in &nodes[..12] {
            brute = contract(
                vec![
                    Node { tensor: brute, indices: vec![100, 101] },
                    Node { tensor: n.tensor.clone(), indices: vec![101, 102] },
                ],
                &[100, 102],
            );
        }
        assert!(exact.max_abs_diff(&brute) < 1e-9);
        let long = contract(nodes.clone(), &[0, 14]);
        assert_eq!(long.shape(), &[2, 2]);
    }
}
