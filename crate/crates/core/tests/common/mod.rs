#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ustat_core::engine::{Component, MdKernel, Sample};
use ustat_core::graph::SimpleGraph;
use ustat_core::kernels::MotifId;
use ustat_core::tensor::{for_each_index, DenseTensor, Signature, DEFAULT_MEM_CAP};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / (1.0 + want.abs())
}

pub fn random_tensor(r: &mut impl Rng, order: usize, n: usize) -> DenseTensor {
    DenseTensor::from_fn(order, n, DEFAULT_MEM_CAP, |_| r.gen_range(-1.0..1.0)).unwrap()
}

/// Direct evaluation of an einsum over every assignment of the labels.
pub fn naive_einsum(tensors: &[DenseTensor], inputs: &[Vec<usize>], output: &[usize], n: usize) -> Vec<f64> {
    let labels: Vec<usize> = inputs.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let pos = |l: usize| labels.iter().position(|&x| x == l).unwrap();
    let out_len = n.pow(output.len() as u32);
    let mut out = vec![0.0; out_len];
    for_each_index(labels.len(), n, |assign| {
        let mut p = 1.0;
        for (t, tuple) in tensors.iter().zip(inputs) {
            let idx: Vec<usize> = tuple.iter().map(|&l| assign[pos(l)]).collect();
            p *= t.get(&idx);
        }
        let o = output.iter().fold(0, |acc, &l| acc * n + assign[pos(l)]);
        out[o] += p;
    });
    out
}

/// Random covering signature over `0..m` with `k` tuples of length 1..=3.
pub fn random_signature(r: &mut impl Rng, m: usize, k: usize, allow_repeats: bool) -> Signature {
    loop {
        let mut tuples: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let len = r.gen_range(1..=3.min(m.max(1)));
                let mut t = Vec::with_capacity(len);
                while t.len() < len {
                    let i = r.gen_range(0..m);
                    if allow_repeats || !t.contains(&i) {
                        t.push(i);
                    }
                }
                t
            })
            .collect();
        for i in 0..m {
            if !tuples.iter().flatten().any(|&x| x == i) {
                let slot = r.gen_range(0..tuples.len());
                tuples[slot].push(i);
            }
        }
        if let Ok(s) = Signature::new(tuples) {
            return s;
        }
    }
}

/// Kernel on integer observations whose components are random lookup
/// tables; the flat kernel is the product of table reads.
pub fn lookup_kernel(r: &mut impl Rng, sig: &Signature, n: usize) -> MdKernel<usize> {
    let comps = sig
        .tuples()
        .iter()
        .map(|t| {
            let a = t.len();
            let table: Vec<f64> = (0..n.pow(a as u32)).map(|_| r.gen_range(-1.0..1.0)).collect();
            Component::new(a, move |x: &[&usize]| table[x.iter().fold(0, |acc, &&i| acc * n + i)])
        })
        .collect();
    MdKernel::new(sig.clone(), comps).unwrap()
}

pub fn index_sample(n: usize) -> Sample<usize> {
    Sample::new((0..n).collect()).unwrap()
}

/// Graphs with `e` edges whose treewidth attains the maximum over all
/// graphs with `e` edges, for `e = 1..=15`. Vertex ids follow drawing
/// order.
pub fn max_width_witnesses() -> Vec<(usize, SimpleGraph)> {
    let k5: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
    let with =
        |extra: &[(usize, usize)]| -> Vec<(usize, usize)> { k5.iter().chain(extra).copied().collect() };
    let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let lists: Vec<(usize, Vec<(usize, usize)>)> = vec![
        (2, vec![(0, 1)]),
        (3, vec![(0, 1), (1, 2)]),
        (3, vec![(0, 1), (1, 2), (2, 0)]),
        (4, vec![(0, 1), (1, 3), (2, 3), (0, 3)]),
        (5, vec![(0, 1), (1, 3), (2, 3), (0, 3), (2, 4)]),
        (4, k4.to_vec()),
        (5, k4.iter().copied().chain([(2, 4)]).collect()),
        (6, k4.iter().copied().chain([(2, 4), (4, 5)]).collect()),
        // a b c d e h g
        (7, vec![(0, 1), (1, 3), (3, 4), (2, 5), (5, 4), (0, 3), (1, 4), (0, 4), (2, 6)]),
        (5, k5.clone()),
        (6, with(&[(5, 0)])),
        (6, with(&[(5, 0), (5, 1)])),
        (7, with(&[(5, 0), (6, 0), (5, 6)])),
        (8, with(&[(6, 0), (7, 0), (5, 6), (7, 5)])),
        (6, (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect()),
    ];
    lists
        .into_iter()
        .enumerate()
        .map(|(i, (v, edges))| {
            let g = SimpleGraph::from_edges(v, &edges).unwrap();
            assert_eq!(g.edge_count(), i + 1);
            (i + 1, g)
        })
        .collect()
}

/// Induced motif edge sets on vertices `0..k`, written out independently.
pub type Pattern = (MotifId, usize, Vec<(usize, usize)>);

pub fn census_patterns() -> Vec<Pattern> {
    vec![
        (MotifId::R1, 3, vec![(0, 1), (1, 2)]),
        (MotifId::R2, 3, vec![(0, 1), (1, 2), (0, 2)]),
        (MotifId::R3, 4, vec![(0, 1), (0, 2), (0, 3)]),
        (MotifId::R4, 4, vec![(0, 1), (1, 2), (2, 3)]),
        (MotifId::R5, 4, vec![(0, 1), (1, 2), (0, 2), (2, 3)]),
        (MotifId::R6, 4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]),
        (MotifId::R7, 4, vec![(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]),
        (MotifId::R8, 4, vec![(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)]),
    ]
}

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Count vertex subsets whose induced subgraph is isomorphic to the pattern.
pub fn census(g: &SimpleGraph, k: usize, pattern: &[(usize, usize)]) -> u64 {
    let n = g.vertex_count();
    let has = |e: &[(usize, usize)], a: usize, b: usize| e.contains(&(a, b)) || e.contains(&(b, a));
    let perms = permutations(k);
    let mut count = 0;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let iso = perms.iter().any(|p| {
            (0..k).all(|a| (a + 1..k).all(|b| g.has_edge(subset[p[a]], subset[p[b]]) == has(pattern, a, b)))
        });
        count += u64::from(iso);
        // next k-subset in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else { break };
        subset[i] += 1;
        for t in i + 1..k {
            subset[t] = subset[t - 1] + 1;
        }
    }
    count
}

pub fn erdos_renyi(r: &mut ChaCha8Rng, n: usize, p: f64) -> SimpleGraph {
    let mut g = SimpleGraph::with_vertices(n);
    for a in 0..n {
        for b in a + 1..n {
            if r.gen_bool(p) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

pub fn points(r: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| r.gen_range(-1.0..1.0)).collect()).collect()
}
