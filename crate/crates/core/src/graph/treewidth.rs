use std::collections::{BTreeSet, HashMap};

use super::{GraphError, SimpleGraph};

/// Default vertex bound for [`treewidth_exact`].
pub const EXACT_BOUND: usize = 10;

/// Largest treewidth of a graph with `e` edges, `e = 1..=15`.
const MAX_WIDTH_BY_EDGES: [usize; 15] = [1, 1, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4, 4, 5];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Heuristic {
    MinDegree,
    #[default]
    MinFill,
}

/// A width together with an elimination order (original vertex ids)
/// achieving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreewidthResult {
    pub width: usize,
    pub order: Vec<usize>,
}

pub fn max_treewidth_by_edges(e: usize) -> Result<usize, GraphError> {
    match e {
        0 => Ok(0),
        1..=15 => Ok(MAX_WIDTH_BY_EDGES[e - 1]),
        _ => Err(GraphError::OutOfTable(e)),
    }
}

/// Graph as bitmasks over positions `0..k`, with the original ids.
struct Dense {
    ids: Vec<usize>,
    adj: Vec<u64>,
}

impl Dense {
    fn new(g: &SimpleGraph) -> Self {
        let ids: Vec<usize> = g.vertices().collect();
        assert!(ids.len() <= 64, "bitmask graphs hold at most 64 vertices");
        let pos: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = ids
            .iter()
            .map(|v| g.neighbors(*v).unwrap().iter().fold(0u64, |acc, u| acc | 1 << pos[u]))
            .collect();
        Self { ids, adj }
    }

    fn full(&self) -> u64 {
        if self.ids.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.ids.len()) - 1
        }
    }
}

fn eliminate_mask(adj: &mut [u64], v: usize) {
    let nb = adj[v];
    let mut rest = nb;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        adj[u] = (adj[u] | nb) & !(1 << u) & !(1 << v);
    }
    adj[v] = 0;
}

fn fill_count(adj: &[u64], v: usize) -> u32 {
    let nb = adj[v];
    let mut rest = nb;
    let mut missing = 0;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        missing += (nb & !adj[u] & !(1 << u)).count_ones();
    }
    missing / 2
}

fn bits(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (x != 0).then(|| {
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            b
        })
    })
}

/// Greedy elimination; ties go to the lowest vertex id.
pub fn treewidth_upper(g: &SimpleGraph, heuristic: Heuristic) -> TreewidthResult {
    if g.vertex_count() > 64 {
        return upper_sparse(g, heuristic);
    }
    let d = Dense::new(g);
    let mut adj = d.adj.clone();
    let mut alive = d.full();
    let mut width = 0;
    let mut order = Vec::with_capacity(d.ids.len());
    while alive != 0 {
        let v = bits(alive)
            .min_by_key(|&v| match heuristic {
                Heuristic::MinDegree => (adj[v].count_ones(), v),
                Heuristic::MinFill => (fill_count(&adj, v), v),
            })
            .unwrap();
        width = width.max(adj[v].count_ones() as usize);
        eliminate_mask(&mut adj, v);
        alive &= !(1 << v);
        order.push(d.ids[v]);
    }
    TreewidthResult { width, order }
}

fn upper_sparse(g: &SimpleGraph, heuristic: Heuristic) -> TreewidthResult {
    let mut h = g.clone();
    let mut width = 0;
    let mut order = Vec::new();
    while h.vertex_count() > 0 {
        let v = h
            .vertices()
            .min_by_key(|&v| {
                let nb = h.neighbors(v).unwrap();
                let score = match heuristic {
                    Heuristic::MinDegree => nb.len(),
                    Heuristic::MinFill => {
                        nb.iter().map(|a| nb.iter().filter(|b| a < b && !h.has_edge(*a, **b)).count()).sum()
                    }
                };
                (score, v)
            })
            .unwrap();
        width = width.max(h.degree(v).unwrap());
        h = super::eliminate_vertex(&h, v).unwrap();
        order.push(v);
    }
    TreewidthResult { width, order }
}

/// Largest minimum degree over the sequence of graphs obtained by deleting
/// a minimum-degree vertex. A lower bound on treewidth.
pub fn degeneracy(g: &SimpleGraph) -> usize {
    let mut h = g.clone();
    let mut best = 0;
    while let Some(v) = h.vertices().min_by_key(|&v| (h.degree(v).unwrap(), v)) {
        best = best.max(h.degree(v).unwrap());
        h.remove_vertex(v).unwrap();
    }
    best
}

/// Width of the elimination order `order`, which must list every vertex
/// once.
pub fn elimination_width(g: &SimpleGraph, order: &[usize]) -> Result<usize, GraphError> {
    let distinct: BTreeSet<usize> = order.iter().copied().collect();
    if distinct.len() != order.len() || order.len() != g.vertex_count() {
        return Err(GraphError::InvalidOrder);
    }
    let mut h = g.clone();
    let mut width = 0;
    for &v in order {
        width = width.max(h.degree(v).ok_or(GraphError::VertexAbsent(v))?);
        h = super::eliminate_vertex(&h, v)?;
    }
    Ok(width)
}

pub fn treewidth_exact(g: &SimpleGraph) -> Result<TreewidthResult, GraphError> {
    treewidth_exact_with_bound(g, EXACT_BOUND)
}

/// Exact treewidth by branch and bound over elimination orders, with
/// memoisation on the set of remaining vertices.
pub fn treewidth_exact_with_bound(g: &SimpleGraph, bound: usize) -> Result<TreewidthResult, GraphError> {
    let k = g.vertex_count();
    if k > bound || k > 64 {
        return Err(GraphError::TooLarge { vertices: k, bound: bound.min(64) });
    }
    let upper = [Heuristic::MinFill, Heuristic::MinDegree]
        .into_iter()
        .map(|h| treewidth_upper(g, h))
        .min_by_key(|r| r.width)
        .unwrap();
    let lower = degeneracy(g);
    if upper.width == lower {
        return Ok(upper);
    }
    let d = Dense::new(g);
    let mut search = Search { best: upper.width, best_order: Vec::new(), lower, memo: HashMap::new() };
    let mut order = Vec::with_capacity(k);
    search.dfs(&d.adj, d.full(), 0, &mut order);
    if search.best_order.is_empty() {
        return Ok(upper);
    }
    let order = search.best_order.iter().map(|&p| d.ids[p]).collect();
    Ok(TreewidthResult { width: search.best, order })
}

struct Search {
    best: usize,
    best_order: Vec<usize>,
    lower: usize,
    memo: HashMap<u64, usize>,
}

impl Search {
    fn dfs(&mut self, adj: &[u64], remaining: u64, running: usize, order: &mut Vec<usize>) {
        if self.best <= self.lower.max(running) {
            return;
        }
        let left = remaining.count_ones() as usize;
        if left == 0 || left - 1 <= running {
            self.best = running;
            self.best_order = order.clone();
            self.best_order.extend(bits(remaining));
            return;
        }
        match self.memo.get(&remaining) {
            Some(&seen) if seen <= running => return,
            _ => {
                self.memo.insert(remaining, running);
            }
        }
        // a simplicial vertex can always go first
        if let Some(v) = bits(remaining).find(|&v| fill_count(adj, v) == 0) {
            let deg = adj[v].count_ones() as usize;
            self.step(adj, remaining, running.max(deg), v, order);
            return;
        }
        let mut candidates: Vec<usize> = bits(remaining).collect();
        candidates.sort_by_key(|&v| (adj[v].count_ones(), v));
        for v in candidates {
            let next = running.max(adj[v].count_ones() as usize);
            if next >= self.best {
                continue;
            }
            self.step(adj, remaining, next, v, order);
            if self.best <= self.lower.max(running) {
                return;
            }
        }
    }

    fn step(&mut self, adj: &[u64], remaining: u64, running: usize, v: usize, order: &mut Vec<usize>) {
        if running >= self.best {
            return;
        }
        let mut next = adj.to_vec();
        eliminate_mask(&mut next, v);
        order.push(v);
        self.dfs(&next, remaining & !(1 << v), running, order);
        order.pop();
    }
}
