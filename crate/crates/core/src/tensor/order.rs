use std::collections::BTreeSet;
use std::str::FromStr;

use super::notation::{validate_notation, EinsumNotation};
use super::{entry_count, TensorError};

/// Largest number of summed indices the exhaustive planner accepts.
pub const EXHAUSTIVE_BOUND: usize = 12;
/// `Auto` switches from exhaustive to greedy above this many summed indices.
pub const AUTO_EXHAUSTIVE_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum OrderStrategy {
    #[default]
    Auto,
    GreedyMinDegree,
    GreedyMinFill,
    Exhaustive,
}

impl FromStr for OrderStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Self::Auto),
            "greedy-min-degree" | "min-degree" => Ok(Self::GreedyMinDegree),
            "greedy-min-fill" | "min-fill" => Ok(Self::GreedyMinFill),
            "exhaustive" => Ok(Self::Exhaustive),
            other => Err(format!(
                "unknown order strategy {other:?} (auto, greedy-min-degree, greedy-min-fill, exhaustive)"
            )),
        }
    }
}

/// A permutation of the canonical indices of a notation. Output indices
/// come last and are never summed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationOrder {
    pub order: Vec<usize>,
    /// Largest number of live neighbours of an index at its elimination,
    /// or `|output| - 1` if that is larger.
    pub predicted_width: usize,
}

impl EliminationOrder {
    /// Upper bound on the entries of any intermediate tensor at extent `n`.
    pub fn predicted_peak_entries(&self, n: usize) -> u128 {
        entry_count(self.predicted_width + 1, n)
    }
}

pub fn optimize_order(
    notation: &EinsumNotation,
    strategy: OrderStrategy,
) -> Result<EliminationOrder, TensorError> {
    optimize_order_with_bound(notation, strategy, EXHAUSTIVE_BOUND)
}

/// Plan an elimination order over the canonical labels of `notation`.
pub fn optimize_order_with_bound(
    notation: &EinsumNotation,
    strategy: OrderStrategy,
    exhaustive_bound: usize,
) -> Result<EliminationOrder, TensorError> {
    let canon = validate_notation(notation)?;
    let m = canon.index_count();
    let adj = interaction_graph(canon.inputs(), m);
    let mut is_output = vec![false; m];
    for &b in canon.output() {
        is_output[b] = true;
    }
    let summed = m - canon.output().len();
    let strategy = match strategy {
        OrderStrategy::Auto if summed <= AUTO_EXHAUSTIVE_LIMIT.min(exhaustive_bound) => {
            OrderStrategy::Exhaustive
        }
        OrderStrategy::Auto => OrderStrategy::GreedyMinFill,
        s => s,
    };
    let mut order = match strategy {
        OrderStrategy::Exhaustive => {
            if summed > exhaustive_bound || m > 64 {
                return Err(TensorError::TooLargeForExhaustive { indices: summed, bound: exhaustive_bound });
            }
            exhaustive(&adj, &is_output)
        }
        OrderStrategy::GreedyMinDegree => greedy(&canon, adj.clone(), &is_output, false),
        OrderStrategy::GreedyMinFill => greedy(&canon, adj.clone(), &is_output, true),
        OrderStrategy::Auto => unreachable!(),
    };
    order.extend_from_slice(canon.output());
    let predicted_width = width_of(&adj, &order, &is_output);
    Ok(EliminationOrder { order, predicted_width })
}

/// Width of a full order over the canonical labels of `notation`.
pub fn elimination_width(notation: &EinsumNotation, order: &[usize]) -> Result<usize, TensorError> {
    let canon = validate_notation(notation)?;
    let m = canon.index_count();
    check_permutation(order, m)?;
    let mut is_output = vec![false; m];
    for &b in canon.output() {
        is_output[b] = true;
    }
    Ok(width_of(&interaction_graph(canon.inputs(), m), order, &is_output))
}

pub(crate) fn check_permutation(order: &[usize], m: usize) -> Result<(), TensorError> {
    let mut seen = vec![false; m];
    if order.len() != m {
        return Err(TensorError::InvalidOrder(format!("expected {m} indices, got {}", order.len())));
    }
    for &i in order {
        if i >= m {
            return Err(TensorError::IndexAbsent(i));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(TensorError::InvalidOrder(format!("index {i} repeats")));
        }
    }
    Ok(())
}

fn interaction_graph(inputs: &[Vec<usize>], m: usize) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); m];
    for t in inputs {
        for &a in t {
            for &b in t {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    adj
}

fn eliminate(adj: &mut [BTreeSet<usize>], v: usize) {
    let nb: Vec<usize> = std::mem::take(&mut adj[v]).into_iter().collect();
    for &a in &nb {
        adj[a].remove(&v);
        for &b in &nb {
            if a != b {
                adj[a].insert(b);
            }
        }
    }
}

fn width_of(adj: &[BTreeSet<usize>], order: &[usize], is_output: &[bool]) -> usize {
    let mut adj = adj.to_vec();
    let mut width = 0;
    let outputs = is_output.iter().filter(|&&o| o).count();
    for &v in order {
        if !is_output[v] {
            width = width.max(adj[v].len());
        }
        eliminate(&mut adj, v);
    }
    width.max(outputs.saturating_sub(1))
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nb: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

fn greedy(
    canon: &EinsumNotation,
    mut adj: Vec<BTreeSet<usize>>,
    is_output: &[bool],
    min_fill: bool,
) -> Vec<usize> {
    let m = adj.len();
    let mut occurrences = vec![0usize; m];
    for t in canon.inputs() {
        for i in t.iter().collect::<BTreeSet<_>>() {
            occurrences[*i] += 1;
        }
    }
    let mut alive: BTreeSet<usize> = (0..m).filter(|&v| !is_output[v]).collect();
    let mut order = Vec::with_capacity(m);
    for v in 0..m {
        if !is_output[v] && occurrences[v] == 1 {
            eliminate(&mut adj, v);
            alive.remove(&v);
            order.push(v);
        }
    }
    while let Some(&v) = alive.iter().min_by_key(|&&v| {
        let score = if min_fill { fill_in(&adj, v) } else { adj[v].len() };
        (score, v)
    }) {
        eliminate(&mut adj, v);
        alive.remove(&v);
        order.push(v);
    }
    order
}

/// Subset dynamic programme over the summed indices. Output indices stay in
/// the graph throughout.
fn exhaustive(adj: &[BTreeSet<usize>], is_output: &[bool]) -> Vec<usize> {
    let m = adj.len();
    let masks: Vec<u64> = adj.iter().map(|s| s.iter().fold(0u64, |acc, &b| acc | 1 << b)).collect();
    let summed: Vec<usize> = (0..m).filter(|&v| !is_output[v]).collect();
    let k = summed.len();
    let full = (1usize << k) - 1;
    // degree of `v` once the vertices in `gone` (a vertex mask) are eliminated
    let degree = |gone: u64, v: usize| -> u32 {
        let mut seen = 1u64 << v;
        let mut stack = vec![v];
        let mut reach = 0u64;
        while let Some(u) = stack.pop() {
            let mut nb = masks[u] & !seen;
            seen |= nb;
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if gone >> w & 1 == 1 {
                    stack.push(w);
                } else {
                    reach |= 1 << w;
                }
            }
        }
        reach.count_ones()
    };
    let to_vertices =
        |s: usize| -> u64 { (0..k).filter(|i| s >> i & 1 == 1).fold(0u64, |acc, i| acc | 1 << summed[i]) };
    let mut best = vec![u32::MAX; full + 1];
    let mut last = vec![0usize; full + 1];
    best[0] = 0;
    for s in 1..=full {
        for (i, &e) in summed.iter().enumerate() {
            if s >> i & 1 == 0 {
                continue;
            }
            let prev = s & !(1 << i);
            let w = best[prev].max(degree(to_vertices(prev), e));
            if w < best[s] {
                best[s] = w;
                last[s] = i;
            }
        }
    }
    let mut order = Vec::with_capacity(m);
    let mut s = full;
    while s != 0 {
        let i = last[s];
        order.push(summed[i]);
        s &= !(1 << i);
    }
    order.reverse();
    order
}
