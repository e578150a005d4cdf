//! Decomposition graphs, vertex elimination, quotient graphs and treewidth.

mod report;
mod treewidth;

pub use report::{complexity_report, ComplexityReport, ReportError, ReportOptions, TreewidthSummary};
pub use treewidth::{
    degeneracy, elimination_width, max_treewidth_by_edges, treewidth_exact, treewidth_exact_with_bound,
    treewidth_upper, Heuristic, TreewidthResult, EXACT_BOUND,
};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::partitions::SetPartition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {0} is not in the graph")]
    VertexAbsent(usize),
    #[error("graph has {vertices} vertices, more than the exact bound of {bound}")]
    TooLarge { vertices: usize, bound: usize },
    #[error("no tabulated treewidth bound for {0} edges (table covers 1..=15)")]
    OutOfTable(usize),
    #[error("graph has {graph} vertices but the partition is over {partition} elements")]
    GroundSetMismatch { graph: usize, partition: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("elimination order is not a permutation of the vertices")]
    InvalidOrder,
}

/// Undirected simple graph on `usize` vertex ids. Equality compares vertex
/// and edge sets only, not labels.
#[derive(Clone, Debug, Default)]
pub struct SimpleGraph {
    adj: BTreeMap<usize, BTreeSet<usize>>,
    labels: BTreeMap<usize, String>,
}

impl PartialEq for SimpleGraph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for SimpleGraph {}

impl SimpleGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Vertices `0..n` and no edges.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for v in 0..n {
            g.add_vertex(v);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::with_vertices(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b).expect("distinct endpoints");
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::with_vertices(n);
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Parse a whitespace-separated edge list, one `u v` pair per line.
    /// Blank lines and lines starting with `#` are skipped, duplicate edges
    /// collapse, and the vertex set is `0..=max id`.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        let mut n = 0;
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let ids: Vec<&str> = line.split_whitespace().collect();
            if ids.len() != 2 {
                return Err(GraphError::Parse {
                    line: k + 1,
                    message: format!("expected two vertex ids, found {}", ids.len()),
                });
            }
            let mut pair = [0usize; 2];
            for (slot, tok) in pair.iter_mut().zip(&ids) {
                *slot = tok.parse().map_err(|_| GraphError::Parse {
                    line: k + 1,
                    message: format!("bad vertex id {tok:?}"),
                })?;
            }
            n = n.max(pair[0] + 1).max(pair[1] + 1);
            edges.push((pair[0], pair[1]));
        }
        Self::from_edges(n, &edges)
    }

    pub fn add_vertex(&mut self, v: usize) {
        self.adj.entry(v).or_default();
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
        Ok(())
    }

    pub fn remove_vertex(&mut self, v: usize) -> Result<(), GraphError> {
        let nb = self.adj.remove(&v).ok_or(GraphError::VertexAbsent(v))?;
        for u in nb {
            self.adj.get_mut(&u).expect("symmetric adjacency").remove(&v);
        }
        self.labels.remove(&v);
        Ok(())
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    pub fn neighbors(&self, v: usize) -> Option<&BTreeSet<usize>> {
        self.adj.get(&v)
    }

    pub fn degree(&self, v: usize) -> Option<usize> {
        self.adj.get(&v).map(BTreeSet::len)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj.iter().flat_map(|(&a, s)| s.range(a + 1..).map(move |&b| (a, b))).collect()
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) {
        self.labels.insert(v, label.into());
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    /// Vertex count and edge list after relabeling vertices to `0..k` in
    /// increasing id order.
    pub fn canonical_form(&self) -> (usize, Vec<(usize, usize)>) {
        let pos: BTreeMap<usize, usize> = self.adj.keys().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = self.edges().into_iter().map(|(a, b)| (pos[&a], pos[&b])).collect();
        (self.adj.len(), edges)
    }

    pub fn is_clique(&self, vs: &BTreeSet<usize>) -> bool {
        vs.iter().all(|a| vs.iter().all(|b| a == b || self.has_edge(*a, *b)))
    }
}

/// One vertex per index, an edge between indices that share a tuple.
pub fn decomposition_graph(tuples: &[Vec<usize>]) -> SimpleGraph {
    let mut g = SimpleGraph::new();
    for t in tuples {
        for &a in t {
            g.add_vertex(a);
            for &b in t {
                if a != b {
                    g.add_edge(a, b).expect("distinct endpoints");
                }
            }
        }
    }
    g
}

/// Join the neighbours of `v` into a clique and remove `v`.
pub fn eliminate_vertex(g: &SimpleGraph, v: usize) -> Result<SimpleGraph, GraphError> {
    let nb: Vec<usize> = g.neighbors(v).ok_or(GraphError::VertexAbsent(v))?.iter().copied().collect();
    let mut out = g.clone();
    out.remove_vertex(v)?;
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            out.add_edge(a, b).expect("distinct endpoints");
        }
    }
    Ok(out)
}

/// Contract each block of `pi` to one vertex. `g` must have vertex set
/// `0..pi.len()`. Vertex `k` of the result is block `k` of `pi`.
pub fn quotient_graph(g: &SimpleGraph, pi: &SetPartition) -> Result<SimpleGraph, GraphError> {
    let m = pi.len();
    if g.vertex_count() != m || g.vertices().any(|v| v >= m) {
        return Err(GraphError::GroundSetMismatch { graph: g.vertex_count(), partition: m });
    }
    let mut q = SimpleGraph::with_vertices(pi.block_count());
    for (k, block) in pi.blocks().iter().enumerate() {
        let items: Vec<String> = block.iter().map(|i| i.to_string()).collect();
        q.set_label(k, format!("{{{}}}", items.join(",")));
    }
    for (a, b) in g.edges() {
        let (x, y) = (pi.block_of(a), pi.block_of(b));
        if x != y {
            q.add_edge(x, y).expect("distinct blocks");
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_of_chain() {
        let g = decomposition_graph(&[vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn elimination_fills_neighbourhood() {
        let g = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let h = eliminate_vertex(&g, 0).unwrap();
        let mut k = SimpleGraph::complete(4);
        k.remove_vertex(0).unwrap();
        assert_eq!(h, k);
        assert_eq!(eliminate_vertex(&g, 9), Err(GraphError::VertexAbsent(9)));
    }

    #[test]
    fn quotient_of_chain() {
        let g = decomposition_graph(&[vec![0, 1], vec![1, 2], vec![2, 3]]);
        let pi = SetPartition::from_blocks(4, &[vec![0, 3], vec![1], vec![2]]).unwrap();
        let q = quotient_graph(&g, &pi).unwrap();
        assert_eq!(q, SimpleGraph::complete(3));
        assert_eq!(q.label(0), Some("{0,3}"));
        let wrong = SetPartition::finest(5);
        assert!(matches!(quotient_graph(&g, &wrong), Err(GraphError::GroundSetMismatch { .. })));
    }

    #[test]
    fn edge_list_parsing() {
        let g = SimpleGraph::parse_edge_list("0 1\n1 0\n\n# note\n2 3\n").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(SimpleGraph::parse_edge_list("1 1"), Err(GraphError::SelfLoop(1)));
        assert!(matches!(SimpleGraph::parse_edge_list("0 x"), Err(GraphError::Parse { line: 1, .. })));
    }
}
