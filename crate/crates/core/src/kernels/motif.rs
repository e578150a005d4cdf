use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::engine::{u_statistic, Component, EngineOptions, MdKernel, Sample, StatError};
use crate::graph::SimpleGraph;
use crate::tensor::Signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MotifId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
}

impl MotifId {
    pub const ALL: [MotifId; 8] = [
        MotifId::R1,
        MotifId::R2,
        MotifId::R3,
        MotifId::R4,
        MotifId::R5,
        MotifId::R6,
        MotifId::R7,
        MotifId::R8,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }
}

impl fmt::Display for MotifId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.number())
    }
}

impl FromStr for MotifId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s.strip_prefix('r').unwrap_or(s);
        match digits.parse::<usize>() {
            Ok(k @ 1..=8) => Ok(Self::ALL[k - 1]),
            _ => Err(format!("unknown motif {s:?} (r1..r8)")),
        }
    }
}

/// Which indicator a factor reads: adjacency `A` or non-adjacency `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adjacency {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotifSpec {
    pub id: MotifId,
    pub vertex_count: usize,
    /// One `(i, j, matrix)` factor per vertex pair, 0-based.
    pub factors: Vec<(usize, usize, Adjacency)>,
    pub automorphisms: u64,
}

impl MotifSpec {
    pub fn get(id: MotifId) -> Self {
        use Adjacency::{A, B};
        let (factors, automorphisms): (&[(usize, usize, Adjacency)], u64) = match id {
            MotifId::R1 => (&[(0, 1, A), (1, 2, A), (2, 0, B)], 2),
            MotifId::R2 => (&[(0, 1, A), (1, 2, A), (2, 0, A)], 6),
            MotifId::R3 => (&[(0, 1, A), (0, 2, A), (0, 3, A), (1, 2, B), (1, 3, B), (2, 3, B)], 6),
            MotifId::R4 => (&[(0, 1, A), (0, 2, B), (0, 3, B), (1, 2, A), (1, 3, B), (2, 3, A)], 2),
            MotifId::R5 => (&[(0, 1, A), (0, 2, A), (0, 3, B), (1, 2, A), (1, 3, B), (2, 3, A)], 2),
            MotifId::R6 => (&[(0, 1, A), (0, 2, B), (0, 3, A), (1, 2, A), (1, 3, B), (2, 3, A)], 8),
            MotifId::R7 => (&[(0, 1, A), (0, 2, A), (0, 3, A), (1, 2, A), (1, 3, A), (2, 3, B)], 4),
            MotifId::R8 => (&[(0, 1, A), (0, 2, A), (0, 3, A), (1, 2, A), (1, 3, A), (2, 3, A)], 24),
        };
        let vertex_count = if matches!(id, MotifId::R1 | MotifId::R2) { 3 } else { 4 };
        Self { id, vertex_count, factors: factors.to_vec(), automorphisms }
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.factors.iter().map(|&(i, j, _)| vec![i, j]).collect())
            .expect("motif signatures cover every vertex")
    }
}

/// Kernel over vertex positions `0..n` in increasing id order. The
/// diagonal of both indicators is zero.
pub fn motif_kernel(spec: &MotifSpec, graph: &SimpleGraph) -> MdKernel<usize> {
    let ids: Vec<usize> = graph.vertices().collect();
    let n = ids.len();
    let mut adj = vec![false; n * n];
    for (p, &u) in ids.iter().enumerate() {
        for (q, &v) in ids.iter().enumerate() {
            adj[p * n + q] = graph.has_edge(u, v);
        }
    }
    let adj = Arc::new(adj);
    let components = spec
        .factors
        .iter()
        .map(|&(_, _, which)| {
            let adj = Arc::clone(&adj);
            Component::new(2, move |x: &[&usize]| {
                let (p, q) = (*x[0], *x[1]);
                let hit = match which {
                    Adjacency::A => adj[p * n + q],
                    Adjacency::B => p != q && !adj[p * n + q],
                };
                f64::from(u8::from(hit))
            })
        })
        .collect();
    MdKernel::new(spec.signature(), components).expect("one pairwise factor per tuple")
}

/// Number of induced copies of the motif.
pub fn motif_count(graph: &SimpleGraph, spec: &MotifSpec, opts: &EngineOptions) -> Result<u64, StatError> {
    let n = graph.vertex_count();
    if n < spec.vertex_count {
        return Err(StatError::SampleTooSmall { n, needed: spec.vertex_count });
    }
    let kernel = motif_kernel(spec, graph);
    let sample = Sample::new((0..n).collect())?;
    let value = u_statistic(&kernel, &sample, opts)? / spec.automorphisms as f64;
    let rounded = value.round();
    if (value - rounded).abs() >= 1e-6 || rounded < 0.0 {
        return Err(StatError::NonIntegerResult { value });
    }
    Ok(rounded as u64)
}

/// Counts of `r1, r2` (`order = 3`) or `r3..r8` (`order = 4`).
pub fn motif_counts(
    graph: &SimpleGraph,
    order: usize,
    opts: &EngineOptions,
) -> Result<Vec<(MotifId, u64)>, StatError> {
    let ids: &[MotifId] = match order {
        3 => &MotifId::ALL[..2],
        4 => &MotifId::ALL[2..],
        _ => return Err(StatError::DimensionMismatch(format!("motif order must be 3 or 4, got {order}"))),
    };
    ids.iter().map(|&id| Ok((id, motif_count(graph, &MotifSpec::get(id), opts)?))).collect()
}
