use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use super::treewidth::{degeneracy, treewidth_exact_with_bound, treewidth_upper, Heuristic};
use super::{decomposition_graph, quotient_graph, GraphError};
use crate::partitions::{
    bell_number, enumerate_sparsified_with_limit, induced_notation, PartitionError, DEFAULT_MAX_ORDER,
    MAX_GROUND_SET,
};
use crate::tensor::{contraction_cost, optimize_order, OrderStrategy, Signature, TensorError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    /// Sample size for the FLOP figures; `None` skips them.
    pub n: Option<usize>,
    /// Vertex bound for the exact treewidth of the full decomposition graph.
    pub exact_bound: usize,
    /// Also cost the planned contraction path of every surviving partition.
    pub path_flops: bool,
    pub strategy: OrderStrategy,
    pub max_order: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            n: None,
            exact_bound: super::EXACT_BOUND,
            path_flops: false,
            strategy: OrderStrategy::Auto,
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreewidthSummary {
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityReport {
    pub signature: Signature,
    pub m: usize,
    pub vertices: usize,
    pub edges: usize,
    pub treewidth: TreewidthSummary,
    /// Number of partitions before sparsification.
    pub bell: u128,
    /// Number of partitions that survive sparsification.
    pub sparsified: u64,
    /// Surviving partitions by treewidth of their quotient graph.
    pub by_width: BTreeMap<usize, u64>,
    /// Largest quotient treewidth among surviving partitions.
    pub max_width: usize,
    /// `sum over widths l of N_l * n^(l+1) * K`.
    pub flops_estimate: Option<BigUint>,
    /// Summed cost of the planned contraction of every surviving partition.
    pub path_flops: Option<BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

pub fn complexity_report(
    signature: &Signature,
    opts: &ReportOptions,
) -> Result<ComplexityReport, ReportError> {
    let m = signature.arity();
    let g = decomposition_graph(signature.tuples());
    let upper =
        treewidth_upper(&g, Heuristic::MinFill).width.min(treewidth_upper(&g, Heuristic::MinDegree).width);
    let exact = match treewidth_exact_with_bound(&g, opts.exact_bound) {
        Ok(r) => Some(r.width),
        Err(GraphError::TooLarge { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let treewidth = TreewidthSummary { lower: degeneracy(&g), upper, exact };

    let per_partition = |pi: crate::SetPartition| -> Result<(usize, u128), ReportError> {
        let q = quotient_graph(&g, &pi)?;
        let w = treewidth_exact_with_bound(&q, MAX_GROUND_SET)?.width;
        let cost = match opts.n.filter(|_| opts.path_flops) {
            Some(n) => {
                let notation = induced_notation(signature, &pi);
                let plan = optimize_order(&notation, opts.strategy)?;
                contraction_cost(&notation, &plan.order, n)?.flops
            }
            None => 0,
        };
        Ok((w, cost))
    };
    let mut by_width = BTreeMap::new();
    let mut sparsified = 0u64;
    let mut path = BigUint::from(0u32);
    for chunk in enumerate_sparsified_with_limit(signature, opts.max_order)?.chunks(4096) {
        let results: Vec<(usize, u128)> =
            chunk.into_par_iter().map(per_partition).collect::<Result<_, _>>()?;
        for (w, cost) in results {
            *by_width.entry(w).or_insert(0u64) += 1;
            sparsified += 1;
            path += BigUint::from(cost);
        }
    }
    let max_width = by_width.keys().next_back().copied().unwrap_or(0);
    let flops_estimate = opts.n.map(|n| {
        by_width.iter().fold(BigUint::from(0u32), |acc, (&l, &count)| {
            acc + BigUint::from(count) * BigUint::from(n).pow(l as u32 + 1) * BigUint::from(signature.len())
        })
    });
    Ok(ComplexityReport {
        signature: signature.clone(),
        m,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        treewidth,
        bell: bell_number(m),
        sparsified,
        by_width,
        max_width,
        flops_estimate,
        path_flops: opts.n.filter(|_| opts.path_flops).map(|_| path),
    })
}
