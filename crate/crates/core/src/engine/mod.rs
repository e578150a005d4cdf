//! U- and V-statistics of multiplicatively decomposable kernels.
//!
//! The V-statistic is one einsum over the tensorized components. The
//! U-statistic is `sum over partitions pi of mu(pi) * V_pi`, where `V_pi`
//! sums the kernel over index tuples that are constant on the blocks of
//! `pi`. Zeroing, in each component tensor, every entry whose arguments
//! repeat across different signature indices kills all partitions that
//! merge two indices of one tuple without changing the result.

mod brute;
mod kernel;

pub use brute::{
    restricted_u_brute, restricted_v_brute, u_brute_force, u_brute_force_kernel, v_brute_force,
    v_brute_force_kernel, DEFAULT_BRUTE_FORCE_CAP,
};
pub use kernel::{Component, MdKernel, Sample};

use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::partitions::{
    enumerate_partitions_with_limit, enumerate_sparsified_with_limit, induced_notation, mobius_coefficient,
    PartitionError, SetPartition, DEFAULT_MAX_ORDER,
};
use crate::sum::pairwise_sum;
use crate::tensor::{
    check_cap, einsum_with, for_each_index, ContractionOptions, DenseTensor, OrderStrategy, Signature,
    TensorError, DEFAULT_MEM_CAP,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("sample of size {n} is too small (need at least {needed})")]
    SampleTooSmall { n: usize, needed: usize },
    #[error("brute force would visit {terms} terms, above the cap of {cap}")]
    TooManyTerms { terms: u128, cap: u128 },
    #[error("component {component} failed at indices {indices:?}: {message}")]
    ComponentEvaluation { component: usize, indices: Vec<usize>, message: String },
    #[error("component {component} takes {got} arguments but its tuple has {expected}")]
    ArityMismatch { component: usize, expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("result {value} is not within 1e-6 of an integer")]
    NonIntegerResult { value: f64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub strategy: OrderStrategy,
    /// Ceiling on entries per tensor, for components and intermediates.
    pub mem_cap: u64,
    /// Reject NaN and infinite component values.
    pub strict: bool,
    /// Evaluate partitions and tensorize on the current rayon pool.
    pub parallel: bool,
    /// Zero diagonal entries and skip partitions that then vanish.
    pub sparsify: bool,
    pub max_order: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            strategy: OrderStrategy::Auto,
            mem_cap: DEFAULT_MEM_CAP,
            strict: false,
            parallel: true,
            sparsify: true,
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

impl EngineOptions {
    fn contraction(&self) -> ContractionOptions {
        ContractionOptions { strategy: self.strategy, mem_cap: self.mem_cap }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UStatOutcome {
    pub value: f64,
    /// Partitions evaluated.
    pub terms: usize,
    pub tensorize_time: Duration,
    pub contract_time: Duration,
    pub flops: u128,
}

/// Evaluate every component on every index tuple of its arity.
pub fn tensorize<T: Sync>(
    kernel: &MdKernel<T>,
    sample: &Sample<T>,
    opts: &EngineOptions,
) -> Result<Vec<DenseTensor>, StatError> {
    let n = sample.len();
    kernel.components().iter().enumerate().map(|(k, c)| tensorize_component(k, c, sample, n, opts)).collect()
}

fn tensorize_component<T: Sync>(
    k: usize,
    c: &Component<T>,
    sample: &Sample<T>,
    n: usize,
    opts: &EngineOptions,
) -> Result<DenseTensor, StatError> {
    let a = c.arity();
    check_cap(a, n, opts.mem_cap)?;
    let slab = |i0: usize| -> Result<Vec<f64>, StatError> {
        let mut out = Vec::with_capacity(crate::tensor::entry_count(a - 1, n) as usize);
        let mut idx = vec![i0; a];
        let mut err = None;
        for_each_index(a - 1, n, |rest| {
            if err.is_some() {
                return;
            }
            idx[1..].copy_from_slice(rest);
            match c.eval_at(k, &idx, sample, opts.strict) {
                Ok(v) => out.push(v),
                Err(e) => err = Some(e),
            }
        });
        err.map_or(Ok(out), Err)
    };
    let slabs: Vec<Vec<f64>> = if opts.parallel {
        (0..n).into_par_iter().map(slab).collect::<Result<_, _>>()?
    } else {
        (0..n).map(slab).collect::<Result<_, _>>()?
    };
    Ok(DenseTensor::new(a, n, slabs.concat())?)
}

/// Zero every entry of each component tensor whose index tuple repeats a
/// value at two positions carrying different signature indices.
pub fn sparsify(tensors: &[DenseTensor], signature: &Signature) -> Vec<DenseTensor> {
    tensors
        .iter()
        .zip(signature.tuples())
        .map(|(t, tuple)| {
            let pairs: Vec<(usize, usize)> = (0..tuple.len())
                .flat_map(|p| (p + 1..tuple.len()).map(move |q| (p, q)))
                .filter(|&(p, q)| tuple[p] != tuple[q])
                .collect();
            let mut out = t.clone();
            if pairs.is_empty() {
                return out;
            }
            let data = out.as_mut_slice();
            let mut k = 0;
            for_each_index(t.order(), t.extent(), |idx| {
                if pairs.iter().any(|&(p, q)| idx[p] == idx[q]) {
                    data[k] = 0.0;
                }
                k += 1;
            });
            out
        })
        .collect()
}

pub fn v_statistic<T: Sync>(
    kernel: &MdKernel<T>,
    sample: &Sample<T>,
    opts: &EngineOptions,
) -> Result<f64, StatError> {
    let tensors = tensorize(kernel, sample, opts)?;
    let (t, _) = einsum_with(&tensors, &kernel.signature().notation(), None, &opts.contraction())?;
    Ok(t.scalar_value().expect("scalar output"))
}

/// Sum of the kernel over index tuples that are constant on each block of
/// `pi`.
pub fn restricted_v<T: Sync>(
    kernel: &MdKernel<T>,
    sample: &Sample<T>,
    pi: &SetPartition,
    opts: &EngineOptions,
) -> Result<f64, StatError> {
    let sig = kernel.signature();
    if pi.len() != sig.arity() {
        return Err(PartitionError::GroundSetMismatch(pi.len(), sig.arity()).into());
    }
    let tensors = tensorize(kernel, sample, opts)?;
    let (t, _) = einsum_with(&tensors, &induced_notation(sig, pi), None, &opts.contraction())?;
    Ok(t.scalar_value().expect("scalar output"))
}

pub fn u_statistic<T: Sync>(
    kernel: &MdKernel<T>,
    sample: &Sample<T>,
    opts: &EngineOptions,
) -> Result<f64, StatError> {
    u_statistic_detailed(kernel, sample, opts).map(|o| o.value)
}

pub fn u_statistic_detailed<T: Sync>(
    kernel: &MdKernel<T>,
    sample: &Sample<T>,
    opts: &EngineOptions,
) -> Result<UStatOutcome, StatError> {
    let m = kernel.signature().arity();
    if sample.len() < m {
        return Err(StatError::SampleTooSmall { n: sample.len(), needed: m });
    }
    let start = Instant::now();
    let tensors = tensorize(kernel, sample, opts)?;
    let tensorize_time = start.elapsed();
    let mut out = u_from_tensors(&tensors, kernel.signature(), opts)?;
    out.tensorize_time = tensorize_time;
    Ok(out)
}

/// U-statistic from already tensorized components. The reported time
/// covers sparsification and contraction.
pub fn u_from_tensors(
    tensors: &[DenseTensor],
    signature: &Signature,
    opts: &EngineOptions,
) -> Result<UStatOutcome, StatError> {
    let start = Instant::now();
    let sparse;
    let (input, partitions) = if opts.sparsify {
        sparse = sparsify(tensors, signature);
        (sparse.as_slice(), enumerate_sparsified_with_limit(signature, opts.max_order)?)
    } else {
        (tensors, enumerate_partitions_with_limit(signature.arity(), opts.max_order)?)
    };
    let copts = opts.contraction();
    let term = |pi: &SetPartition| -> Result<(f64, u128), StatError> {
        let (t, stats) = einsum_with(input, &induced_notation(signature, pi), None, &copts)?;
        let v = t.scalar_value().expect("scalar output");
        Ok((mobius_coefficient(pi) as f64 * v, stats.flops))
    };
    let mut values = Vec::new();
    let mut flops = 0u128;
    for chunk in partitions.chunks(1024) {
        let results: Vec<(f64, u128)> = if opts.parallel {
            chunk.par_iter().map(term).collect::<Result<_, _>>()?
        } else {
            chunk.iter().map(term).collect::<Result<_, _>>()?
        };
        for (v, f) in results {
            values.push(v);
            flops += f;
        }
    }
    Ok(UStatOutcome {
        value: pairwise_sum(&values),
        terms: values.len(),
        tensorize_time: Duration::ZERO,
        contract_time: start.elapsed(),
        flops,
    })
}
