//! Dense tensors and einsum contraction by iterated single-index
//! elimination.
//!
//! Every tensor has a single extent `n` shared by all of its axes, which is
//! the only shape that arises from tensorizing kernel components over a
//! sample of size `n`.

mod contract;
mod dense;
mod notation;
mod order;

pub use contract::{
    contraction_cost, einsum, einsum_with, eliminate_index, notation_sequence, ContractionOptions,
    ContractionStats,
};
pub use dense::{for_each_index, tensor_from_function, DenseTensor, DEFAULT_MEM_CAP};
pub use notation::{validate_notation, EinsumNotation, Signature};
pub use order::{
    elimination_width, optimize_order, optimize_order_with_bound, EliminationOrder, OrderStrategy,
    AUTO_EXHAUSTIVE_LIMIT, EXHAUSTIVE_BOUND,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("notation has no input tuples")]
    EmptyNotation,
    #[error("input tuple {0} is empty")]
    EmptyTuple(usize),
    #[error("invalid output: {0}")]
    InvalidOutput(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("memory cap exceeded: {requested} entries requested, cap is {cap}")]
    MemoryCapExceeded { requested: u128, cap: u64 },
    #[error("index {0} does not occur in any input tuple")]
    IndexAbsent(usize),
    #[error("{indices} summed indices exceed the exhaustive search bound of {bound}")]
    TooLargeForExhaustive { indices: usize, bound: usize },
    #[error("invalid elimination order: {0}")]
    InvalidOrder(String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
}

/// `extent^order`, saturating at `u128::MAX`.
pub(crate) fn entry_count(order: usize, extent: usize) -> u128 {
    let mut c: u128 = 1;
    for _ in 0..order {
        c = c.saturating_mul(extent as u128);
    }
    c
}

pub(crate) fn check_cap(order: usize, extent: usize, cap: u64) -> Result<usize, TensorError> {
    let requested = entry_count(order, extent);
    if requested > cap as u128 {
        return Err(TensorError::MemoryCapExceeded { requested, cap });
    }
    Ok(requested as usize)
}
