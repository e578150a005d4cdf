//! Exact U- and V-statistics for kernels that factor into a product of
//! low-arity components.
//!
//! A V-statistic of such a kernel is a single einsum over the tensorized
//! components. A U-statistic is a signed sum of einsums, one per set
//! partition of the kernel arguments, and most of those partitions vanish
//! once diagonal entries are zeroed. The modules are layered:
//!
//! - [`tensor`]: dense tensors, einsum notation and contraction by
//!   single-index elimination.
//! - [`partitions`]: restricted-growth enumeration, Möbius coefficients and
//!   the sparsification filter.
//! - [`graph`]: decomposition graphs, exact and heuristic treewidth and
//!   complexity reports.
//! - [`engine`]: the U/V driver plus brute-force reference evaluators.
//! - [`kernels`]: ready-made kernels (HOIF, motif counts, distance
//!   covariance).

pub mod engine;
pub mod graph;
pub mod kernels;
pub mod partitions;
pub mod tensor;

mod sum;

pub use engine::{u_statistic, v_statistic, EngineOptions, MdKernel, Sample, StatError, UStatOutcome};
pub use graph::{GraphError, SimpleGraph};
pub use partitions::{PartitionError, SetPartition};
pub use tensor::{DenseTensor, EinsumNotation, OrderStrategy, Signature, TensorError};
