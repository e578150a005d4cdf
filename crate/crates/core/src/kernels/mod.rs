//! Ready-made decomposable kernels: HOIF chain statistics, three- and
//! four-vertex motif counts, and squared distance covariance.

mod dcov;
mod hoif;
mod motif;

pub use dcov::{dcov_squared, dcov_squared_brute, dcov_statistic, dcov_terms, DcovPoint};
pub use hoif::{
    hoif_chain_statistics, hoif_estimator, hoif_full_u, hoif_kernel, FeatureMap, HoifObservation,
};
pub use motif::{motif_count, motif_counts, motif_kernel, Adjacency, MotifId, MotifSpec};
