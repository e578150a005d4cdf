use std::sync::Arc;

use crate::engine::{u_statistic, Component, EngineOptions, MdKernel, Sample, StatError};
use crate::tensor::Signature;

/// Feature map `phi: Z -> R^k`.
pub type FeatureMap = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// One observation `(A, Y, Z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HoifObservation {
    pub a: f64,
    pub y: f64,
    pub z: Vec<f64>,
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Chain kernel of order `j` without identity subtraction. Argument
/// position `p` of the chain holds the `p`-th factor of the matrix product,
/// so the last position carries the outcome `Y`.
pub fn hoif_kernel(j: usize, phi: FeatureMap) -> Result<MdKernel<HoifObservation>, StatError> {
    let signature = Signature::chain(j)?;
    let mut components = Vec::with_capacity(j - 1);
    for _ in 0..j - 2 {
        let phi = Arc::clone(&phi);
        components.push(Component::new(2, move |x: &[&HoifObservation]| {
            x[0].a * x[1].a * dot(&phi(&x[0].z), &phi(&x[1].z))
        }));
    }
    components.push(Component::new(2, move |x: &[&HoifObservation]| {
        x[0].a * dot(&phi(&x[0].z), &phi(&x[1].z)) * x[1].y
    }));
    MdKernel::new(signature, components)
}

/// `U(h_j)` for `j = 2..=m`, indexed from `j = 2`.
pub fn hoif_chain_statistics(
    m: usize,
    phi: &FeatureMap,
    sample: &Sample<HoifObservation>,
    opts: &EngineOptions,
) -> Result<Vec<f64>, StatError> {
    (2..=m).map(|j| u_statistic(&hoif_kernel(j, Arc::clone(phi))?, sample, opts)).collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `(hi)! / (lo)!` as a float.
fn factorial_ratio(hi: usize, lo: usize) -> f64 {
    (lo + 1..=hi).map(|t| t as f64).product()
}

fn full_from_chain(m: usize, n: usize, chain: &[f64]) -> f64 {
    (0..=m - 2)
        .map(|i| {
            let sign = if (m - 2 - i).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * binomial(m - 2, i) * factorial_ratio(n - 2 - i, n - m) * chain[i]
        })
        .sum()
}

/// U-statistic of the order-`m` kernel with every middle factor shifted by
/// the identity, expanded into chain statistics of orders `2..=m`.
pub fn hoif_full_u(
    m: usize,
    phi: &FeatureMap,
    sample: &Sample<HoifObservation>,
    opts: &EngineOptions,
) -> Result<f64, StatError> {
    if sample.len() < m {
        return Err(StatError::SampleTooSmall { n: sample.len(), needed: m });
    }
    let chain = hoif_chain_statistics(m, phi, sample, opts)?;
    Ok(full_from_chain(m, sample.len(), &chain))
}

/// `sum over j = 2..=m of (-1)^j U(h^(j))`.
pub fn hoif_estimator(
    m: usize,
    phi: &FeatureMap,
    sample: &Sample<HoifObservation>,
    opts: &EngineOptions,
) -> Result<f64, StatError> {
    let n = sample.len();
    if n < m {
        return Err(StatError::SampleTooSmall { n, needed: m });
    }
    let chain = hoif_chain_statistics(m, phi, sample, opts)?;
    Ok((2..=m)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * full_from_chain(j, n, &chain[..j - 1])
        })
        .sum())
}
