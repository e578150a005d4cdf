use crate::engine::{u_statistic, v_statistic, Component, EngineOptions, MdKernel, Sample, StatError};
use crate::tensor::Signature;

/// A paired observation `(X_i, Y_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DcovPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

fn dist(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

fn pair_sample(x: &[Vec<f64>], y: &[Vec<f64>]) -> Result<Sample<DcovPoint>, StatError> {
    if x.len() != y.len() {
        return Err(StatError::DimensionMismatch(format!(
            "{} x observations but {} y observations",
            x.len(),
            y.len()
        )));
    }
    for (name, s) in [("x", x), ("y", y)] {
        if let Some(first) = s.first() {
            if let Some(i) = s.iter().position(|p| p.len() != first.len()) {
                return Err(StatError::DimensionMismatch(format!(
                    "{name} observation {i} has dimension {} but observation 0 has {}",
                    s[i].len(),
                    first.len()
                )));
            }
        }
    }
    if x.len() < 4 {
        return Err(StatError::SampleTooSmall { n: x.len(), needed: 4 });
    }
    let points = x.iter().zip(y).map(|(a, b)| DcovPoint { x: a.clone(), y: b.clone() }).collect();
    Sample::new(points)
}

/// The four order-4 kernels whose signed sum `T1 + T2 - T3 - T4` is the
/// distance covariance integrand. Missing indices are padded with constant
/// singleton factors.
pub fn dcov_terms() -> Vec<MdKernel<DcovPoint>> {
    let hx = || Component::new(2, |p: &[&DcovPoint]| dist(&p[0].x, &p[1].x));
    let hy = || Component::new(2, |p: &[&DcovPoint]| dist(&p[0].y, &p[1].y));
    let one = || Component::new(1, |_: &[&DcovPoint]| 1.0);
    let build = |tuples: Vec<Vec<usize>>, comps| {
        MdKernel::new(Signature::new(tuples).expect("fixed signature"), comps).expect("fixed arities")
    };
    vec![
        build(vec![vec![0, 1], vec![2, 3]], vec![hx(), hy()]),
        build(vec![vec![0, 1], vec![0, 1], vec![2], vec![3]], vec![hx(), hy(), one(), one()]),
        build(vec![vec![0, 1], vec![0, 2], vec![3]], vec![hx(), hy(), one()]),
        build(vec![vec![0, 1], vec![1, 3], vec![2]], vec![hx(), hy(), one()]),
    ]
}

const SIGNS: [f64; 4] = [1.0, 1.0, -1.0, -1.0];

/// Unnormalized U- or V-statistic of the integrand.
pub fn dcov_statistic(sample: &Sample<DcovPoint>, v: bool, opts: &EngineOptions) -> Result<f64, StatError> {
    let mut total = 0.0;
    for (k, s) in dcov_terms().iter().zip(SIGNS) {
        let value = if v { v_statistic(k, sample, opts)? } else { u_statistic(k, sample, opts)? };
        total += s * value;
    }
    Ok(total)
}

/// Squared distance covariance as a normalized fourth-order U-statistic.
pub fn dcov_squared(x: &[Vec<f64>], y: &[Vec<f64>], opts: &EngineOptions) -> Result<f64, StatError> {
    let sample = pair_sample(x, y)?;
    let n = sample.len() as f64;
    Ok(dcov_statistic(&sample, false, opts)? / (n * (n - 1.0) * (n - 2.0) * (n - 3.0)))
}

/// Direct quadruple loop over distinct indices.
pub fn dcov_squared_brute(x: &[Vec<f64>], y: &[Vec<f64>]) -> Result<f64, StatError> {
    let s = pair_sample(x, y)?;
    let n = s.len();
    let p = s.points();
    let a = |i: usize, j: usize| dist(&p[i].x, &p[j].x);
    let b = |i: usize, j: usize| dist(&p[i].y, &p[j].y);
    let mut total = 0.0;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for k in (0..n).filter(|&k| k != i && k != j) {
                for l in (0..n).filter(|&l| l != i && l != j && l != k) {
                    total += a(i, j) * (b(k, l) + b(i, j) - b(i, k) - b(j, l));
                }
            }
        }
    }
    let nf = n as f64;
    Ok(total / (nf * (nf - 1.0) * (nf - 2.0) * (nf - 3.0)))
}
