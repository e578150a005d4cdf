use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ustat_core::engine::{tensorize, u_from_tensors, Component, EngineOptions, MdKernel, Sample};
use ustat_core::kernels::{
    dcov_squared, dcov_squared_brute, dcov_terms, hoif_kernel, motif_kernel, DcovPoint, FeatureMap,
    HoifObservation, MotifId, MotifSpec,
};
use ustat_core::tensor::{einsum_with, ContractionOptions, Signature};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelSpec {
    Prod2,
    Hoif { j: usize, k: usize },
    Motif(MotifId),
    Dcov { p: usize },
}

impl FromStr for KernelSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || {
            CliError::Parse(format!(
                "unknown kernel {s:?}; expected prod2, hoif:<j>:<k>, motif:<id> or dcov[:<p>]"
            ))
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["prod2"] => Ok(KernelSpec::Prod2),
            ["hoif", j, k] => {
                let (j, k) = (num(j)?, num(k)?);
                if j < 2 || k == 0 {
                    return Err(CliError::Parse(format!("hoif needs j >= 2 and k >= 1, got {s:?}")));
                }
                Ok(KernelSpec::Hoif { j, k })
            }
            ["motif", id] => id.parse().map(KernelSpec::Motif).map_err(CliError::Parse),
            ["dcov"] => Ok(KernelSpec::Dcov { p: 1 }),
            ["dcov", p] => match num(p)? {
                0 => Err(bad()),
                p => Ok(KernelSpec::Dcov { p }),
            },
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Default)]
pub struct Run {
    pub value: f64,
    pub tensorize: Duration,
    pub contract: Duration,
    pub flops: u128,
}

impl Run {
    fn absorb(&mut self, sign: f64, other: Run) {
        self.value += sign * other.value;
        self.tensorize += other.tensorize;
        self.contract += other.contract;
        self.flops += other.flops;
    }
}

fn evaluate<T: Sync>(
    kernel: &MdKernel<T>,
    sample: &Sample<T>,
    v: bool,
    opts: &EngineOptions,
) -> Result<Run, CliError> {
    let start = Instant::now();
    let tensors = tensorize(kernel, sample, opts)?;
    let tensorize_time = start.elapsed();
    if v {
        let start = Instant::now();
        let copts = ContractionOptions { strategy: opts.strategy, mem_cap: opts.mem_cap };
        let (t, stats) = einsum_with(&tensors, &kernel.signature().notation(), None, &copts)?;
        return Ok(Run {
            value: t.scalar_value().expect("scalar output"),
            tensorize: tensorize_time,
            contract: start.elapsed(),
            flops: stats.flops,
        });
    }
    let m = kernel.order();
    if sample.len() < m {
        return Err(ustat_core::StatError::SampleTooSmall { n: sample.len(), needed: m }.into());
    }
    let out = u_from_tensors(&tensors, kernel.signature(), opts)?;
    Ok(Run { value: out.value, tensorize: tensorize_time, contract: out.contract_time, flops: out.flops })
}

fn prod2() -> MdKernel<Vec<f64>> {
    let sig = Signature::new(vec![vec![0], vec![1]]).expect("fixed signature");
    let c = Component::new(1, |x: &[&Vec<f64>]| x[0][0]);
    MdKernel::new(sig, vec![c.clone(), c]).expect("fixed arities")
}

pub fn hoif_rows(rows: &[Vec<f64>], k: usize) -> Result<Vec<HoifObservation>, CliError> {
    let width = rows[0].len();
    if width < 2 + k {
        return Err(CliError::Parse(format!(
            "hoif with {k} features needs at least {} columns (A, Y, Z...), found {width}",
            2 + k
        )));
    }
    Ok(rows.iter().map(|r| HoifObservation { a: r[0], y: r[1], z: r[2..2 + k].to_vec() }).collect())
}

type Rows = Vec<Vec<f64>>;

pub fn split_columns(rows: &[Vec<f64>], p: usize) -> Result<(Rows, Rows), CliError> {
    let width = rows[0].len();
    if width <= p {
        return Err(CliError::Parse(format!("dcov:{p} needs more than {p} columns, found {width}")));
    }
    Ok(rows.iter().map(|r| (r[..p].to_vec(), r[p..].to_vec())).unzip())
}

/// Unnormalized U- or V-statistic of a built-in kernel on CSV rows.
pub fn run_on_rows(
    spec: &KernelSpec,
    rows: Vec<Vec<f64>>,
    v: bool,
    opts: &EngineOptions,
) -> Result<Run, CliError> {
    match *spec {
        KernelSpec::Prod2 => evaluate(&prod2(), &Sample::new(rows)?, v, opts),
        KernelSpec::Hoif { j, k } => {
            let phi: FeatureMap = Arc::new(|z: &[f64]| z.to_vec());
            let sample = Sample::new(hoif_rows(&rows, k)?)?;
            evaluate(&hoif_kernel(j, phi)?, &sample, v, opts)
        }
        KernelSpec::Dcov { p } => {
            let (x, y) = split_columns(&rows, p)?;
            let points = x.into_iter().zip(y).map(|(x, y)| DcovPoint { x, y }).collect();
            let sample = Sample::new(points)?;
            let mut total = Run::default();
            for (kernel, sign) in dcov_terms().iter().zip([1.0, 1.0, -1.0, -1.0]) {
                total.absorb(sign, evaluate(kernel, &sample, v, opts)?);
            }
            Ok(total)
        }
        KernelSpec::Motif(_) => unreachable!("motif kernels read a graph"),
    }
}

pub fn run_on_graph(
    id: MotifId,
    graph: &ustat_core::SimpleGraph,
    v: bool,
    opts: &EngineOptions,
) -> Result<Run, CliError> {
    let kernel = motif_kernel(&MotifSpec::get(id), graph);
    let sample = Sample::new((0..graph.vertex_count()).collect())?;
    evaluate(&kernel, &sample, v, opts)
}

pub struct DcovReport {
    pub value: f64,
    pub oracle: Option<f64>,
}

pub fn dcov_report(
    x: &[Vec<f64>],
    y: &[Vec<f64>],
    oracle: bool,
    opts: &EngineOptions,
) -> Result<DcovReport, CliError> {
    if x.len() != y.len() {
        return Err(CliError::Parse(format!("x has {} rows but y has {}", x.len(), y.len())));
    }
    let value = dcov_squared(x, y, opts)?;
    let oracle = if oracle { Some(dcov_squared_brute(x, y)?) } else { None };
    Ok(DcovReport { value, oracle })
}

/// 15 significant digits with trailing zeros dropped.
pub fn format_value(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    let mag = rounded.abs();
    if (1e-5..1e15).contains(&mag) {
        rounded.to_string()
    } else {
        format!("{rounded:e}")
    }
}
