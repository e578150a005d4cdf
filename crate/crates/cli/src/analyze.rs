use std::collections::BTreeMap;

use serde::Serialize;
use ustat_core::graph::{complexity_report, ComplexityReport, ReportOptions};
use ustat_core::tensor::Signature;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub schema: u32,
    /// 1-based index tuples.
    pub signature: Vec<Vec<usize>>,
    pub m: usize,
    pub graph: GraphSummary,
    pub treewidth: Treewidth,
    pub terms: Terms,
    pub n: Option<usize>,
    /// Decimal strings; the values overflow 64-bit floats quickly.
    pub flops_estimate: Option<String>,
    pub executed_flops: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Serialize)]
pub struct Treewidth {
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Terms {
    pub bell: u128,
    pub sparsified: u64,
    pub by_width: BTreeMap<usize, u64>,
    #[serde(rename = "M")]
    pub max_width: usize,
}

/// `1 2, 2 3` or `hoif:<m>`.
pub fn resolve_signature(signature: Option<&str>, builtin: Option<&str>) -> Result<Signature, CliError> {
    match (signature, builtin) {
        (Some(s), None) => Signature::parse_one_based(s).map_err(|e| CliError::Parse(e.to_string())),
        (None, Some(b)) => {
            let m = b
                .strip_prefix("hoif:")
                .and_then(|m| m.parse::<usize>().ok())
                .filter(|&m| m >= 2)
                .ok_or_else(|| {
                    CliError::Parse(format!("unknown builtin {b:?}; expected hoif:<m> with m >= 2"))
                })?;
            Ok(Signature::chain(m)?)
        }
        _ => Err(CliError::Parse("give exactly one of --signature and --builtin".into())),
    }
}

pub fn analyze(signature: &Signature, opts: &ReportOptions) -> Result<AnalyzeReport, CliError> {
    let rep = complexity_report(signature, opts)?;
    Ok(to_json(&rep, opts.n))
}

fn to_json(rep: &ComplexityReport, n: Option<usize>) -> AnalyzeReport {
    AnalyzeReport {
        schema: SCHEMA_VERSION,
        signature: rep.signature.to_one_based(),
        m: rep.m,
        graph: GraphSummary { vertices: rep.vertices, edges: rep.edges },
        treewidth: Treewidth {
            lower: rep.treewidth.lower,
            upper: rep.treewidth.upper,
            exact: rep.treewidth.exact,
        },
        terms: Terms {
            bell: rep.bell,
            sparsified: rep.sparsified,
            by_width: rep.by_width.clone(),
            max_width: rep.max_width,
        },
        n,
        flops_estimate: rep.flops_estimate.as_ref().map(|f| f.to_string()),
        executed_flops: rep.path_flops.as_ref().map(|f| f.to_string()),
    }
}
