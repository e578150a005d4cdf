use std::io;

use thiserror::Error;
use ustat_core::graph::{GraphError, ReportError};
use ustat_core::{PartitionError, StatError, TensorError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Stat(#[from] StatError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    /// 2 parse, 3 memory cap, 4 sample too small, 5 self-loop.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io { .. } => 2,
            CliError::Tensor(e) => tensor_code(e),
            CliError::Stat(e) => stat_code(e),
            CliError::Graph(e) => graph_code(e),
            CliError::Report(ReportError::Tensor(e)) => tensor_code(e),
            CliError::Report(ReportError::Graph(e)) => graph_code(e),
            CliError::Report(ReportError::Partition(_)) | CliError::Partition(_) | CliError::Other(_) => 1,
        }
    }
}

fn tensor_code(e: &TensorError) -> u8 {
    match e {
        TensorError::MemoryCapExceeded { .. } => 3,
        TensorError::InvalidSignature(_) | TensorError::InvalidOutput(_) | TensorError::EmptyTuple(_) => 2,
        _ => 1,
    }
}

fn stat_code(e: &StatError) -> u8 {
    match e {
        StatError::Tensor(t) => tensor_code(t),
        StatError::SampleTooSmall { .. } => 4,
        StatError::DimensionMismatch(_) => 2,
        _ => 1,
    }
}

fn graph_code(e: &GraphError) -> u8 {
    match e {
        GraphError::SelfLoop(_) => 5,
        GraphError::Parse { .. } => 2,
        _ => 1,
    }
}
