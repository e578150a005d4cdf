use std::fs;
use std::path::Path;

use ustat_core::SimpleGraph;

use crate::error::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Headerless numeric CSV, one observation per row. Rows must all have the
/// same width.
pub fn read_csv(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = read(path)?;
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    CliError::Parse(format!("{}: row {}: {field:?} is not a number", path.display(), i + 1))
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Parse(format!("{}: no rows", path.display())));
    }
    Ok(rows)
}

pub fn read_graph(path: &Path) -> Result<SimpleGraph, CliError> {
    Ok(SimpleGraph::parse_edge_list(&read(path)?)?)
}
