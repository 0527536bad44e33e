//! The JSON input document.

use std::path::Path;

use consensus_core::{validate_stochastic, DenseMatrix, StochasticMatrix, ToleranceConfig};
use serde::Deserialize;

use crate::error::CliError;

/// Optional overrides of the default tolerances.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub zero_tol: Option<f64>,
    pub conv_tol: Option<f64>,
    pub max_iter: Option<usize>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: ToleranceConfig) -> ToleranceConfig {
        ToleranceConfig {
            zero_tol: self.zero_tol.unwrap_or(base.zero_tol),
            conv_tol: self.conv_tol.unwrap_or(base.conv_tol),
            max_iter: self.max_iter.unwrap_or(base.max_iter),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub matrix: Vec<Vec<f64>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub initial_opinions: Option<Vec<f64>>,
    #[serde(default)]
    pub tolerance: Option<ToleranceOverrides>,
}

impl InputDocument {
    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    /// Validates the matrix as row-stochastic under `tol`.
    pub fn stochastic(&self, tol: &ToleranceConfig) -> Result<StochasticMatrix, CliError> {
        let m = DenseMatrix::from_rows(&self.matrix).map_err(|e| CliError::Validation(e.to_string()))?;
        validate_stochastic(m, tol).map_err(|e| CliError::Validation(e.to_string()))
    }
}

pub fn load_input(path: &Path) -> Result<InputDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_input(&text)
}

/// Parses and checks the shape of an input document; stochasticity is
/// checked later against the effective tolerances.
pub fn parse_input(text: &str) -> Result<InputDocument, CliError> {
    let doc: InputDocument = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let n = doc.n();
    if n == 0 {
        return Err(CliError::Validation("matrix is empty".into()));
    }
    for (r, row) in doc.matrix.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::Validation(format!(
                "matrix is not square: row {} has {} entries, expected {}",
                r + 1,
                row.len(),
                n
            )));
        }
    }
    if let Some(labels) = &doc.labels {
        if labels.len() != n {
            return Err(CliError::Validation(format!(
                "{} labels given for {} agents",
                labels.len(),
                n
            )));
        }
    }
    if let Some(s0) = &doc.initial_opinions {
        if s0.len() != n {
            return Err(CliError::Validation(format!(
                "{} initial opinions given for {} agents",
                s0.len(),
                n
            )));
        }
        if s0.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Validation("initial opinions must be finite".into()));
        }
    }
    Ok(doc)
}
