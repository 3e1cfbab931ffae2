//! Run configuration: ambient dimension, the skew matrix, optional
//! quadratic-form data and incidence data, ingested from a TOML or JSON
//! file (detected by extension). All matrix entries are rational strings
//! like `"0"`, `"-1"`, `"1/2"` or `"1/2+1/3i"`; shapes are validated on
//! load.

use std::path::Path;

use serde::Deserialize;

use projstar_core::{GaussRational, Matrix, PoissonMatrix, SymMatrix};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    nvars: usize,
    lambda: Option<Vec<Vec<String>>>,
    quad_a: Option<Vec<Vec<String>>>,
    quad_b: Option<Vec<Vec<String>>>,
    twistor_d: Option<Vec<Vec<String>>>,
    order: Option<usize>,
    output: Option<String>,
}

/// Validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub nvars: usize,
    pub lambda: Option<PoissonMatrix>,
    pub quad_a: Option<SymMatrix>,
    pub quad_b: Option<SymMatrix>,
    pub twistor_d: Option<PoissonMatrix>,
    pub order: usize,
    pub json: bool,
}

pub const DEFAULT_ORDER: usize = 8;

fn parse_matrix(name: &str, rows: &[Vec<String>], expected_dim: usize) -> Result<Matrix, String> {
    if rows.len() != expected_dim {
        return Err(format!(
            "{name}: expected {expected_dim} rows, found {}",
            rows.len()
        ));
    }
    let mut parsed = Vec::with_capacity(expected_dim);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != expected_dim {
            return Err(format!(
                "{name}: row {i} has {} entries, expected {expected_dim}",
                row.len()
            ));
        }
        let mut out_row = Vec::with_capacity(expected_dim);
        for (j, entry) in row.iter().enumerate() {
            let value: GaussRational = entry
                .parse()
                .map_err(|_| format!("{name}[{i}][{j}]: invalid rational string `{entry}`"))?;
            out_row.push(value);
        }
        parsed.push(out_row);
    }
    Matrix::from_rows(parsed).map_err(|e| format!("{name}: {e}"))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let raw: RawConfig = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => serde_json::from_str(&text)
                .map_err(|e| format!("{}: {e}", path.display()))?,
            Some("toml") => {
                toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
            }
            other => {
                return Err(format!(
                    "unsupported config extension {:?} (expected .toml or .json)",
                    other.unwrap_or("")
                ))
            }
        };
        Self::validate(raw)
    }

    fn validate(raw: RawConfig) -> Result<RunConfig, String> {
        if raw.nvars == 0 {
            return Err("nvars must be positive".to_string());
        }
        let lambda = raw
            .lambda
            .as_deref()
            .map(|rows| {
                let m = parse_matrix("lambda", rows, raw.nvars)?;
                PoissonMatrix::new(m).map_err(|e| format!("lambda: {e}"))
            })
            .transpose()?;
        let quad_a = raw
            .quad_a
            .as_deref()
            .map(|rows| {
                let m = parse_matrix("quad_a", rows, raw.nvars)?;
                SymMatrix::new(m).map_err(|e| format!("quad_a: {e}"))
            })
            .transpose()?;
        let quad_b = raw
            .quad_b
            .as_deref()
            .map(|rows| {
                let m = parse_matrix("quad_b", rows, raw.nvars)?;
                SymMatrix::new(m).map_err(|e| format!("quad_b: {e}"))
            })
            .transpose()?;
        let twistor_d = raw
            .twistor_d
            .as_deref()
            .map(|rows| {
                let m = parse_matrix("twistor_d", rows, 4)?;
                PoissonMatrix::new(m).map_err(|e| format!("twistor_d: {e}"))
            })
            .transpose()?;
        let json = match raw.output.as_deref() {
            None | Some("text") => false,
            Some("json") => true,
            Some(other) => {
                return Err(format!(
                    "output must be \"text\" or \"json\", found \"{other}\""
                ))
            }
        };
        Ok(RunConfig {
            nvars: raw.nvars,
            lambda,
            quad_a,
            quad_b,
            twistor_d,
            order: raw.order.unwrap_or(DEFAULT_ORDER),
            json,
        })
    }
}
