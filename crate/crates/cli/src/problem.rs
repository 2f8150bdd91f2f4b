//! Problem-file schema:
//!
//! ```json
//! {"dimension": 1,
//!  "polynomial": [{"c": -1.0, "p": [4]}, {"c": -1.6, "p": [3]},
//!                 {"c": -1.2, "p": [2]}, {"c": 2.4, "p": [1]}]}
//! ```
//!
//! `c` is the term coefficient, `p` the exponent of each variable.

use std::path::Path;

use serde::{Deserialize, Serialize};

use ballmin::objective::{Monomial, PolynomialFunction};
use ballmin::Polynomial64;

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermSpec {
    pub c: f64,
    pub p: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemFile {
    pub dimension: usize,
    pub polynomial: Vec<TermSpec>,
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("cannot parse {}: {e}", path.display())))
    }

    pub fn to_polynomial(&self) -> Result<Polynomial64, CliError> {
        PolynomialFunction::new(
            self.dimension,
            self.polynomial.iter().map(|t| Monomial::new(t.c, t.p.clone())),
        )
        .map_err(CliError::from)
    }

    /// Echo form of an in-memory polynomial, for report output.
    pub fn from_polynomial(poly: &Polynomial64) -> Self {
        Self {
            dimension: poly.dimension(),
            polynomial: poly
                .terms()
                .iter()
                .map(|t| TermSpec { c: t.coeff, p: t.powers.clone() })
                .collect(),
        }
    }
}
