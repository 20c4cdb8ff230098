//! Positive definiteness of even-order symmetric tensors.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::eigmin::{min_h_eigenvalue, EigMinOptions, EigMinResult};
use crate::spectral::oracle::{brute_force_min, OracleOptions};
use crate::tensor::SymmetricTensor;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdOptions {
    pub eig: EigMinOptions,
    /// Smallest eigenvalue bound that counts as positive.
    pub pd_tol: f64,
    /// Fall back to the brute-force minimizer when the SOS bound is not
    /// decisive and the dimension is within `oracle.max_dim`.
    pub use_oracle: bool,
    pub oracle: OracleOptions,
}

impl Default for PdOptions {
    fn default() -> Self {
        PdOptions {
            eig: EigMinOptions {
                certificate: false,
                ..EigMinOptions::default()
            },
            pd_tol: 1e-6,
            use_oracle: true,
            oracle: OracleOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PdVerdict {
    PositiveDefinite,
    NotPositiveDefinite,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdReport {
    pub verdict: PdVerdict,
    pub eig: EigMinResult,
    /// Smallest value of `A x^m` found on the unit sphere, if consulted.
    pub oracle_value: Option<f64>,
}

/// The SOS bound proves definiteness when it is positive. On extended-Z
/// forms it is exact, so a nonpositive value refutes it. Otherwise a point
/// with `A x^m <= 0` refutes it.
pub fn is_positive_definite(a: &SymmetricTensor, opts: &PdOptions) -> Result<PdReport> {
    let eig = min_h_eigenvalue(a, &opts.eig)?;
    let scale = 1.0 + a.max_abs_entry();
    if eig.lambda_min > opts.pd_tol * scale {
        return Ok(PdReport {
            verdict: PdVerdict::PositiveDefinite,
            eig,
            oracle_value: None,
        });
    }
    if eig.exact && eig.converged && eig.r <= opts.pd_tol * scale {
        return Ok(PdReport {
            verdict: PdVerdict::NotPositiveDefinite,
            eig,
            oracle_value: None,
        });
    }
    if opts.use_oracle && a.dim() <= opts.oracle.max_dim {
        let o = brute_force_min(a, &opts.oracle)?;
        let verdict = if o.value <= 0.0 {
            PdVerdict::NotPositiveDefinite
        } else {
            PdVerdict::Inconclusive
        };
        return Ok(PdReport {
            verdict,
            eig,
            oracle_value: Some(o.value),
        });
    }
    Ok(PdReport {
        verdict: PdVerdict::Inconclusive,
        eig,
        oracle_value: None,
    })
}
