//! Cauchy tensors `c_{i1..im} = 1 / (c_{i1} + ... + c_{im})`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::special::{cauchy, rank_one};
use crate::tensor::SymmetricTensor;

/// For even `m` a Cauchy tensor is PSD exactly when its generating vector is
/// positive. Zero sums make the tensor undefined and are an error.
pub fn is_cauchy_psd(c: &[f64], m: usize) -> Result<bool> {
    cauchy(c, m)?;
    Ok(c.iter().all(|&v| v > 0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpApproximation {
    pub k: usize,
    /// Columns `u^j`, `j = 1..k`, so the approximation is `sum_j (u^j)^{(m)}`.
    pub vectors: Vec<Vec<f64>>,
    /// Max entrywise gap to the Cauchy tensor.
    pub error: f64,
}

/// Riemann-sum completely positive approximation from
/// `1/s = int_0^1 t^{s-1} dt` with `u^j_i = (j/k)^{c_i - 1/m} / k^{1/m}`.
pub fn cauchy_cp_approximation(c: &[f64], m: usize, k: usize) -> Result<CpApproximation> {
    if c.iter().any(|&v| v <= 0.0) {
        return Err(Error::InvalidParameter("generating vector must be positive".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let target = cauchy(c, m)?;
    let kf = k as f64;
    let mf = m as f64;
    let vectors: Vec<Vec<f64>> = (1..=k)
        .map(|j| c.iter().map(|&ci| (j as f64 / kf).powf(ci - 1.0 / mf) / kf.powf(1.0 / mf)).collect())
        .collect();
    let mut approx = SymmetricTensor::zeros(m, c.len())?;
    for u in &vectors {
        approx = approx.add(&rank_one(u, m)?)?;
    }
    let error = crate::tensor::index::all_canonical(m, c.len())
        .iter()
        .map(|idx| (approx.get_canonical(idx) - target.get_canonical(idx)).abs())
        .fold(0.0, f64::max);
    Ok(CpApproximation { k, vectors, error })
}
