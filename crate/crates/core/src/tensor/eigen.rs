use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::tensor::SymmetricTensor;

/// An H-eigenpair: `A x^{m-1} = lambda x^{[m-1]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub lambda: f64,
    pub x: Vec<f64>,
}

/// `max_i |(A x^{m-1})_i - lambda x_i^{m-1}|`.
pub fn eigen_residual(a: &SymmetricTensor, lambda: f64, x: &[f64]) -> Result<f64> {
    let y = a.apply(x)?;
    let p = (a.order() - 1) as i32;
    Ok(y
        .iter()
        .zip(x)
        .map(|(yi, xi)| (yi - lambda * xi.powi(p)).abs())
        .fold(0.0, f64::max))
}
