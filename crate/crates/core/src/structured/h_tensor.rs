//! H-tensors through the comparison tensor.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::structured::radius::spectral_radius_nonnegative;
use crate::tensor::SymmetricTensor;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HVerdict {
    /// `M(A)` is an M-tensor (singular allowed): `rho(Z) <= s`.
    pub h_tensor: bool,
    /// `rho(Z) < s`, with a positive `y` such that `M(A) y^{m-1} > 0`.
    pub nonsingular: bool,
    /// `rho(Z)` within tolerance of `s`.
    pub boundary: bool,
    pub s: f64,
    pub rho: f64,
    pub witness: Option<Vec<f64>>,
}

/// Builds `Z = s I - M(A)` with `s = max |a_{i..i}|` and compares its
/// spectral radius with `s`.
pub fn is_h_tensor(a: &SymmetricTensor) -> Result<HVerdict> {
    let n = a.dim();
    let m = a.order();
    let s = (0..n).map(|i| a.diagonal(i).abs()).fold(0.0, f64::max);
    let mut z = a.abs();
    for i in 0..n {
        z.set_canonical(crate::tensor::MultiIndex::diagonal(i, m), s - a.diagonal(i).abs());
    }
    let r = spectral_radius_nonnegative(&z)?;
    let tol = 1e-9 * (1.0 + s);
    let boundary = (r.rho - s).abs() <= tol;
    let h_tensor = r.rho <= s + tol;
    let mut nonsingular = r.upper < s - tol;
    let mut witness = None;
    if nonsingular {
        let y = r.vector.clone();
        let my = a.comparison().apply(&y)?;
        if my.iter().all(|&v| v > 0.0) {
            witness = Some(y);
        } else {
            nonsingular = false;
        }
    }
    Ok(HVerdict {
        h_tensor,
        nonsingular,
        boundary,
        s,
        rho: r.rho,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::special::{all_one, identity};

    #[test]
    fn identity_is_nonsingular_h() {
        let v = is_h_tensor(&identity::<f64>(4, 3).unwrap()).unwrap();
        assert!(v.h_tensor && v.nonsingular && !v.boundary);
        assert!(v.witness.is_some());
    }

    #[test]
    fn all_one_is_not_h() {
        let v = is_h_tensor(&all_one::<f64>(4, 3).unwrap()).unwrap();
        assert!(!v.h_tensor);
    }

    #[test]
    fn dominated_with_slack_has_witness() {
        let mut a: SymmetricTensor = identity(4, 2).unwrap().scale(&3.0);
        a.set(&[1, 1, 1, 2], -0.4).unwrap();
        a.set(&[1, 2, 2, 2], 0.3).unwrap();
        let v = is_h_tensor(&a).unwrap();
        assert!(v.nonsingular);
        let y = v.witness.unwrap();
        assert!(a.comparison().apply(&y).unwrap().iter().all(|&t| t > 0.0));
    }
}
