//! Double B, quasi-double B0 and MB0 tensors.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::structured::radius::{power_iteration, PowerOptions};
use crate::structured::rows::{ge, row_len, row_stats};
use crate::tensor::{MultiIndex, SymmetricTensor};

/// Row quantities shared by the double-B family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubleBQuantities {
    /// `beta_i = max(0, largest off-diagonal entry of row i)`.
    pub beta: Vec<f64>,
    /// `Delta_i = sum over off-diagonal positions of (beta_i - b)`.
    pub delta: Vec<f64>,
    /// `delta_ij[i][j] = Delta_j - (beta_j - b_{j i..i})`.
    pub delta_ij: Vec<Vec<f64>>,
    pub diag: Vec<f64>,
}

pub fn double_b_quantities(b: &SymmetricTensor) -> Result<DoubleBQuantities> {
    let (m, n) = (b.order(), b.dim());
    let stats = row_stats(b)?;
    let off_count = row_len(m, n).saturating_sub(1) as f64;
    let beta: Vec<f64> = stats.iter().map(|r| r.off_max.max(0.0)).collect();
    let diag: Vec<f64> = stats.iter().map(|r| r.diag).collect();
    let delta: Vec<f64> = (0..n)
        .map(|i| off_count * beta[i] - (stats[i].sum - stats[i].diag))
        .collect();
    let mut delta_ij = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut idx = vec![i as u32; m - 1];
                idx.push(j as u32);
                let bji = b.get_canonical(&MultiIndex::from_unsorted(idx));
                delta_ij[i][j] = delta[j] - (beta[j] - bji);
            }
        }
    }
    Ok(DoubleBQuantities {
        beta,
        delta,
        delta_ij,
        diag,
    })
}

/// `b_ii > beta_i`, `b_ii - beta_i >= Delta_i`, and
/// `(b_ii - beta_i)(b_jj - beta_j) > Delta_i Delta_j` for all `i != j`.
pub fn is_double_b(b: &SymmetricTensor) -> Result<bool> {
    let q = double_b_quantities(b)?;
    let n = b.dim();
    let gap: Vec<f64> = (0..n).map(|i| q.diag[i] - q.beta[i]).collect();
    if gap.iter().any(|&g| g <= 0.0) {
        return Ok(false);
    }
    if (0..n).any(|i| !ge(gap[i], q.delta[i])) {
        return Ok(false);
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && gap[i] * gap[j] <= q.delta[i] * q.delta[j] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `b_ii > beta_i` and, for all `i != j`,
/// `(b_ii - beta_i)(b_jj - beta_j - Delta^i_j) >= (beta_j - b_{j i..i}) Delta_i`.
pub fn is_quasi_double_b0(b: &SymmetricTensor) -> Result<bool> {
    let q = double_b_quantities(b)?;
    let n = b.dim();
    let gap: Vec<f64> = (0..n).map(|i| q.diag[i] - q.beta[i]).collect();
    if gap.iter().any(|&g| g <= 0.0) {
        return Ok(false);
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let bji_gap = q.delta[j] - q.delta_ij[i][j]; // beta_j - b_{j i..i}
            if !ge(gap[i] * (gap[j] - q.delta_ij[i][j]), bji_gap * q.delta[i]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MVerdict {
    pub m_tensor: bool,
    pub boundary: bool,
    pub s: f64,
    pub rho_lower: f64,
    pub rho_upper: f64,
}

/// MB0: the row-shifted tensor `a_{i1..im} = b_{i1..im} - beta_{i1}` is an
/// M-tensor. The shifted tensor is not symmetric, so the test runs the power
/// iteration on the map `y -> s y^{[m-1]} - A y^{m-1}` directly.
pub fn is_mb0(b: &SymmetricTensor) -> Result<MVerdict> {
    let q = double_b_quantities(b)?;
    let (m, n) = (b.order(), b.dim());
    let s = (0..n).map(|i| q.diag[i] - q.beta[i]).fold(f64::NEG_INFINITY, f64::max);
    let p = (m - 1) as i32;
    let z = |y: &[f64]| -> Vec<f64> {
        let by = b.apply(y).expect("matching length");
        let total: f64 = y.iter().sum::<f64>().powi(p);
        (0..n)
            .map(|i| (s * y[i].powi(p) - (by[i] - q.beta[i] * total)).max(0.0))
            .collect()
    };
    let r = power_iteration(n, m, z, &PowerOptions::default());
    let tol = 1e-9 * (1.0 + s.abs());
    // the upper bracket is valid for every positive vector
    let m_tensor = r.upper <= s + tol || (r.converged && r.rho <= s + tol);
    let boundary = (r.rho - s).abs() <= tol;
    Ok(MVerdict {
        m_tensor,
        boundary,
        s,
        rho_lower: r.lower,
        rho_upper: r.upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::special::{all_one, identity};

    fn near_identity() -> SymmetricTensor {
        let mut b: SymmetricTensor = identity(4, 2).unwrap().scale(&2.0);
        for idx in [[1, 1, 1, 2], [1, 1, 2, 2], [1, 2, 2, 2]] {
            b.set(&idx, -0.01).unwrap();
        }
        b
    }

    #[test]
    fn near_identity_is_in_all_three_classes() {
        let b = near_identity();
        let q = double_b_quantities(&b).unwrap();
        assert_eq!(q.beta, vec![0.0, 0.0]);
        assert!((q.delta[0] - 0.07).abs() < 1e-15);
        assert!(is_double_b(&b).unwrap());
        assert!(is_quasi_double_b0(&b).unwrap());
        assert!(is_mb0(&b).unwrap().m_tensor);
    }

    #[test]
    fn all_one_fails_double_b() {
        let e: SymmetricTensor = all_one(4, 2).unwrap();
        assert!(!is_double_b(&e).unwrap());
        assert!(!is_quasi_double_b0(&e).unwrap());
        // the row shift of E is the zero tensor: a singular M-tensor
        let v = is_mb0(&e).unwrap();
        assert!(v.m_tensor && v.boundary);
    }
}
