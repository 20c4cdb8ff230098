//! Tests that need no SDP: the reduced form `f_hat`, the single-mixed-term
//! criterion and the Gershgorin-type lower bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{HomogeneousPolynomial, SymmetricTensor};

/// Whether `alpha` is `m e_i` for some `i`.
pub fn is_diagonal_exponent(alpha: &[u32]) -> bool {
    alpha.iter().filter(|&&a| a > 0).count() <= 1
}

/// `Omega_f`: exponents of nonzero mixed terms.
pub fn omega(f: &HomogeneousPolynomial<f64>) -> Vec<Vec<u32>> {
    f.terms()
        .filter(|(a, c)| **c != 0.0 && !is_diagonal_exponent(a))
        .map(|(a, _)| a.clone())
        .collect()
}

/// `Delta_f`: mixed terms that are negative or have an odd exponent.
pub fn delta(f: &HomogeneousPolynomial<f64>) -> Vec<Vec<u32>> {
    f.terms()
        .filter(|(a, c)| **c != 0.0 && !is_diagonal_exponent(a))
        .filter(|(a, c)| **c < 0.0 || a.iter().any(|e| e % 2 == 1))
        .map(|(a, _)| a.clone())
        .collect()
}

/// `f_hat = sum_i f_{m,i} x_i^m - sum_{alpha in Delta_f} |f_alpha| x^alpha`.
pub fn f_hat(f: &HomogeneousPolynomial<f64>) -> HomogeneousPolynomial<f64> {
    let mut out = HomogeneousPolynomial::zero(f.degree(), f.nvars());
    for (a, &c) in f.terms() {
        if is_diagonal_exponent(a) {
            out.add_term(a, c).expect("same shape");
        }
    }
    for a in delta(f) {
        out.add_term(&a, -f.coeff(&a).abs()).expect("same shape");
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleTermVerdict {
    pub sos: bool,
    pub mu0: f64,
}

/// `sum_i b_i x_i^{2d} - mu x^a` is SOS iff `|mu| <= mu0`, or `mu < mu0` with
/// every `a_i` even, where `mu0 = 2d prod_{a_i != 0} (b_i / a_i)^{a_i / 2d}`.
pub fn single_mixed_term_sos(b: &[f64], a: &[u32], mu: f64, tol: f64) -> Result<SingleTermVerdict> {
    if b.len() != a.len() {
        return Err(Error::DimensionMismatch("b and a differ in length".into()));
    }
    if let Some(bad) = b.iter().find(|&&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("diagonal weight {bad} must be nonnegative")));
    }
    let deg: u32 = a.iter().sum();
    if deg == 0 || !deg.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("exponent sum {deg} must be even and positive")));
    }
    let mu0 = mu0(b, a);
    let all_even = a.iter().all(|e| e % 2 == 0);
    let sos = mu.abs() <= mu0 + tol || (all_even && mu < mu0 + tol);
    Ok(SingleTermVerdict { sos, mu0 })
}

pub(crate) fn mu0(b: &[f64], a: &[u32]) -> f64 {
    let two_d: u32 = a.iter().sum();
    let mut log = 0.0;
    for (&bi, &ai) in b.iter().zip(a) {
        if ai == 0 {
            continue;
        }
        if bi <= 0.0 {
            return 0.0;
        }
        log += (ai as f64 / two_d as f64) * (bi / ai as f64).ln();
    }
    two_d as f64 * log.exp()
}

/// `min_i (a_{i..i} - sum_{off} |a_{i i2..im}|)`, a lower bound on every
/// H-eigenvalue.
pub fn gershgorin_lower_bound(a: &SymmetricTensor) -> Result<f64> {
    let n = a.dim();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for (idx, &v) in a.iter() {
        if idx.is_diagonal() {
            diag[idx.as_slice()[0] as usize] = v;
            continue;
        }
        for (i, _) in idx.counts() {
            off[i] += idx.row_multiplicity(i)? as f64 * v.abs();
        }
    }
    Ok((0..n).map(|i| diag[i] - off[i]).fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_term_examples() {
        let v = single_mixed_term_sos(&[1.0, 1.0], &[2, 2], 2.0, 1e-12).unwrap();
        assert!(v.sos);
        assert_abs_diff_eq!(v.mu0, 2.0, epsilon = 1e-12);
        assert!(!single_mixed_term_sos(&[1.0, 1.0], &[2, 2], 3.0, 1e-12).unwrap().sos);
        let v = single_mixed_term_sos(&[1.0, 1.0], &[3, 1], -2.5, 1e-12).unwrap();
        assert!(!v.sos);
        assert_abs_diff_eq!(v.mu0, 4.0 * (1.0f64 / 3.0).powf(0.75), epsilon = 1e-12);
        assert_abs_diff_eq!(v.mu0, 1.7548, epsilon = 1e-4);
        // even exponents admit any negative mu
        assert!(single_mixed_term_sos(&[1.0, 1.0], &[2, 2], -50.0, 1e-12).unwrap().sos);
    }

    #[test]
    fn f_hat_flips_odd_and_negative_terms() {
        let f = HomogeneousPolynomial::zero(4, 2)
            .with_term(&[4, 0], 1.0)
            .unwrap()
            .with_term(&[0, 4], 2.0)
            .unwrap()
            .with_term(&[3, 1], 0.5)
            .unwrap()
            .with_term(&[2, 2], 3.0)
            .unwrap();
        let h = f_hat(&f);
        assert_eq!(h.coeff(&[3, 1]), -0.5);
        assert_eq!(h.coeff(&[2, 2]), 0.0);
        assert_eq!(h.coeff(&[0, 4]), 2.0);
        assert_eq!(delta(&f), vec![vec![3, 1]]);
        assert_eq!(omega(&f).len(), 2);
    }
}
