//! Named tensors: identity, all-one, partially all-one, rank-one, Cauchy and
//! the symmetrized outer square.

use crate::error::{Error, Result};
use crate::tensor::index::{all_canonical, MultiIndex};
use crate::tensor::{Scalar, SymmetricTensor};

/// `I`: ones on the diagonal.
pub fn identity<T: Scalar>(m: usize, n: usize) -> Result<SymmetricTensor<T>> {
    let mut t = SymmetricTensor::zeros(m, n)?;
    for i in 0..n {
        t.set_canonical(MultiIndex::diagonal(i, m), T::one());
    }
    Ok(t)
}

/// `E`: every entry equal to one.
pub fn all_one<T: Scalar>(m: usize, n: usize) -> Result<SymmetricTensor<T>> {
    partial_all_one(m, n, &(1..=n).collect::<Vec<_>>())
}

/// `E^J`: one on entries whose indices all lie in `J` (1-based), zero elsewhere.
pub fn partial_all_one<T: Scalar>(m: usize, n: usize, j: &[usize]) -> Result<SymmetricTensor<T>> {
    let mut t = SymmetricTensor::zeros(m, n)?;
    let mut set: Vec<usize> = j.to_vec();
    set.sort_unstable();
    set.dedup();
    if let Some(&bad) = set.iter().find(|&&i| i == 0 || i > n) {
        return Err(Error::IndexOutOfRange { index: bad, dim: n });
    }
    for idx in all_canonical(m, set.len()) {
        let mapped: Vec<u32> = idx.as_slice().iter().map(|&k| (set[k as usize] - 1) as u32).collect();
        t.set_canonical(MultiIndex::from_unsorted(mapped), T::one());
    }
    Ok(t)
}

/// `u^{(m)}`: entries `u_{i1} ... u_{im}`.
pub fn rank_one<T: Scalar>(u: &[T], m: usize) -> Result<SymmetricTensor<T>> {
    let n = u.len();
    let mut t = SymmetricTensor::zeros(m, n)?;
    for idx in all_canonical(m, n) {
        let mut v = T::one();
        for &i in idx.as_slice() {
            v = v * u[i as usize].clone();
        }
        t.set_canonical(idx, v);
    }
    Ok(t)
}

/// Cauchy tensor with entries `1 / (c_{i1} + ... + c_{im})`.
pub fn cauchy<T: Scalar>(c: &[T], m: usize) -> Result<SymmetricTensor<T>> {
    let n = c.len();
    let mut t = SymmetricTensor::zeros(m, n)?;
    for idx in all_canonical(m, n) {
        let mut s = T::zero();
        for &i in idx.as_slice() {
            s = s + c[i as usize].clone();
        }
        if s.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "generating vector sums to zero at index {:?}",
                idx.one_based()
            )));
        }
        t.set_canonical(idx, T::one() / s);
    }
    Ok(t)
}

/// `sym(M ⊗ M)`: the order-`2d` symmetric tensor whose form is
/// `(M x^d)^2`.
pub fn sym_outer_square<T: Scalar>(mt: &SymmetricTensor<T>) -> Result<SymmetricTensor<T>> {
    let p = mt.to_polynomial()?;
    SymmetricTensor::from_polynomial(&p.mul(&p)?)
}
