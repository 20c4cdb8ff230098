use crate::error::Result;
use crate::structured::rows::{ge, row_stats};
use crate::tensor::SymmetricTensor;

/// `a_{i..i} >= sum of |a_{i i2..im}|` over every off-diagonal position of
/// each row.
pub fn is_diagonally_dominated(a: &SymmetricTensor) -> Result<bool> {
    Ok(row_stats(a)?.iter().all(|r| ge(r.diag, r.off_abs)))
}

/// Like [`is_diagonally_dominated`], but the row sum only runs over
/// positions whose monomial is negative or has an odd exponent.
pub fn is_weakly_diagonally_dominated(a: &SymmetricTensor) -> Result<bool> {
    Ok(row_stats(a)?.iter().all(|r| ge(r.diag, r.off_abs_delta)))
}
