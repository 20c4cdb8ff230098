//! Symmetric tensors and the homogeneous forms they define.

mod eigen;
pub mod index;
mod polynomial;
mod scalar;
pub mod special;
mod symmetric;

pub use eigen::{eigen_residual, EigenPair};
pub use index::{canonicalize, MultiIndex};
pub use polynomial::HomogeneousPolynomial;
pub use scalar::{rational, rational_from_f64, Scalar};
pub use symmetric::SymmetricTensor;
