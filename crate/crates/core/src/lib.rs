//! Even-order symmetric tensors, structured-class recognition and
//! sum-of-squares certificates for the associated homogeneous forms.

pub mod error;
pub mod generators;
pub mod io;
pub mod repro;
pub mod sdp;
pub mod sos;
pub mod spectral;
pub mod structured;
pub mod tensor;

pub use error::{Error, Result};
