//! Segmental polynomial histopolation: polynomials determined by their
//! integrals over segments, the generalized Vandermonde matrices behind
//! them and the conditioning of those matrices.

pub mod bases;
pub mod cli;
pub mod conditioning;
pub mod error;
pub mod fekete;
pub mod histofit;
pub mod matrix;
pub mod quadrature;
pub mod rational;
pub mod segments;
pub mod sweep;
pub mod vandermonde;
pub mod verify;

pub use bases::BasisKind;
pub use conditioning::ConditioningReport;
pub use error::{Error, Result};
pub use histofit::{fit, FitResult};
pub use matrix::DenseMatrix;
pub use segments::{ClassTag, Segment, SegmentFamily, Side};
