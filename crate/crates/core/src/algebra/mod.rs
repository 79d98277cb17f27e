//! Arithmetic over `F2[H]`: polynomials, matrices, Smith normal form,
//! module decompositions and the Frobenius algebra.

pub mod f2;
pub mod frobenius;
pub mod matrix;
pub mod module;
pub mod poly;
pub mod smith;

pub use frobenius::{Elem, Elem2, FrobeniusTheory};
pub use matrix::{DenseMatrix, PolyMatrix};
pub use module::{module_decompose, tor1, ModuleDecomp};
pub use poly::Poly;
pub use smith::{smith, smith_dense, snf, Smith, Transforms};
