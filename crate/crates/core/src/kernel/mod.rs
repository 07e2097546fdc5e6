//! Dense complex matrices and the numerical primitives built on them.

mod diagonal;
mod exponent;
mod linalg;
mod matrix;

pub use diagonal::{dephase_canonical, DiagonalUnitary, DEGENERATE_MODULUS};
pub use exponent::ExponentMatrix;
pub use linalg::{det_modulus, determinant, hermitian_eigen, singular_values, svd, HermitianEigen, Svd};
pub use matrix::ComplexMatrix;

/// Kronecker product `a ⊗ b`.
pub fn tensor<T: crate::Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.kron(b)
}
