//! Linear algebra over a generic [`Scalar`](crate::scalar::Scalar): exact over
//! the rationals for every decision, floating point for numeric evaluation.

mod convex;
pub mod fm;
mod matrix;
mod subspace;

use num_bigint::BigInt;
use thiserror::Error;

use crate::scalar::{is_integral, primitive_integer_vector};
use crate::{RatMatrix, Rational};

pub use convex::{invdim, orthant_meets_subspace, InvDim, Orthant, StrictRegion};
pub use matrix::{Echelon, Matrix};
pub use subspace::{
    evaluation_matrix, independent_by_projection, project_subspace, restricted_independent,
    restricted_independent_with_form, BilinearForm, Subspace,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("bilinear form is not symmetric")]
    NotSymmetric,
    #[error("bilinear form is not positive definite")]
    NotPositiveDefinite,
    #[error("orthant signs must be +1 or -1")]
    InvalidSign,
    #[error("constraint functional is zero")]
    ZeroConstraint,
    #[error("matrix has a non-integer entry")]
    NotIntegral,
}

pub fn rank(m: &RatMatrix) -> usize {
    m.rank()
}

/// Rational null space as a subspace (canonical echelon-derived basis).
pub fn kernel_basis(m: &RatMatrix) -> Subspace<Rational> {
    Subspace::new(m.cols(), m.kernel_basis()).expect("kernel basis is independent")
}

/// A primitive integer vector in the kernel of an integer matrix, or `None`
/// when the matrix is injective.
pub fn integral_kernel_vector(m: &RatMatrix) -> Result<Option<Vec<BigInt>>, LinalgError> {
    if !m.entries().iter().all(is_integral) {
        return Err(LinalgError::NotIntegral);
    }
    Ok(m.kernel_basis()
        .into_iter()
        .next()
        .map(|v| primitive_integer_vector(&v)))
}
