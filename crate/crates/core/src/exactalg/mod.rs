//! Exact arithmetic: fields, polynomials, polynomial matrices and their
//! normal forms.

pub mod field;
pub mod hermite;
pub mod linalg;
pub mod poly;
pub mod polymatrix;
pub mod reduce;
pub mod smith;

use thiserror::Error;

pub use field::{is_prime, Field, FieldError, FieldSpec, PrimeField, Rationals};
pub use hermite::{hermite_basis, is_hermite};
pub use linalg::{Matrix, Subspace};
pub use poly::{poly_gcd, Poly};
pub use polymatrix::{det, is_unimodular, PolyMatrix};
pub use reduce::{column_reduce, leading_column_matrix};
pub use smith::{elementary_divisors, smith_normal_form, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("generators span rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("rows or columns of unequal length")]
    Ragged,
}
