//! Column-reduced bases (leading column coefficient matrix nonsingular).

use alloc::vec::Vec;

use super::field::Field;
use super::linalg::Matrix;
use super::poly::Poly;
use super::polymatrix::PolyMatrix;
use super::AlgError;

/// Matrix whose `(i, j)` entry is the coefficient of `z^{d_j}` in `m[i][j]`,
/// `d_j` the degree of column `j`.
pub fn leading_column_matrix<F: Field>(m: &PolyMatrix<F::Elem>, f: &F) -> Result<Matrix<F::Elem>, AlgError> {
    let degs = column_degrees(m)?;
    let rows = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).coeff(f, degs[j])).collect())
        .collect();
    Matrix::from_rows(rows)
}

fn column_degrees<E: Clone + PartialEq>(m: &PolyMatrix<E>) -> Result<Vec<usize>, AlgError> {
    (0..m.cols()).map(|j| m.column_degree(j).ok_or(AlgError::Singular)).collect()
}

/// Column-equivalent reduced basis and its column degrees.
///
/// While the leading column matrix is singular, a kernel vector `c` of it gives
/// a unimodular update of the highest-degree column in its support that
/// strictly lowers that column's degree.
pub fn column_reduce<F: Field>(m: &PolyMatrix<F::Elem>, f: &F) -> Result<(PolyMatrix<F::Elem>, Vec<usize>), AlgError> {
    if !m.is_square() {
        return Err(AlgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let mut a = m.clone();
    loop {
        let degs = column_degrees(&a)?;
        let lc = leading_column_matrix(&a, f)?;
        let Some(c) = lc.nullspace(f).into_iter().next() else {
            return Ok((a, degs));
        };
        let target = (0..a.cols())
            .filter(|&j| !f.is_zero(&c[j]))
            .max_by_key(|&j| (degs[j], core::cmp::Reverse(j)))
            .expect("kernel vector is nonzero");
        let inv = f.inv(&c[target]).expect("nonzero");
        for j in 0..a.cols() {
            if j == target || f.is_zero(&c[j]) {
                continue;
            }
            let mult = Poly::monomial(f, f.mul(&c[j], &inv), degs[target] - degs[j]);
            a.add_col_multiple(target, j, &mult, f);
        }
        if a.column_degree(target).is_none() {
            return Err(AlgError::Singular);
        }
    }
}
