//! Matrices over `k[z]`.

use alloc::vec;
use alloc::vec::Vec;

use super::field::Field;
use super::poly::Poly;
use super::AlgError;

/// Row-major matrix of polynomials. Lattice bases use the columns as
/// generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyMatrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<Poly<E>>,
}

impl<E: Clone + PartialEq> PolyMatrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(f));
        }
        m
    }

    pub fn diagonal(diag: Vec<Poly<E>>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly<E>>>) -> Result<Self, AlgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgError::Ragged);
        }
        Ok(PolyMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// Builds from a list of columns, each of length `rows`.
    pub fn from_columns(rows: usize, columns: Vec<Vec<Poly<E>>>) -> Result<Self, AlgError> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(AlgError::Ragged);
        }
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.into_iter().enumerate() {
            for (i, p) in col.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        Ok(m)
    }

    /// Integer-coefficient convenience constructor, rows of ascending coefficient lists.
    pub fn from_i64_rows<F: Field<Elem = E>>(f: &F, rows: &[&[&[i64]]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|c| Poly::from_i64s(f, c)).collect())
            .collect();
        Self::from_rows(rows).expect("rectangular")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<E> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly<E>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn column(&self, j: usize) -> Vec<Poly<E>> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly<E>>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[Poly<E>] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &Self) -> Result<Self, AlgError> {
        if self.rows != other.rows {
            return Err(AlgError::DimensionMismatch);
        }
        let mut cols = self.columns();
        cols.extend(other.columns());
        Self::from_columns(self.rows, cols)
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Result<Self, AlgError> {
        if self.cols != other.rows {
            return Err(AlgError::DimensionMismatch);
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero();
                for l in 0..self.cols {
                    let a = self.get(i, l);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(other.get(l, j), f), f);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn scale<F: Field<Elem = E>>(&self, p: &Poly<E>, f: &F) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.mul(p, f)).collect(),
        }
    }

    /// Largest entry degree of column `j`; `None` for a zero column.
    pub fn column_degree(&self, j: usize) -> Option<usize> {
        (0..self.rows).filter_map(|i| self.get(i, j).degree()).max()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i)).all(|j| self.get(i, j).is_zero()))
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c · row[src]`.
    pub(crate) fn add_row_multiple<F: Field<Elem = E>>(&mut self, dst: usize, src: usize, c: &Poly<E>, f: &F) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let v = self.get(dst, j).add(&s.mul(c, f), f);
            self.set(dst, j, v);
        }
    }

    /// `col[dst] += c · col[src]`.
    pub(crate) fn add_col_multiple<F: Field<Elem = E>>(&mut self, dst: usize, src: usize, c: &Poly<E>, f: &F) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s.is_zero() {
                continue;
            }
            let v = self.get(i, dst).add(&s.mul(c, f), f);
            self.set(i, dst, v);
        }
    }

    pub(crate) fn scale_row<F: Field<Elem = E>>(&mut self, i: usize, c: &E, f: &F) {
        for j in 0..self.cols {
            let v = self.get(i, j).scale(c, f);
            self.set(i, j, v);
        }
    }

    pub(crate) fn scale_col<F: Field<Elem = E>>(&mut self, j: usize, c: &E, f: &F) {
        for i in 0..self.rows {
            let v = self.get(i, j).scale(c, f);
            self.set(i, j, v);
        }
    }
}

/// Determinant by fraction-free (Bareiss) elimination; every intermediate
/// division is exact in `k[z]`.
pub fn det<F: Field>(m: &PolyMatrix<F::Elem>, f: &F) -> Result<Poly<F::Elem>, AlgError> {
    if !m.is_square() {
        return Err(AlgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Poly::one(f));
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = Poly::one(f);
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    negate = !negate;
                }
                None => return Ok(Poly::zero()),
            }
        }
        let pivot = a.get(k, k).clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a
                    .get(i, j)
                    .mul(&pivot, f)
                    .sub(&a.get(i, k).mul(a.get(k, j), f), f);
                let v = num.exact_div(&prev, f).expect("Bareiss division is exact");
                a.set(i, j, v);
            }
            a.set(i, k, Poly::zero());
        }
        prev = pivot;
    }
    let d = a.get(n - 1, n - 1).clone();
    Ok(if negate { d.neg(f) } else { d })
}

/// True iff the determinant is a nonzero constant.
pub fn is_unimodular<F: Field>(m: &PolyMatrix<F::Elem>, f: &F) -> bool {
    match det(m, f) {
        Ok(d) => d.degree() == Some(0),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::{PrimeField, Rationals};

    #[test]
    fn det_examples() {
        let f = Rationals;
        let id = PolyMatrix::identity(&f, 3);
        assert_eq!(det(&id, &f).unwrap(), Poly::one(&f));
        let d = PolyMatrix::from_i64_rows(&f, &[&[&[0, 1], &[]], &[&[], &[0, 0, 1]]]);
        assert_eq!(det(&d, &f).unwrap(), Poly::from_i64s(&f, &[0, 0, 0, 1]));
        let t = PolyMatrix::from_i64_rows(&f, &[&[&[0, 1], &[1]], &[&[], &[0, 1]]]);
        assert_eq!(det(&t, &f).unwrap(), Poly::from_i64s(&f, &[0, 0, 1]));
        let r = PolyMatrix::<num_rational::BigRational>::zeros(2, 3);
        assert!(matches!(det(&r, &f), Err(AlgError::NotSquare { .. })));
    }

    #[test]
    fn det_needs_pivoting() {
        let f = PrimeField::new(5).unwrap();
        // [[0, 1], [z, 0]] has det -z.
        let m = PolyMatrix::from_i64_rows(&f, &[&[&[], &[1]], &[&[0, 1], &[]]]);
        assert_eq!(det(&m, &f).unwrap(), Poly::from_i64s(&f, &[0, -1]));
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let f = Rationals;
        let m = PolyMatrix::from_i64_rows(
            &f,
            &[
                &[&[1, 2], &[0, 1], &[3]],
                &[&[2], &[1, 0, 1], &[1, 1]],
                &[&[0, 0, 1], &[5], &[-1, 2]],
            ],
        );
        let g = |i: usize, j: usize| m.get(i, j).clone();
        let minor = |a: usize, b: usize, c: usize, d: usize| {
            g(a, c).mul(&g(b, d), &f).sub(&g(a, d).mul(&g(b, c), &f), &f)
        };
        let expected = g(0, 0)
            .mul(&minor(1, 2, 1, 2), &f)
            .sub(&g(0, 1).mul(&minor(1, 2, 0, 2), &f), &f)
            .add(&g(0, 2).mul(&minor(1, 2, 0, 1), &f), &f);
        assert_eq!(det(&m, &f).unwrap(), expected);
    }

    #[test]
    fn unimodularity() {
        let f = Rationals;
        assert!(is_unimodular(&PolyMatrix::identity(&f, 2), &f));
        let d = PolyMatrix::from_i64_rows(&f, &[&[&[0, 1], &[]], &[&[], &[1]]]);
        assert!(!is_unimodular(&d, &f));
        let u = PolyMatrix::from_i64_rows(&f, &[&[&[1], &[0, 1]], &[&[], &[1]]]);
        assert!(is_unimodular(&u, &f));
    }
}
