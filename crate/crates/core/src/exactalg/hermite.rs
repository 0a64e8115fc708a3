//! Column Hermite form: canonical bases of `k[z]`-submodules of `k[z]^m`.
//!
//! Canonical shape: upper triangular, monic diagonal, and every entry to the
//! right of a pivot has degree below that pivot's degree.

use alloc::vec::Vec;

use super::field::Field;
use super::poly::Poly;
use super::polymatrix::PolyMatrix;
use super::AlgError;

/// Result of unimodular column elimination `a · transform = echelon`.
pub(crate) struct ColumnEchelon<E> {
    pub echelon: PolyMatrix<E>,
    pub transform: Option<PolyMatrix<E>>,
    /// `pivot_col[i]` is the column holding the pivot of row `i`.
    pub pivot_col: Vec<Option<usize>>,
}

/// Bottom-up column elimination: for each row, starting with the last, the
/// row's entries in the not-yet-used columns are collapsed into a single
/// column by the Euclidean algorithm.
pub(crate) fn column_echelon<F: Field>(a: &PolyMatrix<F::Elem>, f: &F, track: bool) -> ColumnEchelon<F::Elem> {
    let (m, g) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut t = track.then(|| PolyMatrix::identity(f, g));
    let mut active: Vec<usize> = (0..g).collect();
    let mut pivot_col = alloc::vec![None; m];

    for row in (0..m).rev() {
        loop {
            let mut nonzero: Vec<usize> = active.iter().copied().filter(|&j| !h.get(row, j).is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            nonzero.sort_by_key(|&j| (h.get(row, j).degree(), j));
            let p = nonzero[0];
            let pivot = h.get(row, p).clone();
            for &j in &nonzero[1..] {
                let (q, _) = h.get(row, j).div_rem(&pivot, f).expect("nonzero pivot");
                let negq = q.neg(f);
                h.add_col_multiple(j, p, &negq, f);
                if let Some(t) = t.as_mut() {
                    t.add_col_multiple(j, p, &negq, f);
                }
            }
        }
        if let Some(pos) = active.iter().position(|&j| !h.get(row, j).is_zero()) {
            pivot_col[row] = Some(active.remove(pos));
        }
    }
    ColumnEchelon { echelon: h, transform: t, pivot_col }
}

/// Canonical `m × m` basis of the column span of `gens` (`m` rows, any number of
/// columns). Errors when the span has rank below `m`.
pub fn hermite_basis<F: Field>(gens: &PolyMatrix<F::Elem>, f: &F) -> Result<PolyMatrix<F::Elem>, AlgError> {
    let m = gens.rows();
    let ce = column_echelon(gens, f, false);
    let mut cols = Vec::with_capacity(m);
    for pc in &ce.pivot_col {
        match pc {
            Some(j) => cols.push(ce.echelon.column(*j)),
            None => {
                let rank = ce.pivot_col.iter().filter(|p| p.is_some()).count();
                return Err(AlgError::RankDeficient { rank, expected: m });
            }
        }
    }
    let mut h = PolyMatrix::from_columns(m, cols)?;
    normalize_triangular(&mut h, f);
    Ok(h)
}

/// Monic pivots, then degree-reduce the entries right of each pivot. Rows are
/// handled bottom-up so later reductions never disturb reduced rows.
fn normalize_triangular<F: Field>(h: &mut PolyMatrix<F::Elem>, f: &F) {
    let m = h.rows();
    for i in 0..m {
        let inv = f.inv(h.get(i, i).leading().expect("nonzero pivot")).expect("unit");
        h.scale_col(i, &inv, f);
    }
    for i in (0..m).rev() {
        let pivot = h.get(i, i).clone();
        for j in i + 1..m {
            let (q, _) = h.get(i, j).div_rem(&pivot, f).expect("nonzero pivot");
            h.add_col_multiple(j, i, &q.neg(f), f);
        }
    }
}

/// Whether `h` already has the canonical Hermite shape.
pub fn is_hermite<F: Field>(h: &PolyMatrix<F::Elem>, f: &F) -> bool {
    if !h.is_square() || !h.is_upper_triangular() {
        return false;
    }
    (0..h.rows()).all(|i| {
        let p = h.get(i, i);
        p.is_monic(f) && (i + 1..h.cols()).all(|j| h.get(i, j).degree() < p.degree())
    })
}

/// Basis of the kernel `{v : a·v = 0}` of a full-row-rank `a`, as columns.
pub(crate) fn kernel_basis<F: Field>(a: &PolyMatrix<F::Elem>, f: &F) -> Result<Vec<Vec<Poly<F::Elem>>>, AlgError> {
    let ce = column_echelon(a, f, true);
    let t = ce.transform.expect("tracked");
    let used: Vec<usize> = ce.pivot_col.iter().flatten().copied().collect();
    if used.len() != a.rows() {
        return Err(AlgError::RankDeficient { rank: used.len(), expected: a.rows() });
    }
    Ok((0..a.cols()).filter(|j| !used.contains(j)).map(|j| t.column(j)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::{PrimeField, Rationals};

    #[test]
    fn everything_collapses_to_identity() {
        let f = Rationals;
        // columns z e1, e1, e2
        let g = PolyMatrix::from_i64_rows(&f, &[&[&[0, 1], &[1], &[]], &[&[], &[], &[1]]]);
        assert_eq!(hermite_basis(&g, &f).unwrap(), PolyMatrix::identity(&f, 2));
    }

    #[test]
    fn scalar_lattice() {
        let f = Rationals;
        let g = PolyMatrix::from_i64_rows(&f, &[&[&[0, 1], &[]], &[&[], &[0, 1]]]);
        assert_eq!(hermite_basis(&g, &f).unwrap(), g);
    }

    #[test]
    fn coprime_generators() {
        // gcd(z-1, z) = 1; the SNF of the generator matrix is [I | 0].
        let f = PrimeField::new(5).unwrap();
        let g = PolyMatrix::from_i64_rows(&f, &[&[&[-1, 1], &[0, 1], &[]], &[&[], &[], &[1]]]);
        assert_eq!(hermite_basis(&g, &f).unwrap(), PolyMatrix::identity(&f, 2));
    }

    #[test]
    fn off_pivot_entries_are_reduced() {
        let f = Rationals;
        // columns (z^2, 0), (z^3 + 1, z): the (0,1) entry reduces mod z^2 to 1.
        let g = PolyMatrix::from_i64_rows(&f, &[&[&[0, 0, 1], &[1, 0, 0, 1]], &[&[], &[0, 1]]]);
        let h = hermite_basis(&g, &f).unwrap();
        assert!(is_hermite(&h, &f));
        assert_eq!(h, PolyMatrix::from_i64_rows(&f, &[&[&[0, 0, 1], &[1]], &[&[], &[0, 1]]]));
        assert_eq!(hermite_basis(&h, &f).unwrap(), h);
    }

    #[test]
    fn rank_deficiency() {
        let f = Rationals;
        let g = PolyMatrix::from_i64_rows(&f, &[&[&[1], &[0, 1]], &[&[], &[]]]);
        assert!(matches!(hermite_basis(&g, &f), Err(AlgError::RankDeficient { rank: 1, expected: 2 })));
    }

    #[test]
    fn kernel_of_stacked_bases() {
        let f = Rationals;
        let a = PolyMatrix::from_i64_rows(&f, &[&[&[0, 1], &[-1]], &[&[1], &[0, -1]]]);
        let wide = a.hconcat(&PolyMatrix::identity(&f, 2)).unwrap();
        let ker = kernel_basis(&wide, &f).unwrap();
        assert_eq!(ker.len(), 2);
        for v in ker {
            let col = PolyMatrix::from_columns(4, alloc::vec![v]).unwrap();
            let prod = wide.mul(&col, &f).unwrap();
            assert!(prod.entries().iter().all(Poly::is_zero));
        }
    }
}
