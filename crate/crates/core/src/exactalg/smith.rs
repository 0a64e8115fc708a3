//! Smith normal form over `k[z]`.

use alloc::vec::Vec;

use super::field::Field;
use super::poly::Poly;
use super::polymatrix::PolyMatrix;
use super::AlgError;

/// `u · m · v = d` with `u`, `v` unimodular and `d = diag(d_1, …, d_n)`,
/// each `d_i` monic and `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<E> {
    pub u: PolyMatrix<E>,
    pub d: PolyMatrix<E>,
    pub v: PolyMatrix<E>,
}

impl<E: Clone + PartialEq> SmithForm<E> {
    pub fn divisors(&self) -> Vec<Poly<E>> {
        (0..self.d.rows()).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Position of the lowest-degree nonzero entry in the trailing block starting at `(t, t)`.
fn min_degree_entry<E: Clone + PartialEq>(a: &PolyMatrix<E>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            if let Some(d) = a.get(i, j).degree() {
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn smith_normal_form<F: Field>(m: &PolyMatrix<F::Elem>, f: &F) -> Result<SmithForm<F::Elem>, AlgError> {
    if !m.is_square() {
        return Err(AlgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut u = PolyMatrix::identity(f, n);
    let mut v = PolyMatrix::identity(f, n);

    for t in 0..n {
        loop {
            let Some((pi, pj)) = min_degree_entry(&a, t) else {
                return Err(AlgError::Singular);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..n {
                let (q, r) = a.get(i, t).div_rem(&pivot, f).expect("nonzero pivot");
                let negq = q.neg(f);
                a.add_row_multiple(i, t, &negq, f);
                u.add_row_multiple(i, t, &negq, f);
                clean &= r.is_zero();
            }
            for j in t + 1..n {
                let (q, r) = a.get(t, j).div_rem(&pivot, f).expect("nonzero pivot");
                let negq = q.neg(f);
                a.add_col_multiple(j, t, &negq, f);
                v.add_col_multiple(j, t, &negq, f);
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // The pivot must divide the whole trailing block; otherwise pull the
            // offending row into the pivot row and go again.
            let offending = (t + 1..n)
                .find(|&i| (t + 1..n).any(|j| !pivot.divides(a.get(i, j), f)));
            match offending {
                Some(i) => {
                    let one = Poly::one(f);
                    a.add_row_multiple(t, i, &one, f);
                    u.add_row_multiple(t, i, &one, f);
                }
                None => break,
            }
        }
        let lead = a.get(t, t).leading().cloned().expect("nonzero pivot");
        let inv = f.inv(&lead).expect("nonzero");
        a.scale_row(t, &inv, f);
        u.scale_row(t, &inv, f);
    }
    Ok(SmithForm { u, d: a, v })
}

/// Elementary divisors only.
pub fn elementary_divisors<F: Field>(m: &PolyMatrix<F::Elem>, f: &F) -> Result<Vec<Poly<F::Elem>>, AlgError> {
    smith_normal_form(m, f).map(|s| s.divisors())
}
