use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{advance, subspaces, Collector, CountError, CountReport, EndCondition, FiberQuery};
use crate::exactalg::{Field, Matrix, Poly, Subspace};
use crate::slice::{Flag, SliceMatrix, SlicePoint};

/// Every matrix of `S_{m,k}(F_q)`, bucketed by characteristic polynomial.
#[derive(Clone, Debug)]
pub struct SliceCatalog<F: Field> {
    field: F,
    m: usize,
    k: usize,
    by_charpoly: BTreeMap<Poly<F::Elem>, Vec<SliceMatrix<F::Elem>>>,
    size: u64,
}

impl<F: Field> SliceCatalog<F> {
    /// Enumerates `q^{m·N}` matrices; callers bound `q`, `m`, `k` first.
    pub fn new(field: &F, m: usize, k: usize) -> Result<Self, CountError> {
        let elems = field.elements().ok_or(CountError::InfiniteField)?;
        let n = m * k;
        let mut digits = alloc::vec![0usize; n * m];
        let mut by_charpoly: BTreeMap<Poly<F::Elem>, Vec<SliceMatrix<F::Elem>>> = BTreeMap::new();
        let mut size = 0;
        loop {
            let mut last = Matrix::zeros(field, n, m);
            for (idx, &d) in digits.iter().enumerate() {
                last.set(idx / m, idx % m, elems[d].clone());
            }
            let y = SliceMatrix::from_last_block(field, m, k, &last)?;
            let cp = y.matrix().charpoly(field)?;
            by_charpoly.entry(cp).or_default().push(y);
            size += 1;
            if !advance(&mut digits, elems.len()) {
                break;
            }
        }
        Ok(SliceCatalog { field: field.clone(), m, k, by_charpoly, size })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn with_charpoly(&self, cp: &Poly<F::Elem>) -> &[SliceMatrix<F::Elem>] {
        self.by_charpoly.get(cp).map_or(&[], |v| v.as_slice())
    }

    fn field(&self) -> &F {
        &self.field
    }
}

/// Counts `(Y, W_•)` with `Y ∈ S_{m,k}` of characteristic polynomial
/// `∏(z − x_i)^{π_i}` and `W_•` a compatible flag.
pub fn count_slice_fiber<F: Field>(
    query: &FiberQuery<F>,
    witnesses: bool,
) -> Result<CountReport<SlicePoint<F::Elem>>, CountError> {
    if query.end() != EndCondition::Trivial {
        return Err(CountError::WrongEndCondition);
    }
    let k = query.k().expect("checked by the query");
    let catalog = SliceCatalog::new(query.field(), query.m(), k)?;
    count_slice_fiber_in(&catalog, query, witnesses)
}

pub fn count_slice_fiber_in<F: Field>(
    catalog: &SliceCatalog<F>,
    query: &FiberQuery<F>,
    witnesses: bool,
) -> Result<CountReport<SlicePoint<F::Elem>>, CountError> {
    if query.end() != EndCondition::Trivial {
        return Err(CountError::WrongEndCondition);
    }
    let f = catalog.field();
    if query.m() != catalog.m || query.k() != Some(catalog.k) {
        return Err(CountError::CatalogMismatch(catalog.m, catalog.k));
    }
    let target = query
        .points()
        .iter()
        .zip(query.weights().entries())
        .fold(Poly::one(f), |acc, (x, &e)| acc.mul(&Poly::linear(f, x).pow(e, f), f));
    let mut out = Collector::new(witnesses);
    let n_amb = catalog.m * catalog.k;
    for y in catalog.with_charpoly(&target) {
        let mut chosen = Vec::with_capacity(query.weights().len());
        flags(f, y, query, &Subspace::zero(n_amb), &mut chosen, &mut out)?;
    }
    Ok(out.finish())
}

fn flags<F: Field>(
    f: &F,
    y: &SliceMatrix<F::Elem>,
    query: &FiberQuery<F>,
    prev: &Subspace<F::Elem>,
    chosen: &mut Vec<Subspace<F::Elem>>,
    out: &mut Collector<SlicePoint<F::Elem>>,
) -> Result<(), CountError> {
    let n = query.weights().len();
    let i = chosen.len() + 1;
    if i > n {
        out.push(|| SlicePoint {
            y: y.clone(),
            flag: Flag { subspaces: chosen.clone(), jumps: query.weights().clone() },
            eigenvalues: query.points().to_vec(),
        });
        return Ok(());
    }
    let x = &query.points()[n - i];
    let jump = query.weights().entries()[n - i];
    // W_i lies between W_{i−1} and {v : (Y − x)v ∈ W_{i−1}}
    let room = prev.preimage(&y.matrix().shift_diagonal(x, f), f)?;
    let comp = prev.complement_in(&room, f);
    for u in subspaces(f, comp.len(), jump)? {
        let extra: Vec<Vec<F::Elem>> = u
            .iter()
            .map(|coeffs| {
                let mut v = alloc::vec![f.zero(); prev.ambient()];
                for (c, a) in comp.iter().zip(coeffs) {
                    for (t, s) in v.iter_mut().zip(c) {
                        *t = f.add(t, &f.mul(a, s));
                    }
                }
                v
            })
            .collect();
        let w = prev.sum(&Subspace::span(f, prev.ambient(), &extra)?, f)?;
        chosen.push(w.clone());
        flags(f, y, query, &w, chosen, out)?;
        chosen.pop();
    }
    Ok(())
}
