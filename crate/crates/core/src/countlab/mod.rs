//! Point counts of lattice-chain fibers over prime fields, the matching
//! counts on the slice side, polynomial fits in `q`, and the cross-model
//! verification suites.

mod fit;
mod slices;
pub mod suites;

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::exactalg::{AlgError, Field, Matrix, Poly, PolyMatrix};
use crate::lattice::{Lattice, LatticeChain, LatticeError};
use crate::reptheory::{max_weight, RepError, WeightSeq};
use crate::slice::SliceError;

pub use fit::{fit_q_polynomial, Fit, FitError, QPolynomial};
pub use slices::{count_slice_fiber, count_slice_fiber_in, SliceCatalog};

/// Witness lists are dropped once a count passes this size.
pub const WITNESS_LIMIT: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("enumeration needs a finite field")]
    InfiniteField,
    #[error("{points} points for {weights} weights")]
    LengthMismatch { points: usize, weights: usize },
    #[error("empty weight sequence")]
    Empty,
    #[error("total weight {total} is not a multiple of m = {m}")]
    NotRectangular { total: usize, m: usize },
    #[error("step size {j} out of range for m = {m}")]
    StepOutOfRange { j: usize, m: usize },
    #[error("the slice model only counts the trivial end condition")]
    WrongEndCondition,
    #[error("slice catalog is for (m, k) = ({0}, {1})")]
    CatalogMismatch(usize, usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EndCondition {
    Any,
    Trivial,
    ExactZk,
}

impl EndCondition {
    pub fn name(self) -> &'static str {
        match self {
            EndCondition::Any => "any",
            EndCondition::Trivial => "trivial",
            EndCondition::ExactZk => "exact-zk",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "any" => Some(EndCondition::Any),
            "trivial" => Some(EndCondition::Trivial),
            "exact-zk" => Some(EndCondition::ExactZk),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberQuery<F: Field> {
    field: F,
    weights: WeightSeq,
    points: Vec<F::Elem>,
    end: EndCondition,
}

impl<F: Field> FiberQuery<F> {
    pub fn new(field: F, weights: WeightSeq, points: Vec<F::Elem>, end: EndCondition) -> Result<Self, CountError> {
        if field.order().is_none() {
            return Err(CountError::InfiniteField);
        }
        if weights.is_empty() {
            return Err(CountError::Empty);
        }
        if points.len() != weights.len() {
            return Err(CountError::LengthMismatch { points: points.len(), weights: weights.len() });
        }
        if end != EndCondition::Any && weights.k().is_none() {
            return Err(CountError::NotRectangular { total: weights.total(), m: weights.m() });
        }
        Ok(FiberQuery { field, weights, points, end })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.weights.m()
    }

    /// `Σπ / m` when it is an integer.
    pub fn k(&self) -> Option<usize> {
        self.weights.k()
    }

    pub fn weights(&self) -> &WeightSeq {
        &self.weights
    }

    pub fn points(&self) -> &[F::Elem] {
        &self.points
    }

    pub fn end(&self) -> EndCondition {
        self.end
    }

    pub fn with_end(&self, end: EndCondition) -> Result<Self, CountError> {
        Self::new(self.field.clone(), self.weights.clone(), self.points.clone(), end)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport<W> {
    pub count: u64,
    /// Present when requested and the count stayed within [`WITNESS_LIMIT`].
    pub witnesses: Option<Vec<W>>,
    pub witnesses_dropped: bool,
}

impl<W> CountReport<W> {
    /// Sums partial counts in the given order.
    pub fn merge(parts: Vec<Self>) -> Self {
        let mut c = Collector::new(parts.iter().any(|p| p.witnesses.is_some() || p.witnesses_dropped));
        for p in parts {
            c.dropped |= p.witnesses_dropped;
            match p.witnesses {
                Some(ws) => {
                    for w in ws {
                        c.push(|| w);
                    }
                }
                None => c.count += p.count,
            }
        }
        c.finish()
    }
}

struct Collector<W> {
    count: u64,
    keep: bool,
    items: Vec<W>,
    dropped: bool,
}

impl<W> Collector<W> {
    fn new(keep: bool) -> Self {
        Collector { count: 0, keep, items: Vec::new(), dropped: false }
    }

    fn push(&mut self, make: impl FnOnce() -> W) {
        self.count += 1;
        if self.keep && !self.dropped {
            if self.items.len() < WITNESS_LIMIT {
                self.items.push(make());
            } else {
                self.dropped = true;
                self.items = Vec::new();
            }
        }
    }

    fn finish(self) -> CountReport<W> {
        let witnesses = (self.keep && !self.dropped).then_some(self.items);
        CountReport { count: self.count, witnesses, witnesses_dropped: self.dropped }
    }
}

/// Bases (as reduced row echelon rows) of all `r`-dimensional subspaces of `k^d`.
pub fn subspaces<F: Field>(f: &F, d: usize, r: usize) -> Result<Vec<Vec<Vec<F::Elem>>>, CountError> {
    let elems = f.elements().ok_or(CountError::InfiniteField)?;
    let mut out = Vec::new();
    if r > d {
        return Ok(out);
    }
    for pivots in crate::reptheory::subsets(d, r) {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (p + 1..d).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let mut digits = alloc::vec![0usize; free.len()];
        loop {
            let mut rows = alloc::vec![alloc::vec![f.zero(); d]; r];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = f.one();
            }
            for (&(i, c), &dg) in free.iter().zip(&digits) {
                rows[i][c] = elems[dg].clone();
            }
            out.push(rows);
            if !advance(&mut digits, elems.len()) {
                break;
            }
        }
    }
    Ok(out)
}

/// Odometer step; `false` after the last tuple.
pub(crate) fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// All tuples in `k^n`, first coordinate varying slowest.
pub fn all_configs<F: Field>(f: &F, n: usize) -> Result<Vec<Vec<F::Elem>>, CountError> {
    let elems = f.elements().ok_or(CountError::InfiniteField)?;
    let mut out = Vec::new();
    let mut digits = alloc::vec![0usize; n];
    loop {
        out.push(digits.iter().rev().map(|&d| elems[d].clone()).collect());
        if !advance(&mut digits, elems.len()) {
            break;
        }
    }
    Ok(out)
}

/// All `L'` with `(z−x)L ⊆ L' ⊆ L` of colength `j`, one per codimension-`j`
/// subspace of `L/(z−x)L`.
pub fn step_choices<F: Field>(l: &Lattice<F>, x: &F::Elem, j: usize) -> Result<Vec<Lattice<F>>, CountError> {
    let f = l.field();
    let m = l.m();
    if j == 0 || j > max_weight(m.max(1)) {
        return Err(CountError::StepOutOfRange { j, m });
    }
    let lin = Poly::linear(f, x);
    let cols = l.basis().columns();
    let scaled: Vec<Vec<Poly<F::Elem>>> =
        cols.iter().map(|c| c.iter().map(|p| p.mul(&lin, f)).collect()).collect();
    let mut out = Vec::new();
    for basis in subspaces(f, m, m - j)? {
        let mut gens = scaled.clone();
        for v in &basis {
            gens.push(combine(f, &cols, v));
        }
        out.push(Lattice::from_generators(f, &PolyMatrix::from_columns(m, gens)?)?);
    }
    Ok(out)
}

fn combine<F: Field>(f: &F, cols: &[Vec<Poly<F::Elem>>], coeffs: &[F::Elem]) -> Vec<Poly<F::Elem>> {
    let m = cols.first().map_or(0, |c| c.len());
    let mut acc = alloc::vec![Poly::zero(); m];
    for (c, a) in cols.iter().zip(coeffs) {
        if f.is_zero(a) {
            continue;
        }
        for (t, p) in acc.iter_mut().zip(c) {
            *t = t.add(&p.scale(a, f), f);
        }
    }
    acc
}

struct ChainWalk<'a, F: Field> {
    query: &'a FiberQuery<F>,
    zk: Option<Lattice<F>>,
}

impl<'a, F: Field> ChainWalk<'a, F> {
    fn new(query: &'a FiberQuery<F>) -> Self {
        let zk = match (query.end, query.k()) {
            (EndCondition::ExactZk, Some(k)) => Some(Lattice::z_power(&query.field, query.m(), k)),
            _ => None,
        };
        ChainWalk { query, zk }
    }

    fn choices(&self, prev: &Lattice<F>, step: usize) -> Result<Vec<Lattice<F>>, CountError> {
        let q = self.query;
        let mut out = step_choices(prev, &q.points[step], q.weights.entries()[step])?;
        if let Some(t) = &self.zk {
            out.retain(|l| l.contains(t));
        }
        Ok(out)
    }

    fn accept(&self, end: &Lattice<F>) -> Result<bool, CountError> {
        Ok(match self.query.end {
            EndCondition::Any => true,
            EndCondition::Trivial => end.quotient_basis_trivial(self.query.k().expect("checked"))?,
            EndCondition::ExactZk => Some(end) == self.zk.as_ref(),
        })
    }

    fn walk(&self, prefix: &mut Vec<Lattice<F>>, out: &mut Collector<LatticeChain<F>>) -> Result<(), CountError> {
        let step = prefix.len();
        let q = self.query;
        if step == q.weights.len() {
            if self.accept(prefix.last().expect("nonempty"))? {
                out.push(|| LatticeChain {
                    m: q.m(),
                    points: q.points.clone(),
                    types: q.weights.entries().to_vec(),
                    lattices: prefix.clone(),
                });
            }
            return Ok(());
        }
        let prev = prefix.last().cloned().unwrap_or_else(|| Lattice::standard(&q.field, q.m()));
        for l in self.choices(&prev, step)? {
            prefix.push(l);
            self.walk(prefix, out)?;
            prefix.pop();
        }
        Ok(())
    }
}

/// Candidates for `L_1`, the split points for parallel enumeration.
pub fn first_steps<F: Field>(query: &FiberQuery<F>) -> Result<Vec<Lattice<F>>, CountError> {
    ChainWalk::new(query).choices(&Lattice::standard(&query.field, query.m()), 0)
}

/// Chains of the fiber whose first lattice is `first`.
pub fn count_chain_fiber_from<F: Field>(
    query: &FiberQuery<F>,
    first: &Lattice<F>,
    witnesses: bool,
) -> Result<CountReport<LatticeChain<F>>, CountError> {
    let walk = ChainWalk::new(query);
    let mut out = Collector::new(witnesses);
    walk.walk(&mut alloc::vec![first.clone()], &mut out)?;
    Ok(out.finish())
}

pub fn count_chain_fiber<F: Field>(
    query: &FiberQuery<F>,
    witnesses: bool,
) -> Result<CountReport<LatticeChain<F>>, CountError> {
    let walk = ChainWalk::new(query);
    let mut out = Collector::new(witnesses);
    walk.walk(&mut Vec::new(), &mut out)?;
    Ok(out.finish())
}

/// `∏ [m choose π_i]_q`, the size of the unrestricted fiber.
pub fn regular_count(weights: &WeightSeq, q: u64) -> Result<u128, CountError> {
    let mut acc: u128 = 1;
    for &w in weights.entries() {
        let g = crate::reptheory::gaussian_binomial(weights.m(), w, q)?;
        acc = acc.checked_mul(g).ok_or(RepError::Overflow)?;
    }
    Ok(acc)
}

/// A chain with the given types and points, each step cut out by a random
/// subspace of `L/(z−x)L`.
pub fn random_chain<F: Field, R: Rng + ?Sized>(
    f: &F,
    m: usize,
    weights: &[usize],
    points: &[F::Elem],
    rng: &mut R,
) -> Result<LatticeChain<F>, CountError> {
    let mut prev = Lattice::standard(f, m);
    let mut lattices = Vec::with_capacity(weights.len());
    for (&j, x) in weights.iter().zip(points) {
        if j == 0 || j > max_weight(m.max(1)) {
            return Err(CountError::StepOutOfRange { j, m });
        }
        let keep = m - j;
        let basis = loop {
            let rows: Vec<Vec<F::Elem>> = (0..keep).map(|_| (0..m).map(|_| f.sample(rng, 3)).collect()).collect();
            if keep == 0 || Matrix::from_rows(rows.clone())?.rank(f) == keep {
                break rows;
            }
        };
        let lin = Poly::linear(f, x);
        let cols = prev.basis().columns();
        let mut gens: Vec<Vec<Poly<F::Elem>>> =
            cols.iter().map(|c| c.iter().map(|p| p.mul(&lin, f)).collect()).collect();
        for v in &basis {
            gens.push(combine(f, &cols, v));
        }
        let l = Lattice::from_generators(f, &PolyMatrix::from_columns(m, gens)?)?;
        lattices.push(l.clone());
        prev = l;
    }
    Ok(LatticeChain { m, points: points.to_vec(), types: weights.to_vec(), lattices })
}

pub(crate) fn fmt_points<F: Field>(f: &F, points: &[F::Elem]) -> String {
    let parts: Vec<String> = points.iter().map(|x| f.elem_string(x)).collect();
    alloc::format!("({})", parts.join(","))
}

#[cfg(test)]
mod tests;
