//! Full-rank `k[z]`-lattices in `k[z]^m`, Hecke types of lattice pairs,
//! triviality and splitting-type tests, and factorization over disjoint
//! point sets.
//!
//! A lattice is stored through its canonical (column Hermite) basis, so two
//! lattices are equal exactly when their stored bases are equal.
//!
//! Splitting types use the convention that `z^a·k[z] ⊂ k[z]` has type `(−a)`:
//! a lattice `L` of colength `mk` in the standard lattice is trivial exactly
//! when its splitting type is the constant vector `(−k, …, −k)`.

mod chain;
mod quotient;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::hash::{Hash, Hasher};

use thiserror::Error;

use crate::exactalg::hermite::kernel_basis;
use crate::exactalg::{
    column_reduce, elementary_divisors, hermite_basis, AlgError, Field, FieldSpec, Poly, PolyMatrix,
};

pub use chain::{ChainFailure, ChainReport, LatticeChain};
pub use quotient::{lift, monomial_vector, MonomialChart, Quotient};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("inner lattice is not contained in outer lattice")]
    NotContained,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("basis is singular or not square")]
    Degenerate,
    #[error("determinant has a factor without roots in the field: {0}")]
    NonlinearFactor(String),
    #[error("colength is {actual}, expected {expected}")]
    ColengthMismatch { expected: usize, actual: usize },
    #[error("point sets overlap")]
    SupportsOverlap,
    #[error("modification at {0} lies outside both point sets")]
    SupportNotCovered(String),
    #[error("lattice is not contained in the standard lattice")]
    NotSublattice,
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// Weakly decreasing integer vector: a dominant coweight of `GL_m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeckeType(Vec<i64>);

impl HeckeType {
    pub fn new(entries: Vec<i64>) -> Option<Self> {
        entries.windows(2).all(|w| w[0] >= w[1]).then_some(HeckeType(entries))
    }

    /// Sorts into weakly decreasing order.
    pub fn sorted(mut entries: Vec<i64>) -> Self {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        HeckeType(entries)
    }

    /// `ω_j = (1^j, 0^{m−j})`.
    pub fn minuscule(m: usize, j: usize) -> Self {
        HeckeType((0..m).map(|i| i64::from(i < j)).collect())
    }

    pub fn zero(m: usize) -> Self {
        HeckeType(alloc::vec![0; m])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

/// Assignment of nonzero Hecke types to points of the affine line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColouredDivisor<E: Ord> {
    assignments: BTreeMap<E, HeckeType>,
}

impl<E: Ord + Clone> ColouredDivisor<E> {
    pub fn new() -> Self {
        ColouredDivisor { assignments: BTreeMap::new() }
    }

    /// Zero types are dropped.
    pub fn insert(&mut self, x: E, t: HeckeType) {
        if t.is_zero() {
            self.assignments.remove(&x);
        } else {
            self.assignments.insert(x, t);
        }
    }

    pub fn get(&self, x: &E) -> Option<&HeckeType> {
        self.assignments.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, &HeckeType)> {
        self.assignments.iter()
    }

    pub fn support(&self) -> BTreeSet<E> {
        self.assignments.keys().cloned().collect()
    }

    pub fn total(&self) -> i64 {
        self.assignments.values().map(HeckeType::total).sum()
    }

    pub fn restrict(&self, points: &BTreeSet<E>) -> Self {
        ColouredDivisor {
            assignments: self
                .assignments
                .iter()
                .filter(|(x, _)| points.contains(x))
                .map(|(x, t)| (x.clone(), t.clone()))
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
}

impl<E: Ord + Clone> Default for ColouredDivisor<E> {
    fn default() -> Self {
        Self::new()
    }
}

/// A full-rank `k[z]`-submodule of `k[z]^m`, held in canonical form.
#[derive(Clone, Debug)]
pub struct Lattice<F: Field> {
    field: F,
    basis: PolyMatrix<F::Elem>,
}

impl<F: Field> PartialEq for Lattice<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.basis == other.basis
    }
}

impl<F: Field> Eq for Lattice<F> {}

impl<F: Field> PartialOrd for Lattice<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field> Ord for Lattice<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .spec()
            .cmp(&other.field.spec())
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

impl<F: Field> Hash for Lattice<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.spec().hash(state);
        self.basis.hash(state);
    }
}

impl<F: Field> Lattice<F> {
    /// `k[z]^m`.
    pub fn standard(field: &F, m: usize) -> Self {
        Lattice { field: field.clone(), basis: PolyMatrix::identity(field, m) }
    }

    /// `p · k[z]^m` for nonzero `p`.
    pub fn scaled_standard(field: &F, m: usize, p: &Poly<F::Elem>) -> Self {
        let monic = p.monic(field);
        let basis = PolyMatrix::diagonal(alloc::vec![monic; m]);
        Lattice { field: field.clone(), basis }
    }

    /// `z^k · k[z]^m`.
    pub fn z_power(field: &F, m: usize, k: usize) -> Self {
        Self::scaled_standard(field, m, &Poly::monomial(field, field.one(), k))
    }

    /// Lattice spanned by the columns of a square nonsingular matrix.
    pub fn from_basis(field: &F, basis: &PolyMatrix<F::Elem>) -> Result<Self, LatticeError> {
        if !basis.is_square() {
            return Err(LatticeError::Degenerate);
        }
        Self::from_generators(field, basis)
    }

    /// Lattice spanned by the columns of an `m × g` generator matrix of rank `m`.
    pub fn from_generators(field: &F, gens: &PolyMatrix<F::Elem>) -> Result<Self, LatticeError> {
        let basis = hermite_basis(gens, field).map_err(|e| match e {
            AlgError::RankDeficient { .. } => LatticeError::Degenerate,
            other => LatticeError::Alg(other),
        })?;
        Ok(Lattice { field: field.clone(), basis })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &PolyMatrix<F::Elem> {
        &self.basis
    }

    /// `deg det` of the basis: colength inside `k[z]^m` when contained in it.
    pub fn det_degree(&self) -> usize {
        (0..self.m()).map(|i| self.basis.get(i, i).degree().unwrap_or(0)).sum()
    }

    /// Monic determinant of the canonical basis.
    pub fn det(&self) -> Poly<F::Elem> {
        (0..self.m()).fold(Poly::one(&self.field), |acc, i| acc.mul(self.basis.get(i, i), &self.field))
    }

    pub fn is_standard(&self) -> bool {
        self.basis == PolyMatrix::identity(&self.field, self.m())
    }

    fn check_compatible(&self, other: &Self) -> Result<(), LatticeError> {
        if self.field != other.field {
            return Err(LatticeError::FieldMismatch(self.field.spec(), other.field.spec()));
        }
        if self.m() != other.m() {
            return Err(LatticeError::RankMismatch(self.m(), other.m()));
        }
        Ok(())
    }

    /// Solves `basis · x = v` over `k[z]` by back substitution along the
    /// triangular canonical basis; `None` when `v ∉ self`.
    pub fn coordinates(&self, v: &[Poly<F::Elem>]) -> Option<Vec<Poly<F::Elem>>> {
        let f = &self.field;
        let m = self.m();
        let mut x: Vec<Poly<F::Elem>> = alloc::vec![Poly::zero(); m];
        for i in (0..m).rev() {
            let mut r = v[i].clone();
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                r = r.sub(&self.basis.get(i, j).mul(xj, f), f);
            }
            x[i] = r.exact_div(self.basis.get(i, i), f)?;
        }
        Some(x)
    }

    pub fn contains_vector(&self, v: &[Poly<F::Elem>]) -> bool {
        v.len() == self.m() && self.coordinates(v).is_some()
    }

    /// Transition matrix `T` with `basis(self) · T = basis(inner)`.
    pub fn transition(&self, inner: &Self) -> Result<PolyMatrix<F::Elem>, LatticeError> {
        self.check_compatible(inner)?;
        let cols = inner
            .basis
            .columns()
            .iter()
            .map(|c| self.coordinates(c).ok_or(LatticeError::NotContained))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMatrix::from_columns(self.m(), cols)?)
    }

    /// Whether `inner ⊆ self`.
    pub fn contains(&self, inner: &Self) -> bool {
        self.transition(inner).is_ok()
    }

    /// `dim_k(self / inner)`.
    pub fn colength(&self, inner: &Self) -> Result<usize, LatticeError> {
        self.transition(inner)?;
        Ok(inner.det_degree() - self.det_degree())
    }

    /// `(z−x)`-adic valuations of the elementary divisors of the transition
    /// matrix, weakly decreasing.
    pub fn hecke_type_at(&self, inner: &Self, x: &F::Elem) -> Result<HeckeType, LatticeError> {
        let t = self.transition(inner)?;
        let divisors = elementary_divisors(&t, &self.field)?;
        Ok(HeckeType::sorted(
            divisors
                .iter()
                .map(|d| d.valuation_at(x, &self.field).unwrap_or(0) as i64)
                .collect(),
        ))
    }

    /// All modification points of `inner ⊆ self` with their Hecke types.
    pub fn divisor_of_pair(&self, inner: &Self) -> Result<ColouredDivisor<F::Elem>, LatticeError> {
        let f = &self.field;
        let t = self.transition(inner)?;
        let divisors = elementary_divisors(&t, f)?;
        let det = divisors.iter().fold(Poly::one(f), |acc, d| acc.mul(d, f));
        let (roots, rest) = det.linear_factors(f);
        if rest.degree() != Some(0) {
            return Err(LatticeError::NonlinearFactor(alloc::format!("{}", rest.display(f))));
        }
        let mut out = ColouredDivisor::new();
        for (x, _) in roots {
            let t = HeckeType::sorted(
                divisors.iter().map(|d| d.valuation_at(&x, f).unwrap_or(0) as i64).collect(),
            );
            out.insert(x, t);
        }
        Ok(out)
    }

    /// Whether the classes of `z^i e_j` (`0 ≤ i < k`) form a basis of
    /// `k[z]^m / self`. Requires colength `m·k` in the standard lattice.
    pub fn quotient_basis_trivial(&self, k: usize) -> Result<bool, LatticeError> {
        Ok(MonomialChart::new(self, k)?.is_some())
    }

    /// Grothendieck splitting type `(−c_1, …, −c_m)` sorted decreasing, `c_i` the
    /// column degrees of a column-reduced basis.
    pub fn splitting_type(&self) -> Vec<i64> {
        let (_, degs) = column_reduce(&self.basis, &self.field).expect("lattice bases are nonsingular");
        let mut out: Vec<i64> = degs.iter().map(|&d| -(d as i64)).collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_compatible(other)?;
        Self::from_generators(&self.field, &self.basis.hconcat(&other.basis)?)
    }

    /// Module intersection, via the kernel of `[B_1 | −B_2]`.
    pub fn intersect(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_compatible(other)?;
        let f = &self.field;
        let m = self.m();
        let neg = other.basis.scale(&Poly::constant(f, f.neg(&f.one())), f);
        let stacked = self.basis.hconcat(&neg)?;
        let kernel = kernel_basis(&stacked, f)?;
        let top: Vec<Vec<Poly<F::Elem>>> = kernel.into_iter().map(|mut v| {
            v.truncate(m);
            v
        }).collect();
        let coeffs = PolyMatrix::from_columns(m, top)?;
        Self::from_generators(f, &self.basis.mul(&coeffs, f)?)
    }

    /// `p · self`.
    pub fn scale(&self, p: &Poly<F::Elem>) -> Result<Self, LatticeError> {
        Self::from_generators(&self.field, &self.basis.scale(p, &self.field))
    }

    /// Splits `self ⊆ k[z]^m` into the parts supported on `s1` and `s2`:
    /// `L⁽ⁱ⁾ = L + f_i^c·k[z]^m`, `f_i = Π_{x∈S_i}(z − x)`, `c` the colength.
    pub fn factorize(
        &self,
        s1: &BTreeSet<F::Elem>,
        s2: &BTreeSet<F::Elem>,
    ) -> Result<(Self, Self), LatticeError> {
        let f = &self.field;
        let m = self.m();
        let std = Self::standard(f, m);
        if !std.contains(self) {
            return Err(LatticeError::NotSublattice);
        }
        if s1.intersection(s2).next().is_some() {
            return Err(LatticeError::SupportsOverlap);
        }
        let div = std.divisor_of_pair(self)?;
        if let Some(x) = div.support().into_iter().find(|x| !s1.contains(x) && !s2.contains(x)) {
            return Err(LatticeError::SupportNotCovered(f.elem_string(&x)));
        }
        let c = self.det_degree();
        let part = |s: &BTreeSet<F::Elem>| -> Result<Self, LatticeError> {
            let fs = s.iter().fold(Poly::one(f), |acc, x| acc.mul(&Poly::linear(f, x), f));
            self.sum(&Self::scaled_standard(f, m, &fs.pow(c, f)))
        };
        Ok((part(s1)?, part(s2)?))
    }
}
