//! Coordinates on `k[z]^m / L` through the Smith presentation of `L`.

use alloc::vec;
use alloc::vec::Vec;

use super::{Lattice, LatticeError};
use crate::exactalg::{smith_normal_form, Field, Matrix, Poly, PolyMatrix};

/// `k[z]^m / L ≅ ⊕ k[z]/(d_i)` where `U·B·V = diag(d_i)`; the class of `v` has
/// coordinates `(U v)_i mod d_i`, each expanded in `1, z, …, z^{deg d_i − 1}`.
#[derive(Clone, Debug)]
pub struct Quotient<F: Field> {
    field: F,
    u: PolyMatrix<F::Elem>,
    divisors: Vec<Poly<F::Elem>>,
    offsets: Vec<usize>,
    dim: usize,
}

impl<F: Field> Quotient<F> {
    /// Requires `lattice ⊆ k[z]^m`.
    pub fn new(lattice: &Lattice<F>) -> Result<Self, LatticeError> {
        let f = lattice.field();
        if !Lattice::standard(f, lattice.m()).contains(lattice) {
            return Err(LatticeError::NotSublattice);
        }
        let snf = smith_normal_form(lattice.basis(), f)?;
        let divisors = snf.divisors();
        let mut offsets = Vec::with_capacity(divisors.len());
        let mut dim = 0;
        for d in &divisors {
            offsets.push(dim);
            dim += d.degree().expect("nonzero divisor");
        }
        Ok(Quotient { field: f.clone(), u: snf.u, divisors, offsets, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.divisors.len()
    }

    pub fn coords(&self, v: &[Poly<F::Elem>]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim];
        for (i, d) in self.divisors.iter().enumerate() {
            let deg = d.degree().expect("nonzero divisor");
            if deg == 0 {
                continue;
            }
            let uv = (0..self.m()).fold(Poly::zero(), |acc, j| acc.add(&self.u.get(i, j).mul(&v[j], f), f));
            let r = uv.rem(d, f).expect("nonzero divisor");
            for t in 0..deg {
                out[self.offsets[i] + t] = r.coeff(f, t);
            }
        }
        out
    }
}

/// `z^i e_j` as a vector of polynomials.
pub fn monomial_vector<F: Field>(f: &F, m: usize, i: usize, j: usize) -> Vec<Poly<F::Elem>> {
    let mut v = vec![Poly::zero(); m];
    v[j] = Poly::monomial(f, f.one(), i);
    v
}

/// Coordinates on `k[z]^m / L` in the monomial basis
/// `e_1, …, e_m, z e_1, …, z^{k−1} e_m` (index `i·m + j` for `z^i e_{j+1}`),
/// available exactly when that family is a basis.
#[derive(Clone, Debug)]
pub struct MonomialChart<F: Field> {
    field: F,
    k: usize,
    quotient: Quotient<F>,
    to_monomial: Matrix<F::Elem>,
}

impl<F: Field> MonomialChart<F> {
    /// `Ok(None)` when the monomials are not a basis of the quotient.
    pub fn new(lattice: &Lattice<F>, k: usize) -> Result<Option<Self>, LatticeError> {
        let f = lattice.field();
        let m = lattice.m();
        let quotient = Quotient::new(lattice)?;
        if quotient.dim() != m * k {
            return Err(LatticeError::ColengthMismatch { expected: m * k, actual: quotient.dim() });
        }
        let columns: Vec<Vec<F::Elem>> = (0..k)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| quotient.coords(&monomial_vector(f, m, i, j)))
            .collect();
        let from_monomial = Matrix::from_columns(f, m * k, &columns)?;
        Ok(from_monomial
            .inverse(f)
            .map(|to_monomial| MonomialChart { field: f.clone(), k, quotient, to_monomial }))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.quotient.m()
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Monomial coordinates of the class of `v`.
    pub fn coords(&self, v: &[Poly<F::Elem>]) -> Vec<F::Elem> {
        self.to_monomial.mul_vec(&self.quotient.coords(v), &self.field)
    }

    /// Matrix of multiplication by `z` on the quotient.
    pub fn multiplication_matrix(&self) -> Matrix<F::Elem> {
        let f = &self.field;
        let m = self.m();
        let columns: Vec<Vec<F::Elem>> = (0..self.k)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| self.coords(&monomial_vector(f, m, i + 1, j)))
            .collect();
        Matrix::from_columns(f, self.dim(), &columns).expect("square")
    }
}

/// The degree-`< k` polynomial vector `Σ c_{i·m+j} z^i e_j`.
pub fn lift<F: Field>(f: &F, m: usize, coords: &[F::Elem]) -> Vec<Poly<F::Elem>> {
    let k = coords.len() / m;
    (0..m)
        .map(|j| Poly::from_coeffs(f, (0..k).map(|i| coords[i * m + j].clone()).collect()))
        .collect()
}
