//! The slice `S_{m,k}` of `N × N` matrices (`N = mk`) with identity blocks on
//! the first block subdiagonal, flags of `Y`-stable subspaces, and the
//! bijection between slice points and lattice chains ending at a lattice
//! whose quotient has the monomial basis.
//!
//! Coordinates on `k^N` follow the order `e_1, …, e_m, z e_1, …, z^{k−1} e_m`,
//! so `z^i e_{j+1}` has index `i·m + j`.
//!
//! Flags are indexed against the chain: `W_i` is the image of `L_{n−i}`, so
//! `W_i / W_{i−1}` has dimension `π_{n−i+1}` and `Y` acts on it by `x_{n−i+1}`.

use alloc::vec::Vec;

use thiserror::Error;

use crate::exactalg::{AlgError, Field, Matrix, Poly, PolyMatrix, Subspace};
use crate::lattice::{lift, monomial_vector, ChainReport, Lattice, LatticeChain, LatticeError, MonomialChart};
use crate::reptheory::{RepError, WeightSeq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SliceError {
    #[error("matrix is {rows}x{cols}, expected {n}x{n}")]
    Shape { rows: usize, cols: usize, n: usize },
    #[error("m and k must be positive")]
    ZeroSize,
    #[error("chain is invalid: {0:?}")]
    InvalidChain(ChainReport),
    #[error("slice point is invalid: {0:?}")]
    InvalidPoint(PointReport),
    #[error("total colength {total} is not a multiple of m = {m}")]
    NotRectangular { total: usize, m: usize },
    #[error("the monomials do not form a basis of the quotient by the last lattice")]
    NotTrivial,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SliceMatrix<E> {
    m: usize,
    k: usize,
    matrix: Matrix<E>,
}

impl<E: Clone + PartialEq> SliceMatrix<E> {
    /// Wraps an `mk × mk` matrix; the block pattern is checked by [`validate_slice`].
    pub fn new(m: usize, k: usize, matrix: Matrix<E>) -> Result<Self, SliceError> {
        if m == 0 || k == 0 {
            return Err(SliceError::ZeroSize);
        }
        let n = m * k;
        if matrix.rows() != n || matrix.cols() != n {
            return Err(SliceError::Shape { rows: matrix.rows(), cols: matrix.cols(), n });
        }
        Ok(SliceMatrix { m, k, matrix })
    }

    /// Slice matrix whose last block column is the `mk × m` matrix `last`.
    pub fn from_last_block<F: Field<Elem = E>>(f: &F, m: usize, k: usize, last: &Matrix<E>) -> Result<Self, SliceError> {
        let mut y = base_point(f, m, k)?;
        let n = m * k;
        if last.rows() != n || last.cols() != m {
            return Err(SliceError::Shape { rows: last.rows(), cols: last.cols(), n });
        }
        for r in 0..n {
            for c in 0..m {
                y.matrix.set(r, (k - 1) * m + c, last.get(r, c).clone());
            }
        }
        Ok(y)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.m * self.k
    }

    pub fn matrix(&self) -> &Matrix<E> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<E> {
        self.matrix
    }
}

/// `E_{m,k}`: identity blocks below the diagonal, zero last block column.
pub fn base_point<F: Field>(f: &F, m: usize, k: usize) -> Result<SliceMatrix<F::Elem>, SliceError> {
    if m == 0 || k == 0 {
        return Err(SliceError::ZeroSize);
    }
    let n = m * k;
    let mut matrix = Matrix::zeros(f, n, n);
    for i in 0..n.saturating_sub(m) {
        matrix.set(i + m, i, f.one());
    }
    Ok(SliceMatrix { m, k, matrix })
}

pub fn validate_slice<F: Field>(f: &F, y: &SliceMatrix<F::Elem>) -> bool {
    let (m, k) = (y.m, y.k);
    let n = m * k;
    let last = (k - 1) * m;
    (0..n).all(|r| {
        (0..last).all(|c| {
            let want = if r == c + m { f.one() } else { f.zero() };
            *y.matrix.get(r, c) == want
        })
    })
}

/// `W_1 ⊂ … ⊂ W_n = k^N` with `jumps` the chain-ordered weights `π`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flag<E> {
    pub subspaces: Vec<Subspace<E>>,
    pub jumps: WeightSeq,
}

impl<E: Clone + PartialEq> Flag<E> {
    /// `dim W_i − dim W_{i−1}`, which should be `π_{n−i+1}`.
    pub fn expected_jump(&self, i: usize) -> usize {
        let n = self.jumps.len();
        self.jumps.entries()[n - i]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlicePoint<E> {
    pub y: SliceMatrix<E>,
    pub flag: Flag<E>,
    /// `x_1, …, x_n` in chain order.
    pub eigenvalues: Vec<E>,
}

/// One failed slice-point condition; `index` is the 1-based flag index `i` of `W_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointFailure {
    NotInSlice,
    RankMismatch { jumps_m: usize, slice_m: usize },
    LengthMismatch { subspaces: usize, jumps: usize, eigenvalues: usize },
    AmbientMismatch { index: usize },
    NotIncreasing { index: usize },
    WrongJump { index: usize, expected: usize, actual: usize },
    NotFull,
    NotStable { index: usize },
    NotScalar { index: usize },
    CharpolyMismatch,
}

impl core::fmt::Display for PointFailure {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PointFailure::NotInSlice => write!(f, "Y does not have the slice block pattern"),
            PointFailure::RankMismatch { jumps_m, slice_m } => {
                write!(f, "weights are for m = {jumps_m} but Y has m = {slice_m}")
            }
            PointFailure::LengthMismatch { subspaces, jumps, eigenvalues } => write!(
                f,
                "length mismatch: {subspaces} subspaces, {jumps} weights, {eigenvalues} eigenvalues"
            ),
            PointFailure::AmbientMismatch { index } => write!(f, "W_{index} lives in the wrong ambient space"),
            PointFailure::NotIncreasing { index } => write!(f, "W_{} is not contained in W_{index}", index - 1),
            PointFailure::WrongJump { index, expected, actual } => {
                write!(f, "W_{index} has jump {actual}, expected {expected}")
            }
            PointFailure::NotFull => write!(f, "last subspace is not the whole space"),
            PointFailure::NotStable { index } => write!(f, "W_{index} is not Y-stable"),
            PointFailure::NotScalar { index } => {
                write!(f, "Y does not act on W_{index}/W_{} by the expected scalar", index - 1)
            }
            PointFailure::CharpolyMismatch => write!(f, "characteristic polynomial does not match the eigenvalues"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointReport {
    pub failures: Vec<PointFailure>,
}

impl PointReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn validate_point<F: Field>(f: &F, p: &SlicePoint<F::Elem>) -> PointReport {
    let mut failures = Vec::new();
    let y = &p.y;
    let n_amb = y.n();
    if !validate_slice(f, y) {
        failures.push(PointFailure::NotInSlice);
    }
    if p.flag.jumps.m() != y.m {
        failures.push(PointFailure::RankMismatch { jumps_m: p.flag.jumps.m(), slice_m: y.m });
    }
    let n = p.flag.jumps.len();
    if p.flag.subspaces.len() != n || p.eigenvalues.len() != n {
        failures.push(PointFailure::LengthMismatch {
            subspaces: p.flag.subspaces.len(),
            jumps: n,
            eigenvalues: p.eigenvalues.len(),
        });
        return PointReport { failures };
    }
    if let Some(i) = p.flag.subspaces.iter().position(|w| w.ambient() != n_amb) {
        failures.push(PointFailure::AmbientMismatch { index: i + 1 });
        return PointReport { failures };
    }
    let mut prev = Subspace::zero(n_amb);
    for (i0, w) in p.flag.subspaces.iter().enumerate() {
        let i = i0 + 1;
        if !prev.is_subspace_of(w, f) {
            failures.push(PointFailure::NotIncreasing { index: i });
        }
        let expected = p.flag.expected_jump(i);
        let actual = w.dim() as isize - prev.dim() as isize;
        if actual != expected as isize {
            failures.push(PointFailure::WrongJump { index: i, expected, actual: actual.max(0) as usize });
        }
        if !w.basis().iter().all(|v| w.contains(&y.matrix.mul_vec(v, f), f)) {
            failures.push(PointFailure::NotStable { index: i });
        } else {
            let x = &p.eigenvalues[n - i];
            let shifted = y.matrix.shift_diagonal(x, f);
            if !w.basis().iter().all(|v| prev.contains(&shifted.mul_vec(v, f), f)) {
                failures.push(PointFailure::NotScalar { index: i });
            }
        }
        prev = w.clone();
    }
    if n > 0 && prev.dim() != n_amb {
        failures.push(PointFailure::NotFull);
    }
    if n == 0 && n_amb != 0 {
        failures.push(PointFailure::NotFull);
    }
    let want = p
        .eigenvalues
        .iter()
        .zip(p.flag.jumps.entries())
        .fold(Poly::one(f), |acc, (x, &e)| acc.mul(&Poly::linear(f, x).pow(e, f), f));
    match y.matrix.charpoly(f) {
        Ok(cp) if cp == want => {}
        _ => failures.push(PointFailure::CharpolyMismatch),
    }
    PointReport { failures }
}

/// `Y` = multiplication by `z` on `k[z]^m / L_n` in the monomial basis, and
/// `W_i` = image of `L_{n−i}` in that quotient.
pub fn chain_to_slice<F: Field>(f: &F, chain: &LatticeChain<F>) -> Result<SlicePoint<F::Elem>, SliceError> {
    let report = chain.validate(f);
    if !report.is_valid() {
        return Err(SliceError::InvalidChain(report));
    }
    let m = chain.m;
    let jumps = WeightSeq::new(m, chain.types.clone())?;
    let total = jumps.total();
    if m == 0 || total % m != 0 || total == 0 {
        return Err(SliceError::NotRectangular { total, m });
    }
    let k = total / m;
    let end = chain.end().expect("nonempty chain");
    let chart = MonomialChart::new(end, k)?.ok_or(SliceError::NotTrivial)?;
    let n_amb = m * k;
    let y = SliceMatrix::new(m, k, chart.multiplication_matrix())?;
    let n = chain.n();
    let mut subspaces = Vec::with_capacity(n);
    for i in 1..=n {
        let w = if i == n {
            Subspace::full(f, n_amb)
        } else {
            let l = &chain.lattices[n - i - 1];
            let gens: Vec<Vec<F::Elem>> = l.basis().columns().iter().map(|c| chart.coords(c)).collect();
            Subspace::krylov(f, y.matrix(), &gens, n_amb)?
        };
        subspaces.push(w);
    }
    Ok(SlicePoint { y, flag: Flag { subspaces, jumps }, eigenvalues: chain.points.clone() })
}

/// Generators `z^k e_j − lift(Y^k ê_j)` of the kernel of `k[z]^m → k^N`,
/// `z^i e_j ↦ Y^i ê_j`.
pub fn end_lattice_generators<F: Field>(f: &F, y: &SliceMatrix<F::Elem>) -> Vec<Vec<Poly<F::Elem>>> {
    let (m, k) = (y.m, y.k);
    (0..m)
        .map(|j| {
            let image = y.matrix.column((k - 1) * m + j);
            let low = lift(f, m, &image);
            let mut v = monomial_vector(f, m, k, j);
            for (a, b) in v.iter_mut().zip(&low) {
                *a = a.sub(b, f);
            }
            v
        })
        .collect()
}

pub fn slice_to_chain<F: Field>(f: &F, p: &SlicePoint<F::Elem>) -> Result<LatticeChain<F>, SliceError> {
    let report = validate_point(f, p);
    if !report.is_valid() {
        return Err(SliceError::InvalidPoint(report));
    }
    let m = p.y.m;
    let end_gens = end_lattice_generators(f, &p.y);
    let n = p.flag.jumps.len();
    let mut lattices = Vec::with_capacity(n);
    for j in 1..=n {
        // L_j is spanned by W_{n−j} and the kernel generators.
        let mut gens = end_gens.clone();
        if j < n {
            gens.extend(p.flag.subspaces[n - j - 1].basis().iter().map(|v| lift(f, m, v)));
        }
        let gm = PolyMatrix::from_columns(m, gens)?;
        lattices.push(Lattice::from_generators(f, &gm)?);
    }
    Ok(LatticeChain { m, points: p.eigenvalues.clone(), types: p.flag.jumps.entries().to_vec(), lattices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::exactalg::{PrimeField, Rationals};
    use crate::lattice::MonomialChart;
    use num_rational::BigRational;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> Rationals {
        Rationals
    }

    fn qe(v: i64) -> BigRational {
        Rationals.from_i64(v)
    }

    fn lat<F: Field>(f: &F, rows: &[&[&[i64]]]) -> Lattice<F> {
        Lattice::from_basis(f, &PolyMatrix::from_i64_rows(f, rows)).unwrap()
    }

    fn span<F: Field>(f: &F, n: usize, vs: &[&[i64]]) -> Subspace<F::Elem> {
        let vs: Vec<Vec<F::Elem>> = vs.iter().map(|v| v.iter().map(|&x| f.from_i64(x)).collect()).collect();
        Subspace::span(f, n, &vs).unwrap()
    }

    fn diag01() -> SlicePoint<BigRational> {
        let f = q();
        let y = SliceMatrix::new(2, 1, Matrix::from_rows(vec![vec![qe(0), qe(0)], vec![qe(0), qe(1)]]).unwrap()).unwrap();
        SlicePoint {
            y,
            flag: Flag {
                subspaces: vec![span(&f, 2, &[&[0, 1]]), Subspace::full(&f, 2)],
                jumps: WeightSeq::new(2, vec![1, 1]).unwrap(),
            },
            eigenvalues: vec![qe(0), qe(1)],
        }
    }

    #[test]
    fn base_points() {
        let f = PrimeField::new(3).unwrap();
        let e = base_point(&f, 2, 2).unwrap();
        let want: Vec<Vec<u64>> = vec![vec![0, 0, 0, 0], vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![0, 1, 0, 0]];
        assert_eq!(e.matrix().to_rows(), want);
        assert_eq!(base_point(&f, 3, 1).unwrap().matrix(), &Matrix::zeros(&f, 3, 3));
        let j = base_point(&f, 1, 3).unwrap();
        assert_eq!(j.matrix().to_rows(), vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(base_point(&f, 0, 2), Err(SliceError::ZeroSize));
    }

    #[test]
    fn slice_pattern() {
        let f = PrimeField::new(5).unwrap();
        for (m, k) in [(1, 1), (2, 2), (3, 2), (2, 3)] {
            assert!(validate_slice(&f, &base_point(&f, m, k).unwrap()));
        }
        let any = SliceMatrix::new(2, 1, Matrix::from_rows(vec![vec![1, 2], vec![3, 4]]).unwrap()).unwrap();
        assert!(validate_slice(&f, &any));
        let mut bad = base_point(&f, 2, 2).unwrap().into_matrix();
        bad.set(0, 1, 1);
        assert!(!validate_slice(&f, &SliceMatrix::new(2, 2, bad).unwrap()));
        let mut missing = base_point(&f, 2, 2).unwrap().into_matrix();
        missing.set(3, 1, 0);
        assert!(!validate_slice(&f, &SliceMatrix::new(2, 2, missing).unwrap()));
    }

    #[test]
    fn point_validation() {
        let f = q();
        let p = diag01();
        assert!(validate_point(&f, &p).is_valid());

        let mut unstable = p.clone();
        unstable.flag.subspaces[0] = span(&f, 2, &[&[1, 1]]);
        assert!(validate_point(&f, &unstable).failures.contains(&PointFailure::NotStable { index: 1 }));

        // W_1 = span(e_2) carries the scalar x_2, so swapping the eigenvalues fails
        let mut swapped = p.clone();
        swapped.eigenvalues = vec![qe(1), qe(0)];
        assert!(validate_point(&f, &swapped).failures.contains(&PointFailure::NotScalar { index: 1 }));

        let mut wrong_eigen = p;
        wrong_eigen.eigenvalues = vec![qe(0), qe(2)];
        let failures = validate_point(&f, &wrong_eigen).failures;
        assert!(failures.contains(&PointFailure::CharpolyMismatch));
    }

    #[test]
    fn nilpotent_base_point_is_valid() {
        let f = PrimeField::new(3).unwrap();
        let y = base_point(&f, 2, 2).unwrap();
        // complete flag by trailing coordinates, refining ker E ⊂ ker E^2
        let flag = Flag {
            subspaces: vec![
                span(&f, 4, &[&[0, 0, 0, 1]]),
                span(&f, 4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]),
                span(&f, 4, &[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
                Subspace::full(&f, 4),
            ],
            jumps: WeightSeq::new(2, vec![1, 1, 1, 1]).unwrap(),
        };
        let p = SlicePoint { y, flag, eigenvalues: vec![0; 4] };
        assert!(validate_point(&f, &p).is_valid());
        let chain = slice_to_chain(&f, &p).unwrap();
        assert_eq!(chain.end().unwrap(), &Lattice::z_power(&f, 2, 2));
        assert!(chain.validate(&f).is_valid());
    }

    #[test]
    fn diagonal_example_both_ways() {
        let f = q();
        let l1 = lat(&f, &[&[&[0, 1], &[]], &[&[], &[1]]]);
        let l2 = lat(&f, &[&[&[0, 1], &[]], &[&[], &[-1, 1]]]);
        let chain = LatticeChain { m: 2, points: vec![qe(0), qe(1)], types: vec![1, 1], lattices: vec![l1, l2] };
        let p = chain_to_slice(&f, &chain).unwrap();
        assert_eq!(p, diag01());
        assert_eq!(slice_to_chain(&f, &diag01()).unwrap(), chain);
    }

    #[test]
    fn z_power_end_gives_base_point() {
        let f = PrimeField::new(5).unwrap();
        // L_1 = span{z e1, e2}, L_2 = z std, all points 0
        let chain = LatticeChain {
            m: 2,
            points: vec![0, 0],
            types: vec![1, 1],
            lattices: vec![lat(&f, &[&[&[0, 1], &[]], &[&[], &[1]]]), Lattice::z_power(&f, 2, 1)],
        };
        let p = chain_to_slice(&f, &chain).unwrap();
        assert_eq!(p.y, base_point(&f, 2, 1).unwrap());
        let chain3 = LatticeChain {
            m: 3,
            points: vec![0, 0],
            types: vec![1, 2],
            lattices: vec![lat(&f, &[&[&[0, 1], &[], &[]], &[&[], &[1], &[]], &[&[], &[], &[1]]]), Lattice::z_power(&f, 3, 1)],
        };
        assert_eq!(chain_to_slice(&f, &chain3).unwrap().y, base_point(&f, 3, 1).unwrap());
    }

    #[test]
    fn nontrivial_end_is_rejected() {
        let f = q();
        let l1 = lat(&f, &[&[&[1], &[]], &[&[], &[0, 1]]]);
        let l2 = lat(&f, &[&[&[1], &[]], &[&[], &[0, 0, 1]]]);
        let chain = LatticeChain { m: 2, points: vec![qe(0), qe(0)], types: vec![1, 1], lattices: vec![l1, l2] };
        assert!(chain.validate(&f).is_valid());
        assert_eq!(chain_to_slice(&f, &chain), Err(SliceError::NotTrivial));
    }

    /// Each step takes `(z−x)L` plus `m − π_i` random combinations of the
    /// basis of `L`; degenerate draws fail validation and are skipped.
    fn random_chain<F: Field, R: Rng>(f: &F, m: usize, weights: &[usize], points: &[F::Elem], rng: &mut R) -> LatticeChain<F> {
        let mut prev = Lattice::standard(f, m);
        let mut lattices = Vec::new();
        for (w, x) in weights.iter().zip(points) {
            let lin = Poly::linear(f, x);
            let keep = m - w;
            let mut gens: Vec<Vec<Poly<F::Elem>>> = Vec::new();
            for _ in 0..keep {
                let coeffs: Vec<F::Elem> = (0..m).map(|_| f.sample(rng, 3)).collect();
                let v = (0..m).fold(vec![Poly::zero(); m], |acc, c| {
                    let col = prev.basis().column(c);
                    acc.iter().zip(&col).map(|(a, b)| a.add(&b.scale(&coeffs[c], f), f)).collect()
                });
                gens.push(v);
            }
            for c in prev.basis().columns() {
                gens.push(c.iter().map(|p| p.mul(&lin, f)).collect());
            }
            let l = Lattice::from_generators(f, &PolyMatrix::from_columns(m, gens).unwrap()).unwrap();
            lattices.push(l.clone());
            prev = l;
        }
        LatticeChain { m, points: points.to_vec(), types: weights.to_vec(), lattices }
    }

    fn roundtrip_random<F: Field>(f: &F, m: usize, k: usize, seed: u64, trials: usize) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0;
        for _ in 0..trials {
            let mut weights = Vec::new();
            let mut left = m * k;
            while left > 0 {
                let w = rng.gen_range(1..=crate::reptheory::max_weight(m).min(left));
                weights.push(w);
                left -= w;
            }
            let points: Vec<F::Elem> = weights.iter().map(|_| f.sample(&mut rng, 2)).collect();
            let chain = random_chain(f, m, &weights, &points, &mut rng);
            if !chain.validate(f).is_valid() {
                continue;
            }
            match chain_to_slice(f, &chain) {
                Ok(p) => {
                    assert!(validate_slice(f, &p.y));
                    assert!(validate_point(f, &p).is_valid());
                    assert_eq!(slice_to_chain(f, &p).unwrap(), chain);
                    checked += 1;
                }
                Err(SliceError::NotTrivial) => {
                    assert_eq!(chain.end().unwrap().quotient_basis_trivial(k), Ok(false));
                }
                Err(e) => panic!("{e}"),
            }
        }
        checked
    }

    #[test]
    fn random_chains_roundtrip() {
        let f5 = PrimeField::new(5).unwrap();
        for (m, k) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
            assert!(roundtrip_random(&f5, m, k, 7 + m as u64 * 10 + k as u64, 60) > 0);
            assert!(roundtrip_random(&q(), m, k, 99 + m as u64 * 10 + k as u64, 30) > 0);
        }
    }

    #[test]
    fn chart_of_slice_kernel_is_identity() {
        let f = PrimeField::new(3).unwrap();
        let last = Matrix::from_rows(vec![vec![1, 2], vec![0, 1], vec![2, 2], vec![1, 0]]).unwrap();
        let y = SliceMatrix::from_last_block(&f, 2, 2, &last).unwrap();
        let gens = end_lattice_generators(&f, &y);
        let l = Lattice::from_generators(&f, &PolyMatrix::from_columns(2, gens).unwrap()).unwrap();
        let chart = MonomialChart::new(&l, 2).unwrap().unwrap();
        assert_eq!(&chart.multiplication_matrix(), y.matrix());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn eigenvalue_bookkeeping(seed in any::<u64>()) {
            let f = PrimeField::new(5).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let weights = [1usize, 2, 1, 2];
            let points: Vec<u64> = (0..4).map(|_| rng.gen_range(0..5)).collect();
            let chain = random_chain(&f, 3, &weights, &points, &mut rng);
            prop_assume!(chain.validate(&f).is_valid());
            if let Ok(p) = chain_to_slice(&f, &chain) {
                let want = points.iter().zip(weights).fold(Poly::one(&f), |acc, (x, e)| {
                    acc.mul(&Poly::linear(&f, x).pow(e, &f), &f)
                });
                prop_assert_eq!(p.y.matrix().charpoly(&f).unwrap(), want);
                // index reversal: W_i / W_{i-1} carries x_{n-i+1}
                let n = points.len();
                let mut prev = Subspace::zero(6);
                for (i0, w) in p.flag.subspaces.iter().enumerate() {
                    let x = points[n - i0 - 1];
                    let shifted = p.y.matrix().shift_diagonal(&x, &f);
                    for v in w.basis() {
                        prop_assert!(prev.contains(&shifted.mul_vec(v, &f), &f));
                    }
                    prev = w.clone();
                }
            }
        }
    }
}
