//! Dense linear algebra over a field: matrices, row reduction and subspaces
//! in canonical form.

use alloc::vec;
use alloc::vec::Vec;

use super::field::Field;
use super::poly::Poly;
use super::AlgError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<E>,
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![f.zero(); rows * cols] }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self, AlgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgError::Ragged);
        }
        Ok(Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_columns<F: Field<Elem = E>>(f: &F, rows: usize, columns: &[Vec<E>]) -> Result<Self, AlgError> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(AlgError::Ragged);
        }
        let mut m = Self::zeros(f, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<E> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Result<Self, AlgError> {
        if self.cols != other.rows {
            return Err(AlgError::DimensionMismatch);
        }
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, v: &[E], f: &F) -> Vec<E> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(self.get(i, j), &v[j])))
            })
            .collect()
    }

    /// `self − c·I`.
    pub fn shift_diagonal<F: Field<Elem = E>>(&self, c: &E, f: &F) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = f.sub(m.get(i, i), c);
            m.set(i, i, v);
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref<F: Field<Elem = E>>(&self, f: &F) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !f.is_zero(a.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..a.cols {
                    a.entries.swap(p * a.cols + j, r * a.cols + j);
                }
            }
            let inv = f.inv(a.get(r, c)).expect("nonzero pivot");
            for j in 0..a.cols {
                let v = f.mul(a.get(r, j), &inv);
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let factor = a.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in 0..a.cols {
                    let v = f.sub(a.get(i, j), &f.mul(&factor, a.get(r, j)));
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(row, fc));
                }
                v
            })
            .collect()
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, f.one());
        }
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial `det(zI − A)` via reduction to Hessenberg form.
    pub fn charpoly<F: Field<Elem = E>>(&self, f: &F) -> Result<Poly<E>, AlgError> {
        if self.rows != self.cols {
            return Err(AlgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(i) = (j + 1..n).find(|&i| !f.is_zero(h.get(i, j))) else {
                continue;
            };
            if i != j + 1 {
                for c in 0..n {
                    h.entries.swap(i * n + c, (j + 1) * n + c);
                }
                for r in 0..n {
                    h.entries.swap(r * n + i, r * n + j + 1);
                }
            }
            let t = h.get(j + 1, j).clone();
            for r in j + 2..n {
                let u = f.div(h.get(r, j), &t).expect("nonzero pivot");
                if f.is_zero(&u) {
                    continue;
                }
                for c in 0..n {
                    let v = f.sub(h.get(r, c), &f.mul(&u, h.get(j + 1, c)));
                    h.set(r, c, v);
                }
                for rr in 0..n {
                    let v = f.add(h.get(rr, j + 1), &f.mul(&u, h.get(rr, r)));
                    h.set(rr, j + 1, v);
                }
            }
        }
        // p_m = (z − h_mm) p_{m−1} − Σ_i h_im (Π_{j=i+1..m} h_{j,j−1}) p_{i−1}, 1-indexed.
        let mut p: Vec<Poly<E>> = Vec::with_capacity(n + 1);
        p.push(Poly::one(f));
        for m in 1..=n {
            let mut pm = Poly::linear(f, h.get(m - 1, m - 1)).mul(&p[m - 1], f);
            let mut t = f.one();
            for i in (1..m).rev() {
                t = f.mul(&t, h.get(i, i - 1));
                if f.is_zero(&t) {
                    break;
                }
                let c = f.mul(h.get(i - 1, m - 1), &t);
                pm = pm.sub(&p[i - 1].scale(&c, f), f);
            }
            p.push(pm);
        }
        Ok(p.pop().expect("nonempty"))
    }
}

/// A subspace of `k^n` stored as the rows of its reduced row echelon basis,
/// so equal subspaces are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace<E> {
    ambient: usize,
    basis: Vec<Vec<E>>,
}

impl<E: Clone + PartialEq> Subspace<E> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full<F: Field<Elem = E>>(f: &F, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(f, ambient).to_rows() }
    }

    pub fn span<F: Field<Elem = E>>(f: &F, ambient: usize, vectors: &[Vec<E>]) -> Result<Self, AlgError> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(AlgError::DimensionMismatch);
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient));
        }
        let (r, pivots) = Matrix::from_rows(vectors.to_vec())?.rref(f);
        Ok(Subspace { ambient, basis: (0..pivots.len()).map(|i| r.row(i)).collect() })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<E>] {
        &self.basis
    }

    pub fn pivots<F: Field<Elem = E>>(&self, f: &F) -> Vec<usize> {
        self.basis
            .iter()
            .map(|b| b.iter().position(|c| !f.is_zero(c)).expect("nonzero basis row"))
            .collect()
    }

    /// Canonical remainder of `v` modulo the subspace: zero at every pivot.
    pub fn reduce<F: Field<Elem = E>>(&self, v: &[E], f: &F) -> Vec<E> {
        let mut out = v.to_vec();
        for (b, p) in self.basis.iter().zip(self.pivots(f)) {
            let c = out[p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (o, bi) in out.iter_mut().zip(b) {
                *o = f.sub(o, &f.mul(&c, bi));
            }
        }
        out
    }

    pub fn contains<F: Field<Elem = E>>(&self, v: &[E], f: &F) -> bool {
        v.len() == self.ambient && self.reduce(v, f).iter().all(|c| f.is_zero(c))
    }

    pub fn is_subspace_of<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> bool {
        self.basis.iter().all(|b| other.contains(b, f))
    }

    pub fn sum<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Result<Self, AlgError> {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Self::span(f, self.ambient, &v)
    }

    /// Image `A·W`.
    pub fn image<F: Field<Elem = E>>(&self, a: &Matrix<E>, f: &F) -> Result<Self, AlgError> {
        let v: Vec<Vec<E>> = self.basis.iter().map(|b| a.mul_vec(b, f)).collect();
        Self::span(f, a.rows(), &v)
    }

    /// Matrix of the quotient map `k^n → k^n / W` in the coordinates
    /// indexed by the non-pivot positions.
    pub fn quotient_map<F: Field<Elem = E>>(&self, f: &F) -> Matrix<E> {
        let pivots = self.pivots(f);
        let free: Vec<usize> = (0..self.ambient).filter(|c| !pivots.contains(c)).collect();
        let mut q = Matrix::zeros(f, free.len(), self.ambient);
        for i in 0..self.ambient {
            let mut e = vec![f.zero(); self.ambient];
            e[i] = f.one();
            let r = self.reduce(&e, f);
            for (row, &fc) in free.iter().enumerate() {
                q.set(row, i, r[fc].clone());
            }
        }
        q
    }

    /// `{v : A v ∈ W}`.
    pub fn preimage<F: Field<Elem = E>>(&self, a: &Matrix<E>, f: &F) -> Result<Self, AlgError> {
        let composite = self.quotient_map(f).mul(a, f)?;
        Self::span(f, a.cols(), &composite.nullspace(f))
    }

    /// Vectors whose classes form a basis of `W / self` for a larger `W`.
    pub fn complement_in<F: Field<Elem = E>>(&self, larger: &Self, f: &F) -> Vec<Vec<E>> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for b in &larger.basis {
            if !acc.contains(b, f) {
                out.push(b.clone());
                acc = acc
                    .sum(&Subspace { ambient: self.ambient, basis: alloc::vec![b.clone()] }, f)
                    .expect("same ambient");
            }
        }
        out
    }

    /// Smallest `A`-stable subspace containing `gens`, by iterating `A`
    /// up to `depth` times.
    pub fn krylov<F: Field<Elem = E>>(f: &F, a: &Matrix<E>, gens: &[Vec<E>], depth: usize) -> Result<Self, AlgError> {
        let mut vectors = gens.to_vec();
        let mut frontier = gens.to_vec();
        for _ in 0..depth {
            frontier = frontier.iter().map(|v| a.mul_vec(v, f)).collect();
            vectors.extend(frontier.iter().cloned());
        }
        Self::span(f, a.rows(), &vectors)
    }
}
