//! Minuscule tensor combinatorics for `SL_m` / `GL_m`.
//!
//! Tensor products of exterior powers `Λ^{π_1} ⊗ … ⊗ Λ^{π_n}` of the standard
//! representation decompose by the dual Pieri rule (adding vertical strips).
//! The `SL_m`-invariants are the copies of `det^k`, i.e. the rectangle `(k^m)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::lattice::HeckeType;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("weight {value} out of range 1..={max} for m = {m}")]
    WeightOutOfRange { value: usize, max: usize, m: usize },
    #[error("rank m must be positive")]
    ZeroRank,
    #[error("index {j} out of range 0..={max}")]
    IndexOutOfRange { j: usize, max: usize },
    #[error("weights sum to {sum}, not divisible by m = {m}: not in the root lattice")]
    NotInRootLattice { sum: usize, m: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("integer overflow")]
    Overflow,
}

/// Weakly decreasing positive parts (trailing zeros are dropped).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the input and drops zero parts.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn rectangle(width: usize, height: usize) -> Self {
        if width == 0 {
            return Self::empty();
        }
        Partition(vec![width; height])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.len()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }
}

/// The sequence `π = (π_1, …, π_n)` labelling minuscule weights `ω_{π_i}`.
///
/// Entries lie in `1..=m−1`; for `m = 1` the single allowed entry is `1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightSeq {
    m: usize,
    entries: Vec<usize>,
}

impl WeightSeq {
    pub fn new(m: usize, entries: Vec<usize>) -> Result<Self, RepError> {
        if m == 0 {
            return Err(RepError::ZeroRank);
        }
        let max = max_weight(m);
        if let Some(&value) = entries.iter().find(|&&e| e == 0 || e > max) {
            return Err(RepError::WeightOutOfRange { value, max, m });
        }
        Ok(WeightSeq { m, entries })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> usize {
        self.entries.iter().sum()
    }

    /// `Σπ_i / m` when the sum is divisible by `m`.
    pub fn k(&self) -> Option<usize> {
        self.total().is_multiple_of(self.m).then(|| self.total() / self.m)
    }

    /// Dimension of the convolution variety: `Σ π_i (m − π_i)`.
    pub fn convolution_dim(&self) -> usize {
        self.entries.iter().map(|&p| p * (self.m - p)).sum()
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        WeightSeq { m: self.m, entries: order.iter().map(|&i| self.entries[i]).collect() }
    }
}

pub(crate) fn max_weight(m: usize) -> usize {
    if m == 1 {
        1
    } else {
        m - 1
    }
}

/// Size-`j` subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, j: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < j - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if j <= n {
        go(0, n, j, &mut Vec::new(), &mut out);
    }
    out
}

/// All partitions with at most `m` rows obtained from `p` by adding `j` boxes,
/// no two in the same row.
pub fn pieri_add(p: &Partition, j: usize, m: usize) -> Vec<Partition> {
    if p.rows() > m {
        return Vec::new();
    }
    let mut out: Vec<Partition> = subsets(m, j)
        .into_iter()
        .filter_map(|rows| {
            let mut parts: Vec<usize> = (0..m).map(|i| p.part(i)).collect();
            for r in rows {
                parts[r] += 1;
            }
            parts.windows(2).all(|w| w[0] >= w[1]).then(|| Partition::new(parts))
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Whether `ω_{π_1} + … + ω_{π_n}` lies in the root lattice of `SL_m`.
pub fn root_lattice_check(w: &WeightSeq) -> bool {
    w.total().is_multiple_of(w.m)
}

/// `dim (Λ^{π_1} ⊗ … ⊗ Λ^{π_n})^{SL_m}`: the number of vertical-strip paths from
/// the empty partition to the rectangle `(k^m)`, `k = Σπ_i / m`.
pub fn invariant_dim(w: &WeightSeq) -> Result<u128, RepError> {
    let m = w.m;
    let k = w.k().ok_or(RepError::NotInRootLattice { sum: w.total(), m })?;
    let mut level: BTreeMap<Partition, u128> = BTreeMap::new();
    level.insert(Partition::empty(), 1);
    for &j in &w.entries {
        let mut next: BTreeMap<Partition, u128> = BTreeMap::new();
        for (p, mult) in &level {
            for q in pieri_add(p, j, m) {
                let slot = next.entry(q).or_insert(0);
                *slot = slot.checked_add(*mult).ok_or(RepError::Overflow)?;
            }
        }
        level = next;
    }
    Ok(level.get(&Partition::rectangle(k, m)).copied().unwrap_or(0))
}

/// Index of the dual minuscule weight: `ω_j^∨ = −w₀(ω_j) = ω_{m−j}`.
pub fn dual_weight(m: usize, j: usize) -> Result<usize, RepError> {
    if m < 2 || j == 0 || j >= m {
        return Err(RepError::IndexOutOfRange { j, max: m.saturating_sub(1) });
    }
    Ok(m - j)
}

/// Dominance order: partial sums of `a` never exceed those of `b`, equal totals.
pub fn dominance_leq(a: &HeckeType, b: &HeckeType) -> Result<bool, RepError> {
    let (a, b) = (a.entries(), b.entries());
    if a.len() != b.len() {
        return Err(RepError::LengthMismatch(a.len(), b.len()));
    }
    let (mut sa, mut sb) = (0i64, 0i64);
    for (x, y) in a.iter().zip(b) {
        sa += x;
        sb += y;
        if sa > sb {
            return Ok(false);
        }
    }
    Ok(sa == sb)
}

/// Number of `j`-dimensional subspaces of `F_q^m`.
pub fn gaussian_binomial(m: usize, j: usize, q: u64) -> Result<u128, RepError> {
    if j > m {
        return Err(RepError::IndexOutOfRange { j, max: m });
    }
    let q = q as u128;
    let qpow = |e: usize| -> Result<u128, RepError> {
        let e = u32::try_from(e).map_err(|_| RepError::Overflow)?;
        q.checked_pow(e).ok_or(RepError::Overflow)
    };
    // [m, i+1]_q = [m, i]_q (q^{m−i} − 1) / (q^{i+1} − 1), exact at every step.
    let mut acc: u128 = 1;
    for i in 0..j {
        let num = qpow(m - i)? - 1;
        let den = qpow(i + 1)? - 1;
        acc = acc.checked_mul(num).ok_or(RepError::Overflow)? / den;
    }
    Ok(acc)
}
