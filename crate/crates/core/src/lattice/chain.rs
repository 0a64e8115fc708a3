use alloc::vec::Vec;

use super::{HeckeType, Lattice};
use crate::exactalg::Field;
use crate::reptheory::{max_weight, WeightSeq};

/// `L_0 = k[z]^m ⊃ L_1 ⊃ … ⊃ L_n`, step `i` a modification of type `ω_{π_i}` at `x_i`.
///
/// `L_0` is implicit; `lattices[i − 1]` is `L_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeChain<F: Field> {
    pub m: usize,
    pub points: Vec<F::Elem>,
    pub types: Vec<usize>,
    pub lattices: Vec<Lattice<F>>,
}

/// One failed chain condition; `step` is the 1-based index `i` of `L_{i−1} ⊃ L_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainFailure {
    LengthMismatch { points: usize, types: usize, lattices: usize },
    TypeOutOfRange { step: usize, value: usize },
    RankMismatch { step: usize, rank: usize },
    FieldMismatch { step: usize },
    NotContained { step: usize },
    ColengthMismatch { step: usize, expected: usize, actual: usize },
    WrongHeckeType { step: usize, expected: HeckeType, actual: HeckeType },
    ModificationElsewhere { step: usize },
}

impl core::fmt::Display for ChainFailure {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ChainFailure::LengthMismatch { points, types, lattices } => write!(
                f,
                "length mismatch: {points} points, {types} types, {lattices} lattices"
            ),
            ChainFailure::TypeOutOfRange { step, value } => write!(f, "step {step}: type {value} out of range"),
            ChainFailure::RankMismatch { step, rank } => write!(f, "step {step}: lattice has rank {rank}"),
            ChainFailure::FieldMismatch { step } => write!(f, "step {step}: field mismatch"),
            ChainFailure::NotContained { step } => write!(f, "step {step}: L_{step} not contained in L_{}", step - 1),
            ChainFailure::ColengthMismatch { step, expected, actual } => {
                write!(f, "step {step}: colength {actual}, expected {expected}")
            }
            ChainFailure::WrongHeckeType { step, expected, actual } => write!(
                f,
                "step {step}: Hecke type {:?} at the marked point, expected {:?}",
                actual.entries(),
                expected.entries()
            ),
            ChainFailure::ModificationElsewhere { step } => {
                write!(f, "step {step}: modification away from the marked point")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainReport {
    pub failures: Vec<ChainFailure>,
}

impl ChainReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl<F: Field> LatticeChain<F> {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn end(&self) -> Option<&Lattice<F>> {
        self.lattices.last()
    }

    pub fn weights(&self) -> Option<WeightSeq> {
        WeightSeq::new(self.m, self.types.clone()).ok()
    }

    /// Checks every chain condition and lists all failures.
    ///
    /// "z acts on `L_{i−1}/L_i` by the scalar `x_i`" is checked as: colength `π_i`
    /// and Hecke type `ω_{π_i}` at `x_i`, which forces the type to vanish elsewhere.
    pub fn validate(&self, field: &F) -> ChainReport {
        let mut failures = Vec::new();
        let n = self.points.len();
        if self.types.len() != n || self.lattices.len() != n {
            failures.push(ChainFailure::LengthMismatch {
                points: n,
                types: self.types.len(),
                lattices: self.lattices.len(),
            });
            return ChainReport { failures };
        }
        let max = max_weight(self.m.max(1));
        for (i, &t) in self.types.iter().enumerate() {
            if t == 0 || t > max {
                failures.push(ChainFailure::TypeOutOfRange { step: i + 1, value: t });
            }
        }
        let mut prev = Lattice::standard(field, self.m);
        for (i, l) in self.lattices.iter().enumerate() {
            let step = i + 1;
            if l.m() != self.m {
                failures.push(ChainFailure::RankMismatch { step, rank: l.m() });
                return ChainReport { failures };
            }
            if l.field() != field {
                failures.push(ChainFailure::FieldMismatch { step });
                return ChainReport { failures };
            }
            match prev.colength(l) {
                Err(_) => failures.push(ChainFailure::NotContained { step }),
                Ok(c) => {
                    let expected = self.types[i];
                    if c != expected {
                        failures.push(ChainFailure::ColengthMismatch { step, expected, actual: c });
                    }
                    let actual = prev.hecke_type_at(l, &self.points[i]).expect("contained");
                    let want = HeckeType::minuscule(self.m, expected);
                    if actual != want {
                        failures.push(ChainFailure::WrongHeckeType { step, expected: want, actual: actual.clone() });
                    }
                    if actual.total() < c as i64 {
                        failures.push(ChainFailure::ModificationElsewhere { step });
                    }
                }
            }
            prev = l.clone();
        }
        ChainReport { failures }
    }
}
