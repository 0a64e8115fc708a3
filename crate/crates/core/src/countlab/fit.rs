use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactalg::{Field, Poly, Rationals};

/// Polynomial in `q` with nonnegative integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPolynomial {
    coeffs: Vec<u128>,
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<u128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[u128] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u128 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, q: u64) -> Option<u128> {
        self.coeffs
            .iter()
            .rev()
            .try_fold(0u128, |acc, &c| acc.checked_mul(q as u128)?.checked_add(c))
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let coef = if c == 1 && i > 0 { String::new() } else { alloc::format!("{c}") };
                match i {
                    0 => coef,
                    1 => alloc::format!("{coef}q"),
                    _ => alloc::format!("{coef}q^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FitError {
    #[error("no samples")]
    Empty,
    #[error("q = {0} sampled twice")]
    DuplicateQ(u64),
    #[error("interpolant has a non-integer coefficient {0}")]
    NonIntegral(String),
    #[error("interpolant has a negative coefficient {0}")]
    Negative(String),
    #[error("held-out sample at q = {q}: observed {observed}, fit predicts {predicted:?}")]
    HeldOutMismatch { q: u64, observed: u128, predicted: Option<u128> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fit {
    pub poly: QPolynomial,
    pub held_out_checked: usize,
}

/// Lagrange interpolation of `samples` over ℚ, then validation on `held_out`.
pub fn fit_q_polynomial(samples: &[(u64, u128)], held_out: &[(u64, u128)]) -> Result<Fit, FitError> {
    if samples.is_empty() {
        return Err(FitError::Empty);
    }
    let mut seen = BTreeSet::new();
    for &(q, _) in samples {
        if !seen.insert(q) {
            return Err(FitError::DuplicateQ(q));
        }
    }
    let f = Rationals;
    let big = |v: u128| BigRational::from_integer(BigInt::from(v));
    let mut acc: Poly<BigRational> = Poly::zero();
    for (i, &(qi, yi)) in samples.iter().enumerate() {
        let mut basis = Poly::constant(&f, big(yi));
        for (j, &(qj, _)) in samples.iter().enumerate() {
            if i != j {
                let denom = big(qi as u128) - big(qj as u128);
                let lin = Poly::linear(&f, &big(qj as u128));
                basis = basis.mul(&lin, &f).scale(&f.inv(&denom).expect("distinct nodes"), &f);
            }
        }
        acc = acc.add(&basis, &f);
    }
    let mut coeffs = Vec::new();
    for c in acc.coeffs() {
        if !c.is_integer() {
            return Err(FitError::NonIntegral(f.elem_string(c)));
        }
        if c.is_negative() {
            return Err(FitError::Negative(f.elem_string(c)));
        }
        let v = if c.is_zero() { 0 } else { c.to_integer().to_u128().ok_or_else(|| FitError::NonIntegral(f.elem_string(c)))? };
        coeffs.push(v);
    }
    let poly = QPolynomial::new(coeffs);
    for &(q, observed) in held_out {
        let predicted = poly.eval(q);
        if predicted != Some(observed) {
            return Err(FitError::HeldOutMismatch { q, observed, predicted });
        }
    }
    Ok(Fit { poly, held_out_checked: held_out.len() })
}
