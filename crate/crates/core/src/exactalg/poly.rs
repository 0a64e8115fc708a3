//! Dense univariate polynomials over a [`Field`].

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::field::{DisplayElem, Field, FieldError};

/// Dense ascending coefficients; the empty list is the zero polynomial.
///
/// The highest stored coefficient is always nonzero, so structural equality
/// is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> Poly<E> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the degree of the zero polynomial (−∞).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn from_coeffs<F: Field<Elem = E>>(f: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| f.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s<F: Field<Elem = E>>(f: &F, coeffs: &[i64]) -> Self {
        Self::from_coeffs(f, coeffs.iter().map(|&c| f.from_i64(c)).collect())
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, c: E) -> Self {
        Self::from_coeffs(f, vec![c])
    }

    pub fn one<F: Field<Elem = E>>(f: &F) -> Self {
        Self::constant(f, f.one())
    }

    /// `c·z^d`.
    pub fn monomial<F: Field<Elem = E>>(f: &F, c: E, d: usize) -> Self {
        if f.is_zero(&c) {
            return Self::zero();
        }
        let mut coeffs = vec![f.zero(); d];
        coeffs.push(c);
        Poly { coeffs }
    }

    /// `z − x`.
    pub fn linear<F: Field<Elem = E>>(f: &F, x: &E) -> Self {
        Poly { coeffs: vec![f.neg(x), f.one()] }
    }

    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn add<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => f.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(f, c)
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }

    pub fn sub<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        self.add(&other.neg(f), f)
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        Self::from_coeffs(f, c)
    }

    pub fn scale<F: Field<Elem = E>>(&self, s: &E, f: &F) -> Self {
        Self::from_coeffs(f, self.coeffs.iter().map(|c| f.mul(c, s)).collect())
    }

    /// Multiplication by `z^d`.
    pub fn shift<F: Field<Elem = E>>(&self, d: usize, f: &F) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![f.zero(); d];
        c.extend(self.coeffs.iter().cloned());
        Poly { coeffs: c }
    }

    pub fn pow<F: Field<Elem = E>>(&self, mut e: usize, f: &F) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division; `None` when `divisor` is zero.
    pub fn div_rem<F: Field<Elem = E>>(&self, divisor: &Self, f: &F) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lead_inv = f.inv(divisor.leading()?)?;
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return Some((Self::zero(), Self::zero()));
        };
        if sd < dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![f.zero(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let c = f.mul(&rem[i + dd], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(&rem[i + j], &f.mul(&c, d));
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Some((Self::from_coeffs(f, quot), Self::from_coeffs(f, rem)))
    }

    pub fn rem<F: Field<Elem = E>>(&self, divisor: &Self, f: &F) -> Option<Self> {
        self.div_rem(divisor, f).map(|(_, r)| r)
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn exact_div<F: Field<Elem = E>>(&self, divisor: &Self, f: &F) -> Option<Self> {
        match self.div_rem(divisor, f) {
            Some((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self, f).is_some_and(|r| r.is_zero())
    }

    pub fn is_monic<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.leading().is_some_and(|c| f.is_one(c))
    }

    /// Scales to leading coefficient 1; zero stays zero.
    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Self {
        match self.leading().and_then(|c| f.inv(c)) {
            Some(inv) => self.scale(&inv, f),
            None => Self::zero(),
        }
    }

    pub fn eval<F: Field<Elem = E>>(&self, x: &E, f: &F) -> E {
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Multiplicity of `x` as a root; `None` for the zero polynomial.
    pub fn valuation_at<F: Field<Elem = E>>(&self, x: &E, f: &F) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let lin = Self::linear(f, x);
        let mut p = self.clone();
        let mut v = 0;
        while let Some(q) = p.exact_div(&lin, f) {
            p = q;
            v += 1;
        }
        Some(v)
    }

    /// Splits off all linear factors: returns the distinct roots in increasing
    /// order with multiplicities, and the monic residual with no roots in the field.
    pub fn linear_factors<F: Field<Elem = E>>(&self, f: &F) -> (Vec<(E, usize)>, Self) {
        let mut rest = self.monic(f);
        let mut roots = Vec::new();
        if rest.degree().unwrap_or(0) == 0 {
            return (roots, rest);
        }
        for x in f.root_candidates(&rest.coeffs) {
            if rest.degree() == Some(0) {
                break;
            }
            if !f.is_zero(&rest.eval(&x, f)) {
                continue;
            }
            let lin = Self::linear(f, &x);
            let mut mult = 0;
            while let Some(q) = rest.exact_div(&lin, f) {
                rest = q;
                mult += 1;
            }
            roots.push((x, mult));
        }
        (roots, rest)
    }

    pub fn display<'a, F: Field<Elem = E>>(&'a self, f: &'a F) -> DisplayPoly<'a, F> {
        DisplayPoly(f, self)
    }

    /// Parses the bracketed ascending list format, e.g. `"[1,3,1]"` = 1 + 3z + z².
    pub fn parse<F: Field<Elem = E>>(f: &F, s: &str) -> Result<Self, FieldError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| FieldError::BadElement(String::from(s)))?;
        if inner.trim().is_empty() {
            return Ok(Self::zero());
        }
        let coeffs = inner
            .split(',')
            .map(|c| f.parse_elem(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_coeffs(f, coeffs))
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn poly_gcd<F: Field>(a: &Poly<F::Elem>, b: &Poly<F::Elem>, f: &F) -> Poly<F::Elem> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b, f).expect("nonzero divisor");
        a = b;
        b = r;
    }
    a.monic(f)
}

pub struct DisplayPoly<'a, F: Field>(&'a F, &'a Poly<F::Elem>);

impl<F: Field> fmt::Display for DisplayPoly<'_, F> {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.write_str("[")?;
        for (i, c) in self.1.coeffs.iter().enumerate() {
            if i > 0 {
                fm.write_str(",")?;
            }
            write!(fm, "{}", DisplayElem(self.0, c))?;
        }
        fm.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::{PrimeField, Rationals};
    use alloc::string::ToString;

    fn q(c: &[i64]) -> Poly<num_rational::BigRational> {
        Poly::from_i64s(&Rationals, c)
    }

    #[test]
    fn gcd_common_factor() {
        let f = Rationals;
        assert_eq!(poly_gcd(&q(&[-1, 0, 1]), &q(&[-1, 1]), &f), q(&[-1, 1]));
    }

    #[test]
    fn gcd_monic_normalization() {
        let f = Rationals;
        assert_eq!(poly_gcd(&q(&[]), &q(&[3, 3]), &f), q(&[1, 1]));
        assert_eq!(poly_gcd(&q(&[]), &q(&[]), &f), q(&[]));
    }

    #[test]
    fn gcd_over_f2() {
        // z^2+1 = (z+1)^2 and z^2+z = z(z+1) over F_2. Hand Euclid:
        // (z^2+1) mod (z^2+z) = z+1; (z^2+z) mod (z+1) = 0.
        let f = PrimeField::new(2).unwrap();
        let a = Poly::from_i64s(&f, &[1, 0, 1]);
        let b = Poly::from_i64s(&f, &[0, 1, 1]);
        assert_eq!(poly_gcd(&a, &b, &f), Poly::from_i64s(&f, &[1, 1]));
    }

    #[test]
    fn trimming_and_degree() {
        let f = PrimeField::new(3).unwrap();
        let p = Poly::from_i64s(&f, &[1, 2, 3]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Poly::<u64>::zero().degree(), None);
    }

    #[test]
    fn division_identity() {
        let f = Rationals;
        let a = q(&[5, -2, 0, 7, 1]);
        let b = q(&[1, 0, 3]);
        let (qq, r) = a.div_rem(&b, &f).unwrap();
        assert!(r.degree() < b.degree());
        assert_eq!(qq.mul(&b, &f).add(&r, &f), a);
        assert!(a.div_rem(&Poly::zero(), &f).is_none());
    }

    #[test]
    fn text_format() {
        let f = Rationals;
        let p = Poly::parse(&f, "[1, 3, 1]").unwrap();
        assert_eq!(p, q(&[1, 3, 1]));
        assert_eq!(p.display(&f).to_string(), "[1,3,1]");
        let h = Poly::parse(&f, "[1/2,0]").unwrap();
        assert_eq!(h.display(&f).to_string(), "[1/2]");
        assert!(Poly::parse(&f, "[]").unwrap().is_zero());
        assert!(Poly::parse(&f, "1,2").is_err());
    }

    #[test]
    fn linear_factor_extraction() {
        let f = Rationals;
        // (z-1)^2 (2z+1) (z^2+1)
        let p = q(&[-1, 1])
            .pow(2, &f)
            .mul(&q(&[1, 2]), &f)
            .mul(&q(&[1, 0, 1]), &f);
        let (roots, rest) = p.linear_factors(&f);
        assert_eq!(
            roots,
            [(f.parse_elem("-1/2").unwrap(), 1), (f.one(), 2)]
        );
        assert_eq!(rest, q(&[1, 0, 1]));

        let f3 = PrimeField::new(3).unwrap();
        let p = Poly::from_i64s(&f3, &[0, 0, 1, 1]); // z^2 (z+1)
        let (roots, rest) = p.linear_factors(&f3);
        assert_eq!(roots, [(0, 2), (2, 1)]);
        assert_eq!(rest, Poly::one(&f3));
    }
}
