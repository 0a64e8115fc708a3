//! Base fields: the rationals and prime fields `F_p`.
//!
//! Elements do not carry their field; every operation goes through a field
//! value passed by reference. For `F_p` that value holds the modulus, for `Q`
//! it is a unit struct.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("malformed field spec {0:?} (expected \"Q\" or \"Fp:<p>\")")]
    BadSpec(String),
    #[error("malformed field element {0:?}")]
    BadElement(String),
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(FieldSpec, FieldSpec),
}

/// Which base field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    /// Parses `"Q"` or `"Fp:<p>"`.
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let p = s
            .strip_prefix("Fp:")
            .and_then(|rest| rest.trim().parse::<u64>().ok())
            .ok_or_else(|| FieldError::BadSpec(s.to_string()))?;
        Self::prime(p)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in SMALL {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exact field arithmetic with an explicit context value.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Ord + Hash + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Ord + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Number of elements, `None` for an infinite field.
    fn order(&self) -> Option<u64>;

    /// All elements in a fixed order, `None` for an infinite field.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    /// A finite superset of the roots of the nonzero polynomial with the
    /// given ascending coefficients.
    fn root_candidates(&self, coeffs: &[Self::Elem]) -> Vec<Self::Elem>;

    fn parse_elem(&self, s: &str) -> Result<Self::Elem, FieldError>;

    fn fmt_elem(&self, e: &Self::Elem, f: &mut fmt::Formatter<'_>) -> fmt::Result;

    /// Integer value of `e` when it is one (always for `F_p`, representatives in `0..p`).
    fn to_i64(&self, e: &Self::Elem) -> Option<i64>;

    /// A random element; over `Q` a random integer in `-spread..=spread`.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, spread: i64) -> Self::Elem;

    fn elem_string(&self, e: &Self::Elem) -> String {
        format!("{}", DisplayElem(self, e))
    }
}

/// `Display` adapter for a field element.
pub struct DisplayElem<'a, F: Field>(pub &'a F, pub &'a F::Elem);

impl<F: Field> fmt::Display for DisplayElem<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_elem(self.1, f)
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }

    fn root_candidates(&self, coeffs: &[BigRational]) -> Vec<BigRational> {
        // Rational root test on the integer polynomial with the same roots.
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut out = Vec::new();
        let Some(low) = ints.iter().position(|c| !c.is_zero()) else {
            return out;
        };
        if low > 0 {
            out.push(BigRational::zero());
        }
        let Some(lead) = ints.last() else {
            return out;
        };
        if low + 1 == ints.len() {
            return out;
        }
        let nums = divisors(&ints[low].abs());
        let dens = divisors(&lead.abs());
        for p in &nums {
            for q in &dens {
                let r = BigRational::new(p.clone(), q.clone());
                out.push(-r.clone());
                out.push(r);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational, FieldError> {
        let t = s.trim();
        let bad = || FieldError::BadElement(s.to_string());
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => {
                let n: BigInt = t.parse().map_err(|_| bad())?;
                Ok(BigRational::from_integer(n))
            }
        }
    }

    fn fmt_elem(&self, e: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if e.is_integer() {
            write!(f, "{}", e.numer())
        } else {
            write!(f, "{}/{}", e.numer(), e.denom())
        }
    }

    fn to_i64(&self, e: &BigRational) -> Option<i64> {
        if e.is_integer() {
            e.numer().to_i64()
        } else {
            None
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, spread: i64) -> BigRational {
        self.from_i64(rng.gen_range(-spread..=spread))
    }
}

/// Positive divisors of a positive integer by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.clone();
    let mut d = BigInt::from(2u32);
    while &d * &d <= rest {
        let mut e = 0;
        while (&rest % &d).is_zero() {
            rest /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1u32;
    }
    if rest > BigInt::one() {
        primes.push((rest, 1));
    }
    let mut out = alloc::vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for base in &out {
            let mut pw = BigInt::one();
            for _ in 0..=e {
                next.push(base * &pw);
                pw *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// The prime field `F_p`, elements represented by `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        FieldSpec::prime(p).map(|_| PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1u64 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn order(&self) -> Option<u64> {
        Some(self.p)
    }
    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.p).collect())
    }
    fn root_candidates(&self, _coeffs: &[u64]) -> Vec<u64> {
        (0..self.p).collect()
    }

    fn parse_elem(&self, s: &str) -> Result<u64, FieldError> {
        let t = s.trim();
        let bad = || FieldError::BadElement(s.to_string());
        let int = |x: &str| -> Result<u64, FieldError> {
            let v: i128 = x.trim().parse().map_err(|_| bad())?;
            Ok(self.reduce_i128(v))
        };
        match t.split_once('/') {
            Some((n, d)) => {
                let n = int(n)?;
                let d = int(d)?;
                self.div(&n, &d).ok_or_else(bad)
            }
            None => int(t),
        }
    }

    fn fmt_elem(&self, e: &u64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{e}")
    }

    fn to_i64(&self, e: &u64) -> Option<i64> {
        i64::try_from(*e).ok()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, _spread: i64) -> u64 {
        rng.gen_range(0..self.p)
    }
}
