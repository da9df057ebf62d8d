//! Coefficient fields for modules: prime fields `F_l` and the rationals.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact field used for module coefficients.
pub trait Field: Clone + Debug + Send + Sync + PartialEq {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element; callers guarantee `a != 0`.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Characteristic, `0` for the rationals.
    fn characteristic(&self) -> u32;
    /// Short label such as `F5` or `Q`.
    fn label(&self) -> String;
    /// Stable textual form used in reports and hashes.
    fn render(&self, a: &Self::Elem) -> String;
}

/// The prime field `Z/l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    l: u32,
}

impl PrimeField {
    pub fn new(l: u32) -> Result<PrimeField> {
        let prime = l >= 2 && (2..).take_while(|d: &u32| d * d <= l).all(|d| l % d != 0);
        if !prime {
            return Err(Error::Config(format!("coefficient field order {l} is not prime")));
        }
        if l >= 1 << 31 {
            return Err(Error::Config(format!("prime {l} too large")));
        }
        Ok(PrimeField { l })
    }

    pub fn order(&self) -> u32 {
        self.l
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.l
    }
}

impl Field for PrimeField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.l { s - self.l } else { s }
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b { a - b } else { a + self.l - b }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.l as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 { 0 } else { self.l - a }
    }
    fn inv(&self, a: &u32) -> u32 {
        // Fermat: a^(l-2)
        let (mut base, mut e, mut acc) = (*a as u64, self.l as u64 - 2, 1u64);
        let m = self.l as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc as u32
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.l as i64) as u32
    }
    fn characteristic(&self) -> u32 {
        self.l
    }
    fn label(&self) -> String {
        format!("F{}", self.l)
    }
    fn render(&self, a: &u32) -> String {
        a.to_string()
    }
}

/// The field of rational numbers with arbitrary-precision entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
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
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic(&self) -> u32 {
        0
    }
    fn label(&self) -> String {
        "Q".into()
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            let sign = if a.is_negative() { "-" } else { "" };
            format!("{sign}{}/{}", a.numer().abs(), a.denom())
        }
    }
}

/// Parses a coefficient-field label: `F<prime>` or `Q`.
pub enum CoeffSpec {
    Prime(PrimeField),
    Rational,
}

impl std::str::FromStr for CoeffSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<CoeffSpec> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(CoeffSpec::Rational);
        }
        let digits = t.strip_prefix('F').or_else(|| t.strip_prefix('f')).unwrap_or(t);
        let l: u32 = digits
            .parse()
            .map_err(|_| Error::Config(format!("cannot parse coefficient field '{s}' (use F<prime> or Q)")))?;
        Ok(CoeffSpec::Prime(PrimeField::new(l)?))
    }
}
