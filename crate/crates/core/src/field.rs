//! Finite fields `F_q`, `q = p^k`, in a polynomial basis.
//!
//! Elements are stored as integers whose base-`p` digits are the coordinates
//! in the basis `1, x, ..., x^{k-1}`, where `x` is a root of a fixed Conway
//! polynomial. Arithmetic goes through precomputed addition and log/exp
//! tables, which keeps every operation a table lookup at the field sizes used
//! here (`q <= 64`).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order supported by the table representation.
pub const MAX_Q: u32 = 64;

/// Conway polynomials, coefficients listed from the constant term upward
/// without the leading 1.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1]),
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 1, 1, 0]),
    (3, 1, &[1]),
    (3, 2, &[2, 2]),
    (3, 3, &[1, 2, 0]),
    (5, 1, &[3]),
    (5, 2, &[2, 4]),
    (7, 1, &[4]),
    (7, 2, &[3, 6]),
    (11, 1, &[9]),
    (13, 1, &[11]),
    (17, 1, &[14]),
    (19, 1, &[17]),
    (23, 1, &[18]),
    (29, 1, &[27]),
    (31, 1, &[28]),
    (37, 1, &[35]),
    (41, 1, &[35]),
    (43, 1, &[40]),
    (47, 1, &[42]),
    (53, 1, &[51]),
    (59, 1, &[57]),
    (61, 1, &[59]),
];

/// An element of some `F_q`; meaningful only together with its [`Fq`].
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FqElem(pub u16);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u16>,
    neg: Vec<u16>,
    exp: Vec<u16>,
    log: Vec<u32>,
}

/// The field `F_{p^k}`. Cheap to clone.
#[derive(Clone)]
pub struct Fq {
    t: Arc<Tables>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.t.p == other.t.p && self.t.k == other.t.k
    }
}
impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.t.q)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Splits `q` into `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    if !is_prime(p) {
        return None;
    }
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

impl Fq {
    /// Builds `F_q`. Fails for non-prime-powers and for orders without a
    /// tabulated Conway polynomial.
    pub fn new(q: u32) -> Result<Fq> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::Config(format!("q = {q} is not a prime power")))?;
        if q > MAX_Q {
            return Err(Error::Config(format!("q = {q} exceeds the supported maximum {MAX_Q}")));
        }
        let modulus = CONWAY
            .iter()
            .find(|(cp, ck, _)| *cp == p && *ck == k)
            .map(|(_, _, m)| m.to_vec())
            .ok_or_else(|| Error::Config(format!("no Conway polynomial tabulated for p = {p}, k = {k}")))?;

        let qs = q as usize;
        let digits = |mut x: u32| -> Vec<u32> {
            (0..k)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let undigits = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let mut add = vec![0u16; qs * qs];
        let mut neg = vec![0u16; qs];
        for a in 0..q {
            let da = digits(a);
            neg[a as usize] = undigits(&da.iter().map(|&c| (p - c) % p).collect::<Vec<_>>()) as u16;
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = undigits(&s) as u16;
            }
        }

        // Powers of the class of x. For k = 1 the root of x + c is -c.
        let gen_digits: Vec<u32> = if k == 1 {
            vec![(p - modulus[0]) % p]
        } else {
            let mut d = vec![0; k as usize];
            d[1] = 1;
            d
        };
        let times_gen = |d: &[u32]| -> Vec<u32> {
            if k == 1 {
                return vec![d[0] * gen_digits[0] % p];
            }
            let top = d[k as usize - 1];
            let mut out = vec![0u32; k as usize];
            for j in (1..k as usize).rev() {
                out[j] = d[j - 1];
            }
            for j in 0..k as usize {
                out[j] = (out[j] + (p - modulus[j]) * top) % p;
            }
            out
        };
        let mut exp = Vec::with_capacity(qs - 1);
        let mut log = vec![u32::MAX; qs];
        let mut cur = digits(1);
        for e in 0..q - 1 {
            let v = undigits(&cur);
            if log[v as usize] != u32::MAX {
                return Err(Error::Config(format!("tabulated polynomial for F_{q} is not primitive")));
            }
            log[v as usize] = e;
            exp.push(v as u16);
            cur = times_gen(&cur);
        }
        if undigits(&cur) != 1 {
            return Err(Error::Config(format!("tabulated polynomial for F_{q} is not primitive")));
        }
        Ok(Fq { t: Arc::new(Tables { p, k, q, modulus, add, neg, exp, log }) })
    }

    pub fn p(&self) -> u32 {
        self.t.p
    }
    pub fn degree(&self) -> u32 {
        self.t.k
    }
    pub fn q(&self) -> u32 {
        self.t.q
    }
    /// Conway polynomial coefficients from the constant term up, monic term omitted.
    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }
    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    /// All elements in encoding order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.t.q).map(|x| FqElem(x as u16))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FqElem> + '_ {
        (1..self.t.q).map(|x| FqElem(x as u16))
    }

    /// The primitive element (class of `x`, or the Conway root for `k = 1`).
    pub fn generator(&self) -> FqElem {
        FqElem(self.t.exp[1 % self.t.exp.len()])
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.t.p as i64) as u16)
    }

    /// `F_p`-basis `1, x, ..., x^{k-1}` of the additive group.
    pub fn additive_basis(&self) -> Vec<FqElem> {
        (0..self.t.k).map(|j| FqElem(self.t.p.pow(j) as u16)).collect()
    }

    pub fn coords(&self, a: FqElem) -> Vec<u32> {
        let mut x = a.0 as u32;
        (0..self.t.k)
            .map(|_| {
                let d = x % self.t.p;
                x /= self.t.p;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, c: &[u32]) -> Result<FqElem> {
        if c.len() != self.t.k as usize || c.iter().any(|&d| d >= self.t.p) {
            return Err(Error::Domain(format!("invalid coordinate vector {c:?} for F_{}", self.t.q)));
        }
        Ok(FqElem(c.iter().rev().fold(0, |acc, &d| acc * self.t.p + d) as u16))
    }

    pub fn contains(&self, a: FqElem) -> bool {
        (a.0 as u32) < self.t.q
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.t.add[a.0 as usize * self.t.q as usize + b.0 as usize])
    }
    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.t.neg[a.0 as usize])
    }
    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.is_zero() || b.is_zero() {
            return FqElem::ZERO;
        }
        let n = self.t.q - 1;
        let e = (self.t.log[a.0 as usize] + self.t.log[b.0 as usize]) % n;
        FqElem(self.t.exp[e as usize])
    }
    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.is_zero() {
            return Err(Error::Domain("zero has no inverse".into()));
        }
        let n = self.t.q - 1;
        let e = (n - self.t.log[a.0 as usize]) % n;
        Ok(FqElem(self.t.exp[e as usize]))
    }
    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }
    /// `a^e` for any integer `e` (negative exponents need `a != 0`).
    pub fn pow(&self, a: FqElem, e: i64) -> FqElem {
        if a.is_zero() {
            return if e == 0 { FqElem::ONE } else { FqElem::ZERO };
        }
        let n = (self.t.q - 1) as i64;
        let l = (self.t.log[a.0 as usize] as i64 * e).rem_euclid(n);
        FqElem(self.t.exp[l as usize])
    }

    /// Discrete logarithm to the base [`Fq::generator`].
    pub fn log(&self, a: FqElem) -> Option<u32> {
        (!a.is_zero()).then(|| self.t.log[a.0 as usize])
    }

    /// The subfield `F_{p^a}` as an element list; exists exactly when `a | k`.
    pub fn subfield(&self, a: u32) -> Result<Vec<FqElem>> {
        if a == 0 || self.t.k % a != 0 {
            return Err(Error::Domain(format!(
                "F_{}^{a} is not a subfield of F_{}",
                self.t.p, self.t.q
            )));
        }
        let pa = self.t.p.pow(a) as i64;
        Ok(self.elements().filter(|&x| self.pow(x, pa) == x).collect())
    }
}
