//! Exact arithmetic in a prime field `F_p`, `5 <= p < 2^31`.
//!
//! Representatives are canonical `u64` values in `[0, p)`. Products go
//! through `u128` so nothing here can overflow regardless of the cap.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted (exclusive).
pub const MODULUS_LIMIT: u64 = 1 << 31;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Deterministic primality test by trial division, adequate below 2^33.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 || p >= MODULUS_LIMIT || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeModulus(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Element with representative `v mod p`.
    #[inline]
    pub fn elem(self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.0,
            modulus: self,
        }
    }

    /// Element with representative `v mod p` for a signed `v`.
    pub fn elem_i64(self, v: i64) -> FieldElement {
        self.elem(v.rem_euclid(self.0 as i64) as u64)
    }

    pub fn zero(self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(self) -> FieldElement {
        self.elem(1)
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        PrimeModulus::new(p)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(p: PrimeModulus) -> u64 {
        p.0
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An element of `F_p` together with its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: PrimeModulus,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        let p = self.modulus.0 as i64;
        let (mut r0, mut r1) = (p, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.modulus.elem_i64(t0))
    }

    /// `self^e` by square-and-multiply. `0^0 = 1`.
    pub fn pow(self, mut e: u64) -> FieldElement {
        let p = self.modulus.0;
        let mut base = self.value;
        let mut acc = 1 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, base, p);
            }
            base = mul_mod(base, base, p);
            e >>= 1;
        }
        self.modulus.elem(acc)
    }

    /// Legendre symbol via Euler's criterion: 0, +1 or -1.
    pub fn legendre(self) -> i8 {
        if self.value == 0 {
            return 0;
        }
        let p = self.modulus.0;
        match self.pow((p - 1) / 2).value {
            1 => 1,
            v if v == p - 1 => -1,
            _ => unreachable!("Euler criterion returned a non-sign"),
        }
    }

    /// The numerically smaller square root, if one exists.
    pub fn sqrt(self) -> Option<FieldElement> {
        match self.legendre() {
            0 => return Some(self),
            -1 => return None,
            _ => {}
        }
        let p = self.modulus.0;
        let r = if p % 4 == 3 {
            self.pow((p + 1) / 4)
        } else {
            self.tonelli_shanks()
        };
        debug_assert_eq!(r * r, self);
        let other = -r;
        Some(if other.value < r.value { other } else { r })
    }

    fn tonelli_shanks(self) -> FieldElement {
        let p = self.modulus.0;
        let m = self.modulus;
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = (2..p)
            .map(|v| m.elem(v))
            .find(|z| z.legendre() == -1)
            .expect("a non-residue exists for odd p");
        let mut c = z.pow(q);
        let mut x = self.pow((q + 1) / 2);
        let mut t = self.pow(q);
        let mut bits = s;
        while t.value != 1 {
            // least i with t^(2^i) = 1
            let mut i = 0u32;
            let mut t2 = t;
            while t2.value != 1 {
                t2 = t2 * t2;
                i += 1;
            }
            let b = c.pow(1u64 << (bits - i - 1));
            x = x * b;
            c = b * b;
            t = t * c;
            bits = i;
        }
        x
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;

    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.0;
        let s = self.value + rhs.value;
        FieldElement {
            value: if s >= p { s - p } else { s },
            modulus: self.modulus,
        }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;

    #[inline]
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self + (-rhs)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    #[inline]
    fn neg(self) -> FieldElement {
        let p = self.modulus.0;
        FieldElement {
            value: if self.value == 0 { 0 } else { p - self.value },
            modulus: self.modulus,
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;

    #[inline]
    fn mul(self, rhs: FieldElement) -> FieldElement {
        debug_assert_eq!(self.modulus, rhs.modulus);
        FieldElement {
            value: mul_mod(self.value, rhs.value, self.modulus.0),
            modulus: self.modulus,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn small_primes() -> impl Iterator<Item = u64> {
        (5..=101).filter(|&n| is_prime(n))
    }

    #[test]
    fn modulus_validation() {
        assert!(PrimeModulus::new(5).is_ok());
        assert!(PrimeModulus::new(2147483647).is_ok());
        for bad in [0, 1, 2, 3, 4, 9, 91, 1 << 31] {
            assert!(matches!(PrimeModulus::new(bad), Err(Error::InvalidModulus(_))));
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(fp(5).elem(1).inv().unwrap().value(), 1);
        assert_eq!(fp(5).elem(2).inv().unwrap().value(), 3);
        assert_eq!(fp(7).elem(4).inv().unwrap().value(), 2);
        assert!(matches!(fp(7).zero().inv(), Err(Error::ZeroInverse)));
    }

    #[test]
    fn inverse_exhaustive() {
        for p in small_primes() {
            let m = fp(p);
            for a in 1..p {
                let b = m.elem(a).inv().unwrap();
                assert_eq!((m.elem(a) * b).value(), 1, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn pow_examples() {
        assert_eq!(fp(5).elem(2).pow(3).value(), 3);
        assert_eq!(fp(11).elem(7).pow(0).value(), 1);
        assert_eq!(fp(11).zero().pow(4).value(), 0);
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(fp(5).elem(4).legendre(), 1);
        assert_eq!(fp(5).elem(3).legendre(), -1);
        assert_eq!(fp(13).zero().legendre(), 0);
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(fp(5).elem(4).sqrt().unwrap().value(), 2);
        assert_eq!(fp(17).zero().sqrt().unwrap().value(), 0);
        assert!(fp(5).elem(3).sqrt().is_none());
    }

    #[test]
    fn sqrt_exhaustive() {
        // covers both p ≡ 1 and p ≡ 3 (mod 4)
        for p in small_primes() {
            let m = fp(p);
            let mut with_root = 0;
            for a in 1..p {
                if let Some(r) = m.elem(a).sqrt() {
                    assert_eq!((r * r).value(), a);
                    assert!(r.value() <= p - r.value());
                    with_root += 1;
                }
            }
            assert_eq!(with_root, (p - 1) / 2, "p={p}");
        }
    }

    #[test]
    fn sqrt_large_tonelli_shanks() {
        // 2^31 - 1 ≡ 3 (mod 4); 998244353 ≡ 1 (mod 2^23)
        for p in [2147483647u64, 998244353] {
            let m = fp(p);
            for a in [2u64, 3, 5, 12345, p - 1, p - 4] {
                let e = m.elem(a);
                match e.sqrt() {
                    Some(r) => assert_eq!(r * r, e),
                    None => assert_eq!(e.legendre(), -1),
                }
            }
        }
    }

    proptest! {
        #[test]
        fn pow_adds_exponents(
            idx in 0usize..6,
            a in 0u64..1_000_000,
            e1 in 0u64..1_000_000,
            e2 in 0u64..1_000_000,
        ) {
            let p = [5u64, 7, 101, 65537, 998244353, 2147483647][idx];
            let x = fp(p).elem(a);
            prop_assert_eq!(x.pow(e1 + e2), x.pow(e1) * x.pow(e2));
        }

        #[test]
        fn add_sub_roundtrip(a in 0u64..2147483647, b in 0u64..2147483647) {
            let m = fp(2147483647);
            let (x, y) = (m.elem(a), m.elem(b));
            prop_assert_eq!(x + y - y, x);
            prop_assert_eq!((x + (-x)).value(), 0);
        }
    }
}
