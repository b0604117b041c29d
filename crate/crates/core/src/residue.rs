//! The residue ring `Z_T`: units, Euler's totient, the Möbius function and
//! divisor enumeration. Factorization is trial division, which is plenty for
//! `T < 2^33`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization as `(prime, exponent)` pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `φ(T)`, with `φ(1) = 1`.
pub fn euler_phi(t: u64) -> u64 {
    factorize(t)
        .into_iter()
        .fold(t, |acc, (q, _)| acc / q * (q - 1))
}

/// `μ(d)` for `d >= 1`.
pub fn mobius(d: u64) -> i8 {
    let f = factorize(d);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All positive divisors of `t`, ascending.
pub fn divisors(t: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (q, e) in factorize(t) {
        let len = out.len();
        let mut pow = 1u64;
        for _ in 0..e {
            pow *= q;
            for i in 0..len {
                out.push(out[i] * pow);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Inverse of `a` modulo `t`, in `[0, t)`.
pub fn inv_mod(a: u64, t: u64) -> Result<u64> {
    let a_red = a % t;
    let (mut r0, mut r1) = (t as i128, a_red as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(Error::NotAUnit { a, modulus: t });
    }
    Ok(s0.rem_euclid(t as i128) as u64)
}

/// `Z_T` for `T >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueRing {
    modulus: u64,
}

impl ResidueRing {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::ModulusTooSmall(modulus));
        }
        Ok(ResidueRing { modulus })
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        crate::field::mul_mod(a, b, self.modulus)
    }

    pub fn inv(self, a: u64) -> Result<u64> {
        inv_mod(a, self.modulus)
    }

    pub fn phi(self) -> u64 {
        euler_phi(self.modulus)
    }

    pub fn units(self) -> UnitSet {
        units_of(self.modulus)
    }
}

/// A subset of `Z_T^*`, kept sorted and free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitSet {
    modulus: u64,
    members: Vec<u64>,
}

impl UnitSet {
    /// Builds a unit set, reducing inputs mod `T`. Fails on any non-unit.
    pub fn new(modulus: u64, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::ModulusTooSmall(modulus));
        }
        let mut v = Vec::new();
        for m in members {
            let r = m % modulus;
            if gcd(r, modulus) != 1 {
                return Err(Error::NotAUnit { a: m, modulus });
            }
            v.push(r);
        }
        v.sort_unstable();
        v.dedup();
        Ok(UnitSet { modulus, members: v })
    }

    pub(crate) fn from_sorted_unchecked(modulus: u64, members: Vec<u64>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|&m| gcd(m, modulus) == 1));
        UnitSet { modulus, members }
    }

    pub fn empty(modulus: u64) -> Self {
        UnitSet {
            modulus,
            members: Vec::new(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, a: u64) -> bool {
        self.members.binary_search(&(a % self.modulus)).is_ok()
    }

    pub fn is_subset(&self, other: &UnitSet) -> bool {
        self.modulus == other.modulus && self.iter().all(|m| other.contains(m))
    }

    /// `{b^{-1} : b ∈ self}`.
    pub fn inverses(&self) -> UnitSet {
        let mut v: Vec<u64> = self
            .iter()
            .map(|b| inv_mod(b, self.modulus).expect("members are units"))
            .collect();
        v.sort_unstable();
        UnitSet::from_sorted_unchecked(self.modulus, v)
    }

    /// `{a·b mod T : a ∈ self, b ∈ other}`.
    pub fn product(&self, other: &UnitSet) -> Result<UnitSet> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        let t = self.modulus;
        let mut hit = vec![false; t as usize];
        for a in self.iter() {
            for b in other.iter() {
                hit[crate::field::mul_mod(a, b, t) as usize] = true;
            }
        }
        let v = (0..t).filter(|&h| hit[h as usize]).collect();
        Ok(UnitSet::from_sorted_unchecked(t, v))
    }

    /// Sorted merge union.
    pub fn union(&self, other: &UnitSet) -> Result<UnitSet> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        let (a, b) = (&self.members, &other.members);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(UnitSet::from_sorted_unchecked(self.modulus, out))
    }
}

/// `Z_T^*` in ascending order.
pub fn units_of(t: u64) -> UnitSet {
    let v = (1..t).filter(|&m| gcd(m, t) == 1).collect();
    UnitSet::from_sorted_unchecked(t, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(101), 100);
        assert_eq!(euler_phi(36), 12);
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(4), 0);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(7), -1);
    }

    #[test]
    fn units_examples() {
        assert_eq!(units_of(9).members(), &[1, 2, 4, 5, 7, 8]);
        assert_eq!(units_of(2).members(), &[1]);
        for t in 2..200 {
            assert_eq!(units_of(t).len() as u64, euler_phi(t));
        }
    }

    #[test]
    fn inv_mod_examples() {
        assert_eq!(inv_mod(2, 9).unwrap(), 5);
        assert_eq!(inv_mod(1, 17).unwrap(), 1);
        assert!(matches!(inv_mod(3, 9), Err(Error::NotAUnit { a: 3, modulus: 9 })));
    }

    #[test]
    fn divisors_examples() {
        assert_eq!(divisors(9), vec![1, 3, 9]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(13), vec![1, 13]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn mobius_sums_vanish() {
        for t in 1..=10_000u64 {
            let s: i64 = divisors(t).into_iter().map(|d| mobius(d) as i64).sum();
            assert_eq!(s, if t == 1 { 1 } else { 0 }, "T={t}");
        }
    }

    #[test]
    fn totient_sums_to_t() {
        for t in 1..=10_000u64 {
            let s: u64 = divisors(t).into_iter().map(euler_phi).sum();
            assert_eq!(s, t);
        }
    }

    #[test]
    fn units_closed_under_inverse_and_product() {
        for t in 2..=500u64 {
            let u = units_of(t);
            for a in u.iter() {
                let b = inv_mod(a, t).unwrap();
                assert!(u.contains(b));
                assert_eq!(a * b % t, 1 % t);
            }
            assert_eq!(u.product(&u).unwrap(), u);
        }
    }

    #[test]
    fn unit_set_rejects_non_units_and_normalizes() {
        assert!(UnitSet::new(9, [1, 3]).is_err());
        let s = UnitSet::new(9, [10, 1, 8, 17]).unwrap();
        assert_eq!(s.members(), &[1, 8]);
        assert!(matches!(UnitSet::new(1, [0]), Err(Error::ModulusTooSmall(1))));
    }

    #[test]
    fn union_is_merge() {
        let a = UnitSet::new(10, [1, 7]).unwrap();
        let b = UnitSet::new(10, [3, 7, 9]).unwrap();
        assert_eq!(a.union(&b).unwrap().members(), &[1, 3, 7, 9]);
        assert!(a.union(&UnitSet::empty(9)).is_err());
    }
}
