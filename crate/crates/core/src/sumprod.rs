//! The sum set `{x(aP) + x(bP)}`, the product set `{x(abP)}`, the product
//! index set `{ab mod T}`, the solution count `J` and the lower-bound report
//! built from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::orbit::OrbitTable;
use crate::real::Real;
use crate::residue::{inv_mod, UnitSet};

/// A set of field elements stored as sorted canonical representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSet {
    modulus: PrimeModulus,
    values: Vec<u64>,
}

impl FieldSet {
    pub fn new(modulus: PrimeModulus, values: impl IntoIterator<Item = u64>) -> Self {
        let mut v: Vec<u64> = values.into_iter().map(|x| x % modulus.get()).collect();
        v.sort_unstable();
        v.dedup();
        FieldSet { modulus, values: v }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn contains(&self, v: u64) -> bool {
        self.values.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &FieldSet) -> bool {
        self.values.iter().all(|&v| other.contains(v))
    }

    fn indicator(&self) -> Vec<bool> {
        let mut bits = vec![false; self.modulus.get() as usize];
        for &v in &self.values {
            bits[v as usize] = true;
        }
        bits
    }
}

/// Two unit sets over the same orbit.
#[derive(Clone, Debug)]
pub struct SumProductInstance<'a> {
    a: UnitSet,
    b: UnitSet,
    table: &'a OrbitTable,
}

impl<'a> SumProductInstance<'a> {
    pub fn new(a: UnitSet, b: UnitSet, table: &'a OrbitTable) -> Result<Self> {
        for s in [&a, &b] {
            if s.modulus() != table.order() {
                return Err(Error::ModulusMismatch {
                    left: s.modulus(),
                    right: table.order(),
                });
            }
        }
        Ok(SumProductInstance { a, b, table })
    }

    pub fn a(&self) -> &UnitSet {
        &self.a
    }

    pub fn b(&self) -> &UnitSet {
        &self.b
    }

    pub fn table(&self) -> &OrbitTable {
        self.table
    }

    /// `{x(aP) + x(bP) : a ∈ A, b ∈ B}`.
    pub fn sum_set(&self) -> FieldSet {
        let p = self.table.p();
        let xb: Vec<u64> = self.b.iter().map(|b| self.table.x_at(b)).collect();
        let mut hit = vec![false; p as usize];
        for a in self.a.iter() {
            let xa = self.table.x_at(a);
            for &x in &xb {
                let s = xa + x;
                hit[(if s >= p { s - p } else { s }) as usize] = true;
            }
        }
        FieldSet {
            modulus: self.table.curve().modulus(),
            values: (0..p).filter(|&v| hit[v as usize]).collect(),
        }
    }

    /// `{ab mod T : a ∈ A, b ∈ B}`.
    pub fn product_index_set(&self) -> UnitSet {
        self.a.product(&self.b).expect("moduli checked at construction")
    }

    /// `{x(abP) : a ∈ A, b ∈ B}`.
    pub fn prod_set(&self) -> FieldSet {
        let h = self.product_index_set();
        FieldSet::new(
            self.table.curve().modulus(),
            h.iter().map(|k| self.table.x_at(k)),
        )
    }
}

/// Number of `(b1, b2, h, u) ∈ B×B×H×S` with `x(h·b1⁻¹·P) + x(b2·P) = u`.
///
/// Loops over `(b1, h, b2)`; `u` is forced, so each triple contributes at
/// most one solution.
pub fn count_j(b: &UnitSet, h: &UnitSet, s: &FieldSet, table: &OrbitTable) -> Result<u64> {
    let t = table.order();
    for set in [b, h] {
        if set.modulus() != t {
            return Err(Error::ModulusMismatch {
                left: set.modulus(),
                right: t,
            });
        }
    }
    let p = table.p();
    if s.modulus().get() != p {
        return Err(Error::DomainError("S lives in a different field"));
    }
    if b.is_empty() || h.is_empty() || s.is_empty() {
        return Ok(0);
    }
    let in_s = s.indicator();
    let xb: Vec<u64> = b.iter().map(|v| table.x_at(v)).collect();
    let mut count = 0u64;
    for b1 in b.iter() {
        let b1_inv = inv_mod(b1, t)?;
        for hv in h.iter() {
            let k = crate::field::mul_mod(hv, b1_inv, t);
            let xk = table.x_at(k);
            for &x2 in &xb {
                let u = xk + x2;
                let u = if u >= p { u - p } else { u };
                count += in_s[u as usize] as u64;
            }
        }
    }
    Ok(count)
}

/// Which side of the `min` in the lower bound was smaller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RhsBranch {
    /// `q·#A`
    Linear,
    /// `(#A)^2 (#B)^{5/3} q^{-1/6} T^{-4/3} (log q)^{-2/3}`
    PowerLaw,
}

/// Both sides of the sum-product lower bound for one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report<F: Real> {
    pub size_a: u64,
    pub size_b: u64,
    pub size_s: u64,
    pub size_t: u64,
    pub size_h: u64,
    pub j: u64,
    pub j_lower: u64,
    pub delta: F,
    /// `#S · #T`
    pub lhs: u64,
    pub rhs: F,
    pub rhs_branch: RhsBranch,
    /// `lhs / rhs`; absent when `rhs = 0`.
    pub ratio: Option<F>,
    /// `log(lhs) / log(#A)`; absent when `#A <= 1` or `lhs = 0`.
    pub exponent: Option<F>,
}

/// `(#H)^{1/2} (#B)^{2/3} T^{2/3} q^{1/12} (log q)^{1/3}`.
pub fn delta<F: Real>(size_h: u64, size_b: u64, t: u64, q: u64) -> F {
    let f = F::of_u64;
    let c = |n: i32, d: i32| F::of_f64(n as f64 / d as f64);
    f(size_h).powf(c(1, 2))
        * f(size_b).powf(c(2, 3))
        * f(t).powf(c(2, 3))
        * f(q).powf(c(1, 12))
        * f(q).ln().powf(c(1, 3))
}

/// `min{q·#A, (#A)^2 (#B)^{5/3} q^{-1/6} T^{-4/3} (log q)^{-2/3}}` and the
/// branch attaining it.
pub fn theorem2_rhs<F: Real>(size_a: u64, size_b: u64, t: u64, q: u64) -> (F, RhsBranch) {
    let f = F::of_u64;
    let c = |n: i32, d: i32| F::of_f64(n as f64 / d as f64);
    let linear = f(q) * f(size_a);
    let power = f(size_a).powi(2)
        * f(size_b).powf(c(5, 3))
        * f(q).powf(c(-1, 6))
        * f(t).powf(c(-4, 3))
        * f(q).ln().powf(c(-2, 3));
    if linear <= power {
        (linear, RhsBranch::Linear)
    } else {
        (power, RhsBranch::PowerLaw)
    }
}

/// Computes every quantity of the lower bound and checks the two exact
/// facts it rests on: `J >= #A·(#B)^2` and `#T >= ⌈#H / 2⌉`.
pub fn theorem2_report<F: Real>(inst: &SumProductInstance<'_>) -> Result<Theorem2Report<F>> {
    let q = inst.table.p();
    let t = inst.table.order();
    let s = inst.sum_set();
    let h = inst.product_index_set();
    let prod = inst.prod_set();
    let j = count_j(&inst.b, &h, &s, inst.table)?;
    let (size_a, size_b) = (inst.a.len() as u64, inst.b.len() as u64);
    let (size_s, size_t, size_h) = (s.len() as u64, prod.len() as u64, h.len() as u64);
    let j_lower = size_a * size_b * size_b;
    if j < j_lower {
        return Err(Error::InvariantViolation(format!("J = {j} < #A(#B)^2 = {j_lower}")));
    }
    if size_t < size_h.div_ceil(2) {
        return Err(Error::InvariantViolation(format!(
            "#T = {size_t} < ceil(#H/2) = {}",
            size_h.div_ceil(2)
        )));
    }
    let lhs = size_s * size_t;
    let (rhs, rhs_branch) = theorem2_rhs::<F>(size_a, size_b, t, q);
    let ratio = (rhs > F::zero()).then(|| F::of_u64(lhs) / rhs);
    let exponent =
        (size_a > 1 && lhs > 0).then(|| F::of_u64(lhs).ln() / F::of_u64(size_a).ln());
    Ok(Theorem2Report {
        size_a,
        size_b,
        size_s,
        size_t,
        size_h,
        j,
        j_lower,
        delta: delta(size_h, size_b, t, q),
        lhs,
        rhs,
        rhs_branch,
        ratio,
        exponent,
    })
}
