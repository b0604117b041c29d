//! Additive characters `ψ_λ(z) = e^{2πiλz/p}` of `F_p` and the sums built
//! from them: bilinear sums over the orbit, complete subgroup sums, and the
//! character expansion of the solution count `J`.
//!
//! Characters are read from a table of `p`-th roots of unity, so inner loops
//! do index arithmetic only.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{mul_mod, PrimeModulus};
use crate::orbit::OrbitTable;
use crate::real::{PairwiseSum, Real};
use crate::residue::UnitSet;
use crate::sumprod::{FieldSet, SumProductInstance};

/// Default cap on `p` for scans over every nontrivial character.
pub const SCAN_CAP: u64 = 100_000;

/// `ψ_λ`, trivial iff `λ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CharacterIndex {
    lambda: u64,
    modulus: PrimeModulus,
}

impl CharacterIndex {
    pub fn new(lambda: u64, modulus: PrimeModulus) -> Self {
        CharacterIndex {
            lambda: lambda % modulus.get(),
            modulus,
        }
    }

    pub fn lambda(self) -> u64 {
        self.lambda
    }

    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_trivial(self) -> bool {
        self.lambda == 0
    }
}

/// `e^{2πij/p}` for `j = 0..p-1`.
#[derive(Clone, Debug)]
pub struct RootTable<F: Real> {
    modulus: PrimeModulus,
    roots: Vec<Complex<F>>,
}

impl<F: Real> RootTable<F> {
    pub fn new(modulus: PrimeModulus) -> Self {
        let p = modulus.get();
        let roots = (0..p)
            .map(|j| {
                let angle = std::f64::consts::TAU * j as f64 / p as f64;
                Complex::new(F::of_f64(angle.cos()), F::of_f64(angle.sin()))
            })
            .collect();
        RootTable { modulus, roots }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    /// `e^{2πij/p}` for a reduced exponent `j`.
    #[inline]
    pub fn root(&self, j: u64) -> Complex<F> {
        self.roots[j as usize]
    }

    /// `ψ_λ(z)`.
    #[inline]
    pub fn psi(&self, chi: CharacterIndex, z: u64) -> Complex<F> {
        debug_assert_eq!(chi.modulus, self.modulus);
        self.roots[mul_mod(chi.lambda, z, self.modulus.get()) as usize]
    }

    fn check(&self, table: &OrbitTable) -> Result<()> {
        if table.curve().modulus() != self.modulus {
            return Err(Error::DomainError("root table and orbit use different fields"));
        }
        Ok(())
    }
}

/// A weight supported on a unit set with values of modulus at most 1.
#[derive(Clone, Debug)]
pub struct WeightFunction<F: Real> {
    support: UnitSet,
    values: Option<Vec<Complex<F>>>,
}

impl<F: Real> WeightFunction<F> {
    /// The constant 1 on `support`.
    pub fn unit(support: UnitSet) -> Self {
        WeightFunction {
            support,
            values: None,
        }
    }

    /// `values[i]` is the weight of the `i`-th member of `support` in
    /// ascending order.
    pub fn new(support: UnitSet, values: Vec<Complex<F>>) -> Result<Self> {
        if values.len() != support.len() {
            return Err(Error::DomainError("one weight per support element"));
        }
        let slack = F::one() + F::epsilon() * F::of_u64(4);
        if values.iter().any(|v| !(v.norm() <= slack)) {
            return Err(Error::DomainError("weights must have modulus at most 1"));
        }
        Ok(WeightFunction {
            support,
            values: Some(values),
        })
    }

    pub fn support(&self) -> &UnitSet {
        &self.support
    }

    /// Weight at `k`; zero off the support.
    pub fn at(&self, k: u64) -> Complex<F> {
        match self.support.members().binary_search(&(k % self.support.modulus())) {
            Ok(i) => self.weight_of_index(i),
            Err(_) => Complex::new(F::zero(), F::zero()),
        }
    }

    #[inline]
    fn weight_of_index(&self, i: usize) -> Complex<F> {
        match &self.values {
            None => Complex::new(F::one(), F::zero()),
            Some(v) => v[i],
        }
    }

    fn entries(&self) -> impl Iterator<Item = (u64, Complex<F>)> + '_ {
        self.support
            .iter()
            .enumerate()
            .map(|(i, k)| (k, self.weight_of_index(i)))
    }
}

/// `Σ_{k∈K} |Σ_{m∈M} ρ(k)ϑ(m)ψ(x(kmP))|`.
pub fn bilinear_sum<F: Real>(
    rho: &WeightFunction<F>,
    theta: &WeightFunction<F>,
    chi: CharacterIndex,
    table: &OrbitTable,
    roots: &RootTable<F>,
) -> Result<F> {
    roots.check(table)?;
    let t = table.order();
    for w in [rho, theta] {
        if w.support.modulus() != t {
            return Err(Error::ModulusMismatch {
                left: w.support.modulus(),
                right: t,
            });
        }
    }
    let inner_terms: Vec<(u64, Complex<F>)> = theta.entries().collect();
    let mut outer = PairwiseSum::new();
    for (k, rk) in rho.entries() {
        let inner: PairwiseSum<F> = inner_terms
            .iter()
            .map(|&(m, tm)| tm * roots.psi(chi, table.x_at(mul_mod(k, m, t))))
            .collect();
        let v = (rk * inner.finish()).norm();
        outer.push(Complex::new(v, F::zero()));
    }
    Ok(outer.finish().re)
}

/// `(#K)^{1-1/2ν} (#M)^{(ν+1)/(ν+2)} T^{(ν+1)/(ν(ν+2))} q^{1/(4(ν+2))} (log q)^{1/(ν+2)}`
/// with the natural logarithm.
pub fn theorem1_rhs<F: Real>(nu: u32, size_k: u64, size_m: u64, t: u64, q: u64) -> Result<F> {
    if nu == 0 {
        return Err(Error::DomainError("nu must be at least 1"));
    }
    if size_k == 0 || size_m == 0 || t == 0 || q < 2 {
        return Err(Error::DomainError("sizes must be positive"));
    }
    let n = nu as f64;
    let e = F::of_f64;
    let f = F::of_u64;
    Ok(f(size_k).powf(e(1.0 - 1.0 / (2.0 * n)))
        * f(size_m).powf(e((n + 1.0) / (n + 2.0)))
        * f(t).powf(e((n + 1.0) / (n * (n + 2.0))))
        * f(q).powf(e(1.0 / (4.0 * (n + 2.0))))
        * f(q).ln().powf(e(1.0 / (n + 2.0))))
}

/// `Σ_{k=1}^{T-1} ψ_λ(x(kP))`; the identity is excluded.
pub fn subgroup_sum<F: Real>(
    chi: CharacterIndex,
    table: &OrbitTable,
    roots: &RootTable<F>,
) -> Result<Complex<F>> {
    roots.check(table)?;
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    Ok(table
        .xs()
        .iter()
        .map(|&x| roots.psi(chi, x))
        .collect::<PairwiseSum<F>>()
        .finish())
}

/// Largest `|Σ_k ψ_λ(x(kP))|` over all nontrivial `λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgroupScan<F: Real> {
    pub lambda: u64,
    pub max_abs: F,
    /// `max_abs / sqrt(p)`
    pub normalized: F,
}

pub fn subgroup_scan<F: Real>(
    table: &OrbitTable,
    roots: &RootTable<F>,
    cap: u64,
) -> Result<SubgroupScan<F>> {
    let p = table.p();
    if p > cap {
        return Err(Error::CapExceeded { p, cap });
    }
    let m = table.curve().modulus();
    let mut best = SubgroupScan {
        lambda: 1,
        max_abs: F::neg_infinity(),
        normalized: F::zero(),
    };
    for lambda in 1..p {
        let v = subgroup_sum(CharacterIndex::new(lambda, m), table, roots)?.norm();
        if v > best.max_abs {
            best.lambda = lambda;
            best.max_abs = v;
        }
    }
    best.normalized = best.max_abs / F::of_u64(p).sqrt();
    Ok(best)
}

/// Multiset of values as `(value, multiplicity)` pairs.
fn histogram(p: u64, values: impl Iterator<Item = u64>) -> Vec<(u64, u64)> {
    let mut counts = vec![0u64; p as usize];
    for v in values {
        counts[v as usize] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(v, c)| (v as u64, c))
        .collect()
}

fn transform<F: Real>(roots: &RootTable<F>, chi: CharacterIndex, hist: &[(u64, u64)]) -> Complex<F> {
    hist.iter()
        .map(|&(z, c)| roots.psi(chi, z) * F::of_u64(c))
        .collect::<PairwiseSum<F>>()
        .finish()
}

/// `J` for arbitrary `B`, `H`, `S`, by orthogonality of characters:
///
/// `J = (1/p) Σ_λ [Σ_{b1,h} ψ_λ(x(h b1⁻¹ P))] [Σ_{b2} ψ_λ(x(b2 P))] [Σ_u ψ_λ(-u)]`.
///
/// Each factor is summed over its multiset of arguments.
pub fn j_from_sets<F: Real>(
    b: &UnitSet,
    h: &UnitSet,
    s: &FieldSet,
    table: &OrbitTable,
    roots: &RootTable<F>,
) -> Result<Complex<F>> {
    roots.check(table)?;
    let t = table.order();
    let p = table.p();
    let b_inv = b.inverses();
    let first = histogram(
        p,
        b_inv
            .iter()
            .flat_map(|bi| h.iter().map(move |hv| table.x_at(mul_mod(hv, bi, t)))),
    );
    let second = histogram(p, b.iter().map(|v| table.x_at(v)));
    let third = histogram(p, s.values().iter().map(|&u| (p - u) % p));
    let m = table.curve().modulus();
    let total: PairwiseSum<F> = (0..p)
        .map(|lambda| {
            let chi = CharacterIndex::new(lambda, m);
            transform(roots, chi, &first) * transform(roots, chi, &second) * transform(roots, chi, &third)
        })
        .collect();
    Ok(total.finish() / F::of_u64(p))
}

/// `J` for the instance `(A, B)`, with `H = AB` and `S` its sum set.
pub fn j_via_characters<F: Real>(
    a: &UnitSet,
    b: &UnitSet,
    table: &OrbitTable,
    roots: &RootTable<F>,
) -> Result<Complex<F>> {
    let inst = SumProductInstance::new(a.clone(), b.clone(), table)?;
    j_from_sets(b, &inst.product_index_set(), &inst.sum_set(), table, roots)
}

/// Worst nontrivial character for the bilinear sum against its bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharSumReport<F: Real> {
    pub nu: u32,
    /// Smallest `λ` attaining the maximum.
    pub lambda: u64,
    pub value: F,
    pub rhs: F,
    pub ratio: F,
}

/// Scans `λ = 1..p-1` with unit weights on `K` and `M`.
pub fn theorem1_ratio_scan<F: Real>(
    table: &OrbitTable,
    k: &UnitSet,
    m: &UnitSet,
    nu: u32,
    roots: &RootTable<F>,
    cap: u64,
) -> Result<CharSumReport<F>> {
    let p = table.p();
    if p > cap {
        return Err(Error::CapExceeded { p, cap });
    }
    let rhs = theorem1_rhs::<F>(nu, k.len() as u64, m.len() as u64, table.order(), p)?;
    let rho = WeightFunction::unit(k.clone());
    let theta = WeightFunction::unit(m.clone());
    let modulus = table.curve().modulus();
    let mut best: Option<(u64, F)> = None;
    for lambda in 1..p {
        let v = bilinear_sum(&rho, &theta, CharacterIndex::new(lambda, modulus), table, roots)?;
        // ties (conjugate characters agree up to rounding) go to the smaller λ
        if best.map_or(true, |(_, b)| v > b + F::of_f64(1e-12) * b.max(F::one())) {
            best = Some((lambda, v));
        }
    }
    let (lambda, value) = best.expect("p >= 5 gives nontrivial characters");
    Ok(CharSumReport {
        nu,
        lambda,
        value,
        rhs,
        ratio: value / rhs,
    })
}
