//! The extremal construction `A = B = {a ∈ Z_T^* : x(aP) < H}`, which keeps
//! both the sum set and the product set small, and the inclusion-exclusion
//! identity behind its size estimate.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::charsum::{CharacterIndex, RootTable};
use crate::curve::Point;
use crate::error::{Error, Result};
use crate::orbit::OrbitTable;
use crate::real::{PairwiseSum, Real};
use crate::residue::{divisors, euler_phi, gcd, mobius, UnitSet};
use crate::sumprod::SumProductInstance;

/// Units whose x-coordinate representative lies in `[0, H-1]`.
pub fn build_extremal_sets(table: &OrbitTable, h: u64) -> UnitSet {
    let t = table.order();
    let members = (1..t)
        .filter(|&a| gcd(a, t) == 1 && table.x_at(a) < h)
        .collect();
    UnitSet::from_sorted_unchecked(t, members)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Report<F: Real> {
    pub h: u64,
    pub phi_t: u64,
    pub size_a: u64,
    pub size_s: u64,
    pub size_t: u64,
    /// `#S <= 2H - 1`. Only guaranteed when `2H - 2 < p`.
    pub bound_2h_ok: bool,
    /// `2H - 2 < p`, so sums of representatives below `H` cannot wrap.
    pub no_wraparound: bool,
    /// `#T <= φ(T)`.
    pub bound_phi_ok: bool,
    /// `max{#S, #T} / sqrt(p·#A)`; absent for an empty construction.
    pub ratio: Option<F>,
    /// `φ(T)^2 / (2p)`
    pub predicted_size_a: F,
    /// `#A / predicted_size_a`
    pub size_ratio: F,
    /// `T / p^{3/4}`
    pub t_over_p34: F,
}

/// Builds `A = B` for the given `H` (default `⌊φ(T)/2⌋`), measures `#S` and
/// `#T`, and checks the two exact bounds.
///
/// An empty construction yields `Error::EmptyConstruction` carrying the
/// report with `ratio = None`.
pub fn theorem3_report(table: &OrbitTable, h: Option<u64>) -> Result<Theorem3Report<f64>> {
    theorem3_report_generic(table, h)
}

pub fn theorem3_report_generic<F: Real>(
    table: &OrbitTable,
    h: Option<u64>,
) -> Result<Theorem3Report<F>> {
    let p = table.p();
    let t = table.order();
    let phi_t = euler_phi(t);
    let h = h.unwrap_or(phi_t / 2);
    if h > p {
        return Err(Error::DomainError("H must not exceed p"));
    }
    let a = build_extremal_sets(table, h);
    let inst = SumProductInstance::new(a.clone(), a.clone(), table)?;
    let size_a = a.len() as u64;
    let size_s = inst.sum_set().len() as u64;
    let size_t = inst.prod_set().len() as u64;
    let no_wraparound = 2 * h < p + 2;
    let bound_2h_ok = size_s <= (2 * h).saturating_sub(1);
    let bound_phi_ok = size_t <= phi_t;
    let f = F::of_u64;
    let predicted_size_a = f(phi_t) * f(phi_t) / (f(2) * f(p));
    let report = Theorem3Report {
        h,
        phi_t,
        size_a,
        size_s,
        size_t,
        bound_2h_ok,
        no_wraparound,
        bound_phi_ok,
        ratio: (size_a > 0).then(|| f(size_s.max(size_t)) / (f(p) * f(size_a)).sqrt()),
        predicted_size_a,
        size_ratio: f(size_a) / predicted_size_a,
        t_over_p34: f(t) / f(p).powf(F::of_f64(0.75)),
    };
    if !bound_phi_ok {
        return Err(Error::InvariantViolation(format!("#T = {size_t} > φ(T) = {phi_t}")));
    }
    if no_wraparound && !bound_2h_ok {
        return Err(Error::InvariantViolation(format!("#S = {size_s} > 2H - 1 with H = {h}")));
    }
    if size_a == 0 {
        return Err(Error::EmptyConstruction(Box::new(to_f64(&report))));
    }
    Ok(report)
}

fn to_f64<F: Real>(r: &Theorem3Report<F>) -> Theorem3Report<f64> {
    let g = |v: F| v.to_f64().unwrap_or(f64::NAN);
    Theorem3Report {
        h: r.h,
        phi_t: r.phi_t,
        size_a: r.size_a,
        size_s: r.size_s,
        size_t: r.size_t,
        bound_2h_ok: r.bound_2h_ok,
        no_wraparound: r.no_wraparound,
        bound_phi_ok: r.bound_phi_ok,
        ratio: r.ratio.map(g),
        predicted_size_a: g(r.predicted_size_a),
        size_ratio: g(r.size_ratio),
        t_over_p34: g(r.t_over_p34),
    }
}

/// Both sides of
/// `Σ_{gcd(a,T)=1} ψ(x(aP)) = Σ_{d|T} μ(d) Σ_{b=1}^{T/d} ψ(x(bdP))`,
/// where terms at the identity contribute zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusCheck<F: Real> {
    pub lhs: Complex<F>,
    pub rhs: Complex<F>,
    pub residual: F,
}

/// The left side reads the orbit table over the units; each inner sum on
/// the right walks the orbit of `dP` with the group law.
pub fn mobius_identity_check<F: Real>(
    chi: CharacterIndex,
    table: &OrbitTable,
    roots: &RootTable<F>,
) -> Result<MobiusCheck<F>> {
    if roots.modulus() != table.curve().modulus() || chi.modulus() != roots.modulus() {
        return Err(Error::DomainError("character, roots and orbit use different fields"));
    }
    let t = table.order();
    let curve = table.curve();
    let lhs = (1..t)
        .filter(|&a| gcd(a, t) == 1)
        .map(|a| roots.psi(chi, table.x_at(a)))
        .collect::<PairwiseSum<F>>()
        .finish();
    let mut rhs = PairwiseSum::new();
    for d in divisors(t) {
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let step = curve.mul_unchecked(d, table.generator());
        let mut q = step;
        let mut inner = PairwiseSum::new();
        // b = 1..T/d - 1; b = T/d lands on the identity
        for _ in 1..t / d {
            match q {
                Point::Affine { x, .. } => inner.push(roots.psi(chi, x.value())),
                Point::Infinity => unreachable!("dP has order exactly T/d"),
            }
            q = curve.add(&q, &step);
        }
        debug_assert!(q.is_infinity());
        let s = inner.finish();
        rhs.push(if mu > 0 { s } else { -s });
    }
    let rhs = rhs.finish();
    Ok(MobiusCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveParams;
    use crate::residue::units_of;

    fn known() -> OrbitTable {
        let e = CurveParams::new(5, 1, 1).unwrap();
        OrbitTable::build(&e, &e.point(0, 1).unwrap(), 9).unwrap()
    }

    #[test]
    fn extremal_sets_known() {
        let table = known();
        assert_eq!(build_extremal_sets(&table, 3).members(), &[1, 8]);
        assert_eq!(build_extremal_sets(&table, 5), units_of(9));
        assert!(build_extremal_sets(&table, 0).is_empty());
        let mut prev = build_extremal_sets(&table, 0);
        for h in 1..=5 {
            let next = build_extremal_sets(&table, h);
            assert!(prev.is_subset(&next));
            prev = next;
        }
    }

    #[test]
    fn report_known() {
        let table = known();
        let r = theorem3_report(&table, Some(3)).unwrap();
        assert_eq!((r.h, r.size_a, r.size_s, r.size_t), (3, 2, 1, 1));
        assert!(r.bound_phi_ok && r.bound_2h_ok && r.no_wraparound);
        assert!((r.ratio.unwrap() - 1.0 / 10f64.sqrt()).abs() < 1e-15);
        assert!((r.predicted_size_a - 3.6).abs() < 1e-12);
        // default H = φ(9)/2 = 3
        assert_eq!(theorem3_report(&table, None).unwrap(), r);
    }

    #[test]
    fn empty_construction_still_reports() {
        match theorem3_report(&known(), Some(0)) {
            Err(Error::EmptyConstruction(r)) => {
                assert_eq!(r.size_a, 0);
                assert!(r.ratio.is_none());
                assert!(r.bound_2h_ok);
            }
            other => panic!("{other:?}"),
        }
        assert!(theorem3_report(&known(), Some(6)).is_err());
    }

    #[test]
    fn mobius_identity_known() {
        let table = known();
        let p = table.curve().modulus();
        let roots = RootTable::<f64>::new(p);
        let c0 = mobius_identity_check(CharacterIndex::new(0, p), &table, &roots).unwrap();
        assert!((c0.lhs.re - 6.0).abs() < 1e-12);
        assert!(c0.residual < 1e-9);
        for lambda in 1..5 {
            let c = mobius_identity_check(CharacterIndex::new(lambda, p), &table, &roots).unwrap();
            assert!(c.residual < 1e-9, "λ={lambda}: {c:?}");
        }
    }
}
