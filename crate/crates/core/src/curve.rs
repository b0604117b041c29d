//! Short Weierstrass curves `y^2 = x^3 + a4·x + a6` over `F_p`, `p >= 5`,
//! in affine coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};
use crate::residue::factorize;
use crate::rng::SeededRng;

/// Default upper bound on `p` for exhaustive point enumeration.
pub const ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<FieldElement> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(*x),
        }
    }

    pub fn y(&self) -> Option<FieldElement> {
        match self {
            Point::Infinity => None,
            Point::Affine { y, .. } => Some(*y),
        }
    }

    fn sort_key(&self) -> (u64, u64, u64) {
        match self {
            Point::Infinity => (0, 0, 0),
            Point::Affine { x, y } => (1, x.value(), y.value()),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// A nonsingular curve `y^2 = x^3 + a4·x + a6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CurveParams {
    modulus: PrimeModulus,
    a4: FieldElement,
    a6: FieldElement,
}

/// Group order, trace of Frobenius and ordinariness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub order: u64,
    pub trace: i64,
    pub ordinary: bool,
}

impl CurveParams {
    pub fn new(p: u64, a4: u64, a6: u64) -> Result<Self> {
        let m = PrimeModulus::new(p)?;
        Self::from_elements(m.elem(a4), m.elem(a6))
    }

    pub fn from_elements(a4: FieldElement, a6: FieldElement) -> Result<Self> {
        let m = a4.modulus();
        if a6.modulus() != m {
            return Err(Error::DomainError("coefficients from different fields"));
        }
        // -16 (4 a4^3 + 27 a6^2); p >= 5 so the factor -16 is a unit
        let disc = m.elem(4) * a4 * a4 * a4 + m.elem(27) * a6 * a6;
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(CurveParams { modulus: m, a4, a6 })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn a4(&self) -> FieldElement {
        self.a4
    }

    pub fn a6(&self) -> FieldElement {
        self.a6
    }

    /// `x^3 + a4·x + a6`.
    pub fn rhs(&self, x: FieldElement) -> FieldElement {
        x * x * x + self.a4 * x + self.a6
    }

    pub fn point(&self, x: u64, y: u64) -> Result<Point> {
        let pt = Point::Affine {
            x: self.modulus.elem(x),
            y: self.modulus.elem(y),
        };
        if self.contains(&pt) {
            Ok(pt)
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                x.modulus() == self.modulus && y.modulus() == self.modulus && *y * *y == self.rhs(*x)
            }
        }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match *pt {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x, y: -y },
        }
    }

    /// Chord-tangent addition. Inputs are assumed to lie on the curve; use
    /// [`CurveParams::checked_add`] to validate them.
    pub fn add(&self, p1: &Point, p2: &Point) -> Point {
        let (x1, y1, x2, y2) = match (*p1, *p2) {
            (Point::Infinity, q) | (q, Point::Infinity) => return q,
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return Point::Infinity;
            }
            let m = self.modulus;
            (m.elem(3) * x1 * x1 + self.a4) * (m.elem(2) * y1).inv().expect("y1 ≠ 0")
        } else {
            (y2 - y1) * (x2 - x1).inv().expect("x1 ≠ x2")
        };
        let x3 = slope * slope - x1 - x2;
        let y3 = slope * (x1 - x3) - y1;
        Point::Affine { x: x3, y: y3 }
    }

    pub fn checked_add(&self, p1: &Point, p2: &Point) -> Result<Point> {
        if !self.contains(p1) || !self.contains(p2) {
            return Err(Error::NotOnCurve);
        }
        Ok(self.add(p1, p2))
    }

    /// `k·P` by left-to-right double-and-add.
    pub fn scalar_mul(&self, k: u64, pt: &Point) -> Result<Point> {
        if !self.contains(pt) {
            return Err(Error::NotOnCurve);
        }
        Ok(self.mul_unchecked(k, pt))
    }

    pub(crate) fn mul_unchecked(&self, k: u64, pt: &Point) -> Point {
        let mut acc = Point::Infinity;
        for bit in (0..64 - k.leading_zeros()).rev() {
            acc = self.add(&acc, &acc);
            if (k >> bit) & 1 == 1 {
                acc = self.add(&acc, pt);
            }
        }
        acc
    }

    /// All points, `O` first, then affine points ascending by `(x, y)`.
    /// Returns the group order alongside.
    pub fn enumerate_points(&self, cap: u64) -> Result<(u64, Vec<Point>)> {
        let p = self.modulus.get();
        if p > cap {
            return Err(Error::CapExceeded { p, cap });
        }
        let mut pts = vec![Point::Infinity];
        for xv in 0..p {
            let x = self.modulus.elem(xv);
            let r = self.rhs(x);
            if let Some(y) = r.sqrt() {
                pts.push(Point::Affine { x, y });
                if !y.is_zero() {
                    pts.push(Point::Affine { x, y: -y });
                }
            }
        }
        pts.sort_by_key(Point::sort_key);
        Ok((pts.len() as u64, pts))
    }

    /// `#E(F_p)` by summing Legendre symbols, without listing points.
    pub fn count_points(&self, cap: u64) -> Result<u64> {
        let p = self.modulus.get();
        if p > cap {
            return Err(Error::CapExceeded { p, cap });
        }
        let affine: i64 = (0..p)
            .map(|xv| 1 + self.rhs(self.modulus.elem(xv)).legendre() as i64)
            .sum();
        Ok(affine as u64 + 1)
    }

    pub fn summary(&self, cap: u64) -> Result<CurveSummary> {
        let order = self.count_points(cap)?;
        let p = self.modulus.get();
        let trace = p as i64 + 1 - order as i64;
        debug_assert!((trace as f64).powi(2) <= 4.0 * p as f64, "Hasse bound");
        Ok(CurveSummary {
            order,
            trace,
            ordinary: trace.rem_euclid(p as i64) != 0,
        })
    }

    /// Exact order of `pt` given the group order `n`, by stripping prime
    /// factors of `n`.
    pub fn point_order(&self, pt: &Point, n: u64) -> Result<u64> {
        if !self.contains(pt) {
            return Err(Error::NotOnCurve);
        }
        if !self.mul_unchecked(n, pt).is_infinity() {
            return Err(Error::OrderNotDividing(n));
        }
        let mut t = n;
        for (q, _) in factorize(n) {
            while t % q == 0 && self.mul_unchecked(t / q, pt).is_infinity() {
                t /= q;
            }
        }
        Ok(t)
    }

    /// A uniformly chosen affine point: random `x` until `rhs(x)` is a
    /// square, then a random sign of `y`.
    pub fn random_point(&self, rng: &mut SeededRng) -> Point {
        let p = self.modulus.get();
        loop {
            let x = self.modulus.elem(rng.below(p));
            if let Some(y) = self.rhs(x).sqrt() {
                let y = if rng.below(2) == 1 { -y } else { y };
                return Point::Affine { x, y };
            }
        }
    }

    /// Random nonsingular curve over `F_p`.
    pub fn random(p: PrimeModulus, rng: &mut SeededRng) -> CurveParams {
        loop {
            let a4 = p.elem(rng.below(p.get()));
            let a6 = p.elem(rng.below(p.get()));
            if let Ok(c) = CurveParams::from_elements(a4, a6) {
                return c;
            }
        }
    }

    /// Among `samples` random points, one of largest order (first drawn
    /// wins ties), together with that order.
    pub fn max_order_point(
        &self,
        order: u64,
        samples: usize,
        rng: &mut SeededRng,
    ) -> Result<(Point, u64)> {
        let mut best = (Point::Infinity, 1u64);
        for _ in 0..samples.max(1) {
            let pt = self.random_point(rng);
            let t = self.point_order(&pt, order)?;
            if t > best.1 {
                best = (pt, t);
            }
        }
        Ok(best)
    }
}

impl fmt::Display for CurveParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y^2 = x^3 + {}x + {} over F_{}",
            self.a4, self.a6, self.modulus
        )
    }
}
