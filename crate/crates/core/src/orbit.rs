//! The orbit table `k ↦ x(kP)` for `k = 1..T-1`.
//!
//! Every set and sum in the crate reads x-coordinates from here. There is no
//! slot for `k ≡ 0 (mod T)`: the identity has no x-coordinate.
//!
//! # Cache file
//!
//! Little-endian, no padding:
//!
//! ```text
//! offset  size  field
//! 0       5     magic "ECSP1"
//! 5       8     p
//! 13      8     a4
//! 21      8     a6
//! 29      8     x(P)
//! 37      8     y(P)
//! 45      8     T
//! 53      8·(T-1)  x(kP) for k = 1..T-1
//! ```

use std::io::{Read, Write};

use crate::curve::{CurveParams, Point};
use crate::error::{Error, Result};
use crate::field::FieldElement;

pub const CACHE_MAGIC: &[u8; 5] = b"ECSP1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTable {
    curve: CurveParams,
    generator: Point,
    order: u64,
    xs: Vec<u64>,
}

impl OrbitTable {
    /// Walks `Q ← Q ⊕ P` for `T - 1` steps, recording `x(Q)`.
    pub fn build(curve: &CurveParams, generator: &Point, order: u64) -> Result<OrbitTable> {
        if !curve.contains(generator) {
            return Err(Error::NotOnCurve);
        }
        if order < 2 {
            return Err(Error::OrderMismatch(order));
        }
        let mut xs = Vec::with_capacity(order as usize - 1);
        let mut q = *generator;
        for _ in 1..order {
            match q {
                Point::Infinity => return Err(Error::OrderMismatch(order)),
                Point::Affine { x, .. } => xs.push(x.value()),
            }
            q = curve.add(&q, generator);
        }
        if !q.is_infinity() {
            return Err(Error::OrderMismatch(order));
        }
        Ok(OrbitTable {
            curve: *curve,
            generator: *generator,
            order,
            xs,
        })
    }

    pub fn curve(&self) -> &CurveParams {
        &self.curve
    }

    pub fn generator(&self) -> &Point {
        &self.generator
    }

    /// The order `T` of the generator.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn p(&self) -> u64 {
        self.curve.modulus().get()
    }

    /// `x(kP)` for `k = 1..T-1`, as canonical representatives.
    pub fn xs(&self) -> &[u64] {
        &self.xs
    }

    /// `x(kP)` for any `k ≢ 0 (mod T)`.
    pub fn x_of(&self, k: u64) -> Result<FieldElement> {
        let r = k % self.order;
        if r == 0 {
            return Err(Error::IdentityHasNoX);
        }
        Ok(self.curve.modulus().elem(self.xs[r as usize - 1]))
    }

    /// Raw representative of `x(kP)` for an already reduced `k ∈ [1, T)`.
    #[inline]
    pub fn x_at(&self, k: u64) -> u64 {
        debug_assert!(k > 0 && k < self.order);
        self.xs[k as usize - 1]
    }

    /// `x(kP) = x((T-k)P)` for every `k`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.xs.len();
        (0..n).all(|i| self.xs[i] == self.xs[n - 1 - i])
    }

    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<()> {
        let (gx, gy) = match self.generator {
            Point::Affine { x, y } => (x.value(), y.value()),
            Point::Infinity => unreachable!("generator of order ≥ 2"),
        };
        w.write_all(CACHE_MAGIC)?;
        for v in [
            self.p(),
            self.curve.a4().value(),
            self.curve.a6().value(),
            gx,
            gy,
            self.order,
        ] {
            w.write_all(&v.to_le_bytes())?;
        }
        for &x in &self.xs {
            w.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a cache file and checks it against a fresh walk of the orbit.
    pub fn read_cache<R: Read>(mut r: R) -> Result<OrbitTable> {
        let mut magic = [0u8; 5];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let mut header = [0u64; 6];
        for h in header.iter_mut() {
            *h = read_u64(&mut r)?;
        }
        let [p, a4, a6, gx, gy, order] = header;
        let curve = CurveParams::new(p, a4, a6)?;
        let generator = curve.point(gx, gy)?;
        if order < 2 || order > 2 * p + 2 {
            return Err(Error::Cache(format!("implausible order {order}")));
        }
        let mut xs = Vec::with_capacity(order as usize - 1);
        for _ in 1..order {
            xs.push(read_u64(&mut r)?);
        }
        let mut rest = Vec::new();
        r.read_to_end(&mut rest)?;
        if !rest.is_empty() {
            return Err(Error::Cache("trailing bytes".into()));
        }
        let table = OrbitTable::build(&curve, &generator, order)?;
        if table.xs != xs {
            return Err(Error::Cache("stored x-coordinates disagree with the curve".into()));
        }
        Ok(table)
    }
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}
