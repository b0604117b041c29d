//! The floating-point scalar used by character sums and bound formulas.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Scalar type for analytic quantities. Implemented for `f32` and `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    #[inline]
    fn of_u64(v: u64) -> Self {
        Self::from_u64(v).expect("u64 is representable")
    }

    #[inline]
    fn of_f64(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Sums up to this many terms sequentially; longer sums are reduced
/// pairwise over blocks of this size.
pub const PAIRWISE_BLOCK: usize = 1 << 15;

/// Streaming accumulator: sequential within a block, pairwise across blocks.
#[derive(Clone, Debug, Default)]
pub struct PairwiseSum<F: Real> {
    current: Complex<F>,
    in_block: usize,
    blocks: Vec<Complex<F>>,
}

impl<F: Real> PairwiseSum<F> {
    pub fn new() -> Self {
        PairwiseSum {
            current: Complex::new(F::zero(), F::zero()),
            in_block: 0,
            blocks: Vec::new(),
        }
    }

    #[inline]
    pub fn push(&mut self, z: Complex<F>) {
        self.current = self.current + z;
        self.in_block += 1;
        if self.in_block == PAIRWISE_BLOCK {
            self.blocks.push(self.current);
            self.current = Complex::new(F::zero(), F::zero());
            self.in_block = 0;
        }
    }

    pub fn finish(mut self) -> Complex<F> {
        if self.blocks.is_empty() {
            return self.current;
        }
        self.blocks.push(self.current);
        tree_sum(&self.blocks)
    }
}

fn tree_sum<F: Real>(xs: &[Complex<F>]) -> Complex<F> {
    match xs.len() {
        0 => Complex::new(F::zero(), F::zero()),
        1 => xs[0],
        n => tree_sum(&xs[..n / 2]) + tree_sum(&xs[n / 2..]),
    }
}

impl<F: Real> FromIterator<Complex<F>> for PairwiseSum<F> {
    fn from_iter<I: IntoIterator<Item = Complex<F>>>(iter: I) -> Self {
        let mut acc = PairwiseSum::new();
        for z in iter {
            acc.push(z);
        }
        acc
    }
}
