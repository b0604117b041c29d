//! Exact experiments for the sum-product problem on elliptic curves.
//!
//! For a point `P` of order `T` on an ordinary curve over `F_p` and sets
//! `A, B ⊆ Z_T^*`, this crate builds the sum set `{x(aP) + x(bP)}` and the
//! product set `{x(abP)}`, evaluates the additive character sums that
//! control their sizes, and checks every exact identity the analysis rests
//! on. Asymptotic bounds are reported as ratios, never asserted.
//!
//! Modular arithmetic is exact on `u64`. Analytic quantities (character
//! sums, bound formulas) are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix them to `f64`.

pub mod charsum;
pub mod curve;
pub mod error;
pub mod extremal;
pub mod field;
pub mod harness;
pub mod orbit;
pub mod real;
pub mod residue;
pub mod rng;
pub mod sumprod;

pub use charsum::{CharacterIndex, SCAN_CAP};
pub use curve::{CurveParams, CurveSummary, Point, ENUMERATION_CAP};
pub use error::{Error, Result};
pub use field::{FieldElement, PrimeModulus};
pub use orbit::OrbitTable;
pub use real::Real;
pub use residue::{ResidueRing, UnitSet};
pub use sumprod::{FieldSet, SumProductInstance};

pub type RootTable = charsum::RootTable<f64>;
pub type WeightFunction = charsum::WeightFunction<f64>;
pub type CharSumReport = charsum::CharSumReport<f64>;
pub type SubgroupScan = charsum::SubgroupScan<f64>;
pub type Theorem2Report = sumprod::Theorem2Report<f64>;
pub type Theorem3Report = extremal::Theorem3Report<f64>;
pub type MobiusCheck = extremal::MobiusCheck<f64>;

pub type RootTable32 = charsum::RootTable<f32>;
pub type CharSumReport32 = charsum::CharSumReport<f32>;
