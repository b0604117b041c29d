//! Seeded experiment sweeps, the identity suite, and CSV/JSON emission.
//!
//! # Sweep configuration
//!
//! A sweep is described by a JSON object; unknown keys are rejected.
//!
//! ```json
//! {
//!   "p_list": [5, 7, 11],            // or "p_range": {"start": 5, "end": 101}
//!   "curves_per_p": 3,
//!   "sets_per_curve": 2,
//!   "set_size": {"fixed": 4},        // or {"fraction": 0.25} of φ(T)
//!   "nu": 1,
//!   "master_seed": 42,
//!   "mode": "theorem2",              // theorem1 | theorem2 | theorem3 | identities
//!   "enumeration_cap": 10000000,     // optional
//!   "scan_cap": 100000,              // optional
//!   "point_samples": 16,             // optional
//!   "h": null                        // optional H override for theorem3
//! }
//! ```
//!
//! Experiments are numbered in loop order `(p, curve, set sample)`. The
//! curve for `(p, c)` is drawn from the stream seeded with
//! `derive_seed(derive_seed(master_seed, p), c)`, and experiment `i` uses
//! `derive_seed(master_seed, i)` for its sets.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::charsum::{
    bilinear_sum, j_from_sets, subgroup_scan, theorem1_ratio_scan, CharacterIndex, RootTable,
    WeightFunction, SCAN_CAP,
};
use crate::curve::{CurveParams, CurveSummary, Point, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::extremal::{mobius_identity_check, theorem3_report};
use crate::field::{is_prime, PrimeModulus};
use crate::orbit::OrbitTable;
use crate::residue::{units_of, UnitSet};
use crate::rng::{derive_seed, SeededRng};
use crate::sumprod::{count_j, theorem2_report, SumProductInstance};

/// Uniform `k`-subset of `Z_T^*`: partial Fisher–Yates over the ascending
/// unit list (`swap(i, i + below(n - i))` for `i < k`), then sorted.
pub fn sample_unit_subset(t: u64, k: usize, seed: u64) -> Result<UnitSet> {
    let mut units = units_of(t).members().to_vec();
    if k > units.len() {
        return Err(Error::TooLarge {
            k,
            available: units.len(),
        });
    }
    let mut rng = SeededRng::new(seed);
    let n = units.len();
    for i in 0..k {
        let j = i + rng.below((n - i) as u64) as usize;
        units.swap(i, j);
    }
    units.truncate(k);
    UnitSet::new(t, units)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Theorem1,
    Theorem2,
    Theorem3,
    Identities,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Theorem1 => "theorem1",
            Mode::Theorem2 => "theorem2",
            Mode::Theorem3 => "theorem3",
            Mode::Identities => "identities",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SetSizeRule {
    Fixed(usize),
    Fraction(f64),
}

impl SetSizeRule {
    /// Set size for a group with `phi` units, clamped to `[1, phi]`.
    pub fn size_for(self, phi: u64) -> usize {
        let phi = phi as usize;
        match self {
            SetSizeRule::Fixed(k) => k.min(phi),
            SetSizeRule::Fraction(f) => ((f * phi as f64).round() as usize).clamp(1, phi),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PRange {
    pub start: u64,
    pub end: u64,
}

fn default_enumeration_cap() -> u64 {
    ENUMERATION_CAP
}

fn default_scan_cap() -> u64 {
    SCAN_CAP
}

fn default_point_samples() -> usize {
    16
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub p_list: Option<Vec<u64>>,
    #[serde(default)]
    pub p_range: Option<PRange>,
    pub curves_per_p: usize,
    pub sets_per_curve: usize,
    pub set_size: SetSizeRule,
    #[serde(default = "one")]
    pub nu: u32,
    pub master_seed: u64,
    pub mode: Mode,
    #[serde(default = "default_enumeration_cap")]
    pub enumeration_cap: u64,
    #[serde(default = "default_scan_cap")]
    pub scan_cap: u64,
    #[serde(default = "default_point_samples")]
    pub point_samples: usize,
    #[serde(default)]
    pub h: Option<u64>,
}

fn one() -> u32 {
    1
}

impl SweepConfig {
    pub fn from_json(s: &str) -> Result<SweepConfig> {
        let cfg: SweepConfig =
            serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        match (&self.p_list, &self.p_range) {
            (Some(_), Some(_)) => return Err(Error::Config("give p_list or p_range, not both".into())),
            (None, None) => return Err(Error::Config("one of p_list or p_range is required".into())),
            _ => {}
        }
        if self.curves_per_p == 0 || self.sets_per_curve == 0 || self.nu == 0 || self.point_samples == 0 {
            return Err(Error::Config("counts and nu must be at least 1".into()));
        }
        match self.set_size {
            SetSizeRule::Fixed(0) => return Err(Error::Config("fixed set size must be ≥ 1".into())),
            SetSizeRule::Fraction(f) if !(f > 0.0 && f <= 1.0) => {
                return Err(Error::Config("fraction must lie in (0, 1]".into()))
            }
            _ => {}
        }
        Ok(())
    }

    /// Primes in the range, or the explicit list as given (entries that are
    /// not valid moduli produce error rows).
    pub fn primes(&self) -> Vec<u64> {
        match (&self.p_list, &self.p_range) {
            (Some(list), _) => list.clone(),
            (None, Some(r)) => (r.start.max(5)..=r.end).filter(|&n| is_prime(n)).collect(),
            (None, None) => Vec::new(),
        }
    }
}

/// One row of sweep output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentRecord {
    pub experiment_id: u64,
    pub mode: String,
    pub p: u64,
    pub a4: u64,
    pub a6: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub t: i64,
    #[serde(rename = "T")]
    pub order: u64,
    #[serde(rename = "Px")]
    pub px: u64,
    #[serde(rename = "Py")]
    pub py: u64,
    pub nu: u32,
    #[serde(rename = "sizeA")]
    pub size_a: u64,
    #[serde(rename = "sizeB")]
    pub size_b: u64,
    #[serde(rename = "sizeS")]
    pub size_s: u64,
    #[serde(rename = "sizeT")]
    pub size_t: u64,
    #[serde(rename = "sizeH")]
    pub size_h: u64,
    #[serde(rename = "J")]
    pub j: u64,
    #[serde(rename = "J_lower")]
    pub j_lower: u64,
    #[serde(rename = "Delta")]
    pub delta: f64,
    pub thm_lhs: f64,
    pub thm_rhs: f64,
    pub ratio: f64,
    pub exponent: f64,
    #[serde(rename = "H")]
    pub h: u64,
    #[serde(rename = "phi_T")]
    pub phi_t: u64,
    pub size_ratio: f64,
    pub t_over_p34: f64,
    pub lambda: u64,
    pub subgroup_norm: f64,
    pub residual: f64,
    pub seed: u64,
    pub error: String,
}

/// CSV header, in declared field order.
pub const CSV_HEADER: [&str; 32] = [
    "experiment_id",
    "mode",
    "p",
    "a4",
    "a6",
    "N",
    "t",
    "T",
    "Px",
    "Py",
    "nu",
    "sizeA",
    "sizeB",
    "sizeS",
    "sizeT",
    "sizeH",
    "J",
    "J_lower",
    "Delta",
    "thm_lhs",
    "thm_rhs",
    "ratio",
    "exponent",
    "H",
    "phi_T",
    "size_ratio",
    "t_over_p34",
    "lambda",
    "subgroup_norm",
    "residual",
    "seed",
    "error",
];

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

impl ExperimentRecord {
    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.experiment_id.to_string(),
            self.mode.clone(),
            self.p.to_string(),
            self.a4.to_string(),
            self.a6.to_string(),
            self.n.to_string(),
            self.t.to_string(),
            self.order.to_string(),
            self.px.to_string(),
            self.py.to_string(),
            self.nu.to_string(),
            self.size_a.to_string(),
            self.size_b.to_string(),
            self.size_s.to_string(),
            self.size_t.to_string(),
            self.size_h.to_string(),
            self.j.to_string(),
            self.j_lower.to_string(),
            real(self.delta),
            real(self.thm_lhs),
            real(self.thm_rhs),
            real(self.ratio),
            real(self.exponent),
            self.h.to_string(),
            self.phi_t.to_string(),
            real(self.size_ratio),
            real(self.t_over_p34),
            self.lambda.to_string(),
            real(self.subgroup_norm),
            real(self.residual),
            self.seed.to_string(),
            self.error.clone(),
        ]
    }

    pub fn is_violation(&self) -> bool {
        self.error == "InvariantViolation"
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn emit<W: Write>(records: &[ExperimentRecord], format: Format, mut w: W) -> Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "{}", CSV_HEADER.join(","))?;
            for r in records {
                writeln!(w, "{}", r.csv_fields().join(","))?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, records)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

/// A curve, its summary, and an orbit of a point of large order.
#[derive(Clone, Debug)]
pub struct Setup {
    pub summary: CurveSummary,
    pub table: OrbitTable,
}

/// Draws random curves over `F_p` until one is ordinary, then keeps the
/// largest-order point among `samples` random points.
pub fn find_setup(p: u64, seed: u64, samples: usize, cap: u64) -> Result<Setup> {
    let m = PrimeModulus::new(p)?;
    if p > cap {
        return Err(Error::CapExceeded { p, cap });
    }
    let mut rng = SeededRng::new(seed);
    for _ in 0..1000 {
        let curve = CurveParams::random(m, &mut rng);
        let summary = curve.summary(cap)?;
        if !summary.ordinary {
            continue;
        }
        let (pt, t) = curve.max_order_point(summary.order, samples, &mut rng)?;
        if t < 2 {
            continue;
        }
        let table = OrbitTable::build(&curve, &pt, t)?;
        return Ok(Setup { summary, table });
    }
    Err(Error::NoCurveFound(p))
}

fn base_record(id: u64, cfg: &SweepConfig, p: u64, seed: u64) -> ExperimentRecord {
    ExperimentRecord {
        experiment_id: id,
        mode: cfg.mode.as_str().to_string(),
        p,
        nu: cfg.nu,
        seed,
        ..Default::default()
    }
}

fn fill_setup(r: &mut ExperimentRecord, s: &Setup) {
    let c = s.table.curve();
    r.a4 = c.a4().value();
    r.a6 = c.a6().value();
    r.n = s.summary.order;
    r.t = s.summary.trace;
    r.order = s.table.order();
    if let Point::Affine { x, y } = s.table.generator() {
        r.px = x.value();
        r.py = y.value();
    }
    r.phi_t = crate::residue::euler_phi(r.order);
}

/// Runs every experiment and returns rows sorted by `experiment_id`. A
/// failing experiment yields a row whose `error` column names the failure.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let mut out = Vec::new();
    let mut id = 0u64;
    for p in cfg.primes() {
        for c in 0..cfg.curves_per_p {
            let curve_seed = derive_seed(derive_seed(cfg.master_seed, p), c as u64);
            let setup = find_setup(p, curve_seed, cfg.point_samples, cfg.enumeration_cap);
            let roots = match &setup {
                Ok(s) if matches!(cfg.mode, Mode::Theorem1 | Mode::Identities) && p <= cfg.scan_cap => {
                    Some(RootTable::<f64>::new(s.table.curve().modulus()))
                }
                _ => None,
            };
            for _ in 0..cfg.sets_per_curve {
                let seed = derive_seed(cfg.master_seed, id);
                let mut rec = base_record(id, cfg, p, seed);
                let result = setup.as_ref().map_err(clone_err).and_then(|s| {
                    fill_setup(&mut rec, s);
                    run_one(cfg, s, roots.as_ref(), seed, &mut rec)
                });
                if let Err(e) = result {
                    rec.error = e.code().to_string();
                }
                out.push(rec);
                id += 1;
            }
        }
    }
    Ok(out)
}

fn clone_err(e: &Error) -> Error {
    match e {
        Error::CapExceeded { p, cap } => Error::CapExceeded { p: *p, cap: *cap },
        Error::InvalidModulus(p) => Error::InvalidModulus(*p),
        Error::NoCurveFound(p) => Error::NoCurveFound(*p),
        other => Error::InvariantViolation(other.to_string()),
    }
}

fn sample_pair(t: u64, k: usize, seed: u64) -> Result<(UnitSet, UnitSet)> {
    let a = sample_unit_subset(t, k, derive_seed(seed, 0))?;
    let b = sample_unit_subset(t, k, derive_seed(seed, 1))?;
    Ok((a, b))
}

fn run_one(
    cfg: &SweepConfig,
    s: &Setup,
    roots: Option<&RootTable<f64>>,
    seed: u64,
    rec: &mut ExperimentRecord,
) -> Result<()> {
    let table = &s.table;
    let t = table.order();
    let p = table.p();
    let k = cfg.set_size.size_for(rec.phi_t);
    match cfg.mode {
        Mode::Theorem1 => {
            let roots = roots.ok_or(Error::CapExceeded { p, cap: cfg.scan_cap })?;
            let (kset, mset) = sample_pair(t, k, seed)?;
            let r = theorem1_ratio_scan(table, &kset, &mset, cfg.nu, roots, cfg.scan_cap)?;
            rec.size_a = kset.len() as u64;
            rec.size_b = mset.len() as u64;
            rec.thm_lhs = r.value;
            rec.thm_rhs = r.rhs;
            rec.ratio = r.ratio;
            rec.lambda = r.lambda;
            rec.subgroup_norm = subgroup_scan(table, roots, cfg.scan_cap)?.normalized;
        }
        Mode::Theorem2 => {
            let (a, b) = sample_pair(t, k, seed)?;
            let inst = SumProductInstance::new(a, b, table)?;
            let r = theorem2_report::<f64>(&inst)?;
            rec.size_a = r.size_a;
            rec.size_b = r.size_b;
            rec.size_s = r.size_s;
            rec.size_t = r.size_t;
            rec.size_h = r.size_h;
            rec.j = r.j;
            rec.j_lower = r.j_lower;
            rec.delta = r.delta;
            rec.thm_lhs = r.lhs as f64;
            rec.thm_rhs = r.rhs;
            rec.ratio = r.ratio.unwrap_or(0.0);
            rec.exponent = r.exponent.unwrap_or(0.0);
        }
        Mode::Theorem3 => {
            let r = match theorem3_report(table, cfg.h) {
                Ok(r) => r,
                Err(Error::EmptyConstruction(r)) => {
                    rec.h = r.h;
                    return Err(Error::EmptyConstruction(r));
                }
                Err(e) => return Err(e),
            };
            rec.h = r.h;
            rec.size_a = r.size_a;
            rec.size_b = r.size_a;
            rec.size_s = r.size_s;
            rec.size_t = r.size_t;
            rec.thm_lhs = r.size_s.max(r.size_t) as f64;
            rec.thm_rhs = ((p * r.size_a) as f64).sqrt();
            rec.ratio = r.ratio.unwrap_or(0.0);
            rec.size_ratio = r.size_ratio;
            rec.t_over_p34 = r.t_over_p34;
        }
        Mode::Identities => {
            let roots = roots.ok_or(Error::CapExceeded { p, cap: cfg.scan_cap })?;
            let (a, b) = sample_pair(t, k, seed)?;
            let mut rng = SeededRng::new(derive_seed(seed, 2));
            let lambda = rng.below(p);
            let checks = instance_identities(table, &a, &b, lambda, roots)?;
            rec.size_a = a.len() as u64;
            rec.size_b = b.len() as u64;
            rec.size_s = checks.size_s;
            rec.size_h = checks.size_h;
            rec.j = checks.j;
            rec.j_lower = checks.j_lower;
            rec.lambda = lambda;
            rec.residual = checks.worst_residual;
            if let Some(failed) = checks.failures.first() {
                return Err(Error::InvariantViolation(failed.clone()));
            }
        }
    }
    Ok(())
}

/// Outcome of the per-instance identity checks.
#[derive(Clone, Debug, Default)]
pub struct InstanceIdentities {
    pub size_s: u64,
    pub size_h: u64,
    pub j: u64,
    pub j_lower: u64,
    /// Largest residual normalized by its tolerance scale.
    pub worst_residual: f64,
    pub failures: Vec<String>,
}

/// Orbit symmetry, `J` by counting versus by characters, the injection
/// bound on `J`, and the Möbius identity at `λ = 0` and at `lambda`.
pub fn instance_identities(
    table: &OrbitTable,
    a: &UnitSet,
    b: &UnitSet,
    lambda: u64,
    roots: &RootTable<f64>,
) -> Result<InstanceIdentities> {
    let mut out = InstanceIdentities::default();
    if !table.is_symmetric() {
        out.failures.push("orbit symmetry".into());
    }
    let inst = SumProductInstance::new(a.clone(), b.clone(), table)?;
    let s = inst.sum_set();
    let h = inst.product_index_set();
    let j = count_j(b, &h, &s, table)?;
    let jc = j_from_sets(b, &h, &s, table, roots)?;
    let scale = ((b.len() * b.len() * h.len() * s.len()) as f64).max(1.0);
    let j_res = (jc.re - j as f64).abs() / scale;
    if !(j_res < 1e-6) || !(jc.im.abs() / scale < 1e-9) {
        out.failures.push(format!("J by characters {jc} vs count {j}"));
    }
    let j_lower = (a.len() * b.len() * b.len()) as u64;
    if j < j_lower {
        out.failures.push(format!("J = {j} < {j_lower}"));
    }
    let t = table.order() as f64;
    let m = table.curve().modulus();
    let mut mob = 0.0f64;
    for l in [0, lambda] {
        let c = mobius_identity_check(CharacterIndex::new(l, m), table, roots)?;
        mob = mob.max(c.residual / t);
    }
    if !(mob < 1e-9) {
        out.failures.push(format!("Möbius residual {mob}"));
    }
    out.size_s = s.len() as u64;
    out.size_h = h.len() as u64;
    out.j = j;
    out.j_lower = j_lower;
    out.worst_residual = (j_res * 1e3).max(mob);
    Ok(out)
}

/// One named check of the identity suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Exact identities for one `(curve, P)`: orbit symmetry, character
/// orthogonality, the trivial-character bilinear sum, the subgroup sum
/// bound, `J` consistency on `instances` random sets, and the Möbius
/// identity for every `λ` (or 64 random ones when `p` is large).
pub fn identity_suite(
    table: &OrbitTable,
    instances: usize,
    set_size: usize,
    seed: u64,
    scan_cap: u64,
) -> Result<Vec<IdentityCheck>> {
    let p = table.p();
    if p > scan_cap {
        return Err(Error::CapExceeded { p, cap: scan_cap });
    }
    let m = table.curve().modulus();
    let roots = RootTable::<f64>::new(m);
    let t = table.order();
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(IdentityCheck {
            name: name.to_string(),
            passed,
            detail,
        })
    };

    push("orbit_symmetry", table.is_symmetric(), format!("T = {t}"));

    let mut worst = 0.0f64;
    for z in 0..p {
        let s: num_complex::Complex<f64> = (0..p).map(|l| roots.psi(CharacterIndex::new(l, m), z)).sum();
        let want = if z == 0 { 1.0 } else { 0.0 };
        worst = worst.max((s / p as f64 - want).norm());
    }
    push("orthogonality", worst < 1e-9, format!("max residual {worst:e}"));

    let units = units_of(t);
    let triv = bilinear_sum(
        &WeightFunction::unit(units.clone()),
        &WeightFunction::unit(units.clone()),
        CharacterIndex::new(0, m),
        table,
        &roots,
    )?;
    let want = (units.len() * units.len()) as f64;
    push(
        "trivial_bilinear",
        (triv - want).abs() < 1e-9 * want.max(1.0),
        format!("{triv} vs {want}"),
    );

    let sg = subgroup_scan(table, &roots, scan_cap)?;
    push(
        "subgroup_bound",
        sg.max_abs <= (t - 1) as f64 + 1e-9,
        format!("max |sum| = {:.6} at λ = {}, /√p = {:.6}", sg.max_abs, sg.lambda, sg.normalized),
    );

    let phi = units.len();
    let k = set_size.clamp(1, phi);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for i in 0..instances {
        let s = derive_seed(seed, i as u64);
        let (a, b) = sample_pair(t, k, s)?;
        let lambda = SeededRng::new(derive_seed(s, 2)).below(p);
        let r = instance_identities(table, &a, &b, lambda, &roots)?;
        worst = worst.max(r.worst_residual);
        failures.extend(r.failures);
    }
    push(
        "instance_identities",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{instances} instances, worst scaled residual {worst:e}")
        } else {
            failures.join("; ")
        },
    );

    let lambdas: Vec<u64> = if p <= 1009 {
        (0..p).collect()
    } else {
        let mut rng = SeededRng::new(derive_seed(seed, u64::MAX));
        std::iter::once(0).chain((0..64).map(|_| rng.below(p))).collect()
    };
    let mut worst = 0.0f64;
    for l in lambdas {
        let c = mobius_identity_check(CharacterIndex::new(l, m), table, &roots)?;
        worst = worst.max(c.residual);
    }
    push(
        "mobius_identity",
        worst < 1e-9 * t as f64,
        format!("max residual {worst:e}"),
    );
    Ok(checks)
}
