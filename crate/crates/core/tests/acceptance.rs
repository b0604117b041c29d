//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use ecsp::charsum::{
    bilinear_sum, j_via_characters, theorem1_ratio_scan, CharacterIndex, WeightFunction,
};
use ecsp::curve::Point;
use ecsp::extremal::mobius_identity_check;
use ecsp::harness::{emit, find_setup, run_sweep, Format, Mode, PRange, SetSizeRule, SweepConfig};
use ecsp::residue::{euler_phi, units_of};
use ecsp::rng::{derive_seed, SeededRng};
use ecsp::sumprod::count_j;
use ecsp::{
    CurveParams, OrbitTable, PrimeModulus, RootTable, SumProductInstance, UnitSet,
    ENUMERATION_CAP, SCAN_CAP,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| ecsp::field::is_prime(n)).collect()
}

// ---------------------------------------------------------------------------
// Independent chord-tangent evaluator on plain integers, Fermat inversion.

type OraclePoint = Option<(i64, i64)>;

fn oracle_pow(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut acc = 1i64;
    b = b.rem_euclid(p);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn oracle_add(p: i64, a4: i64, u: OraclePoint, v: OraclePoint) -> OraclePoint {
    let (x1, y1) = match u {
        None => return v,
        Some(q) => q,
    };
    let (x2, y2) = match v {
        None => return u,
        Some(q) => q,
    };
    let lam = if x1 == x2 {
        if (y1 + y2) % p == 0 {
            return None;
        }
        (3 * x1 * x1 + a4) % p * oracle_pow(2 * y1, p - 2, p) % p
    } else {
        (y2 - y1).rem_euclid(p) * oracle_pow((x2 - x1).rem_euclid(p), p - 2, p) % p
    };
    let x3 = (lam * lam - x1 - x2).rem_euclid(p);
    let y3 = (lam * (x1 - x3) - y1).rem_euclid(p);
    Some((x3, y3))
}

fn to_oracle(pt: &Point) -> OraclePoint {
    match pt {
        Point::Infinity => None,
        Point::Affine { x, y } => Some((x.value() as i64, y.value() as i64)),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = SeededRng::new(0xacce_0001);
    let mut pairs = 0u64;
    for p in [5u64, 7, 11, 13] {
        let m = PrimeModulus::new(p).unwrap();
        for _ in 0..20 {
            let e = CurveParams::random(m, &mut rng);
            let (_, pts) = e.enumerate_points(ENUMERATION_CAP).map_err(|e| e.to_string())?;
            for u in &pts {
                for v in &pts {
                    let got = to_oracle(&e.add(u, v));
                    let want = oracle_add(p as i64, e.a4().value() as i64, to_oracle(u), to_oracle(v));
                    ensure(got == want, || format!("p={p} {e}: {u} + {v} = {got:?}, oracle {want:?}"))?;
                    pairs += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{pairs} pairs, 0 mismatches, {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let e = CurveParams::new(5, 1, 1).unwrap();
    let s = e.summary(ENUMERATION_CAP).unwrap();
    ensure((s.order, s.trace, s.ordinary) == (9, -3, true), || format!("{s:?}"))?;
    let p = e.point(0, 1).unwrap();
    let t = e.point_order(&p, s.order).unwrap();
    ensure(t == 9, || format!("order {t}"))?;
    let table = OrbitTable::build(&e, &p, t).unwrap();
    ensure(table.xs() == [0, 4, 2, 3, 3, 2, 4, 0], || format!("{:?}", table.xs()))?;
    Ok("N=9, t=-3, ordinary, ord(0,1)=9, xs=[0,4,2,3,3,2,4,0]".into())
}

fn criterion_3() -> Outcome {
    let mut tables = 0;
    for (i, p) in primes(5, 1009).into_iter().enumerate() {
        let s = find_setup(p, derive_seed(3, i as u64), 16, ENUMERATION_CAP).map_err(|e| e.to_string())?;
        let xs = s.table.xs();
        let t = s.table.order() as usize;
        for k in 1..t {
            ensure(xs[k - 1] == xs[t - k - 1], || format!("p={p} k={k}"))?;
        }
        tables += 1;
    }
    ensure(tables >= 100, || format!("only {tables} tables"))?;
    Ok(format!("{tables} (curve, P) tables symmetric"))
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for p in primes(5, 101) {
        let m = PrimeModulus::new(p).unwrap();
        let roots = RootTable::new(m);
        for z in 0..p {
            let s: num_complex::Complex<f64> =
                (0..p).map(|l| roots.psi(CharacterIndex::new(l, m), z)).sum();
            let want = if z == 0 { 1.0 } else { 0.0 };
            let r = (s / p as f64 - want).norm();
            worst = worst.max(r);
            ensure(r < 1e-9, || format!("p={p} z={z} residual {r:e}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} (p, z) pairs, max residual {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    // worked instance
    let e = CurveParams::new(5, 1, 1).unwrap();
    let known = OrbitTable::build(&e, &e.point(0, 1).unwrap(), 9).unwrap();
    let ab = UnitSet::new(9, [1, 2]).unwrap();
    let inst = SumProductInstance::new(ab.clone(), ab.clone(), &known).unwrap();
    let j = count_j(&ab, &inst.product_index_set(), &inst.sum_set(), &known).unwrap();
    ensure(j == 10 && j >= 8, || format!("worked instance J = {j}"))?;
    let roots = RootTable::new(known.curve().modulus());
    let jc = j_via_characters(&ab, &ab, &known, &roots).unwrap();
    ensure((jc.re - 10.0).abs() < 1e-6 * 4.0 * 3.0 * 3.0, || format!("{jc}"))?;

    let mut instances = 0;
    let mut curves = 0;
    let mut worst = 0.0f64;
    let ps = [101u64, 211, 307, 401, 503, 601, 701, 809, 907, 1009, 997, 1009];
    for (ci, &p) in ps.iter().enumerate() {
        let s = find_setup(p, derive_seed(5, ci as u64), 16, ENUMERATION_CAP).map_err(|e| e.to_string())?;
        let table = &s.table;
        let roots = RootTable::new(table.curve().modulus());
        let phi = euler_phi(table.order()) as usize;
        curves += 1;
        for i in 0..20 {
            let mut rng = SeededRng::new(derive_seed(ci as u64, i));
            let ka = 1 + rng.below(30.min(phi) as u64) as usize;
            let kb = 1 + rng.below(30.min(phi) as u64) as usize;
            let a = ecsp::harness::sample_unit_subset(table.order(), ka, rng.next_u64()).unwrap();
            let b = ecsp::harness::sample_unit_subset(table.order(), kb, rng.next_u64()).unwrap();
            let inst = SumProductInstance::new(a.clone(), b.clone(), table).unwrap();
            let (h, sset) = (inst.product_index_set(), inst.sum_set());
            let j = count_j(&b, &h, &sset, table).unwrap();
            let jc = j_via_characters(&a, &b, table, &roots).unwrap();
            let tol = 1e-6 * (kb * kb * h.len() * sset.len()) as f64;
            let err = (jc.re - j as f64).abs();
            worst = worst.max(err / tol);
            ensure(err < tol, || format!("p={p}: count {j} vs characters {jc}"))?;
            ensure(j >= (ka * kb * kb) as u64, || format!("p={p}: J={j} < {}", ka * kb * kb))?;
            instances += 1;
        }
    }
    ensure(instances >= 200 && curves >= 10, || format!("{instances} instances"))?;
    Ok(format!(
        "worked J=10>=8; {instances} instances on {curves} curves, worst err/tol {worst:.2e}"
    ))
}

fn criterion_6() -> Outcome {
    let mut pairs = 0;
    let mut zero_lambda = 0;
    let mut worst = 0.0f64;
    let ps = primes(5, 500);
    for i in 0..100u64 {
        let p = ps[(derive_seed(6, i) % ps.len() as u64) as usize];
        let s = find_setup(p, derive_seed(60, i), 16, ENUMERATION_CAP).map_err(|e| e.to_string())?;
        let table = &s.table;
        let m = table.curve().modulus();
        let roots = RootTable::new(m);
        let mut rng = SeededRng::new(derive_seed(61, i));
        let t = table.order() as f64;
        for j in 0..5 {
            let lambda = if j == 0 { 0 } else { rng.below(p) };
            let c = mobius_identity_check(CharacterIndex::new(lambda, m), table, &roots).unwrap();
            if lambda == 0 {
                let phi = euler_phi(table.order()) as f64;
                ensure((c.lhs.re - phi).abs() < 1e-9 * t, || format!("λ=0 LHS {} ≠ φ(T)={phi}", c.lhs))?;
                zero_lambda += 1;
            }
            worst = worst.max(c.residual / t);
            ensure(c.residual < 1e-9 * t, || format!("p={p} λ={lambda} residual {:e}", c.residual))?;
            pairs += 1;
        }
    }
    ensure(pairs >= 500, || format!("{pairs} pairs"))?;
    Ok(format!("{pairs} (curve, λ) pairs ({zero_lambda} with λ=0), max residual/T {worst:.2e}"))
}

fn criterion_7() -> Outcome {
    let cfg = SweepConfig {
        p_list: None,
        p_range: Some(PRange { start: 5, end: 600 }),
        curves_per_p: 1,
        sets_per_curve: 1,
        set_size: SetSizeRule::Fixed(1),
        nu: 1,
        master_seed: 7,
        mode: Mode::Theorem3,
        enumeration_cap: ENUMERATION_CAP,
        scan_cap: SCAN_CAP,
        point_samples: 16,
        h: None,
    };
    let rows = run_sweep(&cfg).map_err(|e| e.to_string())?;
    let mut checked = 0;
    let mut empty = 0;
    for r in &rows {
        if r.error == "EmptyConstruction" {
            empty += 1;
            continue;
        }
        ensure(r.error.is_empty(), || format!("row {}: {}", r.experiment_id, r.error))?;
        ensure(r.h == r.phi_t / 2, || format!("row {}: H={} φ={}", r.experiment_id, r.h, r.phi_t))?;
        ensure(r.size_t <= r.phi_t, || format!("row {}: #T > φ(T)", r.experiment_id))?;
        if 2 * r.h < r.p + 2 {
            ensure(r.size_s + 1 <= 2 * r.h, || format!("row {}: #S > 2H-1", r.experiment_id))?;
        }
        ensure(r.ratio.is_finite() && r.ratio > 0.0, || format!("row {} ratio", r.experiment_id))?;
        ensure(r.size_ratio.is_finite(), || format!("row {} size ratio", r.experiment_id))?;
        checked += 1;
    }
    ensure(checked > 0, || "no rows".into())?;
    Ok(format!("{checked} rows satisfy #T<=φ(T) and #S<=2H-1; {empty} empty constructions"))
}

fn criterion_8() -> Outcome {
    let mut trivial = 0;
    for (i, p) in [101u64, 211, 1009].into_iter().enumerate() {
        let s = find_setup(p, derive_seed(8, i as u64), 16, ENUMERATION_CAP).map_err(|e| e.to_string())?;
        let table = &s.table;
        let m = table.curve().modulus();
        let roots = RootTable::new(m);
        for j in 0..5u64 {
            let t = table.order();
            let phi = euler_phi(t) as usize;
            let k = ecsp::harness::sample_unit_subset(t, (1 + j as usize * 7).min(phi), derive_seed(80, j)).unwrap();
            let mm = ecsp::harness::sample_unit_subset(t, (3 + j as usize * 5).min(phi), derive_seed(81, j)).unwrap();
            let v = bilinear_sum(
                &WeightFunction::unit(k.clone()),
                &WeightFunction::unit(mm.clone()),
                CharacterIndex::new(0, m),
                table,
                &roots,
            )
            .unwrap();
            let want = (k.len() * mm.len()) as f64;
            ensure((v - want).abs() < 1e-9, || format!("trivial sum {v} vs {want}"))?;
            trivial += 1;
        }
    }

    let scan = || -> Result<String, String> {
        let mut out = String::new();
        for (i, p) in primes(5, 101).into_iter().enumerate() {
            let s = find_setup(p, derive_seed(88, i as u64), 16, ENUMERATION_CAP).map_err(|e| e.to_string())?;
            let roots = RootTable::new(s.table.curve().modulus());
            let u = units_of(s.table.order());
            let r = theorem1_ratio_scan(&s.table, &u, &u, 1, &roots, SCAN_CAP).map_err(|e| e.to_string())?;
            ensure(r.ratio >= 0.0 && (1..p).contains(&r.lambda), || format!("{r:?}"))?;
            out.push_str(&serde_json::to_string(&r).unwrap());
            out.push('\n');
        }
        Ok(out)
    };
    let first = scan()?;
    let second = scan()?;
    ensure(first == second, || "scan output differs between runs".into())?;
    let scans = first.lines().count();
    Ok(format!("{trivial} trivial-character sums exact; {scans} full scans (p<=101), rerun byte-identical"))
}

fn criterion_9() -> Outcome {
    let cfg = SweepConfig {
        p_list: Some(vec![5, 7, 11, 9, 1_000_003, 101]),
        p_range: None,
        curves_per_p: 2,
        sets_per_curve: 2,
        set_size: SetSizeRule::Fraction(0.3),
        nu: 1,
        master_seed: 0x5eed,
        mode: Mode::Theorem2,
        enumeration_cap: 100_000,
        scan_cap: SCAN_CAP,
        point_samples: 16,
        h: None,
    };
    let render = |cfg: &SweepConfig| -> Result<Vec<u8>, String> {
        let rows = run_sweep(cfg).map_err(|e| e.to_string())?;
        let mut buf = Vec::new();
        emit(&rows, Format::Csv, &mut buf).map_err(|e| e.to_string())?;
        Ok(buf)
    };
    let a = render(&cfg)?;
    let b = render(&cfg)?;
    ensure(a == b, || "CSV differs between identical runs".into())?;
    let rows = run_sweep(&cfg).map_err(|e| e.to_string())?;
    ensure(rows.len() == 6 * 4, || format!("{} rows", rows.len()))?;
    let capped = rows.iter().filter(|r| r.error == "CapExceeded").count();
    let invalid = rows.iter().filter(|r| r.error == "InvalidModulus").count();
    let ok = rows.iter().filter(|r| r.error.is_empty()).count();
    ensure(capped == 4 && invalid == 4 && ok == 16, || {
        format!("capped {capped}, invalid {invalid}, ok {ok}")
    })?;
    ensure(rows.iter().filter(|r| r.error.is_empty()).all(|r| r.j >= r.j_lower), || "J < J_lower".into())?;
    ensure(rows.last().unwrap().p == 101 && rows.last().unwrap().error.is_empty(), || {
        "sweep did not continue past the failing rows".into()
    })?;

    let ids = {
        let mut cfg = cfg.clone();
        cfg.mode = Mode::Identities;
        cfg.p_list = Some(vec![5, 7, 11]);
        cfg.curves_per_p = 3;
        cfg.sets_per_curve = 1;
        run_sweep(&cfg).map_err(|e| e.to_string())?
    };
    ensure(ids.iter().all(|r| r.error.is_empty()), || {
        format!("identity rows failed: {:?}", ids.iter().map(|r| &r.error).collect::<Vec<_>>())
    })?;
    Ok(format!(
        "{} CSV bytes identical across runs; {capped} cap and {invalid} invalid-modulus rows isolated; identities mode clean on {} rows",
        a.len(),
        ids.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 group-law oracle equivalence", criterion_1),
        ("2 known instance y^2=x^3+x+1/F_5", criterion_2),
        ("3 orbit symmetry", criterion_3),
        ("4 character orthogonality", criterion_4),
        ("5 J consistency and injection bound", criterion_5),
        ("6 Möbius inclusion-exclusion identity", criterion_6),
        ("7 extremal construction bounds", criterion_7),
        ("8 bilinear sums and ratio scan", criterion_8),
        ("9 sweep determinism and isolation", criterion_9),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, f) in criteria {
        let t0 = Instant::now();
        match f() {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{:.2?}]", t0.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{:.2?}]", t0.elapsed());
            }
        }
    }
    let total = start.elapsed();
    if total < Duration::from_secs(180) {
        println!("PASS runtime budget: {total:.2?} < 180s");
    } else {
        failed += 1;
        println!("FAIL runtime budget: {total:.2?} >= 180s");
    }
    if failed > 0 {
        println!("{failed} acceptance check(s) failed");
        std::process::exit(1);
    }
}
