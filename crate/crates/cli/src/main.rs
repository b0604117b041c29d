//! `ecsp`: command-line front end for the elliptic-curve sum-product
//! experiments.
//!
//! Exit codes: 0 when every asserted invariant holds, 1 on an invariant
//! violation, 2 on usage or configuration errors.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ecsp::charsum::{subgroup_scan, theorem1_ratio_scan};
use ecsp::extremal::theorem3_report;
use ecsp::harness::{emit, find_setup, identity_suite, run_sweep, Format, SweepConfig};
use ecsp::sumprod::theorem2_report;
use ecsp::{CurveParams, Error, OrbitTable, Point, RootTable, SumProductInstance, UnitSet};

#[derive(Parser)]
#[command(name = "ecsp", version, about = "Sum-product experiments on elliptic curves over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Curve discovery.
    Curve {
        #[command(subcommand)]
        action: CurveAction,
    },
    /// Orbit tables.
    Orbit {
        #[command(subcommand)]
        action: OrbitAction,
    },
    /// Run the identity suite on one (curve, point).
    Verify {
        #[command(flatten)]
        target: Target,
        /// Random (A, B) instances checked for J consistency.
        #[arg(long, default_value_t = 20)]
        instances: usize,
        #[arg(long, default_value_t = 5)]
        set_size: usize,
        #[arg(long, default_value_t = ecsp::SCAN_CAP)]
        scan_cap: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sum set, product set, J and the lower-bound report for given A, B.
    Sumprod {
        #[command(flatten)]
        target: Target,
        #[arg(long = "setA")]
        set_a: String,
        #[arg(long = "setB")]
        set_b: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Bilinear character sum scan over all nontrivial characters (K = setA, M = setB).
    Charsum {
        #[command(flatten)]
        target: Target,
        #[arg(long = "setA")]
        set_a: String,
        #[arg(long = "setB")]
        set_b: String,
        #[arg(long, default_value_t = 1)]
        nu: u32,
        #[arg(long, default_value_t = ecsp::SCAN_CAP)]
        scan_cap: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Extremal construction A = B = {a : x(aP) < H}.
    Extremal {
        #[command(flatten)]
        target: Target,
        /// Defaults to floor(phi(T) / 2).
        #[arg(long = "H")]
        h: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Seeded sweep from a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum CurveAction {
    /// Random ordinary curves over F_p with a point of large order.
    Find {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum OrbitAction {
    /// Build the table x(kP), k = 1..T-1, and write the binary cache.
    Build {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct OutArgs {
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Which orbit to work on: a cache file, or a curve with an optional point.
#[derive(Args)]
struct Target {
    /// Read the orbit from a cache file instead of building it.
    #[arg(long, conflicts_with_all = ["p", "a4", "a6", "px", "py"])]
    orbit: Option<PathBuf>,
    #[arg(long, required_unless_present = "orbit")]
    p: Option<u64>,
    #[arg(long, required_unless_present = "orbit")]
    a4: Option<u64>,
    #[arg(long, required_unless_present = "orbit")]
    a6: Option<u64>,
    #[arg(long, requires = "py")]
    px: Option<u64>,
    #[arg(long, requires = "px")]
    py: Option<u64>,
    /// Seed for picking a point when --px/--py are absent.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Target {
    fn table(&self) -> Result<OrbitTable, Error> {
        if let Some(path) = &self.orbit {
            return OrbitTable::read_cache(BufReader::new(File::open(path)?));
        }
        let (p, a4, a6) = (self.p.unwrap(), self.a4.unwrap(), self.a6.unwrap());
        let curve = CurveParams::new(p, a4, a6)?;
        let n = curve.count_points(ecsp::ENUMERATION_CAP)?;
        let (pt, t) = match (self.px, self.py) {
            (Some(x), Some(y)) => {
                let pt = curve.point(x, y)?;
                let t = curve.point_order(&pt, n)?;
                (pt, t)
            }
            _ => {
                let mut rng = ecsp::rng::SeededRng::new(self.seed);
                curve.max_order_point(n, 16, &mut rng)?
            }
        };
        OrbitTable::build(&curve, &pt, t)
    }
}

fn parse_set(spec: &str, t: u64) -> Result<UnitSet, Error> {
    let text = match spec.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)?,
        None => spec.to_string(),
    };
    let mut members = Vec::new();
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()) {
        if tok.is_empty() {
            continue;
        }
        let v = tok
            .parse::<u64>()
            .map_err(|_| Error::Config(format!("not an integer: {tok:?}")))?;
        members.push(v);
    }
    UnitSet::new(t, members)
}

fn writer(out: &OutArgs) -> io::Result<Box<dyn Write>> {
    Ok(match &out.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(out: &OutArgs, value: &serde_json::Value) -> Result<(), Error> {
    let mut w = writer(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn orbit_json(table: &OrbitTable) -> serde_json::Value {
    let c = table.curve();
    let (px, py) = match table.generator() {
        Point::Affine { x, y } => (x.value(), y.value()),
        Point::Infinity => (0, 0),
    };
    json!({
        "p": table.p(), "a4": c.a4().value(), "a6": c.a6().value(),
        "Px": px, "Py": py, "T": table.order(),
    })
}

/// Runs a command; `Ok(true)` means every asserted invariant held.
fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Curve {
            action: CurveAction::Find { p, seed, count, samples },
        } => {
            let mut out = io::stdout().lock();
            for i in 0..count {
                let s = find_setup(p, ecsp::rng::derive_seed(seed, i), samples, ecsp::ENUMERATION_CAP)?;
                let mut v = orbit_json(&s.table);
                v["N"] = json!(s.summary.order);
                v["t"] = json!(s.summary.trace);
                v["ordinary"] = json!(s.summary.ordinary);
                writeln!(out, "{v}")?;
            }
            Ok(true)
        }
        Command::Orbit {
            action: OrbitAction::Build { target, out },
        } => {
            let table = target.table()?;
            let mut w = BufWriter::new(File::create(&out)?);
            table.write_cache(&mut w)?;
            w.flush()?;
            println!("{}", orbit_json(&table));
            Ok(table.is_symmetric())
        }
        Command::Verify {
            target,
            instances,
            set_size,
            scan_cap,
            out,
        } => {
            let table = target.table()?;
            let checks = identity_suite(&table, instances, set_size, target.seed, scan_cap)?;
            let ok = checks.iter().all(|c| c.passed);
            write_json(&out, &json!({ "orbit": orbit_json(&table), "passed": ok, "checks": checks }))?;
            Ok(ok)
        }
        Command::Sumprod { target, set_a, set_b, out } => {
            let table = target.table()?;
            let a = parse_set(&set_a, table.order())?;
            let b = parse_set(&set_b, table.order())?;
            let inst = SumProductInstance::new(a, b, &table)?;
            let report = theorem2_report::<f64>(&inst)?;
            write_json(
                &out,
                &json!({
                    "orbit": orbit_json(&table),
                    "S": inst.sum_set().values(),
                    "T_set": inst.prod_set().values(),
                    "H": inst.product_index_set().members(),
                    "report": report,
                }),
            )?;
            Ok(true)
        }
        Command::Charsum {
            target,
            set_a,
            set_b,
            nu,
            scan_cap,
            out,
        } => {
            let table = target.table()?;
            let k = parse_set(&set_a, table.order())?;
            let m = parse_set(&set_b, table.order())?;
            let roots = RootTable::new(table.curve().modulus());
            let report = theorem1_ratio_scan(&table, &k, &m, nu, &roots, scan_cap)?;
            let sg = subgroup_scan(&table, &roots, scan_cap)?;
            write_json(
                &out,
                &json!({ "orbit": orbit_json(&table), "report": report, "subgroup": sg }),
            )?;
            Ok(sg.max_abs <= (table.order() - 1) as f64 + 1e-9)
        }
        Command::Extremal { target, h, out } => {
            let table = target.table()?;
            match theorem3_report(&table, h) {
                Ok(r) => write_json(&out, &json!({ "orbit": orbit_json(&table), "report": r }))?,
                Err(Error::EmptyConstruction(r)) => {
                    write_json(&out, &json!({ "orbit": orbit_json(&table), "report": r, "error": "EmptyConstruction" }))?
                }
                Err(e) => return Err(e),
            }
            Ok(true)
        }
        Command::Sweep { config, format, out } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = SweepConfig::from_json(&text)?;
            let records = run_sweep(&cfg)?;
            let fmt = match format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            };
            let mut w = writer(&out)?;
            emit(&records, fmt, &mut w)?;
            w.flush()?;
            Ok(!records.iter().any(|r| r.is_violation()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::InvariantViolation(_)) => {
            eprintln!("ecsp: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("ecsp: {e}");
            ExitCode::from(2)
        }
    }
}
