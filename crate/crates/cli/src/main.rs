use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use urban_density::ingest::{read_parcels, read_series};
use urban_density::report::{
    longitudinal_report, sweep_corridor_with_spacing, write_growth_curve, write_longitudinal_csv,
    SweepMetric, DEFAULT_DENSITY_RANGE, DEFAULT_NODES, DEFAULT_WIDTH_RANGE, SWEEP_GRID_SPACING_KM,
};
use urban_density::scenarios::corridor::{
    consolidation_factor, corridor_pwd, CorridorCityParams, CorridorSubdivision,
};
use urban_density::scenarios::growth::growth_pwd_ratio;
use urban_density::scenarios::perturb::{boundary_shift_delta, BoundaryShift};
use urban_density::scenarios::raster::corridor_pwd_raster;
use urban_density::{approx_eq_rel, check_monotonicity, density_report, validate_refinement};

const RASTER_TOL: f64 = 1e-9;

// Reference city (d = 15, D = 195, W = 0.2 km, L = 1.6 km) on the sweep axes.
const SCENARIO_WIDTH_RATIO: f64 = 0.125;
const SCENARIO_DENSITY_RATIO: f64 = 13.0;

#[derive(Parser)]
#[command(
    name = "urban-density",
    version,
    about = "Parcel-based urban density metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// OD, PWD, DWP and DGI for one parcel CSV
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check that a fine parcel map raises (or keeps) PWD over its coarse map
    Verify {
        /// Fine parcel CSV with a parent_id column
        #[arg(long)]
        fine: PathBuf,
        #[arg(long)]
        coarse: PathBuf,
    },
    /// Evaluate one of the synthetic-city scenarios
    Scenario {
        #[command(subcommand)]
        kind: Scenario,
    },
    /// Grid of a corridor-city metric over W/L and D/d
    Sweep(SweepArgs),
    /// Year-on-year OD and PWD table for a longitudinal series
    Report {
        #[arg(long)]
        series: PathBuf,
        /// Defaults to standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Scenario {
    /// PWD / D of the two-parcel growth model at urban fraction u
    Growth {
        #[arg(long, required_unless_present = "curve")]
        u: Option<f64>,
        /// Emit the whole curve over u in [1/2, 1] instead
        #[arg(long, conflicts_with = "u")]
        curve: bool,
        #[arg(long, default_value_t = 101, requires = "curve")]
        n: usize,
        #[arg(long, requires = "curve")]
        out: Option<PathBuf>,
    },
    /// Closed-form PWD of the three corridor-city subdivisions
    Corridor {
        /// Ambient density, p/ha
        #[arg(long)]
        d: f64,
        /// Corridor density, p/ha
        #[arg(long = "big-d")]
        big_d: f64,
        /// Corridor width, km
        #[arg(long)]
        w: f64,
        /// Arterial spacing, km
        #[arg(long)]
        l: f64,
        /// Also rasterise each layout and compare
        #[arg(long)]
        check_raster: bool,
        /// Raster cell size, km
        #[arg(long, default_value_t = 0.05, requires = "check_raster")]
        cell: f64,
    },
    /// PWD change from moving p residents from parcel 2 to parcel 1
    Perturb {
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        a1: f64,
        #[arg(long)]
        p2: f64,
        #[arg(long)]
        a2: f64,
        #[arg(long)]
        p0: f64,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    /// (PWD_b − PWD_a) / PWD_a × 100
    #[value(name = "pct_diff")]
    PctDiff,
    /// PWD_c / PWD_a
    #[value(name = "ratio_c")]
    RatioC,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    metric: MetricArg,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_WIDTH_RANGE.0)]
    width_min: f64,
    #[arg(long, default_value_t = DEFAULT_WIDTH_RANGE.1)]
    width_max: f64,
    #[arg(long, default_value_t = DEFAULT_DENSITY_RANGE.0)]
    density_min: f64,
    #[arg(long, default_value_t = DEFAULT_DENSITY_RANGE.1)]
    density_max: f64,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    nx: usize,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    ny: usize,
    /// Ambient density d, p/ha
    #[arg(long, default_value_t = 15.0)]
    d: f64,
    /// Arterial spacing, km
    #[arg(long, default_value_t = SWEEP_GRID_SPACING_KM)]
    l: f64,
}

/// Marks a failure as a property violation (exit 2) rather than bad input.
#[derive(Debug)]
struct PropertyViolation(String);

impl std::fmt::Display for PropertyViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for PropertyViolation {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<PropertyViolation>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Compute { input, format } => compute(&input, format),
        Command::Verify { fine, coarse } => verify(&fine, &coarse),
        Command::Scenario { kind } => scenario(kind),
        Command::Sweep(args) => sweep(args),
        Command::Report { series, out } => report(&series, out.as_deref()),
    }
}

fn open(path: &Path) -> anyhow::Result<File> {
    File::open(path).with_context(|| format!("cannot open {}", path.display()))
}

/// Runs `write` against a buffered file at `path` and flushes it.
fn write_file<F>(path: &Path, write: F) -> anyhow::Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> urban_density::Result<()>,
{
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut sink = BufWriter::new(file);
    write(&mut sink)?;
    sink.flush()
        .with_context(|| format!("cannot write {}", path.display()))
}

fn print_json(value: &Value) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn compute(input: &Path, format: Format) -> anyhow::Result<()> {
    let file = read_parcels(open(input)?).with_context(|| input.display().to_string())?;
    let r = density_report(&file.table)?;
    match format {
        Format::Json => print_json(&json!({
            "od": r.od,
            "pwd": r.pwd,
            "dwp": r.dwp,
            "dgi": r.dgi,
            "n_parcels": r.n_parcels,
            "populated_area": r.populated_area,
            "zero_pop_area": r.zero_pop_area,
        })),
        Format::Csv => {
            println!("od,pwd,dwp,dgi,n_parcels,populated_area,zero_pop_area");
            println!(
                "{},{},{},{},{},{},{}",
                r.od, r.pwd, r.dwp, r.dgi, r.n_parcels, r.populated_area, r.zero_pop_area
            );
            Ok(())
        }
    }
}

fn verify(fine: &Path, coarse: &Path) -> anyhow::Result<()> {
    let fine_file = read_parcels(open(fine)?).with_context(|| fine.display().to_string())?;
    let coarse_file = read_parcels(open(coarse)?).with_context(|| coarse.display().to_string())?;
    if fine_file.parent_of.is_none() {
        bail!(
            "{}: fine parcel file needs a parent_id column",
            fine.display()
        );
    }
    let map = fine_file
        .refinement_of(coarse_file.table)
        .map_err(|e| PropertyViolation(format!("invalid refinement: {e}")))?;

    let violations = validate_refinement(&map);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("violation: {v}");
        }
        return Err(PropertyViolation(format!(
            "{} conservation violation(s) between fine and coarse parcels",
            violations.len()
        ))
        .into());
    }

    let m = check_monotonicity(&map)?;
    print_json(&json!({
        "pwd_fine": m.pwd_fine,
        "pwd_coarse": m.pwd_coarse,
        "holds": m.holds,
        "equality": m.equality,
        "densities_match": m.densities_match,
    }))?;
    if !m.holds {
        return Err(PropertyViolation(format!(
            "fine PWD {} is below coarse PWD {}",
            m.pwd_fine, m.pwd_coarse
        ))
        .into());
    }
    Ok(())
}

fn scenario(kind: Scenario) -> anyhow::Result<()> {
    match kind {
        Scenario::Growth { u, curve, n, out } => {
            if curve {
                let points = urban_density::report::growth_curve(n)?;
                match out {
                    Some(path) => write_file(&path, |w| write_growth_curve(&points, w))?,
                    None => write_growth_curve(&points, io::stdout().lock())?,
                }
                return Ok(());
            }
            let u = u.expect("clap requires --u without --curve");
            print_json(&json!({ "u": u, "pwd_over_d": growth_pwd_ratio(u)? }))
        }
        Scenario::Corridor {
            d,
            big_d,
            w,
            l,
            check_raster,
            cell,
        } => {
            let params = CorridorCityParams::new(d, big_d, w, l)?;
            let mut out = json!({
                "k": consolidation_factor(&params),
                "pwd_a": corridor_pwd(&params, CorridorSubdivision::AlignedA),
                "pwd_b": corridor_pwd(&params, CorridorSubdivision::OffsetB),
                "pwd_c": corridor_pwd(&params, CorridorSubdivision::TightC),
            });
            let mut mismatches = Vec::new();
            if check_raster {
                let mut raster = serde_json::Map::new();
                for (name, sub) in [
                    ("pwd_a", CorridorSubdivision::AlignedA),
                    ("pwd_b", CorridorSubdivision::OffsetB),
                    ("pwd_c", CorridorSubdivision::TightC),
                ] {
                    let brute = corridor_pwd_raster(&params, sub, cell)?;
                    if !approx_eq_rel(brute, corridor_pwd(&params, sub), RASTER_TOL) {
                        mismatches.push(name);
                    }
                    raster.insert(name.to_string(), json!(brute));
                }
                out["raster"] = Value::Object(raster);
                out["raster_cell_km"] = json!(cell);
                out["raster_ok"] = json!(mismatches.is_empty());
            }
            print_json(&out)?;
            if !mismatches.is_empty() {
                return Err(PropertyViolation(format!(
                    "raster disagrees with closed form for {}",
                    mismatches.join(", ")
                ))
                .into());
            }
            Ok(())
        }
        Scenario::Perturb {
            p1,
            a1,
            p2,
            a2,
            p0,
            p,
        } => {
            let shift = BoundaryShift {
                p1,
                a1,
                p2,
                a2,
                p0,
                p,
            };
            print_json(&json!({ "delta": boundary_shift_delta(&shift)? }))
        }
    }
}

fn sweep(args: SweepArgs) -> anyhow::Result<()> {
    let metric = match args.metric {
        MetricArg::PctDiff => SweepMetric::PctDiffBVsA,
        MetricArg::RatioC => SweepMetric::RatioCOverA,
    };
    let grid = sweep_corridor_with_spacing(
        metric,
        (args.width_min, args.width_max),
        (args.density_min, args.density_max),
        args.nx,
        args.ny,
        args.d,
        args.l,
    )?;
    write_file(&args.out, |w| grid.write_csv(w))?;
    let (x, y, value) = grid.value_near(SCENARIO_WIDTH_RATIO, SCENARIO_DENSITY_RATIO);
    print_json(&json!({
        "out": args.out.display().to_string(),
        "nx": args.nx,
        "ny": args.ny,
        "scenario_cell": { "w_over_l": x, "d_over_d_ratio": y, "value": value },
    }))
}

fn report(series: &Path, out: Option<&Path>) -> anyhow::Result<()> {
    let label = series
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let data = read_series(open(series)?, label).with_context(|| series.display().to_string())?;
    let rows = longitudinal_report(&data);
    match out {
        Some(path) => write_file(path, |w| write_longitudinal_csv(&rows, w))?,
        None => write_longitudinal_csv(&rows, io::stdout().lock())?,
    }
    Ok(())
}
