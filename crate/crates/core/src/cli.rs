//! Command-line front end.
//!
//! Every subcommand reads its parameters from flags and, optionally, from a
//! flat JSON object given with `--config`; flags win over file values.
//! Complex numbers are written `re,im`, angles in turns.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::antirat::{ecalle_height_detail, in_connectedness_l0, AntiRatParam};
use crate::complex::{parse_complex, ComplexPoint};
use crate::corr::{orbit_tree, orbit_tree_csv};
use crate::error::{Error, Result};
use crate::params::{classify_parameter, CYCLE_EPS};
use crate::render::{render, write_outputs, Palette, Plane, RasterJob, Window, DEFAULT_BUDGET};
use crate::schwarz::{cusp_coefficient, sigma, CuspDirection, SchwarzParam};
use crate::tri_group::count_dyadic_angles;
use crate::verify::{self, Tier};

/// Budget used by `classify` when none is given.
pub const CLASSIFY_BUDGET: usize = 10_000;

/// A complex command-line value; `re,im`, a bare real, or `inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CArg(pub ComplexPoint);

impl CArg {
    fn finite(self, name: &str) -> Result<Complex64> {
        self.0.finite().ok_or_else(|| Error::InvalidArgument(format!("--{name} must be finite")))
    }
}

impl FromStr for CArg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_complex(s).map(CArg).map_err(Error::InvalidArgument)
    }
}

impl fmt::Display for CArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for CArg {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            Value::Number(n) => Ok(CArg(ComplexPoint::real(n.as_f64().unwrap_or(f64::NAN)))),
            Value::Array(v) if v.len() == 2 => {
                let re = v[0].as_f64().ok_or_else(|| serde::de::Error::custom("expected number"))?;
                let im = v[1].as_f64().ok_or_else(|| serde::de::Error::custom("expected number"))?;
                Ok(CArg(ComplexPoint::new(re, im)))
            }
            other => Err(serde::de::Error::custom(format!("cannot read a complex number from {other}"))),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "schwarz", version, about = "Schwarz reflections of the cubic Chebyshev polynomial")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct GlobalArgs {
    /// Output directory for images and tables.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// JSON file with default values for any flag.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Iteration budget.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Numeric tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render tile ranks in the dynamical plane of σ_a.
    DynRender(DynRenderArgs),
    /// Render the parameter plane.
    ParamRender(ParamRenderArgs),
    /// Print the σ_a orbit of a point as CSV.
    Orbit(OrbitArgs),
    /// Classify a parameter by the fate of the critical value 2.
    Classify(ClassifyArgs),
    /// Leading term of σ_a at the cusp, with a numeric check.
    CuspCheck(CuspArgs),
    /// Critical Ecalle height in the anti-rational family.
    Ecalle(EcalleArgs),
    /// Forward orbit tree of the correspondence, as CSV.
    CorrOrbit(CorrOrbitArgs),
    /// Number of dyadic tips of pre-period k.
    Tips(TipsArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct DynRenderArgs {
    #[arg(long)]
    pub a: Option<CArg>,
    #[arg(long)]
    pub center: Option<CArg>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub height: Option<f64>,
    /// Pixels as `N` or `WxH`.
    #[arg(long)]
    pub res: Option<String>,
    /// `classic` or `gray`.
    #[arg(long)]
    pub palette: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamRenderArgs {
    #[arg(long)]
    pub center: Option<CArg>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub height: Option<f64>,
    #[arg(long)]
    pub res: Option<String>,
    #[arg(long)]
    pub palette: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct OrbitArgs {
    #[arg(long)]
    pub a: Option<CArg>,
    #[arg(long)]
    pub z0: Option<CArg>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub a: Option<CArg>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct CuspArgs {
    #[arg(long)]
    pub a: Option<CArg>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct EcalleArgs {
    /// Rotation angle α, in turns.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long = "A", id = "A")]
    #[serde(rename = "A")]
    pub big_a: Option<CArg>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct CorrOrbitArgs {
    #[arg(long)]
    pub a: Option<CArg>,
    #[arg(long)]
    pub z0: Option<CArg>,
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct TipsArgs {
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyArgs {
    /// Exact-value checks only.
    #[arg(long, conflicts_with = "slow")]
    pub fast: bool,
    /// Include the high-budget scans and the render check.
    #[arg(long)]
    pub slow: bool,
}

/// Either a usage problem (exit 2) or a failure while running (exit 1).
#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::DegenerateParameter(_) => Failure::Usage(e.to_string()),
            other => Failure::Run(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            2
        }
        Err(Failure::Run(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

/// File values overlaid with explicitly given flags.
fn effective<T: Serialize + DeserializeOwned>(file: &Map<String, Value>, flags: &T) -> CliResult<(T, Map<String, Value>)> {
    let mut merged = file.clone();
    if let Value::Object(m) = serde_json::to_value(flags).map_err(|e| usage(e.to_string()))? {
        for (k, v) in m {
            if !v.is_null() && v != Value::Bool(false) {
                merged.insert(k, v);
            }
        }
    }
    let value: T = serde_json::from_value(Value::Object(merged.clone())).map_err(|e| usage(format!("config: {e}")))?;
    Ok((value, merged))
}

fn load_config(path: Option<&Path>) -> CliResult<Map<String, Value>> {
    let Some(path) = path else { return Ok(Map::new()) };
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(usage("config file must hold a JSON object")),
        Err(e) => Err(usage(format!("config file: {e}"))),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<i32> {
    let file = load_config(cli.global.config.as_deref())?;
    let (global, global_map) = effective(&file, &cli.global)?;
    let global = GlobalArgs { out: cli.global.out.clone(), config: None, ..global };
    let pool = match global.threads {
        Some(0) => return Err(usage("--threads must be positive")),
        Some(n) => Some(rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| Failure::Run(e.to_string()))?),
        None => None,
    };
    let Some(pool) = pool else {
        return dispatch(cli.command, &file, global, global_map, out);
    };
    let mut buf = Vec::new();
    let code = pool.install(|| dispatch(cli.command, &file, global, global_map, &mut buf));
    out.write_all(&buf)?;
    code
}

fn required<T>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| usage(format!("missing --{name}")))
}

fn write_table(dir: Option<&Path>, name: &str, text: &str) -> CliResult<()> {
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(name), text)?;
    }
    Ok(())
}

fn parse_res(s: Option<&str>, default: usize) -> CliResult<(usize, usize)> {
    let Some(s) = s else { return Ok((default, default)) };
    let parse = |t: &str| t.trim().parse::<usize>().ok().filter(|&n| n > 0);
    let res = match s.split_once(['x', 'X']) {
        Some((w, h)) => parse(w).zip(parse(h)),
        None => parse(s).map(|n| (n, n)),
    };
    res.ok_or_else(|| usage(format!("bad resolution '{s}'")))
}

fn parse_palette(s: Option<&str>) -> CliResult<Palette> {
    match s.unwrap_or("classic") {
        "classic" => Ok(Palette::Classic),
        "gray" | "grey" => Ok(Palette::Gray),
        other => Err(usage(format!("unknown palette '{other}'"))),
    }
}

fn merged_config(sub: Map<String, Value>, global: &Map<String, Value>) -> Value {
    let mut m = global.clone();
    m.extend(sub);
    Value::Object(m)
}

fn dispatch(
    command: Command,
    file: &Map<String, Value>,
    global: GlobalArgs,
    global_map: Map<String, Value>,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let dir = global.out.as_deref();
    match command {
        Command::DynRender(args) => {
            let (args, map) = effective(file, &args)?;
            let a = required(args.a, "a")?.finite("a")?;
            SchwarzParam::new(a)?;
            let job = RasterJob {
                plane: Plane::Dynamical { a },
                window: Window {
                    center: args.center.map_or(Ok(Complex64::new(0.0, 0.0)), |c| c.finite("center"))?,
                    width: args.width.unwrap_or(8.0),
                    height: args.height.unwrap_or(8.0),
                },
                resolution: parse_res(args.res.as_deref(), 400)?,
                max_iter: global.budget.unwrap_or(DEFAULT_BUDGET),
                palette: parse_palette(args.palette.as_deref())?,
            };
            render_job(&job, "dyn_render", merged_config(map, &global_map), dir, out)
        }
        Command::ParamRender(args) => {
            let (args, map) = effective(file, &args)?;
            let job = RasterJob {
                plane: Plane::Parameter,
                window: Window {
                    center: args.center.map_or(Ok(Complex64::new(2.75, 0.0)), |c| c.finite("center"))?,
                    width: args.width.unwrap_or(2.3),
                    height: args.height.unwrap_or(2.4),
                },
                resolution: parse_res(args.res.as_deref(), 400)?,
                max_iter: global.budget.unwrap_or(DEFAULT_BUDGET),
                palette: parse_palette(args.palette.as_deref())?,
            };
            render_job(&job, "param_render", merged_config(map, &global_map), dir, out)
        }
        Command::Orbit(args) => {
            let (args, _) = effective(file, &args)?;
            let a = SchwarzParam::new(required(args.a, "a")?.finite("a")?)?;
            let mut w = required(args.z0, "z0")?.0;
            let n = required(args.n, "n")?;
            let mut csv = String::from("k,re,im\n");
            for k in 0..=n {
                match w {
                    ComplexPoint::Finite(z) => csv.push_str(&format!("{k},{},{}\n", z.re, z.im)),
                    ComplexPoint::Infinity => {
                        csv.push_str(&format!("{k},inf,inf\n"));
                        break;
                    }
                }
                if k == n {
                    break;
                }
                w = match sigma(w, &a) {
                    Ok(next) => next,
                    // the orbit reached the fundamental tile, where σ_a is undefined
                    Err(Error::NotInDomain) => break,
                    Err(e) => return Err(e.into()),
                };
            }
            write_table(dir, "orbit.csv", &csv)?;
            write!(out, "{csv}")?;
            Ok(0)
        }
        Command::Classify(args) => {
            let (args, _) = effective(file, &args)?;
            let a = SchwarzParam::new(required(args.a, "a")?.finite("a")?)?;
            let class = classify_parameter(&a, global.budget.unwrap_or(CLASSIFY_BUDGET), global.tol.unwrap_or(CYCLE_EPS))?;
            writeln!(out, "{class}")?;
            Ok(0)
        }
        Command::CuspCheck(args) => {
            let (args, _) = effective(file, &args)?;
            let a = SchwarzParam::new(required(args.a, "a")?.finite("a")?)?;
            let cc = cusp_coefficient(&a)?;
            let dir_name = match cc.direction {
                CuspDirection::Attracting => "attracting",
                CuspDirection::Repelling => "repelling",
            };
            writeln!(out, "order={}/2", cc.order_num)?;
            writeln!(out, "coefficient={},{}", cc.coefficient.re, cc.coefficient.im)?;
            writeln!(out, "direction={dir_name}")?;
            writeln!(out, "delta,ratio_re,ratio_im")?;
            for d in [1e-4, 1e-5, 1e-6] {
                let w = -2.0 + d * cc.ray;
                let r = match sigma(w.into(), &a)? {
                    ComplexPoint::Finite(s) => (s - w) / (d.powf(cc.order()) * cc.ray),
                    ComplexPoint::Infinity => Complex64::new(f64::INFINITY, 0.0),
                };
                writeln!(out, "{d:e},{},{}", r.re, r.im)?;
            }
            Ok(0)
        }
        Command::Ecalle(args) => {
            let (args, _) = effective(file, &args)?;
            let alpha = required(args.alpha, "alpha")?;
            let big_a = required(args.big_a, "A")?.finite("A")?;
            let p = AntiRatParam::new(2.0 * std::f64::consts::PI * alpha, big_a)?;
            let h = ecalle_height_detail(&p, global.tol.unwrap_or(1e-10))?;
            writeln!(out, "height={:e}", h.height)?;
            writeln!(out, "constant={:e}", h.constant)?;
            writeln!(out, "spread={:e}", h.spread)?;
            let connected = in_connectedness_l0(&p, global.budget.unwrap_or(CLASSIFY_BUDGET))?;
            writeln!(out, "connected={connected}")?;
            Ok(0)
        }
        Command::CorrOrbit(args) => {
            let (args, _) = effective(file, &args)?;
            let a = SchwarzParam::new(required(args.a, "a")?.finite("a")?)?;
            let seed = required(args.z0, "z0")?.0;
            let nodes = orbit_tree(seed, &a, args.steps.unwrap_or(3), global.budget.unwrap_or(DEFAULT_BUDGET))?;
            let csv = orbit_tree_csv(&nodes);
            write_table(dir, "corr_orbit.csv", &csv)?;
            write!(out, "{csv}")?;
            Ok(0)
        }
        Command::Tips(args) => {
            let (args, _) = effective(file, &args)?;
            writeln!(out, "{}", count_dyadic_angles(required(args.k, "k")?)?)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let (args, _) = effective(file, &args)?;
            let tier = match (args.fast, args.slow) {
                (true, _) => Tier::Fast,
                (_, true) => Tier::Slow,
                _ => Tier::Standard,
            };
            let mut failed = 0;
            for id in verify::criteria_for(tier) {
                let report = verify::run_criterion(id);
                writeln!(out, "{report}")?;
                failed += usize::from(!report.passed());
            }
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn render_job(job: &RasterJob, stem: &str, config: Value, dir: Option<&Path>, out: &mut dyn Write) -> CliResult<i32> {
    let raster = render(job, None)?;
    let dir = dir.unwrap_or(Path::new("."));
    for path in write_outputs(dir, stem, job, &raster, config)? {
        writeln!(out, "{}", path.display())?;
    }
    Ok(0)
}
