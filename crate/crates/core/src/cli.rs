//! Command-line front end: `render`, `atlas`, `verify` and `run`.
//!
//! Exit codes: 0 success, 1 a verification row failed, 2 configuration
//! error, 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::correspondence::{
    verify_exp_pairing, verify_fatou_pairing, verify_lambda0, verify_parabolic_tan, verify_sine_pairing_with,
    verify_topfer, verify_unisingular_forms, PairingReport, SineOptions,
};
use crate::entire::{rho_bifurcation_lambda0, EntireFamily};
use crate::error::{Error, Result};
use crate::halfplane::TanAtlas;
use crate::numerics::{c, ComplexMap, CPoint, Window, BAILOUT};
use crate::raster::{
    atlas_image, classify_grid, count_unbounded_components, Criteria, Disc, GridSpec, Label, DEFAULT_ATTRACTION_RADIUS,
    DEFAULT_BUDGET,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ROW_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "inner-dynamics", version, about = "Entire maps, their invariant Fatou components and associated inner functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the pixels of a window of the dynamical plane.
    Render(RenderArgs),
    /// Classify `a·tan z + b` over a grid of parameters.
    Atlas(AtlasArgs),
    /// Run one of the pairing checks and print its table.
    Verify(VerifyArgs),
    /// Execute a JSON run configuration.
    Run {
        /// Path to the configuration file.
        config: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    Exp,
    Sine,
    Fatou,
    Zexp,
    PowerExp,
    Alpha,
    Rho,
    Cstar,
    CstarLift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImageFormat {
    Pgm,
    Ppm,
    Both,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    /// Family parameter as `re` or `re,im`; `auto` selects λ₀ for `rho`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Exponent for `power-exp`.
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_q")]
    pub q: u32,
    /// Degree parameter for `alpha`, `rho`, `cstar` and `cstar-lift`.
    #[arg(long, default_value_t = 2)]
    #[serde(default = "default_d")]
    pub d: u32,
    /// Window `re0:re1:im0:im1`.
    #[arg(long, allow_hyphen_values = true, default_value = "-4:4:-4:4")]
    #[serde(default = "default_window")]
    pub window: String,
    /// Resolution `WIDTHxHEIGHT`.
    #[arg(long, default_value = "800x800")]
    #[serde(default = "default_res")]
    pub res: String,
    /// Attracting fixed point as `re` or `re,im`, or `none`; found from the
    /// family's singular orbit when omitted.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub target: Option<String>,
    /// Radius of the disc about the target whose preimage is marked.
    #[arg(long)]
    #[serde(default)]
    pub preimage_radius: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[arg(long, default_value_t = BAILOUT)]
    #[serde(default = "default_bailout")]
    pub bailout: f64,
    #[arg(long, default_value_t = DEFAULT_ATTRACTION_RADIUS)]
    #[serde(default = "default_attraction")]
    pub attraction_radius: f64,
    #[arg(long, value_enum, default_value = "pgm")]
    #[serde(default = "default_format")]
    pub format: ImageFormat,
    /// Output prefix; writes `PREFIX.pgm`/`PREFIX.ppm`, `PREFIX.csv` and
    /// `PREFIX-components.csv`.
    #[arg(long, default_value = "render")]
    #[serde(default = "default_render_out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtlasArgs {
    /// Range `a0:a1` of `a`.
    #[arg(long, default_value = "0:3.141592653589793")]
    #[serde(default = "default_a_range")]
    pub a_range: String,
    /// Range `b0:b1` of `b`, inside `[−π/2, π/2]`.
    #[arg(long, allow_hyphen_values = true, default_value = "-1.5707963267948966:1.5707963267948966")]
    #[serde(default = "default_b_range")]
    pub b_range: String,
    /// Grid `NAxNB`.
    #[arg(long, default_value = "200x200")]
    #[serde(default = "default_atlas_res")]
    pub res: String,
    /// Output prefix; writes `PREFIX.ppm` and `PREFIX.csv`.
    #[arg(long, default_value = "atlas")]
    #[serde(default = "default_atlas_out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Exp,
    ParabolicTan,
    Sine,
    Fatou,
    Topfer,
    Lambda0,
    UnisingularForms,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: CheckName,
    /// `λ` for `sine` (default 0.5) and `fatou` (default 1).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub lambda: Option<f64>,
    /// Multiplier `τ` for `exp`, as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true, default_value = "0.5")]
    #[serde(default = "default_tau")]
    pub tau: String,
    /// Degree parameter for `lambda0`.
    #[arg(long, default_value_t = 2)]
    #[serde(default = "default_d")]
    pub d: u32,
    /// Horizontal resolution of the tract raster in `sine`; 0 skips it.
    #[arg(long, default_value_t = 400)]
    #[serde(default = "default_tract_res")]
    pub tract_res: usize,
    /// Where to write the JSON report; defaults to `verify-<check>.json`.
    #[arg(long)]
    #[serde(default)]
    pub json: Option<PathBuf>,
}

/// A serialized invocation, for `run`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RunConfig {
    Render(RenderArgs),
    Atlas(AtlasArgs),
    Verify(VerifyArgs),
}

fn default_q() -> u32 {
    3
}
fn default_d() -> u32 {
    2
}
fn default_window() -> String {
    "-4:4:-4:4".into()
}
fn default_res() -> String {
    "800x800".into()
}
fn default_budget() -> usize {
    DEFAULT_BUDGET
}
fn default_bailout() -> f64 {
    BAILOUT
}
fn default_attraction() -> f64 {
    DEFAULT_ATTRACTION_RADIUS
}
fn default_format() -> ImageFormat {
    ImageFormat::Pgm
}
fn default_render_out() -> PathBuf {
    "render".into()
}
fn default_a_range() -> String {
    "0:3.141592653589793".into()
}
fn default_b_range() -> String {
    "-1.5707963267948966:1.5707963267948966".into()
}
fn default_atlas_res() -> String {
    "200x200".into()
}
fn default_atlas_out() -> PathBuf {
    "atlas".into()
}
fn default_tau() -> String {
    "0.5".into()
}
fn default_tract_res() -> usize {
    400
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

/// Parses `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<CPoint> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| config_err(format!("bad number {p:?}")));
    match parts.as_slice() {
        [re] => Ok(c(num(re)?, 0.0)),
        [re, im] => Ok(c(num(re)?, num(im)?)),
        _ => Err(config_err(format!("expected re or re,im, got {s:?}"))),
    }
}

/// Parses `WIDTHxHEIGHT`.
pub fn parse_resolution(s: &str) -> Result<(usize, usize)> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| config_err(format!("resolution must be WIDTHxHEIGHT, got {s:?}")))?;
    let n = |p: &str| p.trim().parse::<usize>().map_err(|_| config_err(format!("bad pixel count {p:?}")));
    Ok((n(w)?, n(h)?))
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| config_err(format!("range must be lo:hi, got {s:?}")))?;
    let n = |p: &str| p.trim().parse::<f64>().map_err(|_| config_err(format!("bad number {p:?}")));
    Ok((n(a)?, n(b)?))
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| config_err(format!("output path {} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// The family member described by the render arguments.
pub fn build_family(args: &RenderArgs) -> Result<EntireFamily> {
    let lambda = || -> Result<CPoint> {
        let s = args
            .lambda
            .as_deref()
            .ok_or_else(|| config_err(format!("--lambda is required for {:?}", args.family)))?;
        parse_complex(s)
    };
    let real = |z: CPoint| -> Result<f64> {
        if z.im != 0.0 {
            return Err(config_err("this family takes a real λ"));
        }
        Ok(z.re)
    };
    let fam = match args.family {
        FamilyName::Exp => EntireFamily::ExpLambda { lambda: lambda()? },
        FamilyName::Sine => EntireFamily::SineLambda { lambda: real(lambda()?)? },
        FamilyName::Fatou => EntireFamily::FatouLambda { lambda: real(lambda()?)? },
        FamilyName::Zexp => EntireFamily::ZExp { lambda: lambda()? },
        FamilyName::PowerExp => EntireFamily::PowerExp {
            lambda: lambda()?,
            q: args.q,
        },
        FamilyName::Alpha => EntireFamily::AlphaD { d: args.d },
        FamilyName::Rho => {
            let lam = match args.lambda.as_deref() {
                Some("auto") => rho_bifurcation_lambda0(args.d)?.lambda0,
                _ => real(lambda()?)?,
            };
            EntireFamily::RhoD { d: args.d, lambda: lam }
        }
        FamilyName::Cstar => EntireFamily::CstarMap { d: args.d },
        FamilyName::CstarLift => EntireFamily::CstarLift { d: args.d },
    };
    fam.validate().map_err(|e| match e {
        Error::Domain(m) => config_err(m),
        other => other,
    })?;
    Ok(fam)
}

/// Point whose orbit is followed to find the attracting fixed point, if the
/// family has a natural one.
fn singular_seed(f: &EntireFamily) -> Option<CPoint> {
    match *f {
        EntireFamily::ExpLambda { .. } | EntireFamily::PowerExp { .. } => Some(c(0.0, 0.0)),
        EntireFamily::SineLambda { lambda } => Some(c(lambda, 0.0)),
        EntireFamily::ZExp { lambda } => Some(-lambda * (-1.0f64).exp()),
        EntireFamily::AlphaD { .. } => Some(c(0.0, 0.0)),
        EntireFamily::RhoD { lambda, .. } => Some(c(lambda / (1.0 + lambda), 0.0)),
        EntireFamily::CstarMap { .. } => Some(c(-1.0, 0.0)),
        EntireFamily::FatouLambda { .. } | EntireFamily::CstarLift { .. } => None,
    }
}

/// Limit of the singular orbit if it settles on an attracting fixed point.
pub fn find_target(f: &EntireFamily) -> Option<CPoint> {
    let mut z = singular_seed(f)?;
    for _ in 0..5000 {
        let next = f.value(z).ok()?;
        if !(next.norm() < BAILOUT) {
            return None;
        }
        if (next - z).norm() < 1e-13 * z.norm().max(1.0) {
            let m = f.derivative(next).ok()?;
            return (m.norm() < 1.0).then_some(next);
        }
        z = next;
    }
    None
}

fn cmd_render(args: &RenderArgs) -> Result<i32> {
    let family = build_family(args)?;
    let window: Window = args.window.parse()?;
    let (w, h) = parse_resolution(&args.res)?;
    let spec = GridSpec::new(window, w, h)?;
    let target = match args.target.as_deref() {
        Some("none") => None,
        Some(s) => Some(parse_complex(s)?),
        None => find_target(&family),
    };
    let mut criteria = Criteria {
        target,
        attraction_radius: args.attraction_radius,
        budget: args.budget,
        bailout: args.bailout,
        preimage: None,
    };
    if let Some(r) = args.preimage_radius {
        let center = target.ok_or_else(|| config_err("--preimage-radius needs a target"))?;
        criteria.preimage = Some(Disc { center, radius: r });
    }
    criteria.validate()?;
    let grid = classify_grid(&family, &spec, &criteria)?;

    if matches!(args.format, ImageFormat::Pgm | ImageFormat::Both) {
        write_atomic(&with_suffix(&args.out, ".pgm"), &grid.to_pgm())?;
    }
    if matches!(args.format, ImageFormat::Ppm | ImageFormat::Both) {
        write_atomic(&with_suffix(&args.out, ".ppm"), &grid.to_ppm())?;
    }
    let mut stats = String::from("label,fraction\n");
    for l in [Label::Undecided, Label::Basin, Label::Escaping, Label::Preimage] {
        stats.push_str(&format!("{},{}\n", l.name(), grid.fraction(l)));
    }
    write_atomic(&with_suffix(&args.out, ".csv"), stats.as_bytes())?;
    let comps = count_unbounded_components(&grid, Label::Basin);
    write_atomic(&with_suffix(&args.out, "-components.csv"), comps.to_csv().as_bytes())?;

    println!("family: {}", serde_json::to_string(&family)?);
    match target {
        Some(t) => println!("target fixed point: {t}"),
        None => println!("target fixed point: none"),
    }
    if let Some(d) = criteria.preimage {
        println!("preimage disc radius: {}", d.radius);
    }
    for l in [Label::Basin, Label::Escaping, Label::Preimage, Label::Undecided] {
        println!("{:>9}: {:.6}", l.name(), grid.fraction(l));
    }
    println!("unbounded basin components: {}", comps.count);
    if comps.resolution_warning {
        eprintln!("warning: a counted component has fewer than 10 pixels; the grid may be undersampled");
    }
    Ok(EXIT_OK)
}

fn cmd_atlas(args: &AtlasArgs) -> Result<i32> {
    let a = parse_range(&args.a_range)?;
    let b = parse_range(&args.b_range)?;
    let (na, nb) = parse_resolution(&args.res)?;
    let atlas = TanAtlas::compute(a, b, na, nb)?;
    write_atomic(&with_suffix(&args.out, ".ppm"), &atlas_image(&atlas))?;
    write_atomic(&with_suffix(&args.out, ".csv"), atlas.to_csv().as_bytes())?;
    let interior = atlas.cells.iter().filter(|c| c.solve_interior()).count();
    let agree = atlas
        .cells
        .iter()
        .filter(|c| c.solve_interior() == c.iteration.interior)
        .count();
    println!("cells: {}", atlas.cells.len());
    println!("attracting-interior: {interior}");
    println!(
        "classifier agreement: {:.4}",
        agree as f64 / atlas.cells.len() as f64
    );
    Ok(EXIT_OK)
}

fn run_check(args: &VerifyArgs) -> Result<PairingReport> {
    match args.check {
        CheckName::Exp => verify_exp_pairing(parse_complex(&args.tau)?),
        CheckName::ParabolicTan => verify_parabolic_tan(),
        CheckName::Sine => verify_sine_pairing_with(
            args.lambda.unwrap_or(0.5),
            &SineOptions {
                tract_resolution: args.tract_res,
                ..SineOptions::default()
            },
        ),
        CheckName::Fatou => verify_fatou_pairing(args.lambda.unwrap_or(1.0)),
        CheckName::Topfer => verify_topfer(),
        CheckName::Lambda0 => verify_lambda0(args.d),
        CheckName::UnisingularForms => verify_unisingular_forms(),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let report = run_check(args).map_err(|e| match e {
        Error::Domain(m) => config_err(m),
        other => other,
    })?;
    print!("{}", report.to_table());
    let name = CheckName::to_possible_value(&args.check)
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let path = args
        .json
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("verify-{name}.json")));
    write_atomic(&path, report.to_json().as_bytes())?;
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_ROW_FAILED })
}

fn execute(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Render(a) => cmd_render(a),
        Command::Atlas(a) => cmd_atlas(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Run { config } => {
            let text = fs::read_to_string(config)
                .map_err(|e| config_err(format!("cannot read {}: {e}", config.display())))?;
            let cfg: RunConfig =
                serde_json::from_str(&text).map_err(|e| config_err(format!("bad run configuration: {e}")))?;
            match &cfg {
                RunConfig::Render(a) => cmd_render(a),
                RunConfig::Atlas(a) => cmd_atlas(a),
                RunConfig::Verify(a) => cmd_verify(a),
            }
        }
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_) | Error::Domain(_) => EXIT_CONFIG,
        _ => EXIT_NUMERIC,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
