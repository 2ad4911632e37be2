//! Command-line front end: argument parsing, dispatch and exporters.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use rhombic_core::artubes::{build_tube, family_of, string_families, Family, TubeKind};
use rhombic_core::grcompute::Module;
use rhombic_core::quiver::{parse_quiver, Cover};
use rhombic_core::strings::parse_address;

pub mod render;
pub mod report;
pub mod verify;

/// Orientation words accepted by `--quiver` under a short name.
pub const PRESETS: &[(&str, &str)] = &[("ex1", "><<><,a,b,c,d,e"), ("ex2", ">>><,a,d,c,b")];

#[derive(Debug, Parser)]
#[command(name = "rhombic", version, about = "Gabriel-Roiter measures and the rhombic picture for Ã_n quivers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// GR-measure of a module, with its IPF decomposition and greedy trace
    Measure(ModuleArgs),
    /// GR-comeasure of a module
    Comeasure(ModuleArgs),
    /// IPF decompositions of measure and comeasure
    Ipf(ModuleArgs),
    /// Brute-force oracle value next to the greedy value
    Oracle(OracleArgs),
    /// Component, string type, family and tube of a module
    Classify(ModuleArgs),
    /// Members, IPF parts and limits of a family
    Family(FamilyArgs),
    /// Grid of a tube, rows by quasi-length
    Tube(TubeArgs),
    /// Distinguished limits and all family limits
    Limits(CommonArgs),
    /// Rhombic picture: module points, family limits and approach arrows
    Rhombic(PictureArgs),
    /// Run one property suite and report failing witnesses
    Verify(VerifyArgs),
    /// Tiling report of a tube
    Tiling(TubeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Orientation word with optional labels, e.g. "><<><,a,b,c,d,e", or a preset (ex1, ex2)
    #[arg(long)]
    pub quiver: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ModuleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// String module address `<label>:<dim>`
    #[arg(long, conflicts_with = "homogeneous")]
    pub module: Option<String>,
    /// Homogeneous module of quasi-length q
    #[arg(long)]
    pub homogeneous: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub module: ModuleArgs,
    #[arg(long, default_value_t = 60)]
    pub max_dim: usize,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[command(flatten)]
    pub module: ModuleArgs,
    /// Family key such as `ce`, `ce_*` or `H`
    #[arg(long)]
    pub family: Option<String>,
    /// Number of members listed
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
}

#[derive(Debug, Clone, Args)]
pub struct TubeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Rows of the tube; defaults to three times the rank
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct PictureArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Restrict to the families of one tube
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Largest dimension of a plotted module; defaults to 3h
    #[arg(long)]
    pub max_dim: Option<usize>,
    /// Positive rational scale factor, e.g. 3/2
    #[arg(long, default_value = "1")]
    pub scale: String,
    /// Draw the measure axes unrotated
    #[arg(long)]
    pub no_rotate: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Dimension bound for module sweeps
    #[arg(long, default_value_t = 40)]
    pub max_dim: usize,
    /// Mesh depth for parallelogram and ordering sweeps
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// Also sweep 20 random orientations drawn from this seed
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Tikz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Left,
    Right,
    Hom,
}

impl From<KindArg> for TubeKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Left => TubeKind::Left,
            KindArg::Right => TubeKind::Right,
            KindArg::Hom => TubeKind::Homogeneous,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Parallelogram,
    Tiling,
    Components,
    Orderings,
    Oracle,
}

/// Error carried to the user with a `module::Variant` code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: String,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: "cli::Usage".into(), message: message.into() }
    }

    /// Wraps a domain error, naming the variant from its `Debug` form.
    pub fn domain<E: fmt::Debug + fmt::Display>(module: &str, e: E) -> Self {
        let dbg = format!("{e:?}");
        let variant: String = dbg.chars().take_while(|c| c.is_alphanumeric()).collect();
        CliError { code: format!("{module}::{variant}"), message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.code, self.message)
    }
}

macro_rules! domain_from {
    ($($ty:ty => $m:literal),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::domain($m, e)
            }
        })*
    };
}

domain_from!(
    rhombic_core::quiver::QuiverError => "quiver",
    rhombic_core::measure::MeasureError => "measure",
    rhombic_core::strings::StringError => "strings",
    rhombic_core::grcompute::GrError => "grcompute",
    rhombic_core::artubes::TubeError => "artubes",
    rhombic_core::rhombic::RhombicError => "rhombic",
);

/// Rendering options for pictures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub format: Format,
    pub scale: BigRational,
    pub rotate: bool,
    pub max_dim: usize,
}

impl RenderSpec {
    pub fn new(format: Format, scale: BigRational, rotate: bool, max_dim: usize) -> Result<Self, CliError> {
        if scale <= BigRational::zero() {
            return Err(CliError::usage(format!("scale must be positive, got {scale}")));
        }
        Ok(RenderSpec { format, scale, rotate, max_dim })
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `1.5`.
pub fn parse_rational(text: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::usage(format!("not a rational number: `{text}`"));
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((i, f)) = t.split_once('.') {
        if f.is_empty() || !f.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n = BigInt::from_str(&format!("{i}{f}")).map_err(|_| bad())?;
        return Ok(BigRational::new(n, BigInt::from(10u8).pow(f.len() as u32)));
    }
    Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?))
}

pub fn load_cover(text: &str) -> Result<Arc<Cover>, CliError> {
    let text = PRESETS.iter().find(|(k, _)| *k == text).map_or(text, |(_, w)| w);
    Ok(Arc::new(Cover::new(parse_quiver(text)?)))
}

pub fn load_module(cover: &Arc<Cover>, args: &ModuleArgs) -> Result<Module, CliError> {
    match (&args.module, args.homogeneous) {
        (Some(addr), None) => Ok(parse_address(cover, addr)?.into()),
        (None, Some(q)) => Ok(Module::homogeneous(cover.clone(), q)?),
        _ => Err(CliError::usage("give exactly one of --module or --homogeneous")),
    }
}

fn load_family(cover: &Arc<Cover>, args: &FamilyArgs) -> Result<Family, CliError> {
    match &args.family {
        None => Ok(family_of(&load_module(cover, &args.module)?)),
        Some(key) => {
            let key = key.trim_end_matches("_*");
            if key == "H" {
                return Ok(Family::Homogeneous { cover: cover.clone() });
            }
            string_families(cover)
                .into_iter()
                .find(|f| f.name().trim_end_matches("_*") == key)
                .ok_or_else(|| CliError::usage(format!("no family `{key}` over this quiver")))
        }
    }
}

/// Outcome of a command: the rendered report and whether every check held.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

fn ok(text: String) -> Result<Output, CliError> {
    Ok(Output { text, ok: true })
}

fn json_only(common: &CommonArgs) -> Result<(), CliError> {
    match common.format {
        Format::Json => Ok(()),
        f => Err(CliError::usage(format!("format {f:?} is only available for pictures"))),
    }
}

fn execute(cmd: &Command) -> Result<Output, CliError> {
    use report::*;
    match cmd {
        Command::Measure(a) | Command::Comeasure(a) | Command::Ipf(a) | Command::Classify(a) => {
            json_only(&a.common)?;
            let cover = load_cover(&a.common.quiver)?;
            let m = load_module(&cover, a)?;
            let text = match cmd {
                Command::Measure(_) => to_json(&measure_report(&m)?),
                Command::Comeasure(_) => to_json(&comeasure_report(&m)?),
                Command::Ipf(_) => to_json(&ipf_report(&m)?),
                _ => to_json(&classify_report(&m)),
            };
            ok(text)
        }
        Command::Oracle(a) => {
            json_only(&a.module.common)?;
            let cover = load_cover(&a.module.common.quiver)?;
            let m = load_module(&cover, &a.module)?;
            let r = oracle_report(&m, a.max_dim)?;
            Ok(Output { ok: r.agree, text: to_json(&r) })
        }
        Command::Family(a) => {
            json_only(&a.module.common)?;
            let cover = load_cover(&a.module.common.quiver)?;
            ok(to_json(&family_report(&load_family(&cover, a)?, a.depth)?))
        }
        Command::Tube(a) | Command::Tiling(a) => {
            json_only(&a.common)?;
            let cover = load_cover(&a.common.quiver)?;
            let kind = TubeKind::from(a.kind);
            let probe = build_tube(&cover, kind, 1)?;
            let depth = a.depth.unwrap_or(3 * probe.rank());
            let tube = build_tube(&cover, kind, depth)?;
            if matches!(cmd, Command::Tube(_)) {
                ok(to_json(&tube_report(&tube)))
            } else {
                let r = tiling_out(&tube, 8)?;
                ok(to_json(&r))
            }
        }
        Command::Limits(a) => {
            json_only(a)?;
            let cover = load_cover(&a.quiver)?;
            ok(to_json(&limits_report(&cover)?))
        }
        Command::Rhombic(a) => {
            let cover = load_cover(&a.common.quiver)?;
            let spec = RenderSpec::new(
                a.common.format,
                parse_rational(&a.scale)?,
                !a.no_rotate,
                a.max_dim.unwrap_or(3 * cover.h()),
            )?;
            let pic = picture_report(&cover, a.kind.map(TubeKind::from), spec.max_dim)?;
            let text = match spec.format {
                Format::Json => to_json(&pic),
                Format::Csv => render::csv(&pic),
                Format::Svg => render::svg(&pic, &spec),
                Format::Tikz => render::tikz(&pic, &spec),
            };
            ok(text)
        }
        Command::Verify(a) => {
            json_only(&a.common)?;
            let cover = load_cover(&a.common.quiver)?;
            let r = verify::run(a.suite, &cover, a.max_dim, a.depth, a.seed)?;
            Ok(Output { ok: r.failure_count == 0, text: to_json(&r) })
        }
    }
}

fn out_path(cmd: &Command) -> Option<&std::path::Path> {
    let c = match cmd {
        Command::Measure(a) | Command::Comeasure(a) | Command::Ipf(a) | Command::Classify(a) => &a.common,
        Command::Oracle(a) => &a.module.common,
        Command::Family(a) => &a.module.common,
        Command::Tube(a) | Command::Tiling(a) => &a.common,
        Command::Limits(a) => a,
        Command::Rhombic(a) => &a.common,
        Command::Verify(a) => &a.common,
    };
    c.out.as_deref()
}

/// Runs one invocation. Returns 0 on success, 1 when a verification
/// failed and 2 on usage or domain errors.
pub fn run_command<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let _ = write!(err, "{}", e.render());
            return 2;
        }
    };
    let result = execute(&cli.command).and_then(|o| {
        match out_path(&cli.command) {
            Some(p) => std::fs::write(p, &o.text)
                .map_err(|e| CliError { code: "cli::Io".into(), message: format!("{}: {e}", p.display()) })?,
            None => out
                .write_all(o.text.as_bytes())
                .map_err(|e| CliError { code: "cli::Io".into(), message: e.to_string() })?,
        }
        Ok(o.ok)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => {
            let _ = writeln!(err, "verification failed");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            2
        }
    }
}
