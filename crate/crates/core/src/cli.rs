//! Command-line front end: argument definitions and the four subcommands.
//!
//! - `eval`: one function at one point, printed as JSON (or a CSV row),
//! - `suite`: the configured identity suites, printed as a report,
//! - `scan`: one parameter swept along a q-ray, with the residual of every check at every step,
//! - `spectrum`: zeros of the Casorati determinant compared with the predicted singular set.
//!
//! Exit codes: `0` when everything passes, `1` when a check fails, `2` for
//! malformed configuration or arguments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Complex;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::meixner::{
    big_phi, mu, phi, phi_dagger, poly_m, poly_p, psi, weight_cx, BigPhiRoute, Evaluation, PhiRoute, Point, PsiRoute, Side, SpectralPoint,
};
use crate::scalar::{format_complex, parse_complex, parse_real};
use crate::spectral::{compare_spectrum, KernelMode, ScanOptions, SpectrumComparison};
use crate::verify::config::{parse_suite_list, ParamSpec, SuiteConfig};
use crate::verify::report::{Format, Status};

/// Environment variable holding the working precision in decimal digits.
pub const PRECISION_ENV: &str = "QMEIXNER_PRECISION";

/// Exit code for a failed check.
pub const EXIT_FAIL: u8 = 1;
/// Exit code for malformed configuration or arguments.
pub const EXIT_INPUT: u8 = 2;

/// High-precision q-Meixner functions and verification of their identities.
#[derive(Debug, Parser)]
#[command(name = "qmeixner", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Suite configuration file (the built-in default when omitted).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Working precision in decimal digits; overrides the configuration.
    #[arg(long, global = true, value_name = "N", env = PRECISION_ENV)]
    pub precision: Option<u32>,
    /// Relative tolerance; must be at least 10^-(precision-8).
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Comma-separated suites to run, overriding the configuration.
    #[arg(long, global = true, value_name = "NAME[,NAME...]")]
    pub suite: Option<String>,
    /// Write the output to a file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one function at one point.
    Eval(EvalArgs),
    /// Run the configured identity suites and emit a report.
    Suite,
    /// Sweep one parameter along a q-ray and emit the residual of every check.
    Scan(ScanArgs),
    /// Locate the zeros of the Casorati determinant and compare them with the predicted spectrum.
    Spectrum(SpectrumArgs),
}

/// The functions `eval` knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    /// The polynomial `m_n` (needs `--n`).
    M,
    /// The finite-family polynomial `P_n` (needs `--n` and `c`).
    P,
    /// `φ_γ`.
    Phi,
    /// `ψ_γ`.
    Psi,
    /// `Φ_γ^±` (side from `--side`).
    BigPhi,
    /// `Φ_γ^†` (side from `--side`).
    PhiDagger,
    /// The weight `w(x)`.
    Weight,
    /// The eigenvalue `μ(γ)`.
    Mu,
}

/// Parameter selection shared by `eval`, `scan` and `spectrum`.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Parameter set of the configuration to start from (default: the first).
    #[arg(long, value_name = "NAME")]
    pub set: Option<String>,
    /// Base `q` in `(0, 1)`, overriding the set's value.
    #[arg(long)]
    pub q: Option<String>,
    /// Parameter `a` (real or complex), overriding the set's value.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Parameter `b` (real or complex), overriding the set's value.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Positive anchor `t₊`, overriding the set's value.
    #[arg(long = "t-plus", allow_hyphen_values = true)]
    pub t_plus: Option<String>,
    /// Negative anchor `t₋`, overriding the set's value.
    #[arg(long = "t-minus", allow_hyphen_values = true)]
    pub t_minus: Option<String>,
    /// Parameter `c` of the finite family, overriding the set's value.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub function: Function,
    /// Spectral parameter γ (real or complex, e.g. `0.3-0.2i`).
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Evaluation point x.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Degree of a polynomial.
    #[arg(long)]
    pub n: Option<u64>,
    /// Anchor of `Φ^±`.
    #[arg(long, value_enum, default_value_t = SideArg::Plus)]
    pub side: SideArg,
    /// Series representation (route names as printed in the output; `auto` by default).
    #[arg(long, default_value = "auto")]
    pub route: String,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Plus,
    Minus,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Plus => Side::Plus,
            SideArg::Minus => Side::Minus,
        }
    }
}

/// Parameters `scan` can sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    A,
    B,
    C,
    TPlus,
    TMinus,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// The parameter multiplied by `q^j`.
    #[arg(long, value_enum)]
    pub param: SweepParam,
    /// First exponent `j`.
    #[arg(long = "from", allow_hyphen_values = true, default_value_t = -2)]
    pub from: i64,
    /// Last exponent `j`.
    #[arg(long = "to", allow_hyphen_values = true, default_value_t = 2)]
    pub to: i64,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// `D(φ_γ, Φ_γ)` for the space on `−q^ℕ ∪ t₊q^ℤ`.
    Single,
    /// `D(Φ_γ^+, Φ_γ^−)` for the space on `t₋q^ℤ ∪ t₊q^ℤ`.
    Two,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Determinant to scan; by default the single-anchor one, plus the
    /// two-anchor one for sets with `t₋ ≠ −1`.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Scan window `|γ| = q^u` for `u` in `[u-min, u-max]`.
    #[arg(long = "u-min", allow_hyphen_values = true, default_value_t = ScanOptions::default().u_min)]
    pub u_min: f64,
    #[arg(long = "u-max", allow_hyphen_values = true, default_value_t = ScanOptions::default().u_max)]
    pub u_max: f64,
    /// Grid points per unit of `u`.
    #[arg(long = "per-unit", default_value_t = ScanOptions::default().per_unit)]
    pub per_unit: u32,
    /// Restrict to one parameter set (default: all sets of the configuration).
    #[arg(long, value_name = "NAME")]
    pub set: Option<String>,
}

/// Parses the process arguments, runs the command and maps the outcome to an exit code.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qmeixner: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

/// Runs a parsed command. Errors are input errors (exit code 2); failed
/// checks are reported through the returned exit code.
pub fn run(cli: &Cli) -> Result<ExitCode> {
    let cfg = load_config(&cli.global)?;
    let (text, ok) = match &cli.command {
        Command::Eval(args) => eval(&cfg, args, cli.global.format.unwrap_or(OutputFormat::Json))?,
        Command::Suite => suite(&cfg, &cli.global)?,
        Command::Scan(args) => scan(&cfg, args, &cli.global)?,
        Command::Spectrum(args) => spectrum(&cfg, args, cli.global.format.unwrap_or(OutputFormat::Json))?,
    };
    emit(&cli.global, &text)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAIL) })
}

/// The configuration with the command-line overrides applied and validated.
pub fn load_config(g: &GlobalArgs) -> Result<SuiteConfig> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
            SuiteConfig::parse(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?
        }
        None => SuiteConfig::default_config(),
    };
    if let Some(p) = g.precision {
        cfg.precision = p;
    }
    if let Some(t) = g.tol {
        cfg.tolerance = t;
    }
    if let Some(s) = &g.suite {
        cfg.suites = parse_suite_list(s)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(g: &GlobalArgs, text: &str) -> Result<()> {
    match &g.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            // A closed pipe (e.g. `| head`) is not an error of the run.
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            Ok(())
        }
    }
}

/// The selected parameter set with the per-field overrides applied.
fn select_params(cfg: &SuiteConfig, args: &ParamArgs) -> Result<ParamSpec> {
    let mut spec = match &args.set {
        Some(name) => cfg.params.iter().find(|p| &p.name == name).cloned().ok_or_else(|| Error::Input(format!("no param-set named '{name}'")))?,
        None => cfg.params[0].clone(),
    };
    let overrides = [(&args.q, &mut spec.q), (&args.a, &mut spec.a), (&args.b, &mut spec.b), (&args.t_plus, &mut spec.t_plus), (&args.t_minus, &mut spec.t_minus)];
    let mut changed = false;
    for (value, field) in overrides {
        if let Some(v) = value {
            *field = v.clone();
            changed = true;
        }
    }
    if let Some(c) = &args.c {
        spec.c = Some(c.clone());
        changed = true;
    }
    if changed {
        spec.name = format!("{}*", spec.name);
    }
    Ok(spec)
}

fn route_name<T: Serialize>(r: &T) -> String {
    serde_json::to_value(r).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn pick_route<T: Serialize + Copy>(name: &str, auto: T, all: &[T]) -> Result<T> {
    if name == "auto" {
        return Ok(auto);
    }
    // Accept both the flag spelling and the one printed in evaluation output.
    let squash = |s: &str| s.replace(['_', '-'], "");
    all.iter().copied().find(|r| squash(&route_name(r)) == squash(name)).ok_or_else(|| {
        let names: Vec<String> = all.iter().map(route_name).collect();
        Error::Input(format!("unknown route '{name}' (auto, {})", names.join(", ")))
    })
}

fn eval(cfg: &SuiteConfig, args: &EvalArgs, format: OutputFormat) -> Result<(String, bool)> {
    let spec = select_params(cfg, &args.params)?;
    let p = spec.build(cfg.precision())?;
    let bits = p.bits();
    let need = |v: &Option<String>, what: &str| -> Result<Complex> {
        let text = v.as_ref().ok_or_else(|| Error::Input(format!("eval {:?} needs --{what}", args.function)))?;
        parse_complex(bits, text)
    };
    let degree = || args.n.ok_or_else(|| Error::Input("this function needs --n".into()));
    let plain = |value: Complex, route: &'static str| Evaluation { value, route, cancellation: 1.0, bits_used: bits };
    let gamma = || -> Result<SpectralPoint> { Ok(SpectralPoint::generic(need(&args.gamma, "gamma")?)) };
    let x = || -> Result<Point> { Ok(Point::Value(need(&args.x, "x")?)) };
    let side: Side = args.side.into();
    let e = match args.function {
        Function::M => plain(poly_m(&p, degree()?, &need(&args.x, "x")?)?, "polynomial"),
        Function::P => plain(poly_p(&p, degree()?, &need(&args.x, "x")?)?, "polynomial"),
        Function::Phi => phi(&p, &gamma()?, &x()?, pick_route(&args.route, PhiRoute::Auto, &PhiRoute::ALL)?)?,
        Function::Psi => psi(&p, &gamma()?, &x()?, pick_route(&args.route, PsiRoute::Auto, &PsiRoute::ALL)?)?,
        Function::BigPhi => big_phi(&p, &gamma()?, side, &x()?, pick_route(&args.route, BigPhiRoute::Auto, &BigPhiRoute::ALL)?)?,
        Function::PhiDagger => phi_dagger(&p, &gamma()?, side, &x()?, pick_route(&args.route, BigPhiRoute::Auto, &BigPhiRoute::ALL)?)?,
        Function::Weight => plain(weight_cx(&p, &need(&args.x, "x")?)?, "product"),
        Function::Mu => plain(mu(&p, &need(&args.gamma, "gamma")?), "closed_form"),
    };
    let digits = cfg.precision as usize;
    let function = serde_json::to_value(args.function.to_possible_value().map(|v| v.get_name().to_string())).unwrap_or_default();
    let record = json!({
        "function": function,
        "params": spec.describe(),
        "gamma": args.gamma,
        "x": args.x,
        "n": args.n,
        "side": matches!(args.function, Function::BigPhi | Function::PhiDagger).then(|| route_name(&side)),
        "value": format_complex(&e.value, digits),
        "re": e.value.real().to_f64(),
        "im": e.value.imag().to_f64(),
        "route": e.route,
        "cancellation": e.cancellation,
        "precision": cfg.precision,
    });
    let text = match format {
        OutputFormat::Json => serde_json::to_string_pretty(&record).expect("record serialises"),
        OutputFormat::Csv => {
            let fields = ["function", "params", "gamma", "x", "n", "side", "value", "re", "im", "route", "cancellation", "precision"];
            let row: Vec<String> = fields
                .iter()
                .map(|f| match &record[f] {
                    serde_json::Value::Null => String::new(),
                    serde_json::Value::String(s) => csv_field(s),
                    v => v.to_string(),
                })
                .collect();
            format!("{}\n{}\n", fields.join(","), row.join(","))
        }
    };
    Ok((text, true))
}

fn suite(cfg: &SuiteConfig, g: &GlobalArgs) -> Result<(String, bool)> {
    let report = crate::verify::run(cfg, g.jobs)?;
    eprintln!("{}", report.summary());
    for f in report.failures() {
        eprintln!("FAIL {}: residual {:e} > {:e} ({})", f.check_id, f.residual, f.tolerance, f.note);
    }
    Ok((report.render(g.format.unwrap_or(OutputFormat::Json).into()), report.all_passed()))
}

/// One row of a parameter sweep.
#[derive(Debug, Serialize)]
struct ScanRow {
    step: i64,
    value: String,
    check_id: String,
    residual: f64,
    tolerance: f64,
    status: String,
    note: String,
}

fn scan(cfg: &SuiteConfig, args: &ScanArgs, g: &GlobalArgs) -> Result<(String, bool)> {
    if args.to < args.from {
        return Err(Error::Input("--to must not be below --from".into()));
    }
    let base = select_params(cfg, &args.params)?;
    let bits = cfg.precision().bits();
    let q = parse_real(bits, &base.q)?;
    let original = match args.param {
        SweepParam::A => base.a.clone(),
        SweepParam::B => base.b.clone(),
        SweepParam::C => base.c.clone().ok_or_else(|| Error::Input("the parameter set has no c to sweep".into()))?,
        SweepParam::TPlus => base.t_plus.clone(),
        SweepParam::TMinus => base.t_minus.clone(),
    };
    let original = parse_complex(bits, &original)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for j in args.from..=args.to {
        let factor = Complex::with_val(bits, rug::ops::Pow::pow(q.clone(), j as i32));
        // Extra digits keep the text round trip below the working precision.
        let text = format_complex(&Complex::with_val(bits, &original * &factor), cfg.precision as usize + 10);
        let mut spec = base.clone();
        match args.param {
            SweepParam::A => spec.a = text.clone(),
            SweepParam::B => spec.b = text.clone(),
            SweepParam::C => spec.c = Some(text.clone()),
            SweepParam::TPlus => spec.t_plus = text.clone(),
            SweepParam::TMinus => spec.t_minus = text.clone(),
        }
        spec.name = format!("{}@{j}", base.name);
        let mut step_cfg = cfg.clone();
        step_cfg.params = vec![spec];
        match crate::verify::run(&step_cfg, g.jobs) {
            Ok(report) => {
                ok &= report.all_passed();
                rows.extend(report.checks.into_iter().map(|c| ScanRow {
                    step: j,
                    value: text.clone(),
                    check_id: c.check_id,
                    residual: c.residual,
                    tolerance: c.tolerance,
                    status: status_name(c.status).into(),
                    note: c.note,
                }));
            }
            // A step outside the admissible parameter region is reported, not fatal.
            Err(e) => rows.push(ScanRow {
                step: j,
                value: text.clone(),
                check_id: String::new(),
                residual: f64::NAN,
                tolerance: cfg.tolerance,
                status: "invalid".into(),
                note: e.to_string(),
            }),
        }
    }
    let text = match g.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => serde_json::to_string_pretty(&rows).expect("rows serialise"),
        OutputFormat::Csv => {
            let mut out = String::from("step,value,check_id,residual,tolerance,status,note\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{:e},{:e},{},{}\n",
                    r.step,
                    csv_field(&r.value),
                    csv_field(&r.check_id),
                    r.residual,
                    r.tolerance,
                    r.status,
                    csv_field(&r.note)
                ));
            }
            out
        }
    };
    Ok((text, ok))
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Skipped => "skipped",
    }
}

/// The scan of one parameter set in one mode.
#[derive(Debug, Serialize)]
struct SpectrumEntry {
    set: String,
    mode: &'static str,
    pass: bool,
    #[serde(flatten)]
    comparison: SpectrumComparison,
}

fn spectrum(cfg: &SuiteConfig, args: &SpectrumArgs, format: OutputFormat) -> Result<(String, bool)> {
    let specs: Vec<&ParamSpec> = match &args.set {
        Some(name) => vec![cfg.params.iter().find(|p| &p.name == name).ok_or_else(|| Error::Input(format!("no param-set named '{name}'")))?],
        None => cfg.params.iter().collect(),
    };
    let mut entries = Vec::new();
    for spec in specs {
        let p = spec.build(cfg.precision())?;
        let modes: Vec<ModeArg> = match args.mode {
            Some(m) => vec![m],
            None if p.t_minus_is_minus_one() => vec![ModeArg::Single],
            None => vec![ModeArg::Single, ModeArg::Two],
        };
        for m in modes {
            let (mode, name) = match m {
                ModeArg::Single => (KernelMode::SingleAnchor, "single"),
                ModeArg::Two => (KernelMode::TwoAnchor, "two"),
            };
            let opts = ScanOptions { u_min: args.u_min, u_max: args.u_max, per_unit: args.per_unit, mode };
            let comparison = compare_spectrum(&p, &opts)?;
            let pass = comparison.discrepancies() == 0;
            entries.push(SpectrumEntry { set: spec.name.clone(), mode: name, pass, comparison });
        }
    }
    let ok = entries.iter().all(|e| e.pass);
    let text = match format {
        OutputFormat::Json => serde_json::to_string_pretty(&entries).expect("entries serialise"),
        OutputFormat::Csv => {
            let mut out = String::from("set,mode,sign,u,gamma,class,relative_depth\n");
            for e in &entries {
                for z in &e.comparison.zeros {
                    let class = serde_json::to_value(&z.class).map(|v| v.to_string()).unwrap_or_default();
                    out.push_str(&format!("{},{},{},{},{:e},{},{}\n", csv_field(&e.set), e.mode, z.sign, z.u, z.gamma, csv_field(&class), z.relative_depth));
                }
                for m in &e.comparison.missed {
                    out.push_str(&format!("{},{},,,,{},\n", csv_field(&e.set), e.mode, csv_field(&format!("missed {m}"))));
                }
            }
            out
        }
    };
    Ok((text, ok))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

