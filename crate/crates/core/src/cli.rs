//! Command-line front end.
//!
//! Exit codes: `0` when every reported margin is within tolerance, `1` when
//! at least one margin is violated or a computation fails, `2` on usage
//! errors.

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequalities::{
    conjecture_margin, lemma3_margin, lemma4_auxiliary, lemma4_margin, lemma5_margin,
    product_one_minus, proof_constant_checks, solve_tn, theorem3_margin, Lemma5Variant,
    MarginResult, Part,
};
use crate::integral_rep::{
    phi_quadrature, phi_quadrature_stabilized, phi_series, phi_sq_diff, PhiValue, SqDiffMethod,
};
use crate::quadrature::{QuadratureSpec, Rule};
use crate::scanner::{
    format_f64, render, render_margins, scan_with, to_json_string, CheckId, CheckReport, Format,
    GridSpec, Range, ScanOptions,
};
use crate::series::{partial_sum, SeriesQuery};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "brannan",
    version,
    about = "Numerical margins for the odd-coefficient inequality |A_{2n-1}(α,β,x)| ≤ A_{2n-1}(α,β,1)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partial sum A_m(α, β, e^{iθ}).
    Coeffs(CoeffsArgs),
    /// A_m(α, β, 1) − |A_m(α, β, e^{iθ})|.
    Margin(CoeffsArgs),
    /// Φ(θ) by series and by quadrature, optionally Φ²(0) − |Φ(θ)|².
    Phi(PhiArgs),
    /// Margins of the auxiliary lemmas, the root t_n and the quadratic g.
    Lemmas(LemmaArgs),
    /// Theorem 3 margin in x = −cosθ.
    Theorem3(TaylorArgs),
    /// The same margin for α ∈ (0, 1/3).
    Conjecture(TaylorArgs),
    /// Sweep a check over an (n, α, θ or x) grid.
    Scan(ScanArgs),
    /// Scalar constants of the proof chain at index n.
    Constants(ConstantsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    De,
    Adaptive,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Absolute quadrature tolerance.
    #[arg(long, default_value = "1e-10")]
    pub abs_tol: f64,
    /// Relative quadrature tolerance.
    #[arg(long, default_value = "1e-9")]
    pub rel_tol: f64,
    /// Maximum refinement levels (3 to 16).
    #[arg(long, default_value_t = 12)]
    pub max_levels: usize,
    /// Quadrature rule.
    #[arg(long, value_enum, default_value_t = RuleArg::De)]
    pub rule: RuleArg,
    /// Margins below −(tolerance + 2·error estimate) count as violations.
    #[arg(long, default_value = "1e-12")]
    pub tolerance: f64,
    /// Read angles in degrees.
    #[arg(long)]
    pub degrees: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    pub format: OutputFormat,
    /// Write to this file (atomically) instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    fn spec(&self) -> Result<QuadratureSpec> {
        let rule = match self.rule {
            RuleArg::De => Rule::DoubleExponential,
            RuleArg::Adaptive => Rule::AdaptiveBisection,
        };
        let spec = QuadratureSpec {
            max_levels: self.max_levels,
            ..QuadratureSpec::default()
        }
        .with_tolerances(self.abs_tol, self.rel_tol)
        .with_rule(rule);
        spec.validate()?;
        Ok(spec)
    }

    fn angle(&self, v: f64) -> f64 {
        if self.degrees {
            v / 180.0 * PI
        } else {
            v
        }
    }

    fn violated(&self, r: &MarginResult) -> bool {
        r.margin < -(self.tolerance + 2.0 * r.error_estimate)
    }
}

#[derive(Debug, Clone, Args)]
pub struct CoeffsArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Odd coefficient index m = 2n − 1.
    #[arg(long)]
    pub m: u32,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhiMethodArg {
    Series,
    Quadrature,
    Stabilized,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SqDiffArg {
    ViaPhi,
    DoubleIntegral,
}

#[derive(Debug, Clone, Args)]
pub struct PhiArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub m: u32,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, value_enum, default_value_t = PhiMethodArg::All)]
    pub method: PhiMethodArg,
    /// Also report Φ²(0) − |Φ(θ)|² computed this way.
    #[arg(long, value_enum)]
    pub sq_diff: Option<SqDiffArg>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LemmaId {
    #[value(name = "3a")]
    L3a,
    #[value(name = "3b")]
    L3b,
    #[value(name = "3b-proof")]
    L3bProof,
    #[value(name = "4")]
    L4,
    #[value(name = "5a")]
    L5a,
    #[value(name = "5b")]
    L5b,
    #[value(name = "5a-proof")]
    L5aProof,
    #[value(name = "5b-proof")]
    L5bProof,
    /// Root of c − t − 2t^{2n} = 0.
    #[value(name = "tn")]
    Tn,
    /// The quadratic g(x) = −1/5 + (5/13)x − x²/10.
    #[value(name = "g")]
    G,
}

#[derive(Debug, Clone, Args)]
pub struct LemmaArgs {
    #[arg(long, value_enum)]
    pub lemma: LemmaId,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 27)]
    pub n: u32,
    /// Angle θ [default: π/2].
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Point t for lemma 4.
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    /// Constant c for tn.
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    /// Argument of g.
    #[arg(long, default_value_t = 2.6, allow_hyphen_values = true)]
    pub x: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct TaylorArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 27)]
    pub n: u32,
    /// x = −cosθ in [1/2, 1].
    #[arg(long, default_value_t = 1.0)]
    pub x: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    #[arg(long, default_value_t = 27)]
    pub n: u32,
    /// Also compare 6·Π_{k≤K}(1 − 1/(3k)) with 4/3 for K = 53 and K = 27.
    #[arg(long)]
    pub products: bool,
    #[command(flatten)]
    pub common: Common,
}

const CHECK_NAMES: [&str; 11] = [
    "brannan",
    "phi-sq-diff",
    "lemma3a",
    "lemma3b",
    "lemma4",
    "lemma5a",
    "lemma5b",
    "lemma5a-proof",
    "lemma5b-proof",
    "theorem3",
    "conjecture",
];

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, value_parser = PossibleValuesParser::new(CHECK_NAMES))]
    pub check: String,
    /// α range as lo:hi:step or a single value (t for lemma4).
    #[arg(long)]
    pub alpha: String,
    /// θ range as lo:hi:step or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub angle: Option<String>,
    /// x range as lo:hi:step or a single value (theorem3, conjecture).
    #[arg(long)]
    pub x: Option<String>,
    /// Comma-separated n values; brannan uses m = 2n − 1.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u32>,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Margins below this are listed as near violations.
    #[arg(long, default_value = "1e-6")]
    pub threshold: f64,
    /// Worker threads.
    #[arg(long, env = "BRANNAN_THREADS")]
    pub threads: Option<usize>,
    /// Record wall time (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub common: Common,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn parse_range(text: &str, scale: impl Fn(f64) -> f64) -> Result<Range> {
    let parts: Vec<&str> = text.split(':').collect();
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| usage(format!("cannot parse range `{text}`")))?;
    match nums.as_slice() {
        [v] => Ok(Range::single(scale(*v))),
        [lo, hi, step] => Ok(Range::new(scale(*lo), scale(*hi), scale(*step))),
        _ => Err(usage(format!(
            "range `{text}` must be lo:hi:step or a single value"
        ))),
    }
}

struct Output {
    text: String,
    code: i32,
}

fn margins_output(results: &[MarginResult], common: &Common) -> Result<Output> {
    let code = if results.iter().any(|r| common.violated(r)) {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    };
    let text = match common.format {
        OutputFormat::Human => results
            .iter()
            .map(human_margin)
            .collect::<Vec<_>>()
            .join("\n"),
        OutputFormat::Csv => render_margins(results, Format::Csv)?,
        OutputFormat::Json => render_margins(results, Format::Json)?,
    };
    Ok(Output { text, code })
}

fn human_margin(r: &MarginResult) -> String {
    let inputs: Vec<String> = r.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut s = format!("{} [{}]\n", r.name, inputs.join(", "));
    for (k, v) in [
        ("lhs", r.lhs),
        ("rhs", r.rhs),
        ("margin", r.margin),
        ("error_estimate", r.error_estimate),
    ] {
        s.push_str(&format!("  {k:<15} {}\n", format_f64(v)));
    }
    if r.below_threshold {
        s.push_str("  below the asserted range of n\n");
    }
    for sub in &r.sub_margins {
        s.push_str(&format!(
            "  sub-margin {}: {} (lhs {}, rhs {})\n",
            sub.name,
            format_f64(sub.margin),
            format_f64(sub.lhs),
            format_f64(sub.rhs)
        ));
    }
    s
}

fn complex_human(re: f64, im: f64) -> String {
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{re} {sign} {}i", im.abs())
}

fn structured<T: Serialize>(
    value: &T,
    format: OutputFormat,
    csv: impl FnOnce() -> String,
) -> Result<String> {
    match format {
        OutputFormat::Json => to_json_string(value),
        OutputFormat::Csv => Ok(csv()),
        OutputFormat::Human => unreachable!("human output is formatted by the caller"),
    }
}

#[derive(Serialize)]
struct CoeffsRecord {
    alpha: f64,
    beta: f64,
    m: u32,
    theta: f64,
    re: f64,
    im: f64,
}

fn run_coeffs(a: &CoeffsArgs) -> Result<Output> {
    let theta = a.common.angle(a.theta);
    let q = SeriesQuery::new(a.alpha, a.beta, a.m, theta)?;
    let v = partial_sum(&q);
    let rec = CoeffsRecord {
        alpha: a.alpha,
        beta: a.beta,
        m: a.m,
        theta,
        re: v.re,
        im: v.im,
    };
    let text = match a.common.format {
        OutputFormat::Human => format!("{}\n", complex_human(v.re, v.im)),
        f => structured(&rec, f, || {
            format!(
                "alpha,beta,m,theta,re,im\n{},{},{},{},{},{}\n",
                format_f64(rec.alpha),
                format_f64(rec.beta),
                rec.m,
                format_f64(rec.theta),
                format_f64(rec.re),
                format_f64(rec.im)
            )
        })?,
    };
    Ok(Output {
        text,
        code: EXIT_OK,
    })
}

fn run_margin(a: &CoeffsArgs) -> Result<Output> {
    let theta = a.common.angle(a.theta);
    if a.m.is_multiple_of(2) {
        return Err(usage("m must be odd"));
    }
    let n = a.m.div_ceil(2);
    let params = crate::scanner::CellParams {
        n,
        alpha: a.alpha,
        angle_or_x: theta,
    };
    let r = crate::scanner::evaluate_cell(CheckId::Brannan, params, a.beta, &a.common.spec()?)?;
    margins_output(&[r], &a.common)
}

#[derive(Serialize)]
struct PhiReport {
    alpha: f64,
    m: u32,
    theta: f64,
    values: Vec<PhiValue>,
    sq_diff: Option<crate::integral_rep::PhiSqDiff>,
}

fn run_phi(a: &PhiArgs) -> Result<Output> {
    let spec = a.common.spec()?;
    let theta = a.common.angle(a.theta);
    let mut values = Vec::new();
    if matches!(a.method, PhiMethodArg::Series | PhiMethodArg::All) {
        values.push(phi_series(a.alpha, a.m, theta)?);
    }
    if matches!(a.method, PhiMethodArg::Quadrature | PhiMethodArg::All) {
        if a.method == PhiMethodArg::All && theta.abs() == PI {
            values.push(phi_quadrature_stabilized(a.alpha, a.m, theta, &spec)?);
        } else {
            values.push(phi_quadrature(a.alpha, a.m, theta, &spec)?);
        }
    }
    if a.method == PhiMethodArg::Stabilized {
        values.push(phi_quadrature_stabilized(a.alpha, a.m, theta, &spec)?);
    }
    let sq_diff = match a.sq_diff {
        None => None,
        Some(SqDiffArg::ViaPhi) => Some(phi_sq_diff(
            a.alpha,
            a.m,
            theta,
            &spec,
            SqDiffMethod::ViaPhi,
        )?),
        Some(SqDiffArg::DoubleIntegral) => Some(phi_sq_diff(
            a.alpha,
            a.m,
            theta,
            &spec,
            SqDiffMethod::DoubleIntegral,
        )?),
    };
    let code = match &sq_diff {
        Some(d) if d.value < -(a.common.tolerance + 2.0 * d.error_estimate) => EXIT_VIOLATION,
        _ => EXIT_OK,
    };
    let rep = PhiReport {
        alpha: a.alpha,
        m: a.m,
        theta,
        values,
        sq_diff,
    };
    let text = match a.common.format {
        OutputFormat::Human => {
            let mut s = String::new();
            for v in &rep.values {
                s.push_str(&format!(
                    "{:<15} {}  (error estimate {})\n",
                    format!("{:?}", v.method).to_lowercase(),
                    complex_human(v.value.re, v.value.im),
                    format_f64(v.error_estimate)
                ));
            }
            if let Some(d) = &rep.sq_diff {
                s.push_str(&format!(
                    "{:<15} {}  (error estimate {})\n",
                    "sq_diff",
                    format_f64(d.value),
                    format_f64(d.error_estimate)
                ));
            }
            s
        }
        f => structured(&rep, f, || {
            let mut s = String::from("method,alpha,m,theta,re,im,error_estimate\n");
            for v in &rep.values {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    format!("{:?}", v.method).to_lowercase(),
                    format_f64(rep.alpha),
                    rep.m,
                    format_f64(rep.theta),
                    format_f64(v.value.re),
                    format_f64(v.value.im),
                    format_f64(v.error_estimate)
                ));
            }
            if let Some(d) = &rep.sq_diff {
                s.push_str(&format!(
                    "sq_diff,{},{},{},{},0,{}\n",
                    format_f64(rep.alpha),
                    rep.m,
                    format_f64(rep.theta),
                    format_f64(d.value),
                    format_f64(d.error_estimate)
                ));
            }
            s
        })?,
    };
    Ok(Output { text, code })
}

fn run_lemmas(a: &LemmaArgs) -> Result<Output> {
    let spec = a.common.spec()?;
    let theta = a.theta.map_or(PI / 2.0, |v| a.common.angle(v));
    let r = match a.lemma {
        LemmaId::L3a => lemma3_margin(Part::A, a.alpha, a.n, theta, false, &spec)?,
        LemmaId::L3b => lemma3_margin(Part::B, a.alpha, a.n, theta, false, &spec)?,
        LemmaId::L3bProof => lemma3_margin(Part::B, a.alpha, a.n, theta, true, &spec)?,
        LemmaId::L4 => lemma4_margin(a.t, theta)?,
        LemmaId::L5a => lemma5_margin(
            Part::A,
            Lemma5Variant::Stated2750,
            a.alpha,
            a.n,
            theta,
            &spec,
        )?,
        LemmaId::L5b => lemma5_margin(
            Part::B,
            Lemma5Variant::Stated2750,
            a.alpha,
            a.n,
            theta,
            &spec,
        )?,
        LemmaId::L5aProof => lemma5_margin(
            Part::A,
            Lemma5Variant::Proof1225,
            a.alpha,
            a.n,
            theta,
            &spec,
        )?,
        LemmaId::L5bProof => lemma5_margin(
            Part::B,
            Lemma5Variant::Proof1225,
            a.alpha,
            a.n,
            theta,
            &spec,
        )?,
        LemmaId::Tn => {
            let root = solve_tn(a.c, a.n)?;
            let code = if root.residual.abs() <= 1e-13 {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            };
            let text = match a.common.format {
                OutputFormat::Human => format!(
                    "{}\n  root     {}\n  residual {}\n",
                    root.equation,
                    format_f64(root.root),
                    format_f64(root.residual)
                ),
                f => structured(&root, f, || {
                    format!(
                        "equation,root,residual\n{},{},{}\n",
                        root.equation,
                        format_f64(root.root),
                        format_f64(root.residual)
                    )
                })?,
            };
            return Ok(Output { text, code });
        }
        LemmaId::G => MarginResult::new(
            "lemma4_auxiliary",
            &[("x", a.x)],
            lemma4_auxiliary(a.x),
            0.0,
            0.0,
        ),
    };
    margins_output(&[r], &a.common)
}

fn run_taylor(a: &TaylorArgs, conjecture: bool) -> Result<Output> {
    let spec = a.common.spec()?;
    let r = if conjecture {
        conjecture_margin(a.alpha, a.n, a.x, &spec)?
    } else {
        theorem3_margin(a.alpha, a.n, a.x, &spec)?
    };
    margins_output(&[r], &a.common)
}

fn run_constants(a: &ConstantsArgs) -> Result<Output> {
    let mut results = proof_constant_checks(a.n)?;
    if a.products {
        for k in [53u32, 27] {
            results.push(MarginResult::new(
                "four_thirds_vs_six_product",
                &[("k", f64::from(k))],
                4.0 / 3.0,
                6.0 * product_one_minus(1.0 / 3.0, k),
                f64::from(k) * f64::EPSILON,
            ));
        }
    }
    margins_output(&results, &a.common)
}

fn human_report(r: &CheckReport) -> String {
    let mut s = format!(
        "check {}: {} cells, {} failed, {} below threshold\n",
        r.grid.check, r.cells_evaluated, r.failed_cells, r.below_threshold_cells
    );
    match (r.min_margin, r.argmin) {
        (Some(m), Some(p)) => s.push_str(&format!(
            "min margin {} at n={}, alpha={}, angle_or_x={}\n",
            format_f64(m),
            p.n,
            p.alpha,
            p.angle_or_x
        )),
        _ => s.push_str("no cell produced a margin\n"),
    }
    s.push_str(&format!(
        "max error estimate {}\n",
        format_f64(r.max_error_estimate)
    ));
    s.push_str(&format!(
        "violations {}, near violations {} (threshold {})\n",
        r.violations.len(),
        r.near_violations.len(),
        r.grid.near_violation_threshold
    ));
    for v in &r.violations {
        s.push_str(&format!(
            "  n={} alpha={} angle_or_x={} margin={} {}\n",
            v.params.n,
            v.params.alpha,
            v.params.angle_or_x,
            v.margin.map(format_f64).unwrap_or_else(|| "-".into()),
            v.reason.as_deref().unwrap_or("")
        ));
    }
    s
}

fn run_scan(a: &ScanArgs) -> Result<Output> {
    let spec = a.common.spec()?;
    let check: CheckId = a.check.parse()?;
    let alpha = parse_range(&a.alpha, |v| v)?;
    let second = match (check.uses_x(), &a.angle, &a.x) {
        (true, None, Some(x)) => parse_range(x, |v| v)?,
        (false, Some(t), None) => parse_range(t, |v| a.common.angle(v))?,
        (true, _, _) => return Err(usage(format!("check {check} needs --x and no --angle"))),
        (false, _, _) => return Err(usage(format!("check {check} needs --angle and no --x"))),
    };
    let mut grid = GridSpec::new(check, alpha, second, a.n.clone());
    grid.beta = a.beta;
    grid.near_violation_threshold = a.threshold;
    grid.tolerance = a.common.tolerance;
    grid.validate()?;
    if a.threads == Some(0) {
        return Err(usage("--threads must be >= 1"));
    }
    let report = scan_with(
        &grid,
        &spec,
        ScanOptions {
            threads: a.threads,
            timing: a.timing,
        },
    )?;
    let text = match a.common.format {
        OutputFormat::Human => human_report(&report),
        OutputFormat::Csv => render(&report, Format::Csv)?,
        OutputFormat::Json => render(&report, Format::Json)?,
    };
    let code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    Ok(Output { text, code })
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Coeffs(a) | Command::Margin(a) => &a.common,
        Command::Phi(a) => &a.common,
        Command::Lemmas(a) => &a.common,
        Command::Theorem3(a) | Command::Conjecture(a) => &a.common,
        Command::Scan(a) => &a.common,
        Command::Constants(a) => &a.common,
    }
}

fn dispatch(cmd: &Command) -> Result<Output> {
    common(cmd).spec()?;
    match cmd {
        Command::Coeffs(a) => run_coeffs(a),
        Command::Margin(a) => run_margin(a),
        Command::Phi(a) => run_phi(a),
        Command::Lemmas(a) => run_lemmas(a),
        Command::Theorem3(a) => run_taylor(a, false),
        Command::Conjecture(a) => run_taylor(a, true),
        Command::Scan(a) => run_scan(a),
        Command::Constants(a) => run_constants(a),
    }
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Domain(_) | Error::InvalidGrid(_) | Error::UnknownCheck(_)
    )
}

fn deliver(text: &str, out_path: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out_path {
        Some(p) => crate::scanner::write_output(text, Some(p)),
        None => {
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(out) => match deliver(&out.text, common(&cli.command).out.as_deref(), stdout) {
            Ok(()) => out.code,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                EXIT_VIOLATION
            }
        },
        Err(e) if is_usage(&e) => {
            let _ = writeln!(stderr, "error: {e}\n\nRun with --help for usage.");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_VIOLATION
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
