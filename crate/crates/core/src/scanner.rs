//! Grid sweeps of the margin operations with a deterministic reduction.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::inequalities::{
    conjecture_margin, lemma3_margin, lemma4_margin, lemma5_margin, theorem3_margin, Lemma5Variant,
    MarginResult, Part,
};
use crate::integral_rep::{phi_sq_diff, SqDiffMethod};
use crate::quadrature::QuadratureSpec;
use crate::series::{partial_sum_at_one, partial_sum_detailed, SeriesQuery};

pub const DEFAULT_NEAR_VIOLATION: f64 = 1e-6;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
const GRID_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckId {
    #[serde(rename = "brannan")]
    Brannan,
    #[serde(rename = "phi-sq-diff")]
    PhiSqDiff,
    #[serde(rename = "lemma3a")]
    Lemma3a,
    #[serde(rename = "lemma3b")]
    Lemma3b,
    #[serde(rename = "lemma4")]
    Lemma4,
    #[serde(rename = "lemma5a")]
    Lemma5a,
    #[serde(rename = "lemma5b")]
    Lemma5b,
    #[serde(rename = "lemma5a-proof")]
    Lemma5aProof,
    #[serde(rename = "lemma5b-proof")]
    Lemma5bProof,
    #[serde(rename = "theorem3")]
    Theorem3,
    #[serde(rename = "conjecture")]
    Conjecture,
}

impl CheckId {
    pub const ALL: [CheckId; 11] = [
        Self::Brannan,
        Self::PhiSqDiff,
        Self::Lemma3a,
        Self::Lemma3b,
        Self::Lemma4,
        Self::Lemma5a,
        Self::Lemma5b,
        Self::Lemma5aProof,
        Self::Lemma5bProof,
        Self::Theorem3,
        Self::Conjecture,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Brannan => "brannan",
            Self::PhiSqDiff => "phi-sq-diff",
            Self::Lemma3a => "lemma3a",
            Self::Lemma3b => "lemma3b",
            Self::Lemma4 => "lemma4",
            Self::Lemma5a => "lemma5a",
            Self::Lemma5b => "lemma5b",
            Self::Lemma5aProof => "lemma5a-proof",
            Self::Lemma5bProof => "lemma5b-proof",
            Self::Theorem3 => "theorem3",
            Self::Conjecture => "conjecture",
        }
    }

    /// Theorem 3 and the conjecture sweep `x = −cosθ`; the others sweep `θ`.
    pub fn uses_x(self) -> bool {
        matches!(self, Self::Theorem3 | Self::Conjecture)
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

impl std::fmt::Display for CheckId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed range `lo, lo + step, …`. The last point is `hi` itself when
/// `hi − lo` is a multiple of `step` to within `1e−12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Range {
    pub fn new(lo: f64, hi: f64, step: f64) -> Self {
        Self { lo, hi, step }
    }

    pub fn single(v: f64) -> Self {
        Self {
            lo: v,
            hi: v,
            step: 1.0,
        }
    }

    pub fn validate(&self, axis: &str) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.step.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "{axis} range has a non-finite bound"
            )));
        }
        if self.lo > self.hi {
            return Err(Error::InvalidGrid(format!("{axis} range has lo > hi")));
        }
        if self.step <= 0.0 {
            return Err(Error::InvalidGrid(format!("{axis} range needs step > 0")));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let span = self.hi - self.lo;
        let q = span / self.step;
        let k = q.round();
        let exact = (k * self.step - span).abs() <= GRID_SLACK * self.hi.abs().max(1.0);
        let count = if exact { k } else { q.floor() } as usize;
        let mut pts: Vec<f64> = (0..=count)
            .map(|i| self.lo + i as f64 * self.step)
            .collect();
        if exact {
            pts[count] = self.hi;
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub check: CheckId,
    /// For `lemma4` this axis carries `t`.
    pub alpha: Range,
    #[serde(default)]
    pub angle: Option<Range>,
    #[serde(default)]
    pub x: Option<Range>,
    pub n_list: Vec<u32>,
    #[serde(default = "one")]
    pub beta: f64,
    #[serde(default = "near_default")]
    pub near_violation_threshold: f64,
    /// Slack below zero tolerated on top of twice the cell's error estimate.
    #[serde(default = "tol_default")]
    pub tolerance: f64,
}

fn one() -> f64 {
    1.0
}
fn near_default() -> f64 {
    DEFAULT_NEAR_VIOLATION
}
fn tol_default() -> f64 {
    DEFAULT_TOLERANCE
}

impl GridSpec {
    pub fn new(check: CheckId, alpha: Range, second: Range, n_list: Vec<u32>) -> Self {
        let (angle, x) = if check.uses_x() {
            (None, Some(second))
        } else {
            (Some(second), None)
        };
        Self {
            check,
            alpha,
            angle,
            x,
            n_list,
            beta: 1.0,
            near_violation_threshold: DEFAULT_NEAR_VIOLATION,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.alpha.validate("alpha")?;
        let second = match (self.angle, self.x, self.check.uses_x()) {
            (None, Some(x), true) => x,
            (Some(a), None, false) => a,
            (_, _, true) => {
                return Err(Error::InvalidGrid(format!(
                    "check {} needs an x range and no angle range",
                    self.check
                )))
            }
            (_, _, false) => {
                return Err(Error::InvalidGrid(format!(
                    "check {} needs an angle range and no x range",
                    self.check
                )))
            }
        };
        second.validate(if self.check.uses_x() { "x" } else { "angle" })?;
        if self.n_list.is_empty() {
            return Err(Error::InvalidGrid("n list is empty".into()));
        }
        if self.n_list.contains(&0) {
            return Err(Error::InvalidGrid("n must be >= 1".into()));
        }
        let mut sorted = self.n_list.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGrid("n list has duplicates".into()));
        }
        if self.near_violation_threshold.is_nan()
            || self.near_violation_threshold <= 0.0
            || self.tolerance.is_nan()
            || self.tolerance < 0.0
        {
            return Err(Error::InvalidGrid(
                "threshold must be > 0 and tolerance >= 0".into(),
            ));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidGrid("beta must be > 0".into()));
        }
        Ok(())
    }

    fn second_axis(&self) -> Range {
        self.angle.or(self.x).expect("validated grid")
    }

    fn sorted_n(&self) -> Vec<u32> {
        let mut n = self.n_list.clone();
        n.sort_unstable();
        n
    }

    pub fn cell_count(&self) -> usize {
        self.n_list.len() * self.alpha.points().len() * self.second_axis().points().len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellParams {
    pub n: u32,
    pub alpha: f64,
    pub angle_or_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub params: CellParams,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    pub error_estimate: Option<f64>,
    pub below_threshold: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub params: CellParams,
    pub margin: Option<f64>,
    pub error_estimate: Option<f64>,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub grid: GridSpec,
    pub cells_evaluated: usize,
    pub min_margin: Option<f64>,
    pub argmin: Option<CellParams>,
    pub max_error_estimate: f64,
    pub violations: Vec<Finding>,
    pub near_violations: Vec<Finding>,
    pub failed_cells: usize,
    pub below_threshold_cells: usize,
    pub quadrature: QuadratureSpec,
    pub wall_time_seconds: Option<f64>,
    #[serde(skip_serializing, default)]
    pub cells: Vec<Cell>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ScanOptions {
    /// Worker cap; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Record elapsed wall time in the report.
    pub timing: bool,
}

/// Margin of one cell of a check.
pub fn evaluate_cell(
    check: CheckId,
    params: CellParams,
    beta: f64,
    spec: &QuadratureSpec,
) -> Result<MarginResult> {
    let CellParams {
        n,
        alpha,
        angle_or_x: c,
    } = params;
    match check {
        CheckId::Brannan => brannan_cell(alpha, beta, n, c),
        CheckId::PhiSqDiff => {
            let d = phi_sq_diff(alpha, 2 * n - 1, c, spec, SqDiffMethod::ViaPhi)?;
            let mut r = MarginResult::new(
                "phi_sq_diff",
                &[("alpha", alpha), ("n", f64::from(n)), ("theta", c)],
                d.phi0_sq.unwrap_or(d.value),
                d.phi_theta_sq.unwrap_or(0.0),
                d.error_estimate,
            );
            r.margin = d.value;
            let min_n = if c.abs() <= std::f64::consts::FRAC_PI_2 {
                52
            } else {
                51
            };
            r.below_threshold = n < min_n;
            Ok(r)
        }
        CheckId::Lemma3a => lemma3_margin(Part::A, alpha, n, c, false, spec),
        CheckId::Lemma3b => lemma3_margin(Part::B, alpha, n, c, false, spec),
        CheckId::Lemma4 => lemma4_margin(alpha, c),
        CheckId::Lemma5a => lemma5_margin(Part::A, Lemma5Variant::Stated2750, alpha, n, c, spec),
        CheckId::Lemma5b => lemma5_margin(Part::B, Lemma5Variant::Stated2750, alpha, n, c, spec),
        CheckId::Lemma5aProof => {
            lemma5_margin(Part::A, Lemma5Variant::Proof1225, alpha, n, c, spec)
        }
        CheckId::Lemma5bProof => {
            lemma5_margin(Part::B, Lemma5Variant::Proof1225, alpha, n, c, spec)
        }
        CheckId::Theorem3 => theorem3_margin(alpha, n, c, spec),
        CheckId::Conjecture => conjecture_margin(alpha, n, c, spec),
    }
}

fn brannan_cell(alpha: f64, beta: f64, n: u32, theta: f64) -> Result<MarginResult> {
    let m = 2 * n - 1;
    let q = SeriesQuery::new(alpha, beta, m, theta)?;
    let lhs = partial_sum_at_one(alpha, beta, m);
    let s = partial_sum_detailed(&q);
    let rhs = if theta == 0.0 {
        lhs.abs()
    } else {
        s.value.norm()
    };
    let err = 2.0 * f64::from(m) * f64::EPSILON * s.term_magnitude;
    Ok(MarginResult::new(
        "brannan",
        &[
            ("alpha", alpha),
            ("beta", beta),
            ("m", f64::from(m)),
            ("theta", theta),
        ],
        lhs,
        rhs,
        err,
    ))
}

fn cell_from(params: CellParams, r: Result<MarginResult>) -> Cell {
    match r {
        Ok(m) => Cell {
            params,
            lhs: Some(m.lhs),
            rhs: Some(m.rhs),
            margin: Some(m.margin),
            error_estimate: Some(m.error_estimate),
            below_threshold: m.below_threshold,
            failure: None,
        },
        Err(e) => Cell {
            params,
            lhs: None,
            rhs: None,
            margin: None,
            error_estimate: None,
            below_threshold: false,
            failure: Some(e.to_string()),
        },
    }
}

pub fn scan(grid: &GridSpec, spec: &QuadratureSpec) -> Result<CheckReport> {
    scan_with(grid, spec, ScanOptions::default())
}

pub fn scan_with(grid: &GridSpec, spec: &QuadratureSpec, opts: ScanOptions) -> Result<CheckReport> {
    grid.validate()?;
    spec.validate()?;
    let start = Instant::now();
    let alphas = grid.alpha.points();
    let seconds = grid.second_axis().points();
    let params: Vec<CellParams> = grid
        .sorted_n()
        .into_iter()
        .flat_map(|n| {
            let seconds = &seconds;
            alphas.iter().flat_map(move |&alpha| {
                seconds.iter().map(move |&angle_or_x| CellParams {
                    n,
                    alpha,
                    angle_or_x,
                })
            })
        })
        .collect();

    let run = || -> Vec<Cell> {
        params
            .par_iter()
            .map(|&p| cell_from(p, evaluate_cell(grid.check, p, grid.beta, spec)))
            .collect()
    };
    let cells = match opts.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::InvalidGrid(format!("cannot start worker pool: {e}")))?
            .install(run),
        None => run(),
    };

    let mut grid_echo = grid.clone();
    grid_echo.n_list = grid.sorted_n();
    let mut report = reduce(grid_echo, *spec, cells);
    if opts.timing {
        report.wall_time_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

fn reduce(grid: GridSpec, quadrature: QuadratureSpec, cells: Vec<Cell>) -> CheckReport {
    let mut min: Option<(f64, CellParams)> = None;
    let mut violations = Vec::new();
    let mut near = Vec::new();
    let mut max_err = 0.0f64;
    let mut failed = 0;
    let mut below = 0;
    for c in &cells {
        let finding = |reason: Option<String>| Finding {
            params: c.params,
            margin: c.margin,
            error_estimate: c.error_estimate,
            reason,
        };
        if c.below_threshold {
            below += 1;
        }
        match (c.margin, c.error_estimate) {
            (Some(m), Some(e)) => {
                max_err = max_err.max(e);
                if min.is_none_or(|(v, _)| m < v) {
                    min = Some((m, c.params));
                }
                if m < -(grid.tolerance + 2.0 * e) {
                    violations.push(finding(None));
                }
                if m < grid.near_violation_threshold {
                    near.push(finding(None));
                }
            }
            _ => {
                failed += 1;
                violations.push(finding(c.failure.clone()));
                near.push(finding(c.failure.clone()));
            }
        }
    }
    CheckReport {
        grid,
        cells_evaluated: cells.len(),
        min_margin: min.map(|(v, _)| v),
        argmin: min.map(|(_, p)| p),
        max_error_estimate: max_err,
        violations,
        near_violations: near,
        failed_cells: failed,
        below_threshold_cells: below,
        quadrature,
        wall_time_seconds: None,
        cells,
    }
}

// ---------------------------------------------------------------------------
// Output

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

pub const CSV_HEADER: &str = "check,n,alpha,angle_or_x,lhs,rhs,margin,error_estimate";

/// 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn widen_floats(v: &mut Value) {
    match v {
        Value::Number(n) if !n.is_u64() && !n.is_i64() => {
            if let Some(f) = n.as_f64() {
                *n = serde_json::Number::from_str(&format_f64(f)).expect("valid float literal");
            }
        }
        Value::Array(items) => items.iter_mut().for_each(widen_floats),
        Value::Object(map) => map.values_mut().for_each(widen_floats),
        _ => {}
    }
}

/// Any serialisable value as pretty JSON with 17-digit floats.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    widen_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn render(report: &CheckReport, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json_string(report),
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(format_f64).unwrap_or_default();
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for c in &report.cells {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    report.grid.check,
                    c.params.n,
                    format_f64(c.params.alpha),
                    format_f64(c.params.angle_or_x),
                    opt(c.lhs),
                    opt(c.rhs),
                    opt(c.margin),
                    opt(c.error_estimate),
                );
            }
            Ok(out)
        }
    }
}

/// Single margins in the report CSV schema, or as a JSON array.
pub fn render_margins(results: &[MarginResult], format: Format) -> Result<String> {
    match format {
        Format::Json => to_json_string(&results),
        Format::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for r in results {
                let get = |keys: &[&str]| {
                    keys.iter()
                        .find_map(|k| r.inputs.get(*k))
                        .map(|v| format_f64(*v))
                        .unwrap_or_default()
                };
                let n = match (r.inputs.get("n"), r.inputs.get("m")) {
                    (Some(n), _) => format!("{n}"),
                    (None, Some(m)) => format!("{}", (m + 1.0) / 2.0),
                    _ => String::new(),
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.name,
                    n,
                    get(&["alpha", "t"]),
                    get(&["theta", "x"]),
                    format_f64(r.lhs),
                    format_f64(r.rhs),
                    format_f64(r.margin),
                    format_f64(r.error_estimate),
                );
            }
            Ok(out)
        }
    }
}

/// Writes `text` to `path` through a temporary file and rename, or to
/// standard output when `path` is `None`.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(p).map_err(|e| Error::Io(e.error))?;
        }
    }
    Ok(())
}

pub fn emit(report: &CheckReport, format: Format, destination: Option<&Path>) -> Result<()> {
    write_output(&render(report, format)?, destination)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn range_points() {
        assert_eq!(
            Range::new(0.0, 1.0, 0.25).points(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        assert_eq!(Range::new(0.0, 1.0, 0.3).points().len(), 4);
        let p = Range::new(0.02, 0.98, 0.04).points();
        assert_eq!(p.len(), 25);
        assert_eq!(*p.last().unwrap(), 0.98);
        let p = Range::new(0.0, PI, PI / 256.0).points();
        assert_eq!(p.len(), 257);
        assert_eq!(*p.last().unwrap(), PI);
        assert_eq!(Range::single(0.5).points(), vec![0.5]);
        assert!(Range::new(1.0, 0.0, 0.1).validate("a").is_err());
        assert!(Range::new(0.0, 1.0, 0.0).validate("a").is_err());
    }

    #[test]
    fn check_ids_round_trip() {
        for c in CheckId::ALL {
            assert_eq!(c.as_str().parse::<CheckId>().unwrap(), c);
            assert_eq!(
                serde_json::to_value(c).unwrap(),
                Value::String(c.as_str().into())
            );
        }
        assert!(matches!(
            "lemma9".parse::<CheckId>(),
            Err(Error::UnknownCheck(_))
        ));
    }

    #[test]
    fn single_brannan_cell() {
        let g = GridSpec::new(
            CheckId::Brannan,
            Range::single(0.5),
            Range::single(0.0),
            vec![2],
        );
        let r = scan(&g, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.cells_evaluated, 1);
        assert_eq!(r.min_margin, Some(0.0));
        assert_eq!(
            r.argmin,
            Some(CellParams {
                n: 2,
                alpha: 0.5,
                angle_or_x: 0.0
            })
        );
        let csv = render(&r, Format::Csv).unwrap();
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
        let json = render(&r, Format::Json).unwrap();
        assert!(json.contains("\"violations\": []"));
    }

    #[test]
    fn grid_validation() {
        let mut g = GridSpec::new(
            CheckId::Theorem3,
            Range::single(0.5),
            Range::single(0.7),
            vec![27],
        );
        assert!(g.validate().is_ok());
        g.angle = Some(Range::single(1.0));
        assert!(matches!(g.validate(), Err(Error::InvalidGrid(_))));
        let g = GridSpec::new(
            CheckId::Lemma4,
            Range::single(0.5),
            Range::single(1.8),
            vec![3, 3],
        );
        assert!(matches!(g.validate(), Err(Error::InvalidGrid(_))));
        let g = GridSpec::new(
            CheckId::Lemma4,
            Range::single(0.5),
            Range::single(1.8),
            vec![],
        );
        assert!(g.validate().is_err());
    }

    #[test]
    fn failures_are_recorded_per_cell() {
        // t = 1 is fine for lemma4, but θ = 0.1 is outside its box.
        let g = GridSpec::new(
            CheckId::Lemma4,
            Range::new(0.0, 1.0, 0.5),
            Range::single(0.1),
            vec![1],
        );
        let r = scan(&g, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.cells_evaluated, 3);
        assert_eq!(r.failed_cells, 3);
        assert_eq!(r.violations.len(), 3);
        assert!(r.violations[0].reason.as_deref().unwrap().contains("theta"));
        assert_eq!(r.min_margin, None);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let g = GridSpec::new(
            CheckId::Brannan,
            Range::new(0.1, 0.9, 0.2),
            Range::new(0.0, PI, PI / 7.0),
            vec![5, 2],
        );
        let r = scan(&g, &QuadratureSpec::default()).unwrap();
        let back: CheckReport = serde_json::from_str(&render(&r, Format::Json).unwrap()).unwrap();
        assert_eq!(
            back.min_margin.unwrap().to_bits(),
            r.min_margin.unwrap().to_bits()
        );
        assert_eq!(back.argmin, r.argmin);
        assert_eq!(back.grid, r.grid);
        assert_eq!(back.grid.n_list, vec![2, 5]);
    }

    #[test]
    fn atomic_file_output() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.csv");
        let g = GridSpec::new(
            CheckId::Lemma4,
            Range::new(0.0, 1.0, 0.25),
            Range::single(1.9),
            vec![1],
        );
        let r = scan(&g, &QuadratureSpec::default()).unwrap();
        emit(&r, Format::Csv, Some(&path)).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, render(&r, Format::Csv).unwrap());
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
