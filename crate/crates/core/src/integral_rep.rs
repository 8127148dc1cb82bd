//! Integral representation of `Φ(θ) = −Γ(α)Γ(−α)·A_{2n−1}(α, e^{iθ})` for
//! `β = 1`, `α ∈ (0, 1)`:
//!
//! `Φ(θ) = ∫₀¹ F(t) [1/α + B(t,θ) + i·C(t,θ)] dt`,
//!
//! where `F(t) = ∫_t^1 s^{−1−α}(1−s)^{α−1} ds` and `B + iC` is the closed
//! form of `Σ_{k=1}^{2n−1} (−t)^{k−1} e^{ikθ}`.
//!
//! `F` is evaluated once per quadrature node and memoised in a process-wide
//! table keyed by `α`, the endpoint map and the node level.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::{
    integrate2d_with, integrate_with, level_nodes, Abscissa, QuadValue, QuadratureSpec, Rule,
    MAX_SUPPORTED_LEVELS,
};
use crate::series::{partial_sum_detailed, SeriesQuery};

/// Tolerances for the inner integral defining `F`; tighter than any outer
/// tolerance a caller is expected to request.
const INNER_ABS_TOL: f64 = 1e-15;
const INNER_REL_TOL: f64 = 1e-14;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        domain(format!("alpha must lie in (0, 1), got {alpha}"))
    }
}

fn check_m(m: u32) -> Result<u32> {
    if m % 2 == 1 {
        Ok(m.div_ceil(2))
    } else {
        domain(format!("index m must be odd and >= 1, got {m}"))
    }
}

/// `−Γ(α)Γ(−α) = π / (α sin πα)`.
pub fn reflection_constant(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(PI / (alpha * (PI * alpha).sin()))
}

// ---------------------------------------------------------------------------
// The weight F

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightValue {
    pub value: f64,
    pub error_estimate: f64,
}

fn inner_spec(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        rule: Rule::DoubleExponential,
        abs_tol: spec.abs_tol.min(INNER_ABS_TOL),
        rel_tol: spec.rel_tol.min(INNER_REL_TOL),
        max_levels: spec.max_levels.max(8),
        left_exponent: 0.0,
        right_exponent: 0.0,
    }
}

/// `F` at a point given as `(t, 1 − t)`.
///
/// For `t ≤ 1/2`: `F(t) = t^{−α} (1/α − J)`, with
/// `J = ∫₀¹ r^{−1−α} [(1 − tr)^{α−1} − 1] dr` (integrand `~ r^{−α}` at 0).
/// For `t > 1/2`, `w = (1−s)^α` absorbs the right endpoint:
/// `F(t) = ((1−t)^α/α) ∫₀¹ (1 − (1−t) r^{1/α})^{−1−α} dr`.
fn weight_at(t: f64, tc: f64, alpha: f64, inner: &QuadratureSpec) -> Result<WeightValue> {
    if tc == 0.0 {
        return Ok(WeightValue {
            value: 0.0,
            error_estimate: 0.0,
        });
    }
    if t <= 0.5 {
        let spec = inner.with_exponents(-alpha, 0.0);
        let j = integrate_with(
            |a: &Abscissa| {
                let r = a.t;
                r.powf(-alpha) * (((alpha - 1.0) * (-t * r).ln_1p()).exp_m1() / r)
            },
            &spec,
        )?;
        let scale = t.powf(-alpha);
        Ok(WeightValue {
            value: scale * (1.0 / alpha - j.value),
            error_estimate: scale * j.error_estimate,
        })
    } else {
        let inv = 1.0 / alpha;
        let k = integrate_with(
            |a: &Abscissa| (1.0 - tc * a.t.powf(inv)).powf(-1.0 - alpha),
            inner,
        )?;
        let scale = tc.powf(alpha) / alpha;
        Ok(WeightValue {
            value: scale * k.value,
            error_estimate: scale * k.error_estimate,
        })
    }
}

/// `F(t) = ∫_t^1 s^{−1−α}(1−s)^{α−1} ds` for `t ∈ (0, 1]`.
pub fn weight_f(t: f64, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_alpha(alpha)?;
    if !(t > 0.0 && t <= 1.0) {
        return domain(format!("t must lie in (0, 1], got {t}"));
    }
    Ok(weight_at(t, 1.0 - t, alpha, &inner_spec(spec))?.value)
}

type TableKey = (u64, u64, u64, u64, usize, Rule);

/// Memo of `F` over the nodes of one outer rule.
pub struct WeightTable {
    alpha: f64,
    outer: QuadratureSpec,
    inner: QuadratureSpec,
    levels: Vec<OnceLock<Vec<WeightValue>>>,
    scattered: Mutex<HashMap<(u64, u64), WeightValue>>,
}

impl WeightTable {
    /// Shared table for `α` and the outer spec's tolerances. The outer
    /// integrals always declare `F ~ t^{−α}` at 0 and `F ~ (1−t)^α` at 1.
    pub fn shared(alpha: f64, spec: &QuadratureSpec) -> Result<Arc<WeightTable>> {
        check_alpha(alpha)?;
        spec.validate()?;
        static TABLES: OnceLock<Mutex<HashMap<TableKey, Arc<WeightTable>>>> = OnceLock::new();
        let outer = spec.with_exponents(-alpha, alpha);
        let key = (
            alpha.to_bits(),
            outer.abs_tol.to_bits(),
            outer.rel_tol.to_bits(),
            outer.left_exponent.to_bits(),
            outer.max_levels,
            outer.rule,
        );
        let mut map = TABLES
            .get_or_init(Default::default)
            .lock()
            .expect("weight table registry poisoned");
        let table = map.entry(key).or_insert_with(|| {
            Arc::new(WeightTable {
                alpha,
                outer,
                inner: inner_spec(spec),
                levels: (0..MAX_SUPPORTED_LEVELS).map(|_| OnceLock::new()).collect(),
                scattered: Mutex::new(HashMap::new()),
            })
        });
        Ok(Arc::clone(table))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Spec the outer integrals must use so node slots line up.
    pub fn outer_spec(&self) -> QuadratureSpec {
        self.outer
    }

    pub fn weight(&self, at: &Abscissa) -> Result<WeightValue> {
        match at.slot {
            Some(slot) if self.outer.rule == Rule::DoubleExponential => {
                let cell = &self.levels[slot.level];
                if let Some(values) = cell.get() {
                    return Ok(values[slot.index]);
                }
                let computed = level_nodes(&self.outer, slot.level)
                    .iter()
                    .map(|n| weight_at(n.at.t, n.at.tc, self.alpha, &self.inner))
                    .collect::<Result<Vec<_>>>()?;
                // Concurrent fills produce identical vectors; first one wins.
                Ok(cell.get_or_init(|| computed)[slot.index])
            }
            _ => {
                let key = (at.t.to_bits(), at.tc.to_bits());
                if let Some(v) = self.scattered.lock().expect("memo poisoned").get(&key) {
                    return Ok(*v);
                }
                let v = weight_at(at.t, at.tc, self.alpha, &self.inner)?;
                self.scattered.lock().expect("memo poisoned").insert(key, v);
                Ok(v)
            }
        }
    }
}

/// `∫₀¹ F(t)·k(t) dt` together with its error budget.
#[derive(Debug, Clone, Copy)]
pub struct WeightedIntegral<V> {
    pub value: V,
    /// Outer level-difference estimate plus the error inherited from `F`.
    pub error_estimate: f64,
    pub levels_used: usize,
}

/// Integrates `F(t)·k(t, 1−t)` with the shared `F` table for `α`.
pub fn integrate_weighted<V, K>(
    alpha: f64,
    spec: &QuadratureSpec,
    kernel: K,
) -> Result<WeightedIntegral<V>>
where
    V: QuadValue,
    K: Fn(f64, f64) -> V,
{
    let table = WeightTable::shared(alpha, spec)?;
    let failure = std::cell::RefCell::new(None);
    let r = integrate_with(
        |a: &Abscissa| match table.weight(a) {
            Ok(w) => {
                let k = kernel(a.t, a.tc);
                (k.scale(w.value), k.magnitude() * w.error_estimate)
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                (V::zero(), 0.0)
            }
        },
        &table.outer_spec(),
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(WeightedIntegral {
        value: r.value.0,
        error_estimate: r.error_estimate + r.value.1.abs(),
        levels_used: r.levels_used,
    })
}

// ---------------------------------------------------------------------------
// Kernels

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub t: f64,
    pub theta: f64,
    pub n: u32,
}

/// `B(t,θ)` and `C(t,θ)` with the trigonometric factors precomputed.
#[derive(Debug, Clone, Copy)]
pub struct Kernel {
    m: i32,
    cos: f64,
    sin: f64,
    half_cos_sq: f64,
    cos_2n: f64,
    sin_2n: f64,
    cos_m: f64,
    sin_m: f64,
    /// `θ ∓ π`, so that `m·shift ≡ m(θ + π)` modulo `2π`.
    shift: f64,
    at_pi: bool,
    stabilized: bool,
}

/// `π − PI`, the rounding error of the `f64` constant.
const PI_LO: f64 = 1.224_646_799_147_353_2e-16;

/// Below this value of `1 + t² + 2t cosθ` the kernel is evaluated in
/// factored form.
const FACTORED_BELOW: f64 = 1.0 / 16.0;

impl Kernel {
    /// Displayed rational-trigonometric forms.
    pub fn new(theta: f64, n: u32) -> Self {
        let m = 2 * n as i32 - 1;
        let two_n = f64::from(2 * n);
        let mf = f64::from(m);
        let half = (0.5 * theta).cos();
        Self {
            m,
            cos: theta.cos(),
            sin: theta.sin(),
            half_cos_sq: 2.0 * half * half,
            cos_2n: (two_n * theta).cos(),
            sin_2n: (two_n * theta).sin(),
            cos_m: (mf * theta).cos(),
            sin_m: (mf * theta).sin(),
            shift: if theta >= 0.0 {
                (theta - PI) - PI_LO
            } else {
                (theta + PI) + PI_LO
            },
            at_pi: theta.abs() == PI,
            stabilized: false,
        }
    }

    /// At `|θ| = π` uses `B = −(1 − t^{2n−1})/(1 − t)`, `C = 0`.
    pub fn stabilized(theta: f64, n: u32) -> Self {
        Self {
            stabilized: true,
            ..Self::new(theta, n)
        }
    }

    pub fn is_singular_at(&self, tc: f64) -> bool {
        self.at_pi && !self.stabilized && tc == 0.0
    }

    /// `(B, C)` at `(t, 1 − t)`.
    #[inline]
    pub fn eval(&self, t: f64, tc: f64) -> (f64, f64) {
        if self.at_pi && self.stabilized {
            if tc == 0.0 {
                return (-f64::from(self.m), 0.0);
            }
            // 1 − t^m = −expm1(m ln t), ln t = ln1p(−tc).
            let b = (f64::from(self.m) * (-tc).ln_1p()).exp_m1() / tc;
            return (b, 0.0);
        }
        // 1 + t² + 2t cosθ = (1 − t)² + 4t cos²(θ/2)
        let den = tc * tc + 2.0 * t * self.half_cos_sq;
        if den < FACTORED_BELOW && tc > 0.0 {
            return self.factored(t, tc);
        }
        let tm = t.powi(self.m);
        let tm1 = tm * t;
        let b = (self.cos + t + tm * self.cos_2n + tm1 * self.cos_m) / den;
        let c = (self.sin + tm * self.sin_2n + tm1 * self.sin_m) / den;
        (b, c)
    }
}

impl Kernel {
    /// `e^{iθ}(1 − z^m)/(1 − z)` with `z = −t e^{iθ}`; both factors are
    /// formed without cancellation near `t = 1`, `θ = ±π`.
    fn factored(&self, t: f64, tc: f64) -> (f64, f64) {
        let mf = f64::from(self.m);
        let log_r = mf * (-tc).ln_1p();
        let r = log_r.exp();
        let phi = mf * self.shift;
        let half = (0.5 * phi).sin();
        let top = Complex64::new(-log_r.exp_m1() + 2.0 * r * half * half, -r * phi.sin());
        let bottom = Complex64::new(tc + t * self.half_cos_sq, t * self.sin);
        let s = Complex64::new(self.cos, self.sin) * top / bottom;
        (s.re, s.im)
    }
}

/// `(B(t,θ), C(t,θ))` from the displayed closed forms.
pub fn kernel_bc(p: &KernelPoint) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&p.t) {
        return domain(format!("t must lie in [0, 1], got {}", p.t));
    }
    if p.theta.is_nan() || p.theta.abs() > PI {
        return domain(format!("theta must lie in [-pi, pi], got {}", p.theta));
    }
    if p.n == 0 {
        return domain("n must be >= 1");
    }
    let kernel = Kernel::new(p.theta, p.n);
    let tc = 1.0 - p.t;
    if kernel.is_singular_at(tc) {
        return Err(Error::SingularPoint {
            t: p.t,
            theta: p.theta,
        });
    }
    Ok(kernel.eval(p.t, tc))
}

// ---------------------------------------------------------------------------
// Φ

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiMethod {
    Series,
    Quadrature,
    DoubleIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub method: PhiMethod,
}

fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta.abs() <= PI {
        Ok(())
    } else {
        domain(format!("theta must lie in [-pi, pi], got {theta}"))
    }
}

/// `Φ(θ)` from the coefficient sum, scaled by the reflection constant.
pub fn phi_series(alpha: f64, m: u32, theta: f64) -> Result<PhiValue> {
    let r = reflection_constant(alpha)?;
    let q = SeriesQuery::new(alpha, 1.0, m, theta)?;
    let s = partial_sum_detailed(&q);
    Ok(PhiValue {
        value: s.value * r,
        error_estimate: r * f64::from(m) * f64::EPSILON * s.term_magnitude,
        method: PhiMethod::Series,
    })
}

fn phi_by_quadrature(alpha: f64, spec: &QuadratureSpec, kernel: Kernel) -> Result<PhiValue> {
    let inv_alpha = 1.0 / alpha;
    let r = integrate_weighted(alpha, spec, |t, tc| {
        let (b, c) = kernel.eval(t, tc);
        Complex64::new(inv_alpha + b, c)
    })?;
    Ok(PhiValue {
        value: r.value,
        error_estimate: r.error_estimate,
        method: PhiMethod::Quadrature,
    })
}

/// `Φ(θ) = ∫₀¹ F(t)[1/α + B + iC] dt` with the displayed kernels.
/// Fails with `SingularPoint` at `|θ| = π`; see [`phi_quadrature_stabilized`].
pub fn phi_quadrature(alpha: f64, m: u32, theta: f64, spec: &QuadratureSpec) -> Result<PhiValue> {
    check_alpha(alpha)?;
    let n = check_m(m)?;
    check_theta(theta)?;
    if theta.abs() == PI {
        return Err(Error::SingularPoint { t: 1.0, theta });
    }
    phi_by_quadrature(alpha, spec, Kernel::new(theta, n))
}

/// As [`phi_quadrature`], but accepts `|θ| = π` through the simplified kernel.
pub fn phi_quadrature_stabilized(
    alpha: f64,
    m: u32,
    theta: f64,
    spec: &QuadratureSpec,
) -> Result<PhiValue> {
    check_alpha(alpha)?;
    let n = check_m(m)?;
    check_theta(theta)?;
    phi_by_quadrature(alpha, spec, Kernel::stabilized(theta, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SqDiffMethod {
    #[default]
    ViaPhi,
    DoubleIntegral,
}

/// `Φ²(0) − |Φ(θ)|²`, with the two operands when they are computed
/// separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiSqDiff {
    pub value: f64,
    pub error_estimate: f64,
    pub phi0_sq: Option<f64>,
    pub phi_theta_sq: Option<f64>,
}

pub fn phi_sq_diff(
    alpha: f64,
    m: u32,
    theta: f64,
    spec: &QuadratureSpec,
    method: SqDiffMethod,
) -> Result<PhiSqDiff> {
    check_alpha(alpha)?;
    let n = check_m(m)?;
    check_theta(theta)?;
    match method {
        SqDiffMethod::ViaPhi => {
            let p0 = phi_quadrature(alpha, m, 0.0, spec)?;
            let pt = if theta == 0.0 {
                p0
            } else {
                phi_quadrature_stabilized(alpha, m, theta, spec)?
            };
            let lhs = p0.value.re * p0.value.re;
            let rhs = pt.value.norm_sqr();
            let (e0, et) = (p0.error_estimate, pt.error_estimate);
            let error = (2.0 * p0.value.norm() + e0) * e0 + (2.0 * pt.value.norm() + et) * et;
            Ok(PhiSqDiff {
                value: lhs - rhs,
                error_estimate: error,
                phi0_sq: Some(lhs),
                phi_theta_sq: Some(rhs),
            })
        }
        SqDiffMethod::DoubleIntegral => {
            let table = WeightTable::shared(alpha, spec)?;
            let k0 = Kernel::new(0.0, n);
            let kt = Kernel::stabilized(theta, n);
            let inv_alpha = 1.0 / alpha;
            let failure = std::cell::RefCell::new(None);
            let weight = |a: &Abscissa| match table.weight(a) {
                Ok(w) => w,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    WeightValue {
                        value: 0.0,
                        error_estimate: 0.0,
                    }
                }
            };
            let r = integrate2d_with(
                |a: &Abscissa, b: &Abscissa| {
                    let (fa, fb) = (weight(a), weight(b));
                    let (b0a, _) = k0.eval(a.t, a.tc);
                    let (b0b, _) = k0.eval(b.t, b.tc);
                    let (bta, cta) = kt.eval(a.t, a.tc);
                    let (btb, ctb) = kt.eval(b.t, b.tc);
                    let bracket = (inv_alpha + b0a) * (inv_alpha + b0b)
                        - (inv_alpha + bta) * (inv_alpha + btb)
                        - cta * ctb;
                    let inherited = (fa.error_estimate * fb.value + fa.value * fb.error_estimate)
                        * bracket.abs();
                    (fa.value * fb.value * bracket, inherited)
                },
                &table.outer_spec(),
            )?;
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            Ok(PhiSqDiff {
                value: r.value.0,
                error_estimate: r.error_estimate + r.value.1.abs(),
                phi0_sq: None,
                phi_theta_sq: None,
            })
        }
    }
}
