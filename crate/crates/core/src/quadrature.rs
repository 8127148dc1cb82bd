//! Integration over `(0, 1)` and `(0, 1)²` for integrands with algebraic
//! endpoint singularities.
//!
//! The default rule is the tanh-sinh (double-exponential) transformation on
//! nested levels: level `ℓ` has step `h = 2^{-ℓ}` and only adds the odd
//! multiples of `h`, so level sums are reused. Node tables are generated
//! deterministically and never include `t = 0` or `t = 1`. Integrands
//! receive both `t` and `1 − t`, each computed without cancellation, so
//! factors like `(1 − t)^{α−1}` stay accurate next to the right endpoint.
//!
//! A declared endpoint exponent below `−1/2` switches the double-exponential
//! rule to a split form: the half next to that endpoint is pulled back by
//! `t = u^{1/(1+e)}/2`, which turns `t^e dt` into a bounded integrand.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deepest level for which node tables can be generated.
pub const MAX_SUPPORTED_LEVELS: usize = 16;

/// Abscissae are generated for `|x| <= X_MAX` in the transformed variable;
/// beyond it the distance to the endpoint underflows.
const X_MAX: f64 = 6.1;

/// Exponents below this value trigger the endpoint pull-back.
const SUBSTITUTION_THRESHOLD: f64 = -0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    #[default]
    DoubleExponential,
    AdaptiveBisection,
}

/// Rule choice, tolerances, and the leading algebraic behaviour of the
/// integrand at each endpoint (`f ~ t^{left}` at 0, `f ~ (1−t)^{right}` at 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rule: Rule,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_levels: usize,
    pub left_exponent: f64,
    pub right_exponent: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rule: Rule::DoubleExponential,
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_levels: 12,
            left_exponent: 0.0,
            right_exponent: 0.0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_exponents(mut self, left: f64, right: f64) -> Self {
        self.left_exponent = left;
        self.right_exponent = right;
        self
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rule = rule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(msg));
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return bad(format!("abs_tol must be positive, got {}", self.abs_tol));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return bad(format!("rel_tol must be positive, got {}", self.rel_tol));
        }
        if !(3..=MAX_SUPPORTED_LEVELS).contains(&self.max_levels) {
            return bad(format!(
                "max_levels must be in 3..={MAX_SUPPORTED_LEVELS}, got {}",
                self.max_levels
            ));
        }
        for (side, e) in [("left", self.left_exponent), ("right", self.right_exponent)] {
            if !(e.is_finite() && e > -1.0) {
                return bad(format!("{side}_exponent must be > -1, got {e}"));
            }
        }
        Ok(())
    }

    fn tolerance_for(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult<V = f64> {
    pub value: V,
    pub error_estimate: f64,
    pub levels_used: usize,
}

/// Position of a node in a level table. Stable across calls for the same
/// rule, endpoint exponents and level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeSlot {
    pub level: usize,
    pub index: usize,
}

/// An evaluation point: `t` and its complement `tc = 1 − t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub t: f64,
    pub tc: f64,
    pub slot: Option<NodeSlot>,
}

/// A node with its weight (Jacobian included, level step excluded).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub at: Abscissa,
    pub weight: f64,
}

/// Values that can be integrated: reals, complex numbers, small vectors.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    fn magnitude(&self) -> f64;
    fn finite(&self) -> bool;

    fn sub(self, other: Self) -> Self {
        self.add(other.scale(-1.0))
    }
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl<A: QuadValue, B: QuadValue> QuadValue for (A, B) {
    fn zero() -> Self {
        (A::zero(), B::zero())
    }
    fn add(self, other: Self) -> Self {
        (self.0.add(other.0), self.1.add(other.1))
    }
    fn scale(self, s: f64) -> Self {
        (self.0.scale(s), self.1.scale(s))
    }
    fn magnitude(&self) -> f64 {
        self.0.magnitude().max(self.1.magnitude())
    }
    fn finite(&self) -> bool {
        self.0.finite() && self.1.finite()
    }
}

impl<const N: usize> QuadValue for [f64; N] {
    fn zero() -> Self {
        [0.0; N]
    }
    fn add(mut self, other: Self) -> Self {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
        self
    }
    fn scale(mut self, s: f64) -> Self {
        for a in self.iter_mut() {
            *a *= s;
        }
        self
    }
    fn magnitude(&self) -> f64 {
        self.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
    fn finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

// ---------------------------------------------------------------------------
// Node tables

#[derive(Debug, Clone, Copy)]
struct BaseNode {
    u: f64,
    uc: f64,
    w: f64,
}

fn base_level(level: usize) -> &'static [BaseNode] {
    static TABLES: [OnceLock<Vec<BaseNode>>; MAX_SUPPORTED_LEVELS] =
        [const { OnceLock::new() }; MAX_SUPPORTED_LEVELS];
    TABLES[level].get_or_init(|| build_base_level(level))
}

fn build_base_level(level: usize) -> Vec<BaseNode> {
    let h = 0.5f64.powi(level as i32);
    let mut out = Vec::new();
    let mut push_pair = |x: f64| {
        let s = PI * x.sinh();
        // For x > 0: distance to 1 is 1/(1 + e^s), distance to 0 is 1/(1 + e^{-s}).
        let near = 1.0 / (1.0 + s.exp());
        let far = 1.0 / (1.0 + (-s).exp());
        let w = PI * x.cosh() * near * far;
        if near < f64::MIN_POSITIVE || w == 0.0 {
            return;
        }
        if x == 0.0 {
            out.push(BaseNode {
                u: far,
                uc: near,
                w,
            });
        } else {
            out.push(BaseNode {
                u: near,
                uc: far,
                w,
            });
            out.push(BaseNode {
                u: far,
                uc: near,
                w,
            });
        }
    };
    if level == 0 {
        let mut k = 0u32;
        while f64::from(k) <= X_MAX {
            push_pair(f64::from(k));
            k += 1;
        }
    } else {
        let mut j = 0u64;
        loop {
            let x = (2 * j + 1) as f64 * h;
            if x > X_MAX {
                break;
            }
            push_pair(x);
            j += 1;
        }
    }
    out
}

/// Endpoint pull-back powers; `1.0` leaves that half linear.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Map {
    Plain,
    Split { left: f64, right: f64 },
}

impl Map {
    fn for_spec(spec: &QuadratureSpec) -> Self {
        let power = |e: f64, always: bool| {
            if (always && e != 0.0) || e < SUBSTITUTION_THRESHOLD {
                1.0 / (1.0 + e)
            } else {
                1.0
            }
        };
        let always = spec.rule == Rule::AdaptiveBisection;
        let left = power(spec.left_exponent, always);
        let right = power(spec.right_exponent, always);
        if left == 1.0 && right == 1.0 {
            Map::Plain
        } else {
            Map::Split { left, right }
        }
    }

    /// Map a base point `(u, 1 − u)` of one half to `(t, 1 − t, dt/du)`.
    /// `right_half` selects the half adjacent to `t = 1`.
    #[inline]
    fn pull_back(power: f64, u: f64, right_half: bool) -> (f64, f64, f64) {
        let (near, jac) = if power == 1.0 {
            (0.5 * u, 0.5)
        } else {
            (0.5 * u.powf(power), 0.5 * power * u.powf(power - 1.0))
        };
        if right_half {
            (1.0 - near, near, jac)
        } else {
            (near, 1.0 - near, jac)
        }
    }
}

fn keep(t: f64, tc: f64, weight: f64) -> bool {
    t >= f64::MIN_POSITIVE && tc >= f64::MIN_POSITIVE && weight > 0.0 && weight.is_finite()
}

fn map_level(map: Map, level: usize) -> Vec<Node> {
    let base = base_level(level);
    let mut out = Vec::with_capacity(base.len() * 2);
    let mut push = |t: f64, tc: f64, weight: f64| {
        if keep(t, tc, weight) {
            let index = out.len();
            out.push(Node {
                at: Abscissa {
                    t,
                    tc,
                    slot: Some(NodeSlot { level, index }),
                },
                weight,
            });
        }
    };
    match map {
        Map::Plain => {
            for b in base {
                push(b.u, b.uc, b.w);
            }
        }
        Map::Split { left, right } => {
            for b in base {
                let (t, tc, jac) = Map::pull_back(left, b.u, false);
                push(t, tc, b.w * jac);
            }
            for b in base {
                let (t, tc, jac) = Map::pull_back(right, b.u, true);
                push(t, tc, b.w * jac);
            }
        }
    }
    out
}

/// Nodes added at `level` by the double-exponential rule for this spec's
/// endpoint exponents. The level sum is `2^{-level} Σ weight·f`.
pub fn level_nodes(spec: &QuadratureSpec, level: usize) -> Vec<Node> {
    let map = Map::for_spec(&spec.with_rule(Rule::DoubleExponential));
    map_level(map, level)
}

// ---------------------------------------------------------------------------
// One dimension

/// `∫₀¹ f(t) dt`. Nodes whose `t` rounds to 1 are skipped; integrands
/// that are singular at 1 should use [`integrate_with`] and read `tc`.
pub fn integrate<F>(f: F, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    integrate_with(|a: &Abscissa| if a.t < 1.0 { f(a.t) } else { 0.0 }, spec)
}

/// `∫₀¹ f dt` where `f` sees the full abscissa (`t`, `1 − t`, node slot).
pub fn integrate_with<V, F>(f: F, spec: &QuadratureSpec) -> Result<QuadratureResult<V>>
where
    V: QuadValue,
    F: Fn(&Abscissa) -> V,
{
    spec.validate()?;
    match spec.rule {
        Rule::DoubleExponential => de_1d(&f, spec),
        Rule::AdaptiveBisection => adaptive_1d(&f, spec),
    }
}

fn checked<V: QuadValue>(v: V, at: &Abscissa) -> Result<V> {
    if v.finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            t: at.t,
            value: if v.magnitude().is_nan() {
                f64::NAN
            } else {
                f64::INFINITY
            },
        })
    }
}

/// Tracks level-to-level differences; accepts after two consecutive
/// differences below tolerance.
struct Refinement<V> {
    estimate: Option<V>,
    diffs: Vec<f64>,
}

impl<V: QuadValue> Refinement<V> {
    fn new() -> Self {
        Self {
            estimate: None,
            diffs: Vec::new(),
        }
    }

    fn push(
        &mut self,
        next: V,
        spec: &QuadratureSpec,
        level: usize,
    ) -> Option<QuadratureResult<V>> {
        if let Some(prev) = self.estimate {
            self.diffs.push(next.sub(prev).magnitude());
        }
        self.estimate = Some(next);
        let tol = spec.tolerance_for(next.magnitude());
        match self.diffs.as_slice() {
            [.., a, b] if *a <= tol && *b <= tol => Some(QuadratureResult {
                value: next,
                error_estimate: *b,
                levels_used: level + 1,
            }),
            _ => None,
        }
    }

    fn fail(&self, spec: &QuadratureSpec) -> Error {
        let value = self.estimate.map_or(f64::NAN, |v| v.magnitude());
        Error::NonConvergence {
            value,
            estimate: self.diffs.last().copied().unwrap_or(f64::INFINITY),
            tolerance: spec.tolerance_for(value),
            levels: spec.max_levels,
        }
    }
}

fn de_1d<V, F>(f: &F, spec: &QuadratureSpec) -> Result<QuadratureResult<V>>
where
    V: QuadValue,
    F: Fn(&Abscissa) -> V,
{
    let map = Map::for_spec(spec);
    let mut refine: Refinement<V> = Refinement::new();
    for level in 0..spec.max_levels {
        let h = 0.5f64.powi(level as i32);
        let mut sum = V::zero();
        for node in map_level(map, level) {
            let v = checked(f(&node.at), &node.at)?;
            sum = sum.add(v.scale(node.weight));
        }
        let next = match refine.estimate {
            None => sum.scale(h),
            Some(prev) => prev.scale(0.5).add(sum.scale(h)),
        };
        if let Some(done) = refine.push(next, spec, level) {
            return Ok(done);
        }
    }
    Err(refine.fail(spec))
}

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod value and |Kronrod − Gauss| on `[a, b]` of the base variable.
fn gk15<V, G>(g: &G, a: f64, b: f64) -> Result<(V, f64)>
where
    V: QuadValue,
    G: Fn(f64) -> Result<V>,
{
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = g(c)?;
    let mut kron = fc.scale(WGK[7]);
    let mut gauss = fc.scale(WG[3]);
    for j in 0..7 {
        let dx = r * XGK[j];
        let pair = g(c - dx)?.add(g(c + dx)?);
        kron = kron.add(pair.scale(WGK[j]));
        if j % 2 == 1 {
            gauss = gauss.add(pair.scale(WG[j / 2]));
        }
    }
    let kron = kron.scale(r);
    let gauss = gauss.scale(r);
    Ok((kron, kron.sub(gauss).magnitude()))
}

struct AdaptiveOutcome<V> {
    value: V,
    error: f64,
    depth: usize,
    converged: bool,
}

/// Recursive bisection of `[0, 1]` in the base variable with GK15 panels.
fn bisect<V, G>(g: &G, spec: &QuadratureSpec) -> Result<AdaptiveOutcome<V>>
where
    V: QuadValue,
    G: Fn(f64) -> Result<V>,
{
    let (whole, _) = gk15(g, 0.0, 1.0)?;
    let target = spec.tolerance_for(whole.magnitude());
    let mut out = AdaptiveOutcome {
        value: V::zero(),
        error: 0.0,
        depth: 0,
        converged: true,
    };
    // Depth-first, left panel first: a fixed evaluation order.
    let mut stack = vec![(0.0f64, 1.0f64, 0usize)];
    while let Some((a, b, depth)) = stack.pop() {
        let (val, err) = gk15(g, a, b)?;
        let width = b - a;
        if err <= target * width || depth + 1 >= spec.max_levels {
            if err > target * width {
                out.converged = false;
            }
            out.value = out.value.add(val);
            out.error += err;
            out.depth = out.depth.max(depth + 1);
        } else {
            let mid = 0.5 * (a + b);
            stack.push((mid, b, depth + 1));
            stack.push((a, mid, depth + 1));
        }
    }
    Ok(out)
}

fn adaptive_1d<V, F>(f: &F, spec: &QuadratureSpec) -> Result<QuadratureResult<V>>
where
    V: QuadValue,
    F: Fn(&Abscissa) -> V,
{
    let map = Map::for_spec(spec);
    let halves: Vec<(f64, bool)> = match map {
        Map::Plain => vec![],
        Map::Split { left, right } => vec![(left, false), (right, true)],
    };
    let mut parts = Vec::new();
    if halves.is_empty() {
        let g = |u: f64| {
            let at = Abscissa {
                t: u,
                tc: 1.0 - u,
                slot: None,
            };
            checked(f(&at), &at)
        };
        parts.push(bisect(&g, spec)?);
    } else {
        for (power, right_half) in halves {
            let g = |u: f64| {
                let (t, tc, jac) = Map::pull_back(power, u, right_half);
                if !keep(t, tc, jac) {
                    return Ok(V::zero());
                }
                let at = Abscissa { t, tc, slot: None };
                Ok(checked(f(&at), &at)?.scale(jac))
            };
            parts.push(bisect(&g, spec)?);
        }
    }
    let value = parts.iter().fold(V::zero(), |acc, p| acc.add(p.value));
    let error: f64 = parts.iter().map(|p| p.error).sum();
    let depth = parts.iter().map(|p| p.depth).max().unwrap_or(0);
    let tol = spec.tolerance_for(value.magnitude());
    if parts.iter().all(|p| p.converged) || error <= tol {
        Ok(QuadratureResult {
            value,
            error_estimate: error,
            levels_used: depth,
        })
    } else {
        Err(Error::NonConvergence {
            value: value.magnitude(),
            estimate: error,
            tolerance: tol,
            levels: depth,
        })
    }
}

// ---------------------------------------------------------------------------
// Two dimensions

/// `∫₀¹∫₀¹ g(t, v) dt dv`; both axes use the same rule and exponents.
pub fn integrate2d<G>(g: G, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    G: Fn(f64, f64) -> f64,
{
    integrate2d_with(
        |a: &Abscissa, b: &Abscissa| {
            if a.t < 1.0 && b.t < 1.0 {
                g(a.t, b.t)
            } else {
                0.0
            }
        },
        spec,
    )
}

pub fn integrate2d_with<V, G>(g: G, spec: &QuadratureSpec) -> Result<QuadratureResult<V>>
where
    V: QuadValue,
    G: Fn(&Abscissa, &Abscissa) -> V,
{
    spec.validate()?;
    match spec.rule {
        Rule::DoubleExponential => de_2d(&g, spec),
        Rule::AdaptiveBisection => {
            // Iterated: the inner integral is an integrand of the outer one.
            let inner_error = std::cell::Cell::new(0.0f64);
            let inner_failure = std::cell::RefCell::new(None);
            let outer = adaptive_1d(
                &|a: &Abscissa| match adaptive_1d(&|b: &Abscissa| g(a, b), spec) {
                    Ok(r) => {
                        inner_error.set(inner_error.get().max(r.error_estimate));
                        r.value
                    }
                    Err(e) => {
                        inner_failure.borrow_mut().get_or_insert(e);
                        V::zero()
                    }
                },
                spec,
            )?;
            if let Some(e) = inner_failure.into_inner() {
                return Err(e);
            }
            Ok(QuadratureResult {
                value: outer.value,
                error_estimate: outer.error_estimate + inner_error.get(),
                levels_used: outer.levels_used,
            })
        }
    }
}

fn de_2d<V, G>(g: &G, spec: &QuadratureSpec) -> Result<QuadratureResult<V>>
where
    V: QuadValue,
    G: Fn(&Abscissa, &Abscissa) -> V,
{
    let map = Map::for_spec(spec);
    let mut seen: Vec<Node> = Vec::new();
    let mut refine: Refinement<V> = Refinement::new();
    let eval = |a: &Node, b: &Node| -> Result<V> {
        let v = checked(g(&a.at, &b.at), &a.at)?;
        Ok(v.scale(a.weight * b.weight))
    };
    for level in 0..spec.max_levels {
        let h = 0.5f64.powi(level as i32);
        let fresh = map_level(map, level);
        let mut sum = V::zero();
        for a in &fresh {
            for b in seen.iter().chain(fresh.iter()) {
                sum = sum.add(eval(a, b)?);
            }
        }
        for a in &seen {
            for b in &fresh {
                sum = sum.add(eval(a, b)?);
            }
        }
        let next = match refine.estimate {
            None => sum.scale(h * h),
            Some(prev) => prev.scale(0.25).add(sum.scale(h * h)),
        };
        if let Some(done) = refine.push(next, spec, level) {
            return Ok(done);
        }
        seen.extend(fresh);
    }
    Err(refine.fail(spec))
}
