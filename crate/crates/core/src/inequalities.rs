//! Signed margins for the auxiliary inequalities and the scalar constants
//! used along the proof chain. Every margin is `lhs − rhs`, so a nonnegative
//! value means the inequality holds at that point.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::integral_rep::{integrate_weighted, Kernel};
use crate::quadrature::{integrate_with, Abscissa, QuadratureResult, QuadratureSpec};
use crate::series::partial_sum_at_one;

const RANGE_SLACK: f64 = 1e-12;
const CHEBYSHEV_GRID: usize = 64;
const BISECTION_CAP: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginResult {
    pub name: String,
    pub inputs: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub error_estimate: f64,
    /// `n` is below the index from which the inequality is asserted.
    pub below_threshold: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sub_margins: Vec<MarginResult>,
}

impl MarginResult {
    pub fn new(
        name: &str,
        inputs: &[(&str, f64)],
        lhs: f64,
        rhs: f64,
        error_estimate: f64,
    ) -> Self {
        Self {
            name: name.to_string(),
            inputs: inputs.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            lhs,
            rhs,
            margin: lhs - rhs,
            error_estimate,
            below_threshold: false,
            sub_margins: Vec::new(),
        }
    }

    fn flagged(mut self, below: bool) -> Self {
        self.below_threshold = below;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    pub equation: String,
    pub root: f64,
    pub residual: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        domain(format!("alpha must lie in (0, 1), got {alpha}"))
    }
}

fn check_n(n: u32) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        domain("n must be >= 1")
    }
}

/// Folds `θ` to `|θ|`, checks it against `[lo, hi]` and clamps the slack.
fn angle_in(theta: f64, lo: f64, hi: f64) -> Result<f64> {
    let a = theta.abs();
    if !(a >= lo - RANGE_SLACK && a <= hi + RANGE_SLACK) {
        return domain(format!("|theta| must lie in [{lo}, {hi}], got {theta}"));
    }
    Ok(a.clamp(lo, hi))
}

// ---------------------------------------------------------------------------
// Chebyshev's integral inequality

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Flat,
    Up,
    Down,
}

fn direction<F: Fn(f64) -> f64>(f: &F, which: &'static str) -> Result<Direction> {
    let h = 1.0 / CHEBYSHEV_GRID as f64;
    let samples: Vec<f64> = (0..CHEBYSHEV_GRID)
        .map(|i| f((i as f64 + 0.5) * h))
        .collect();
    let mut dir = Direction::Flat;
    for (i, w) in samples.windows(2).enumerate() {
        let step = match w[1].partial_cmp(&w[0]) {
            Some(std::cmp::Ordering::Greater) => Direction::Up,
            Some(std::cmp::Ordering::Less) => Direction::Down,
            Some(std::cmp::Ordering::Equal) => continue,
            None => {
                return Err(Error::MonotonicityViolated {
                    which,
                    at: (i as f64 + 1.5) * h,
                })
            }
        };
        if dir == Direction::Flat {
            dir = step;
        } else if dir != step {
            return Err(Error::MonotonicityViolated {
                which,
                at: (i as f64 + 1.5) * h,
            });
        }
    }
    Ok(dir)
}

/// `∫fg` against `∫f·∫g` over `[0, 1]`. With `same_monotony` the margin is
/// `∫fg − ∫f∫g`, otherwise `∫f∫g − ∫fg`.
pub fn chebyshev_check<F, G>(
    f: F,
    g: G,
    same_monotony: bool,
    spec: &QuadratureSpec,
) -> Result<MarginResult>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let df = direction(&f, "f")?;
    let dg = direction(&g, "g")?;
    if df != Direction::Flat && dg != Direction::Flat && (df == dg) != same_monotony {
        return Err(Error::MonotonicityViolated {
            which: "g",
            at: 0.5,
        });
    }
    let r = integrate_with(
        |a: &Abscissa| {
            let (fv, gv) = (f(a.t), g(a.t));
            [fv * gv, fv, gv]
        },
        spec,
    )?;
    let [fg, fi, gi] = r.value;
    let product = fi * gi;
    let err = r.error_estimate * (1.0 + fi.abs() + gi.abs());
    let (lhs, rhs) = if same_monotony {
        (fg, product)
    } else {
        (product, fg)
    };
    let name = if same_monotony {
        "chebyshev_same"
    } else {
        "chebyshev_opposite"
    };
    Ok(MarginResult::new(name, &[], lhs, rhs, err))
}

// ---------------------------------------------------------------------------
// t_n

/// Root of `c − t − 2t^{2n} = 0` in `(0, 1)` by bisection.
pub fn solve_tn(constant: f64, n: u32) -> Result<RootResult> {
    if !(constant > 0.0 && constant < 1.0) {
        return domain(format!("constant must lie in (0, 1), got {constant}"));
    }
    check_n(n)?;
    let p = 2 * n as i32;
    let h = |t: f64| constant - t - 2.0 * t.powi(p);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = if h(lo).abs() <= h(hi).abs() { lo } else { hi };
    Ok(RootResult {
        equation: format!("{constant} - t - 2t^{p} = 0"),
        root,
        residual: h(root),
    })
}

// ---------------------------------------------------------------------------
// Lemmas 3 to 5

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Lemma5Variant {
    #[default]
    Stated2750,
    Proof1225,
}

impl Lemma5Variant {
    /// The constants multiplying `(1 − cosθ)` in part (a) and
    /// `(1+t)(1 + cosθ)` in part (b).
    pub fn constants(self) -> (f64, f64) {
        match self {
            Self::Stated2750 => (27.0 / 50.0, 50.0 / 27.0),
            Self::Proof1225 => (12.0 / 25.0, 25.0 / 12.0),
        }
    }

    fn threshold(self) -> u32 {
        match self {
            Self::Stated2750 => 27,
            Self::Proof1225 => 51,
        }
    }
}

pub const LEMMA3_MIN_N: u32 = 27;

/// Trigonometric pieces shared by the lemma integrands.
struct Trig {
    n: u32,
    one_minus_cos: f64,
    one_plus_cos: f64,
    one_minus_cos_2n: f64,
    one_plus_cos_2n: f64,
    one_minus_cos_m: f64,
    one_plus_cos_m: f64,
    b0: Kernel,
    bt: Kernel,
}

impl Trig {
    fn new(theta: f64, n: u32) -> Self {
        let two_n = f64::from(2 * n);
        let m = two_n - 1.0;
        let sin_sq = |x: f64| 2.0 * (0.5 * x).sin().powi(2);
        let cos_sq = |x: f64| 2.0 * (0.5 * x).cos().powi(2);
        Self {
            n,
            one_minus_cos: sin_sq(theta),
            one_plus_cos: cos_sq(theta),
            one_minus_cos_2n: sin_sq(two_n * theta),
            one_plus_cos_2n: cos_sq(two_n * theta),
            one_minus_cos_m: sin_sq(m * theta),
            one_plus_cos_m: cos_sq(m * theta),
            b0: Kernel::new(0.0, n),
            bt: Kernel::new(theta, n),
        }
    }

    /// `1 + t² + 2t cosθ`.
    fn den(&self, t: f64, tc: f64) -> f64 {
        tc * tc + 2.0 * t * self.one_plus_cos
    }

    fn powers(&self, t: f64) -> (f64, f64) {
        let p = t.powi(2 * self.n as i32 - 1);
        (p, p * t)
    }
}

fn weighted_pair<K>(alpha: f64, spec: &QuadratureSpec, k: K) -> Result<(f64, f64, f64)>
where
    K: Fn(f64, f64) -> [f64; 2],
{
    let r = integrate_weighted(alpha, spec, k)?;
    Ok((r.value[0], r.value[1], 2.0 * r.error_estimate))
}

/// Lemma 3: part (a) compares `∫F(B(t,0) − B(t,θ))` with the
/// `½(1 − cosθ)` display, part (b) compares `∫F(1 + B(t,θ))` with the
/// `(1+t)(1 + cosθ)` display. `proof_form` divides the whole right-hand
/// numerator of (b) by `1 + t`.
pub fn lemma3_margin(
    part: Part,
    alpha: f64,
    n: u32,
    theta: f64,
    proof_form: bool,
    spec: &QuadratureSpec,
) -> Result<MarginResult> {
    check_alpha(alpha)?;
    check_n(n)?;
    let th = angle_in(theta, 0.0, FRAC_PI_2)?;
    let tr = Trig::new(th, n);
    let (lhs, rhs, err) = match part {
        Part::A => weighted_pair(alpha, spec, |t, tc| {
            let d = tr.den(t, tc);
            let (p, q) = tr.powers(t);
            let num = 0.5 * tr.one_minus_cos + p * tr.one_minus_cos_2n + q * tr.one_minus_cos_m;
            [
                tr.b0.eval(t, tc).0 - tr.bt.eval(t, tc).0,
                num / ((1.0 + t) * d),
            ]
        })?,
        Part::B => weighted_pair(alpha, spec, |t, tc| {
            let d = tr.den(t, tc);
            let (p, q) = tr.powers(t);
            let num = (1.0 + t) * tr.one_plus_cos + p * tr.one_plus_cos_2n + q * tr.one_plus_cos_m;
            let rhs = if proof_form {
                num / ((1.0 + t) * d)
            } else {
                num / d
            };
            [1.0 + tr.bt.eval(t, tc).0, rhs]
        })?,
    };
    let name = match (part, proof_form) {
        (Part::A, _) => "lemma3a",
        (Part::B, false) => "lemma3b",
        (Part::B, true) => "lemma3b_proof_form",
    };
    let inputs = [("alpha", alpha), ("n", f64::from(n)), ("theta", theta)];
    Ok(MarginResult::new(name, &inputs, lhs, rhs, err).flagged(n < LEMMA3_MIN_N))
}

/// Lemma 4, pointwise:
/// `5/2 + (t + cosθ)/D ≥ (50/23)(1+t)(1+cosθ)/D`, `D = 1 + t² + 2t cosθ`.
pub fn lemma4_margin(t: f64, theta: f64) -> Result<MarginResult> {
    if !(0.0..=1.0).contains(&t) {
        return domain(format!("t must lie in [0, 1], got {t}"));
    }
    let th = angle_in(theta, FRAC_PI_2, 2.0 * PI / 3.0)?;
    let c = th.cos();
    let d = 1.0 + t * t + 2.0 * t * c;
    let lhs = 2.5 + (t + c) / d;
    let rhs = 50.0 / 23.0 * (1.0 + t) * (1.0 + c) / d;
    Ok(MarginResult::new(
        "lemma4",
        &[("t", t), ("theta", theta)],
        lhs,
        rhs,
        0.0,
    ))
}

/// The auxiliary quadratic `g(x) = −1/5 + (5/13)x − x²/10`.
pub fn lemma4_auxiliary(x: f64) -> f64 {
    -0.2 + 5.0 / 13.0 * x - x * x / 10.0
}

/// Lemma 5 for `θ ∈ [π/2, 2π/3]`: part (a) as Lemma 3(a) with constant
/// `c₁`, part (b) compares `∫F(2 + B(t,0) + B(t,θ))` with the
/// `c₂(1+t)(1 + cosθ)` display.
pub fn lemma5_margin(
    part: Part,
    variant: Lemma5Variant,
    alpha: f64,
    n: u32,
    theta: f64,
    spec: &QuadratureSpec,
) -> Result<MarginResult> {
    check_alpha(alpha)?;
    check_n(n)?;
    let th = angle_in(theta, FRAC_PI_2, 2.0 * PI / 3.0)?;
    let tr = Trig::new(th, n);
    let (c1, c2) = variant.constants();
    let (lhs, rhs, err) = match part {
        Part::A => weighted_pair(alpha, spec, |t, tc| {
            let d = tr.den(t, tc);
            let (p, q) = tr.powers(t);
            let num = c1 * tr.one_minus_cos + p * tr.one_minus_cos_2n + q * tr.one_minus_cos_m;
            [
                tr.b0.eval(t, tc).0 - tr.bt.eval(t, tc).0,
                num / ((1.0 + t) * d),
            ]
        })?,
        Part::B => weighted_pair(alpha, spec, |t, tc| {
            let d = tr.den(t, tc);
            let (p, q) = tr.powers(t);
            let num = c2 * (1.0 + t) * tr.one_plus_cos
                + 2.0 * p * tr.one_plus_cos_2n
                + 2.0 * q * tr.one_plus_cos_m;
            [2.0 + tr.b0.eval(t, tc).0 + tr.bt.eval(t, tc).0, num / d]
        })?,
    };
    let name = match (part, variant) {
        (Part::A, Lemma5Variant::Stated2750) => "lemma5a",
        (Part::B, Lemma5Variant::Stated2750) => "lemma5b",
        (Part::A, Lemma5Variant::Proof1225) => "lemma5a_proof",
        (Part::B, Lemma5Variant::Proof1225) => "lemma5b_proof",
    };
    let inputs = [("alpha", alpha), ("n", f64::from(n)), ("theta", theta)];
    Ok(MarginResult::new(name, &inputs, lhs, rhs, err).flagged(n < variant.threshold()))
}

/// The five scalar positivity claims of the proof chain at index `n`.
pub fn proof_constant_checks(n: u32) -> Result<Vec<MarginResult>> {
    check_n(n)?;
    let nf = f64::from(n);
    let odd = 2.0 * nf + 1.0;
    let inputs = [("n", nf)];
    let moment = integrate_with(
        |a: &Abscissa| a.t.powi(2 * n as i32) / (1.0 + a.t),
        &QuadratureSpec::default().with_tolerances(1e-15, 1e-13),
    )?;
    let scalar = |name: &str, v: f64| MarginResult::new(name, &inputs, v, 0.0, 4.0 * f64::EPSILON);
    Ok(vec![
        MarginResult::new(
            "chebyshev_moment",
            &inputs,
            LN_2 / odd,
            moment.value,
            moment.error_estimate,
        ),
        scalar("lemma3a_constant", 1.5 * LN_2 - 1.0 - 2.0 * LN_2 / odd),
        scalar("lemma3b_constant", 1.0 / 3.0 - 1.0 / odd - 1.0 / (2.0 * nf)),
        scalar("lemma5a_constant", 27.0 / 50.0 - 0.5 - 2.0 / odd),
        scalar("lemma5b_constant", 5.0 / 12.0 - 12.0 / nf),
    ])
}

// ---------------------------------------------------------------------------
// Theorem 3 and the conjecture

pub const THEOREM3_MIN_N: u32 = 27;

/// `Π_{k=1}^{K} (1 − α/k)`, multiplied in increasing `k`.
pub fn product_one_minus(alpha: f64, k_max: u32) -> f64 {
    (1..=k_max).fold(1.0, |p, k| p * (1.0 - alpha / f64::from(k)))
}

/// `α·Π_{k=1}^{2n−1}(1 − α/k) · ∫₀¹ ((1−t)/s)^{2n−1} s^{α−1} dt` with
/// `s = √(1 + t² − 2tx)`.
pub fn theorem3_remainder(
    alpha: f64,
    n: u32,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    check_alpha(alpha)?;
    check_n(n)?;
    if !(0.5 - RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&x) {
        return domain(format!("x must lie in [1/2, 1], got {x}"));
    }
    let x = x.clamp(0.5, 1.0);
    let m = 2 * n as i32 - 1;
    let gap = 2.0 * (1.0 - x);
    let integral = if gap == 0.0 {
        integrate_with(
            |a: &Abscissa| a.tc.powf(alpha - 1.0),
            &spec.with_exponents(0.0, alpha - 1.0),
        )?
    } else {
        integrate_with(
            |a: &Abscissa| {
                let s = (a.tc * a.tc + a.t * gap).sqrt();
                (a.tc / s).powi(m) * s.powf(alpha - 1.0)
            },
            spec,
        )?
    };
    let scale = alpha * product_one_minus(alpha, m as u32);
    Ok(QuadratureResult {
        value: scale * integral.value,
        error_estimate: scale * integral.error_estimate,
        levels_used: integral.levels_used,
    })
}

fn taylor_margin(
    name: &str,
    alpha: f64,
    n: u32,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<MarginResult> {
    let rem = theorem3_remainder(alpha, n, x, spec)?;
    let x = x.clamp(0.5, 1.0);
    let lower = 1.0 + 0.5 * alpha * (1.0 + alpha);
    let rhs = (2.0 - 2.0 * x).powf(0.5 * alpha) + rem.value;
    let inputs = [("alpha", alpha), ("n", f64::from(n)), ("x", x)];
    let mut result = MarginResult::new(name, &inputs, lower, rhs, rem.error_estimate);
    let at_one = partial_sum_at_one(alpha, 1.0, 2 * n - 1);
    let bound = MarginResult::new(
        "series_lower_bound",
        &[("alpha", alpha), ("n", f64::from(n))],
        at_one,
        lower,
        f64::from(2 * n) * f64::EPSILON * at_one,
    );
    result.sub_margins.push(bound);
    Ok(result)
}

/// `1 + α(1+α)/2 ≥ (2−2x)^{α/2} + α·Π(1 − α/k)·∫…` for `x = −cosθ ∈ [1/2, 1]`.
/// Carries the sub-margin `A_{2n−1}(α,1) − (1 + α(1+α)/2)`.
pub fn theorem3_margin(alpha: f64, n: u32, x: f64, spec: &QuadratureSpec) -> Result<MarginResult> {
    Ok(taylor_margin("theorem3", alpha, n, x, spec)?.flagged(n < THEOREM3_MIN_N))
}

/// The same display restricted to `α ∈ (0, 1/3)`.
pub fn conjecture_margin(
    alpha: f64,
    n: u32,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<MarginResult> {
    if !(alpha > 0.0 && alpha < 1.0 / 3.0) {
        return domain(format!("alpha must lie in (0, 1/3), got {alpha}"));
    }
    taylor_margin("conjecture", alpha, n, x, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn chebyshev_examples() {
        let r = chebyshev_check(|t| t, |t| t, true, &spec()).unwrap();
        assert!((r.margin - 1.0 / 12.0).abs() < 1e-12);
        let r = chebyshev_check(|t| t, |t| 1.0 - t, false, &spec()).unwrap();
        assert!((r.margin - 1.0 / 12.0).abs() < 1e-12);
        assert!((r.lhs - 0.25).abs() < 1e-12 && (r.rhs - 1.0 / 6.0).abs() < 1e-12);
        let r = chebyshev_check(|_| 1.0, |_| 1.0, true, &spec()).unwrap();
        assert!(r.margin.abs() < 1e-14);
    }

    #[test]
    fn chebyshev_rejects_non_monotone_input() {
        let bump = |t: f64| (t - 0.5).powi(2);
        assert!(matches!(
            chebyshev_check(bump, |t| t, true, &spec()),
            Err(Error::MonotonicityViolated { which: "f", .. })
        ));
        assert!(matches!(
            chebyshev_check(|t| t, |t| 1.0 - t, true, &spec()),
            Err(Error::MonotonicityViolated { which: "g", .. })
        ));
    }

    #[test]
    fn tn_roots() {
        let r = solve_tn(0.5, 1).unwrap();
        assert!((r.root - (5f64.sqrt() - 1.0) / 4.0).abs() < 1e-14);
        assert!(r.residual.abs() <= 1e-13);
        let r = solve_tn(0.5, 27).unwrap();
        assert!(r.root > 0.49 && r.root < 0.5);
        let mut prev = 0.0;
        for n in [1, 2, 5, 10, 27, 100] {
            let r = solve_tn(0.5, n).unwrap();
            assert!(r.root > prev && r.residual.abs() <= 1e-13);
            prev = r.root;
        }
        let r = solve_tn(27.0 / 50.0, 27).unwrap();
        assert!(r.residual.abs() <= 1e-13 && r.root < 0.54);
        assert!(solve_tn(1.5, 3).is_err());
    }

    #[test]
    fn lemma3_examples() {
        let r = lemma3_margin(Part::A, 0.5, 27, 0.0, false, &spec()).unwrap();
        assert!(r.margin.abs() <= 2.0 * r.error_estimate + 1e-15);
        let r = lemma3_margin(Part::A, 0.5, 27, FRAC_PI_2, false, &spec()).unwrap();
        assert!(r.margin >= 0.0, "{r:?}");
        let r = lemma3_margin(Part::B, 0.5, 27, PI / 4.0, false, &spec()).unwrap();
        assert!(r.margin >= 0.0, "{r:?}");
        let p = lemma3_margin(Part::B, 0.5, 27, PI / 4.0, true, &spec()).unwrap();
        assert!(p.margin >= r.margin);
        let r = lemma3_margin(Part::A, 0.5, 5, 1.0, false, &spec()).unwrap();
        assert!(r.below_threshold);
    }

    #[test]
    fn lemma4_examples() {
        let r = lemma4_margin(0.0, FRAC_PI_2).unwrap();
        assert!((r.margin - 15.0 / 46.0).abs() < 1e-15);
        let r = lemma4_margin(1.0, 2.0 * PI / 3.0).unwrap();
        assert!((r.margin - 19.0 / 23.0).abs() < 1e-14);
        assert!((lemma4_auxiliary(13.0 / 5.0) - 31.0 / 250.0).abs() < 1e-15);
        assert!(lemma4_margin(0.5, 0.1).is_err());
    }

    #[test]
    fn lemma5_examples() {
        let r = lemma5_margin(
            Part::A,
            Lemma5Variant::Stated2750,
            0.5,
            27,
            FRAC_PI_2,
            &spec(),
        )
        .unwrap();
        assert!(r.margin >= 0.0, "{r:?}");
        let r = lemma5_margin(
            Part::B,
            Lemma5Variant::Stated2750,
            0.5,
            27,
            2.0 * PI / 3.0,
            &spec(),
        )
        .unwrap();
        assert!(r.margin >= 0.0, "{r:?}");
        let r = lemma5_margin(
            Part::A,
            Lemma5Variant::Proof1225,
            0.5,
            51,
            7.0 * PI / 12.0,
            &spec(),
        )
        .unwrap();
        assert!(r.margin >= 0.0 && !r.below_threshold, "{r:?}");
        let r = lemma5_margin(
            Part::A,
            Lemma5Variant::Proof1225,
            0.5,
            27,
            7.0 * PI / 12.0,
            &spec(),
        )
        .unwrap();
        assert!(r.below_threshold);
    }

    #[test]
    fn margins_are_even_in_theta() {
        let a = lemma3_margin(Part::A, 0.3, 30, 0.8, false, &spec()).unwrap();
        let b = lemma3_margin(Part::A, 0.3, 30, -0.8, false, &spec()).unwrap();
        assert_eq!(a.margin, b.margin);
        let a = lemma4_margin(0.3, 1.9).unwrap();
        let b = lemma4_margin(0.3, -1.9).unwrap();
        assert_eq!(a.margin, b.margin);
    }

    #[test]
    fn proof_constants_at_27() {
        let c = proof_constant_checks(27).unwrap();
        assert_eq!(c.len(), 5);
        assert!(c[0].margin > 0.0);
        assert!((c[1].margin - 0.014_52).abs() < 1e-4 && c[1].margin > 0.0);
        assert!(c[2].margin > 0.0);
        assert!((c[3].margin - 0.003_64).abs() < 1e-4);
        assert!((c[4].margin - (5.0 / 12.0 - 12.0 / 27.0)).abs() < 1e-15 && c[4].margin < 0.0);
        let first = (1..200).find(|&n| proof_constant_checks(n).unwrap()[4].margin > 0.0);
        assert_eq!(first, Some(29));
    }

    #[test]
    fn products() {
        assert_eq!(product_one_minus(1.0, 7), 0.0);
        assert!(6.0 * product_one_minus(1.0 / 3.0, 53) < 4.0 / 3.0);
        assert!(6.0 * product_one_minus(1.0 / 3.0, 27) > 4.0 / 3.0);
        assert_eq!(product_one_minus(0.4, 0), 1.0);
    }

    #[test]
    fn theorem3_collapse_at_x_one() {
        for &a in &[1.0 / 3.0, 0.5, 0.9] {
            for n in [2u32, 27, 53] {
                let r = theorem3_margin(a, n, 1.0, &spec()).unwrap();
                let p = product_one_minus(a, 2 * n - 1);
                assert!((r.rhs - p).abs() <= 1e-10 * p, "{a} {n}");
                assert!(r.margin >= 0.5 * a * (1.0 + a));
            }
        }
        let r = theorem3_margin(0.5, 2, 0.75, &spec()).unwrap();
        let sub = &r.sub_margins[0];
        assert!((sub.lhs - 1.4375).abs() < 1e-15 && (sub.rhs - 1.375).abs() < 1e-15);
    }

    #[test]
    fn remainder_decreases_in_n_and_increases_in_x() {
        let ns = [27u32, 40, 53];
        let xs = [0.5, 0.75, 1.0];
        let v = |n, x| theorem3_remainder(0.3, n, x, &spec()).unwrap();
        for &x in &xs {
            for w in ns.windows(2) {
                let (a, b) = (v(w[0], x), v(w[1], x));
                assert!(b.value <= a.value + a.error_estimate + b.error_estimate);
            }
        }
        for &n in &ns {
            for w in xs.windows(2) {
                let (a, b) = (v(n, w[0]), v(n, w[1]));
                assert!(b.value >= a.value - a.error_estimate - b.error_estimate);
            }
        }
    }

    #[test]
    fn power_term_below_one() {
        for i in 1..=20 {
            let a = f64::from(i) / 21.0;
            for j in 1..=20 {
                let x = 0.5 + f64::from(j) / 40.0;
                assert!((2.0 - 2.0 * x).powf(0.5 * a) - 1.0 < 0.0);
            }
        }
    }

    #[test]
    fn conjecture_examples() {
        let r = conjecture_margin(0.2, 27, 1.0, &spec()).unwrap();
        assert!(r.margin >= 0.12 - 1e-12);
        let r = conjecture_margin(0.2, 27, 0.5, &spec()).unwrap();
        assert!(r.margin > 0.0 && r.error_estimate < 1e-8, "{r:?}");
        let small = conjecture_margin(1e-6, 27, 0.7, &spec()).unwrap();
        assert!(small.margin.abs() < 1e-5);
        assert!(conjecture_margin(0.5, 27, 0.7, &spec()).is_err());
    }
}
