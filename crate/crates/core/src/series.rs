//! Maclaurin coefficients of `(1 + xz)^α / (1 − z)^β` on the unit circle.
//!
//! `A_m(α, β, x)` is the coefficient of `z^m`; it equals
//! `Σ_{k=0}^{m} C(α, k) · (β)_{m−k}/(m−k)! · x^k`. For `β = 1` the weight
//! is identically one and `A_m` is a partial sum of the binomial series of
//! `(1 + x)^α`. All entry points take the odd index `m = 2n − 1` directly.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::sum::{CompensatedComplexSum, CompensatedSum};

pub type ComplexValue = Complex64;

/// Powers of `e^{iθ}` are reset from `cos`/`sin` at this stride.
const RESYNC_STRIDE: u32 = 64;

/// One coefficient evaluation: `A_m(α, β, e^{iθ})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesQuery {
    pub alpha: f64,
    pub beta: f64,
    pub m: u32,
    pub theta: f64,
}

impl SeriesQuery {
    pub fn new(alpha: f64, beta: f64, m: u32, theta: f64) -> Result<Self> {
        let q = Self {
            alpha,
            beta,
            m,
            theta,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return domain(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return domain(format!("beta must be positive, got {}", self.beta));
        }
        if self.m == 0 || self.m.is_multiple_of(2) {
            return domain(format!("index m must be odd and >= 1, got {}", self.m));
        }
        if !(self.theta.is_finite() && self.theta.abs() <= PI) {
            return domain(format!("theta must lie in [-pi, pi], got {}", self.theta));
        }
        Ok(())
    }
}

/// Coefficient of `x^k` in the binomial series of `(1 + x)^α`.
pub fn binom_coeff(alpha: f64, k: u32) -> f64 {
    let mut c = 1.0;
    for j in 1..=k {
        c *= (alpha - f64::from(j) + 1.0) / f64::from(j);
    }
    c
}

/// Rising factorial `β(β+1)…(β+j−1)`.
pub fn pochhammer(beta: f64, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (beta + f64::from(i)))
}

/// Weights `w_k = C(α,k)·(β)_{m−k}/(m−k)!` for `k = 0..=m`.
fn weights(alpha: f64, beta: f64, m: u32) -> Vec<f64> {
    let len = m as usize + 1;
    // (β)_j / j!, by recurrence; identically 1 when β = 1.
    let mut tail = vec![1.0; len];
    if beta != 1.0 {
        for j in 1..len {
            tail[j] = tail[j - 1] * (beta + j as f64 - 1.0) / j as f64;
        }
    }
    let mut out = Vec::with_capacity(len);
    let mut c = 1.0;
    for k in 0..len {
        if k > 0 {
            c *= (alpha - k as f64 + 1.0) / k as f64;
        }
        out.push(c * tail[len - 1 - k]);
    }
    out
}

/// Value of `A_m` together with `Σ |w_k|`, the magnitude used for
/// round-off bounds.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: ComplexValue,
    pub term_magnitude: f64,
}

pub fn partial_sum_detailed(q: &SeriesQuery) -> SeriesValue {
    let w = weights(q.alpha, q.beta, q.m);
    let term_magnitude = w
        .iter()
        .map(|c| c.abs())
        .collect::<CompensatedSum>()
        .value();
    if q.theta == 0.0 {
        let re = w.iter().copied().collect::<CompensatedSum>().value();
        return SeriesValue {
            value: Complex64::new(re, 0.0),
            term_magnitude,
        };
    }
    let step = Complex64::new(q.theta.cos(), q.theta.sin());
    let mut power = Complex64::new(1.0, 0.0);
    let mut acc = CompensatedComplexSum::new();
    for (k, &wk) in w.iter().enumerate() {
        let k = k as u32;
        if k > 0 {
            if k.is_multiple_of(RESYNC_STRIDE) {
                let phase = f64::from(k) * q.theta;
                power = Complex64::new(phase.cos(), phase.sin());
            } else {
                power *= step;
            }
        }
        acc.add(power * wk);
    }
    SeriesValue {
        value: acc.value(),
        term_magnitude,
    }
}

/// `A_m(α, β, e^{iθ})`, accumulated in increasing `k` with compensation.
pub fn partial_sum(q: &SeriesQuery) -> ComplexValue {
    partial_sum_detailed(q).value
}

/// Same sum evaluated by Horner's rule from the top coefficient down.
/// Independent of the forward path; used to cross-check it.
pub fn partial_sum_horner(q: &SeriesQuery) -> ComplexValue {
    let w = weights(q.alpha, q.beta, q.m);
    let x = Complex64::new(q.theta.cos(), q.theta.sin());
    w.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// `A_m(α, β, 1)` in real arithmetic.
pub fn partial_sum_at_one(alpha: f64, beta: f64, m: u32) -> f64 {
    weights(alpha, beta, m)
        .into_iter()
        .collect::<CompensatedSum>()
        .value()
}

/// `A_m(α,β,1) − |A_m(α,β,e^{iθ})|`; nonnegative when the coefficient
/// bound holds at this point.
pub fn brannan_margin(q: &SeriesQuery) -> f64 {
    let at_one = partial_sum_at_one(q.alpha, q.beta, q.m);
    if q.theta == 0.0 {
        return at_one - at_one.abs();
    }
    at_one - partial_sum(q).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(alpha: f64, beta: f64, m: u32, theta: f64) -> SeriesQuery {
        SeriesQuery::new(alpha, beta, m, theta).unwrap()
    }

    #[test]
    fn binom_coeff_examples() {
        assert_eq!(binom_coeff(0.5, 0), 1.0);
        assert_eq!(binom_coeff(0.5, 2), 0.5 * (0.5 - 1.0) / 2.0);
        assert_eq!(binom_coeff(0.5, 2), -0.125);
        assert_eq!(binom_coeff(1.0, 3), 0.0);
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(2.0, 1), 2.0);
        assert_eq!(pochhammer(1.0, 5), 120.0);
        assert_eq!(pochhammer(0.5, 0), 1.0);
    }

    #[test]
    fn partial_sum_examples() {
        let v = partial_sum(&q(0.5, 1.0, 3, 0.0));
        assert!((v.re - 1.4375).abs() < 1e-15 && v.im == 0.0);

        let v = partial_sum(&q(0.5, 1.0, 1, PI));
        assert!((v.re - 0.5).abs() < 1e-15 && v.im.abs() < 1e-15);

        let v = partial_sum(&q(0.5, 2.0, 1, 0.0));
        assert!((v.re - 2.5).abs() < 1e-15 && v.im == 0.0);
    }

    #[test]
    fn margin_examples() {
        assert_eq!(brannan_margin(&q(0.7, 1.0, 5, 0.0)), 0.0);
        assert!((brannan_margin(&q(0.5, 1.0, 1, PI)) - 1.0).abs() < 1e-15);
        assert!((brannan_margin(&q(0.5, 1.0, 3, PI)) - 1.125).abs() < 1e-15);
    }

    #[test]
    fn general_beta_matches_cauchy_product_by_hand() {
        // (1+xz)^α (1-z)^{-β}, m = 3: Σ C(α,k) (β)_{3-k}/(3-k)! x^k.
        let (a, b) = (0.3, 2.5);
        let th: f64 = 0.7;
        let x = Complex64::new(th.cos(), th.sin());
        let expected = (0..=3u32)
            .map(|k| {
                let j = 3 - k;
                let fact = (1..=j).product::<u32>() as f64;
                x.powu(k) * binom_coeff(a, k) * pochhammer(b, j) / fact
            })
            .sum::<Complex64>();
        let got = partial_sum(&q(a, b, 3, th));
        assert!((got - expected).norm() < 1e-14);
    }

    #[test]
    fn alternating_signs_from_k_two() {
        for &a in &[0.1, 0.5, 0.9] {
            for k in 2..200 {
                let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
                assert!(binom_coeff(a, k) * sign > 0.0, "alpha {a} k {k}");
            }
        }
    }

    #[test]
    fn rejects_invalid_queries() {
        assert!(SeriesQuery::new(0.5, 1.0, 2, 0.0).is_err());
        assert!(SeriesQuery::new(0.5, 1.0, 0, 0.0).is_err());
        assert!(SeriesQuery::new(0.0, 1.0, 3, 0.0).is_err());
        assert!(SeriesQuery::new(0.5, -1.0, 3, 0.0).is_err());
        assert!(SeriesQuery::new(0.5, 1.0, 3, 4.0).is_err());
    }

    #[test]
    fn recurrence_powers_track_direct_trigonometry() {
        // Oracle: every power from its own cos/sin call.
        let (a, m, th) = (0.5, 100_001u32, 2.0 * PI / 3.0 + 1e-3);
        let mut c = 1.0;
        let mut direct = CompensatedComplexSum::new();
        for k in 0..=m {
            if k > 0 {
                c *= (a - f64::from(k) + 1.0) / f64::from(k);
            }
            let ph = f64::from(k) * th;
            direct.add(Complex64::new(ph.cos(), ph.sin()) * c);
        }
        let got = partial_sum(&q(a, 1.0, m, th));
        assert!(
            (got - direct.value()).norm() < 1e-13,
            "{got} vs {}",
            direct.value()
        );
    }
}
