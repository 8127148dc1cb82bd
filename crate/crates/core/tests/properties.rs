use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use brannan::integral_rep::{kernel_bc, phi_series, KernelPoint};
use brannan::quadrature::{integrate, QuadratureSpec};
use brannan::scanner::{scan, scan_with, CheckId, GridSpec, Range, ScanOptions};
use brannan::series::{brannan_margin, partial_sum, partial_sum_horner, SeriesQuery};

fn odd_m() -> impl Strategy<Value = u32> {
    (0u32..200).prop_map(|k| 2 * k + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn partial_sum_is_conjugate_symmetric(alpha in 0.01f64..3.0, beta in 0.1f64..3.0, m in odd_m(), theta in -PI..PI) {
        let a = partial_sum(&SeriesQuery::new(alpha, beta, m, theta).unwrap());
        let b = partial_sum(&SeriesQuery::new(alpha, beta, m, -theta).unwrap());
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn horner_agrees_with_recurrence(alpha in 0.01f64..0.99, m in odd_m(), theta in -PI..PI) {
        let q = SeriesQuery::new(alpha, 1.0, m, theta).unwrap();
        let a = partial_sum(&q);
        let b = partial_sum_horner(&q);
        prop_assert!((a - b).norm() <= 1e-11 * a.norm().max(1.0));
    }

    #[test]
    fn margin_is_even(alpha in 0.01f64..0.99, m in odd_m(), theta in 0.0..PI) {
        let a = brannan_margin(&SeriesQuery::new(alpha, 1.0, m, theta).unwrap());
        let b = brannan_margin(&SeriesQuery::new(alpha, 1.0, m, -theta).unwrap());
        prop_assert!((a - b).abs() <= 1e-13);
    }

    #[test]
    fn kernel_matches_geometric_sum(t in 0.0f64..0.999, theta in -PI..PI, n in 1u32..80) {
        let (b, c) = kernel_bc(&KernelPoint { t, theta, n }).unwrap();
        let direct: Complex64 = (1..=2 * n - 1)
            .map(|k| (-t).powi(k as i32 - 1) * Complex64::from_polar(1.0, f64::from(k) * theta))
            .sum();
        prop_assert!((Complex64::new(b, c) - direct).norm() <= 1e-10 * direct.norm().max(1.0));
    }

    #[test]
    fn quadrature_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, p in 0.0f64..4.0) {
        let spec = QuadratureSpec::default();
        let f = integrate(|t| t.powf(p), &spec).unwrap().value;
        let g = integrate(|t| (1.0 - t).exp(), &spec).unwrap().value;
        let h = integrate(|t| a * t.powf(p) + b * (1.0 - t).exp(), &spec).unwrap().value;
        prop_assert!((h - (a * f + b * g)).abs() <= 1e-9 * (1.0 + h.abs()));
    }

    #[test]
    fn phi_series_scales_the_partial_sum(alpha in 0.05f64..0.95, m in odd_m(), theta in -PI..PI) {
        let p = phi_series(alpha, m, theta).unwrap().value;
        let a = partial_sum(&SeriesQuery::new(alpha, 1.0, m, theta).unwrap());
        let r = PI / (alpha * (PI * alpha).sin());
        prop_assert!((p - a * r).norm() <= 1e-13 * p.norm().max(1.0));
    }
}

#[test]
fn cell_count_matches_grid() {
    let g = GridSpec::new(
        CheckId::Brannan,
        Range::new(0.1, 0.9, 0.1),
        Range::new(0.0, PI, PI / 10.0),
        vec![1, 4, 9],
    );
    let r = scan(&g, &QuadratureSpec::default()).unwrap();
    assert_eq!(r.cells_evaluated, 3 * 9 * 11);
    assert_eq!(r.cells_evaluated, g.cell_count());
}

#[test]
fn permuting_n_list_keeps_argmin() {
    let spec = QuadratureSpec::default();
    let mk = |n: Vec<u32>| {
        GridSpec::new(
            CheckId::Brannan,
            Range::new(0.1, 0.9, 0.2),
            Range::new(0.0, PI, PI / 32.0),
            n,
        )
    };
    let a = scan(&mk(vec![3, 11, 7]), &spec).unwrap();
    let b = scan(&mk(vec![11, 7, 3]), &spec).unwrap();
    assert_eq!(
        a.min_margin.unwrap().to_bits(),
        b.min_margin.unwrap().to_bits()
    );
    assert_eq!(a.argmin, b.argmin);
}

#[test]
fn thread_count_does_not_change_reports() {
    let spec = QuadratureSpec::default();
    let g = GridSpec::new(
        CheckId::Lemma3a,
        Range::new(0.2, 0.8, 0.3),
        Range::new(0.0, PI / 2.0, PI / 8.0),
        vec![27, 30],
    );
    let one = scan_with(
        &g,
        &spec,
        ScanOptions {
            threads: Some(1),
            timing: false,
        },
    )
    .unwrap();
    let four = scan_with(
        &g,
        &spec,
        ScanOptions {
            threads: Some(4),
            timing: false,
        },
    )
    .unwrap();
    assert_eq!(one, four);
    assert!(one.violations.is_empty(), "{:?}", one.violations);
}

#[test]
fn near_violations_contain_violations() {
    let mut g = GridSpec::new(
        CheckId::Brannan,
        Range::new(0.1, 0.9, 0.4),
        Range::new(0.0, PI, PI / 4.0),
        vec![2, 3],
    );
    g.near_violation_threshold = 1e-3;
    let r = scan(&g, &QuadratureSpec::default()).unwrap();
    for v in &r.violations {
        assert!(r.near_violations.contains(v));
    }
    // θ = 0 cells have margin exactly 0.
    assert!(r.near_violations.len() >= 6);
}
