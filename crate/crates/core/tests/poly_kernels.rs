mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sendov_core::reference::{ReferenceSet, DEGREES};
use sendov_core::roots::{quadratic_roots, scaled_residual, unit_circle_pair};
use sendov_core::{build_candidate, d_of, find_roots, spectrum, Complex64, ComplexPoly};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn real_poly() -> impl Strategy<Value = Vec<f64>> {
    (2usize..=12).prop_flat_map(|deg| {
        (
            prop::collection::vec(-1.0f64..1.0, deg),
            prop_oneof![-1.0f64..-0.2, 0.2f64..1.0],
        )
            .prop_map(|(mut v, lead)| {
                v.push(lead);
                v
            })
    })
}

fn complex_poly() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..=11).prop_map(|v| {
        let mut out: Vec<Complex64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
        out.push(c(1.0, 0.0));
        out
    })
}

fn brute_d(roots: &[Complex64], crits: &[Complex64]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for z in roots {
        let mut best = f64::INFINITY;
        for w in crits {
            let dist = (z - w).norm();
            if dist < best {
                best = dist;
            }
        }
        if best > worst {
            worst = best;
        }
    }
    worst
}

proptest! {
    #[test]
    fn roots_of_real_polys_are_conjugate_closed(coeffs in real_poly()) {
        let p = ComplexPoly::from_real(&coeffs).unwrap();
        let roots = find_roots(&p).unwrap();
        prop_assert_eq!(roots.len(), coeffs.len() - 1);
        for z in &roots {
            let gap = roots.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(gap < 1e-9, "no conjugate for {} (gap {:e})", z, gap);
        }
    }

    #[test]
    fn returned_roots_have_small_residuals(coeffs in complex_poly()) {
        let p = ComplexPoly::new(coeffs).unwrap();
        for z in find_roots(&p).unwrap() {
            prop_assert!(scaled_residual(&p, z) <= 1e-10);
        }
    }

    #[test]
    fn circle_quadratic_roots_have_unit_modulus(d in -1.999f64..1.999) {
        for z in unit_circle_pair(d) {
            prop_assert!((z.norm() - 1.0).abs() <= 1e-14);
        }
        for z in quadratic_roots(d, 1.0) {
            prop_assert!((z.norm() - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn derivative_undoes_antiderivative(coeffs in complex_poly()) {
        let q = ComplexPoly::new(coeffs).unwrap();
        let back = q.antiderivative().derivative();
        prop_assert_eq!(back.degree(), q.degree());
        for (x, y) in back.coeffs().iter().zip(q.coeffs()) {
            prop_assert!((x - y).norm() <= 1e-14 * y.norm().max(1.0));
        }
    }

    #[test]
    fn d_of_matches_double_loop(
        roots in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..8),
        crits in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..8),
    ) {
        let roots: Vec<Complex64> = roots.into_iter().map(|(a, b)| c(a, b)).collect();
        let crits: Vec<Complex64> = crits.into_iter().map(|(a, b)| c(a, b)).collect();
        prop_assert_eq!(d_of(&roots, &crits), brute_d(&roots, &crits));
    }
}

#[test]
fn d_of_thousand_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut pt = || c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    for _ in 0..1000 {
        let roots: Vec<Complex64> = (0..6).map(|_| pt()).collect();
        let crits: Vec<Complex64> = (0..5).map(|_| pt()).collect();
        assert_eq!(d_of(&roots, &crits), brute_d(&roots, &crits));
    }
}

#[test]
fn eval_matches_power_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let coeffs: Vec<Complex64> = (0..=10)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let z = c(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        let p = ComplexPoly::new(coeffs.clone()).unwrap();
        let mut sum = c(0.0, 0.0);
        let mut mag = 0.0;
        for (k, a) in coeffs.iter().enumerate() {
            let term = a * z.powi(k as i32);
            sum += term;
            mag += term.norm();
        }
        assert!((p.eval(z) - sum).norm() <= 1e-12 * mag);
    }
}

#[test]
fn candidate_derivative_matches_convolution() {
    for n in DEGREES {
        let params = common::solved(n);
        let p = build_candidate(&params).unwrap();
        let expect = common::expand_by_convolution(params.a, n - 3, params.b, params.c);
        let got = p.derivative();
        let scale = expect.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert_eq!(got.degree(), n - 1);
        for (g, e) in got.coeffs().iter().zip(&expect) {
            assert!((g - e).norm() <= 1e-12 * scale, "n = {n}");
        }
    }
}

#[test]
fn published_n9_derivative_factors() {
    let row = *ReferenceSet::bundled().row(9).unwrap();
    let expect = common::expand_by_convolution(-0.2157115753, 6, -0.8021671918, 0.9280147829);
    let params = row.to_params().unwrap();
    for (g, e) in params.derivative_poly().coeffs().iter().zip(&expect) {
        assert!((g - e).norm() <= 1e-14);
        assert!(g.im == 0.0);
    }
}

#[test]
fn n9_remainders_vanish() {
    let params = common::solved(9);
    let p = build_candidate(&params).unwrap();
    for &d in &params.d {
        let (_, r1, r0) = p.divmod_quadratic(d).unwrap();
        assert!(r1.abs() < 1e-9 && r0.abs() < 1e-9, "d = {d}: {r1:e} {r0:e}");
    }
}

#[test]
fn published_n8_polynomial() {
    let row = *ReferenceSet::bundled().row(8).unwrap();
    let params = row.to_params().unwrap();
    let p = build_candidate(&params).unwrap();
    assert!(p.eval(c(params.beta, 0.0)).norm() < 1e-14);
    assert!(p.eval(c(-1.0, 0.0)).norm() < 1e-9);

    let roots = find_roots(&p).unwrap();
    let max = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!((max - 1.0).abs() < 1e-8);
    assert_eq!(roots.iter().filter(|z| (z.norm() - 1.0).abs() < 1e-6).count(), 5);
}

#[test]
fn n8_spectrum_geometry() {
    let params = common::solved(8);
    let s = spectrum(&params).unwrap();
    assert_eq!(s.m, 5);
    assert!((s.r - 0.9326267303).abs() < 1e-9);
    assert!((s.r - (params.beta - params.a)).abs() < 1e-12);
    for z in &s.critical_points[..2] {
        assert!(((z - params.beta).norm() - s.r).abs() < 1e-9);
    }
    assert!(s.big_r < s.r);
    assert_eq!(s.d_p, s.r);
    assert!(s.d_p > 0.9 && s.d_p < 0.97);
}

#[test]
fn spectra_pair_conjugates() {
    for n in DEGREES {
        let s = spectrum(&common::solved(n)).unwrap();
        assert_eq!(s.d_p, s.r.max(s.big_r));
        for z in &s.roots {
            let gap = s.roots.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
            assert!(gap < 1e-9, "n = {n}");
        }
    }
}

#[test]
fn expected_polynomial_distance() {
    let mut coeffs = vec![0.0; 9];
    coeffs[0] = -1.0;
    coeffs[8] = 1.0;
    let roots = find_roots(&ComplexPoly::from_real(&coeffs).unwrap()).unwrap();
    for z in &roots {
        assert!((z.powi(8) - 1.0).norm() < 1e-12);
    }
    let crits = vec![c(0.0, 0.0); 7];
    assert!((d_of(&roots, &crits) - 1.0).abs() < 1e-15);
}
