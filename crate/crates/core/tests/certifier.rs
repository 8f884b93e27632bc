mod common;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sendov_core::certifier::{certify_g, certify_h, certify_poly, certify_with};
use sendov_core::constructor::{newton_solve, NewtonOptions};
use sendov_core::linalg::{jacobi_svd, Matrix};
use sendov_core::reference::{round_all, ReferenceSet, DEGREES};
use sendov_core::variational::system_for;
use sendov_core::{build_candidate, certify_all, spectrum, CandidateParams, Complex64, PropertyId, Tolerances};

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let data: Vec<Vec<f64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    Matrix::from_rows(&data).unwrap()
}

/// Singular values from the eigenvalues of `A^T A`, largest first.
fn gram_singular_values(a: &Matrix) -> Vec<f64> {
    let m = DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)]);
    let eig = SymmetricEigen::new(m.transpose() * &m);
    let mut s: Vec<f64> = eig.eigenvalues.iter().map(|v| v.max(0.0).sqrt()).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

#[test]
fn all_published_candidates_pass() {
    for n in DEGREES {
        let report = certify_all(&common::solved(n)).unwrap();
        assert!(report.overall, "n = {n} failed {:?}", report.failures());
        assert_eq!(report.properties.len(), 8);
        for p in &report.properties {
            assert!(p.margin.iter().all(|m| *m > 0.0));
        }
    }
}

#[test]
fn inflated_c_breaks_equidistance() {
    let mut params = common::solved(8);
    params.c += 1e-3;
    let p = build_candidate(&params).unwrap();
    // beta is still a root by construction, so the pipeline runs through
    let report = certify_poly(&params, &p, &Tolerances::default()).unwrap();
    assert!(!report.get(PropertyId::D).pass);
    assert!(!report.overall);
}

#[test]
fn beta_outside_interval_fails_c_only_there() {
    let mut params = common::solved(8);
    params.beta = 0.5;
    let report = certify_all(&params).unwrap();
    let c = report.get(PropertyId::C);
    assert!(!c.pass);
    assert_eq!(c.measured, vec![0.5, 0.5]);
    assert!(c.margin[0] < 0.0 && c.margin[1] > 0.0);
    for id in [PropertyId::A, PropertyId::B, PropertyId::D, PropertyId::E, PropertyId::F, PropertyId::G, PropertyId::H] {
        let check = report.get(id);
        assert!(!check.measured.is_empty() && check.measured.iter().all(|v| v.is_finite()), "{id}");
    }
}

#[test]
fn expected_polynomial_fails_c() {
    // z^8 - 1 has derivative 8 z^7: a = 0, b = c = 0 and beta = 1 is a root
    let params = CandidateParams {
        n: 8,
        beta: 1.0,
        a: 0.0,
        b: 0.0,
        c: 0.0,
        d: vec![-std::f64::consts::SQRT_2, std::f64::consts::SQRT_2],
    };
    let mut coeffs = vec![0.0; 9];
    coeffs[0] = -1.0;
    coeffs[8] = 1.0;
    let p = sendov_core::ComplexPoly::from_real(&coeffs).unwrap();
    let report = certify_poly(&params, &p, &Tolerances::default()).unwrap();
    assert!(!report.get(PropertyId::C).pass);
    assert_eq!(report.spectrum.d_p, 1.0);
}

#[test]
fn degree_seven_interpolation_is_recorded() {
    let set = ReferenceSet::bundled();
    let s8 = set.row(8).unwrap().seed(3).unwrap();
    let s9 = set.row(9).unwrap().seed(3).unwrap();
    // extrapolate the scalars one step below n = 8 and borrow the odd-degree d values
    let mut x: Vec<f64> = (0..4).map(|i| 2.0 * s8[i] - s9[i]).collect();
    x.extend_from_slice(&s9[4..]);
    let out = newton_solve(7, &round_all(&x, 3), &NewtonOptions::default());
    match out {
        Ok(o) if o.converged => match CandidateParams::from_vector(7, &o.x).and_then(|p| certify_all(&p)) {
            Ok(r) => println!("n = 7: converged, overall {} failures {:?}", r.overall, r.failures()),
            Err(e) => println!("n = 7: converged to an unusable point: {e}"),
        },
        Ok(o) => println!("n = 7: no convergence ({:?})", o.diagnostic),
        Err(e) => println!("n = 7: solver error {e}"),
    }
}

#[test]
fn even_degrees_have_one_dimensional_null_space() {
    for n in DEGREES.into_iter().filter(|n| n % 2 == 0) {
        let params = common::solved(n);
        let sys = system_for(&params, &spectrum(&params).unwrap()).unwrap();
        let tol = Tolerances::default();
        assert_eq!(sys.rows(), 8);
        assert!(certify_h(&sys, &tol).pass);
        assert_eq!(certify_g(&sys, &tol).null_dimension, 1);
    }
}

#[test]
fn reports_are_deterministic() {
    let params = common::solved(9);
    let a = sendov_core::json::to_string_pretty(&certify_all(&params).unwrap()).unwrap();
    let b = sendov_core::json::to_string_pretty(&certify_all(&params).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn reports_are_scale_invariant() {
    let tol = Tolerances::default();
    for n in [8, 9] {
        let params = common::solved(n);
        let p = build_candidate(&params).unwrap();
        let base = certify_poly(&params, &p, &tol).unwrap();
        let doubled = certify_poly(&params, &p.scaled(Complex64::new(32.0, 0.0)), &tol).unwrap();
        assert_eq!(base, doubled);

        let other = certify_poly(&params, &p.scaled(Complex64::new(-3.7, 0.0)), &tol).unwrap();
        assert_eq!(base.overall, other.overall);
        for (x, y) in base.properties.iter().zip(&other.properties) {
            assert_eq!(x.pass, y.pass);
            for (u, v) in x.measured.iter().zip(&y.measured) {
                assert!((u - v).abs() < 1e-12, "n = {n}, {}: {u} vs {v}", x.id);
            }
        }
        for (u, v) in base.spectrum.roots.iter().zip(&other.spectrum.roots) {
            assert!((u - v).norm() < 1e-12);
        }
    }
}

#[test]
fn duplicate_row_never_lowers_sigma7() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let rows = rng.random_range(7..=9);
        let a = random_matrix(&mut rng, rows, 7);
        let pick = rng.random_range(0..rows);
        let b = a.with_row(&a.row(pick).to_vec()).unwrap();
        let (sa, sb) = (jacobi_svd(&a).singular_values[6], jacobi_svd(&b).singular_values[6]);
        assert!(sb >= sa - 1e-12);
        assert!((sb - gram_singular_values(&b)[6]).abs() < 1e-10);
    }
}

#[test]
fn svd_matches_gram_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..100 {
        let rows = if k % 2 == 0 { 8 } else { 9 };
        let a = random_matrix(&mut rng, rows, 7);
        let s = jacobi_svd(&a).singular_values;
        for (x, y) in s.iter().zip(gram_singular_values(&a)) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn two_dimensional_certificate_matches_fine_grid() {
    let params = common::solved(9);
    let sys = system_for(&params, &spectrum(&params).unwrap()).unwrap();
    let cert = certify_g(&sys, &Tolerances::default());
    assert_eq!(cert.null_dimension, 2);
    assert!(cert.pass && cert.c.iter().all(|c| *c > 0.3));

    // independent null space: eigenvectors of E E^T with vanishing eigenvalue
    let e = DMatrix::from_fn(sys.rows(), 7, |i, j| sys.e[(i, j)]);
    let eig = SymmetricEigen::new(&e * e.transpose());
    let null: Vec<Vec<f64>> = (0..sys.rows())
        .filter(|&k| eig.eigenvalues[k].abs() < 1e-14)
        .map(|k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect();
    assert_eq!(null.len(), 2);
    let dot = |u: &[f64]| u.iter().zip(&sys.f).map(|(x, y)| x * y).sum::<f64>();
    let (f1, f2) = (dot(&null[0]), dot(&null[1]));
    let mut best = f64::NEG_INFINITY;
    let steps = (std::f64::consts::PI / 1e-4).ceil() as usize;
    for k in 0..steps {
        let (s, c) = (k as f64 * 1e-4).sin_cos();
        let cf = c * f1 + s * f2;
        if cf.abs() < 1e-12 {
            continue;
        }
        let min = null[0]
            .iter()
            .zip(&null[1])
            .map(|(x, y)| (c * x + s * y) / cf)
            .fold(f64::INFINITY, f64::min);
        best = best.max(min);
    }
    assert!(cert.min_c >= best - 1e-9, "{} < {}", cert.min_c, best);
    assert!(cert.min_c - best < 1e-3);
}

#[test]
fn tighter_tolerances_are_plumbed() {
    let tol = Tolerances {
        min_sigma7: 10.0,
        ..Tolerances::default()
    };
    let report = certify_with(&common::solved(8), &tol).unwrap();
    assert_eq!(report.failures(), vec![PropertyId::H]);
    assert_eq!(report.tolerances.min_sigma7, 10.0);
}
