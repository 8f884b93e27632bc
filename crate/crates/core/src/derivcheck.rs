//! Finite-difference audit of the analytic root derivatives.
//!
//! Each perturbed polynomial is rebuilt from its critical points, all of its
//! roots are re-solved, and the one nearest the unperturbed root is taken as
//! its continuation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::candidate::{integrate_from_critical_points, CandidateParams};
use crate::error::Result;
use crate::poly::ComplexPoly;
use crate::roots::find_roots;
use crate::spectrum::spectrum;
use crate::variational::{integral_over_factor, root_sensitivity, second_derivatives, Factor};

pub const FIRST_ORDER_STEP: f64 = 1e-6;
pub const SECOND_ORDER_STEP: f64 = 1e-4;
pub const FIRST_ORDER_TOL: f64 = 1e-6;
pub const SECOND_ORDER_TOL: f64 = 1e-4;
pub const IDENTITY_TOL: f64 = 1e-10;
/// Half-width of the split used to compare two copies of `a`.
pub const SPLIT_STEP: f64 = 1e-6;
pub const SPLIT_TOL: f64 = 1e-4;

/// Test hook: corrupts one analytic value before comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fault {
    FlipBetaSign,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindResult {
    pub kind: String,
    /// Worst relative error (absolute for the identity check) over roots.
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivReport {
    pub n: usize,
    pub roots_checked: usize,
    pub kinds: Vec<KindResult>,
    pub pass: bool,
}

/// Root of the polynomial `int_base^z prod (w - crit)` nearest `target`.
pub fn tracked_root(base: f64, crits: &[Complex64], target: Complex64) -> Result<Complex64> {
    let q = integrate_from_critical_points(Complex64::new(base, 0.0), crits);
    let roots = find_roots(&q)?;
    Ok(roots
        .into_iter()
        .min_by(|x, y| (x - target).norm().total_cmp(&(y - target).norm()))
        .expect("degree >= 1"))
}

fn rel(analytic: Complex64, reference: Complex64) -> f64 {
    (analytic - reference).norm() / reference.norm().max(f64::MIN_POSITIVE)
}

/// Central difference of the tracked root under `crits[idx] += h`.
fn fd_zeta(beta: f64, crits: &[Complex64], idx: usize, z: Complex64, h: f64) -> Result<Complex64> {
    let mut c = crits.to_vec();
    c[idx] = crits[idx] + h;
    let zp = tracked_root(beta, &c, z)?;
    c[idx] = crits[idx] - h;
    let zm = tracked_root(beta, &c, z)?;
    Ok((zp - zm) / (2.0 * h))
}

/// Runs every comparison on all unit-circle roots of `params`.
pub fn derivative_check(params: &CandidateParams, fault: Option<Fault>) -> Result<DerivReport> {
    let sp = spectrum(params)?;
    let crits = sp.critical_points.clone();
    let beta = params.beta;
    let a = Complex64::new(params.a, 0.0);
    let pprime = params.derivative_poly();

    let names = [
        ("dz_dbeta", FIRST_ORDER_TOL),
        ("dz_dzeta1", FIRST_ORDER_TOL),
        ("dz_dzeta2", FIRST_ORDER_TOL),
        ("dz_dzeta3", FIRST_ORDER_TOL),
        ("d2z_pure", SECOND_ORDER_TOL),
        ("d2z_mixed", SECOND_ORDER_TOL),
        ("pure_minus_mixed", IDENTITY_TOL),
        ("collapsed_copies", SPLIT_TOL),
    ];
    let mut worst = [0.0_f64; 8];

    for &z in sp.circle_roots() {
        let mut s = root_sensitivity(params, z)?;
        if fault == Some(Fault::FlipBetaSign) {
            s.dz_dbeta = -s.dz_dbeta;
        }

        let h = FIRST_ORDER_STEP;
        let zp = tracked_root(beta + h, &crits, z)?;
        let zm = tracked_root(beta - h, &crits, z)?;
        worst[0] = worst[0].max(rel(s.dz_dbeta, (zp - zm) / (2.0 * h)));
        worst[1] = worst[1].max(rel(s.dz_dzeta1, fd_zeta(beta, &crits, 0, z, h)?));
        worst[2] = worst[2].max(rel(s.dz_dzeta2, fd_zeta(beta, &crits, 1, z, h)?));
        worst[3] = worst[3].max(rel(s.dz_dzeta3, fd_zeta(beta, &crits, 2, z, h)?));

        let second = second_derivatives(params, z)?;
        let h = SECOND_ORDER_STEP;
        let mut c = crits.clone();
        c[2] = a + h;
        let zp = tracked_root(beta, &c, z)?;
        c[2] = a - h;
        let zm = tracked_root(beta, &c, z)?;
        worst[4] = worst[4].max(rel(second.pure, (zp - 2.0 * z + zm) / (h * h)));

        let mut corner = |s3: f64, s4: f64| -> Result<Complex64> {
            c[2] = a + s3;
            c[3] = a + s4;
            tracked_root(beta, &c, z)
        };
        let mixed_fd = (corner(h, h)? - corner(h, -h)? - corner(-h, h)? + corner(-h, -h)?) / (4.0 * h * h);
        worst[5] = worst[5].max(rel(second.mixed, mixed_fd));

        // expand P' / (w - a)^2 from the remaining critical points, no division
        let beta_c = Complex64::new(beta, 0.0);
        let reduced = ComplexPoly::from_roots(&crits[..2].iter().chain(&crits[4..]).copied().collect::<Vec<_>>());
        let expect = reduced.integrate(beta_c, z) / pprime.eval(z);
        worst[6] = worst[6].max((second.difference - expect).norm());

        // split two copies of a apart and compare their first derivatives
        let mut split = crits.clone();
        split[2] = a + SPLIT_STEP;
        split[3] = a - SPLIT_STEP;
        let split_pprime = ComplexPoly::from_roots(&split);
        let dp = split_pprime.eval(z);
        let d3 = integral_over_factor(&split_pprime, beta_c, z, Factor::Linear(split[2]), params.a)? / dp;
        let d4 = integral_over_factor(&split_pprime, beta_c, z, Factor::Linear(split[3]), params.a)? / dp;
        worst[7] = worst[7].max(rel(d3, s.dz_dzeta3)).max(rel(d4, s.dz_dzeta3));
    }

    let kinds: Vec<KindResult> = names
        .iter()
        .zip(worst)
        .map(|(&(kind, tolerance), w)| KindResult {
            kind: kind.to_string(),
            worst: w,
            tolerance,
            pass: w <= tolerance,
        })
        .collect();
    let pass = kinds.iter().all(|k| k.pass);
    Ok(DerivReport {
        n: params.n,
        roots_checked: sp.m,
        kinds,
        pass,
    })
}
