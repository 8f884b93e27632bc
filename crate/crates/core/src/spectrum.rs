//! Roots, critical points and the distance functional `d(P)`.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::candidate::{build_candidate, CandidateParams};
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::roots::{find_roots, unit_circle_pair};

/// A root counts as lying on the unit circle when `||z| - 1| < TOL_CIRCLE`.
pub const TOL_CIRCLE: f64 = 1e-6;

/// The computed root closest to `beta` must lie this close to it.
pub const TOL_BETA_MATCH: f64 = 1e-8;

/// Computed roots within this distance of an analytic circle root are
/// replaced by it.
const SNAP_RADIUS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// The `m` unit-circle roots first, ordered by argument, then the rest
    /// ordered by real then imaginary part.
    pub roots: Vec<Complex64>,
    /// `[zeta_1, zeta_2, a, .., a]`.
    pub critical_points: Vec<Complex64>,
    pub m: usize,
    /// Index into `roots` of the root identified with `beta`.
    pub beta_index: usize,
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    #[serde(rename = "dP")]
    pub d_p: f64,
}

impl Spectrum {
    pub fn circle_roots(&self) -> &[Complex64] {
        &self.roots[..self.m]
    }
}

/// `d(P) = max_i min_j |z_i - zeta_j|`.
pub fn d_of(roots: &[Complex64], crits: &[Complex64]) -> f64 {
    roots
        .iter()
        .map(|z| nearest_distance(*z, crits))
        .fold(f64::NEG_INFINITY, f64::max)
}

pub(crate) fn nearest_distance(z: Complex64, crits: &[Complex64]) -> f64 {
    crits
        .iter()
        .map(|w| (z - w).norm())
        .fold(f64::INFINITY, f64::min)
}

pub fn is_on_circle(z: Complex64) -> bool {
    (z.norm() - 1.0).abs() < TOL_CIRCLE
}

/// Spectrum of the candidate polynomial built from `params`.
pub fn spectrum(params: &CandidateParams) -> Result<Spectrum> {
    let p = build_candidate(params)?;
    spectrum_of(params, &p)
}

/// Spectrum of an explicitly supplied polynomial `p` that is meant to be the
/// candidate of `params` up to a constant factor. Critical points always come
/// from `params`.
pub fn spectrum_of(params: &CandidateParams, p: &ComplexPoly) -> Result<Spectrum> {
    params.check_structure()?;
    let mut roots = find_roots(p)?;
    if roots.len() != params.n {
        return Err(Error::Shape(format!(
            "degree-{} candidate produced {} roots",
            params.n,
            roots.len()
        )));
    }

    let mut analytic: Vec<Complex64> = params
        .d
        .iter()
        .filter(|d| d.abs() < 2.0)
        .flat_map(|&d| unit_circle_pair(d))
        .collect();
    if params.n % 2 == 0 {
        analytic.push(Complex64::new(-1.0, 0.0));
    }
    for w in analytic {
        if let Some((k, dist)) = nearest(&roots, w) {
            if dist < SNAP_RADIUS {
                roots[k] = w;
            }
        }
    }

    let beta = Complex64::new(params.beta, 0.0);
    let (k, dist) = nearest(&roots, beta).expect("n >= 5 roots");
    if !(dist < TOL_BETA_MATCH) {
        return Err(Error::BetaNotMatched {
            beta: params.beta,
            distance: dist,
            tolerance: TOL_BETA_MATCH,
        });
    }
    roots[k] = beta;
    roots.sort_by(root_order);
    let m = roots.iter().take_while(|z| is_on_circle(**z)).count();
    let beta_index = roots.iter().position(|z| *z == beta).expect("beta kept");

    let crits = params.critical_points();
    let r = nearest_distance(beta, &crits);
    let big_r = roots
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != beta_index)
        .map(|(_, z)| nearest_distance(*z, &crits))
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(Spectrum {
        roots,
        critical_points: crits,
        m,
        beta_index,
        r,
        big_r,
        d_p: r.max(big_r),
    })
}

fn nearest(roots: &[Complex64], w: Complex64) -> Option<(usize, f64)> {
    roots
        .iter()
        .enumerate()
        .map(|(k, z)| (k, (z - w).norm()))
        .min_by(|x, y| x.1.total_cmp(&y.1))
}

fn root_order(x: &Complex64, y: &Complex64) -> Ordering {
    match (is_on_circle(*x), is_on_circle(*y)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => x.arg().total_cmp(&y.arg()),
        (false, false) => x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)),
    }
}
