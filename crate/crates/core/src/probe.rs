//! Randomized falsification of local extremality.
//!
//! A perturbation moves `beta` along the real axis and every critical point
//! freely; the perturbed polynomial is
//! `Q(z) = int_{beta + dbeta}^z prod_j (w - zeta_j - dzeta_j) dw`. It is an
//! *improvement* when all roots of `Q` stay in the closed unit disk while
//! every critical point moves strictly outside the circle of radius `r`
//! about `beta + dbeta`. Finding none is evidence, not proof.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assignment::min_cost_assignment;
use crate::candidate::{integrate_from_critical_points, CandidateParams};
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::roots::find_roots;
use crate::spectrum::{d_of, nearest_distance, spectrum, Spectrum};

/// Slack for "closed unit disk".
pub const DISK_SLACK: f64 = 1e-12;
/// Slack for "strictly outside the circle of radius r".
pub const OUTSIDE_SLACK: f64 = 1e-12;
/// Root-solver noise allowed when comparing the largest admissible `d(Q)`
/// with `d(P)`.
pub const DQ_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub dbeta: f64,
    /// One entry per critical point, in spectrum order.
    pub dzeta: Vec<Complex64>,
    pub norm: f64,
}

impl Perturbation {
    pub fn new(dbeta: f64, dzeta: Vec<Complex64>) -> Result<Self> {
        if !dbeta.is_finite() || dzeta.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("perturbation"));
        }
        let norm = (dbeta * dbeta + dzeta.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
        Ok(Self { dbeta, dzeta, norm })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            dbeta: 0.0,
            dzeta: vec![Complex64::new(0.0, 0.0); n - 1],
            norm: 0.0,
        }
    }

    /// `(1 - beta, -zeta_1, .., -zeta_{n-1})`: moves every critical point to
    /// the origin and the root to 1, giving `(z^n - 1) / n`.
    pub fn witness(params: &CandidateParams) -> Self {
        let dzeta = params.critical_points().iter().map(|z| -z).collect();
        Self::new(1.0 - params.beta, dzeta).expect("finite candidate")
    }

    /// Same direction, lengths multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        Self::new(self.dbeta * t, self.dzeta.iter().map(|z| z * t).collect()).expect("finite")
    }
}

/// Roots and critical points of a perturbed polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbedSpectrum {
    /// `roots[i]` is paired with the `i`-th root of the unperturbed spectrum.
    pub roots: Vec<Complex64>,
    pub critical_points: Vec<Complex64>,
    pub base: f64,
    pub max_modulus: f64,
    #[serde(rename = "dQ")]
    pub d_q: f64,
}

/// Builds `Q` and pairs its roots with those of `P` by minimal total
/// distance.
pub fn apply_perturbation(
    params: &CandidateParams,
    original: &Spectrum,
    pert: &Perturbation,
) -> Result<(ComplexPoly, PerturbedSpectrum)> {
    let n = params.n;
    if pert.dzeta.len() != n - 1 {
        return Err(Error::Shape(format!(
            "{} critical-point displacements for degree {}",
            pert.dzeta.len(),
            n
        )));
    }
    let base = params.beta + pert.dbeta;
    let crits: Vec<Complex64> = original
        .critical_points
        .iter()
        .zip(&pert.dzeta)
        .map(|(z, d)| z + d)
        .collect();
    let q = integrate_from_critical_points(Complex64::new(base, 0.0), &crits);
    let found = find_roots(&q)?;

    let cost: Vec<Vec<f64>> = original
        .roots
        .iter()
        .map(|z| found.iter().map(|w| (z - w).norm()).collect())
        .collect();
    let pairing = min_cost_assignment(&cost);
    let roots: Vec<Complex64> = pairing.iter().map(|&k| found[k]).collect();

    let max_modulus = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let d_q = d_of(&roots, &crits);
    Ok((
        q,
        PerturbedSpectrum {
            roots,
            critical_points: crits,
            base,
            max_modulus,
            d_q,
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub perturbation: Perturbation,
    pub is_admissible: bool,
    pub is_improvement: bool,
    #[serde(rename = "dQ")]
    pub d_q: f64,
    pub root_displacements: Vec<Complex64>,
}

pub fn classify(params: &CandidateParams, original: &Spectrum, pert: &Perturbation) -> Result<ProbeSample> {
    let (_, q) = apply_perturbation(params, original, pert)?;
    let is_admissible = q.max_modulus <= 1.0 + DISK_SLACK;
    let clearance = nearest_distance(Complex64::new(q.base, 0.0), &q.critical_points);
    let is_improvement = is_admissible && clearance > original.r + OUTSIDE_SLACK;
    let root_displacements = q.roots.iter().zip(&original.roots).map(|(w, z)| w - z).collect();
    Ok(ProbeSample {
        perturbation: pert.clone(),
        is_admissible,
        is_improvement,
        d_q: q.d_q,
        root_displacements,
    })
}

/// Aggregate outcome of a neighborhood scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanStats {
    pub count: usize,
    pub scale: f64,
    pub admissible: usize,
    pub improvements: usize,
    /// Largest `d(Q)` among admissible samples; absent when none were.
    #[serde(rename = "max_dQ")]
    pub max_d_q: Option<f64>,
    #[serde(rename = "dP")]
    pub d_p: f64,
    /// `d(P) - max_dQ`.
    pub margin: Option<f64>,
    pub rng_seed: u64,
    /// Samples whose perturbed roots could not be computed.
    pub solver_failures: usize,
    /// Largest distance between a paired perturbed root and its original.
    pub max_pairing_distance: f64,
    pub distribution: String,
    pub evidence: String,
}

/// Independent normal draws for `dbeta` and the real and imaginary parts of
/// every `dzeta_j`, each with standard deviation `scale`. Trial `k` uses its
/// own ChaCha stream `k` under `rng_seed`, so results do not depend on
/// scheduling.
pub fn sample_perturbation(n: usize, scale: f64, rng_seed: u64, trial: u64) -> Perturbation {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(trial);
    let mut draw = || -> f64 {
        let g: f64 = StandardNormal.sample(&mut rng);
        g * scale
    };
    let dbeta = draw();
    let dzeta = (0..n - 1).map(|_| Complex64::new(draw(), draw())).collect();
    Perturbation::new(dbeta, dzeta).expect("finite draws")
}

pub fn neighborhood_scan(params: &CandidateParams, count: usize, scale: f64, rng_seed: u64) -> Result<ScanStats> {
    let base = spectrum(params)?;
    Ok(scan_with_spectrum(params, &base, count, scale, rng_seed))
}

pub fn scan_with_spectrum(
    params: &CandidateParams,
    base: &Spectrum,
    count: usize,
    scale: f64,
    rng_seed: u64,
) -> ScanStats {
    #[derive(Default, Clone, Copy)]
    struct Acc {
        admissible: usize,
        improvements: usize,
        failures: usize,
        max_d_q: Option<f64>,
        max_pair: f64,
    }
    fn merge(x: Acc, y: Acc) -> Acc {
        Acc {
            admissible: x.admissible + y.admissible,
            improvements: x.improvements + y.improvements,
            failures: x.failures + y.failures,
            max_d_q: match (x.max_d_q, y.max_d_q) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            },
            max_pair: x.max_pair.max(y.max_pair),
        }
    }

    let acc = (0..count as u64)
        .into_par_iter()
        .map(|k| {
            let pert = sample_perturbation(params.n, scale, rng_seed, k);
            match classify(params, base, &pert) {
                Ok(s) => Acc {
                    admissible: s.is_admissible as usize,
                    improvements: s.is_improvement as usize,
                    failures: 0,
                    max_d_q: s.is_admissible.then_some(s.d_q),
                    max_pair: s.root_displacements.iter().map(|d| d.norm()).fold(0.0, f64::max),
                },
                Err(_) => Acc {
                    failures: 1,
                    ..Acc::default()
                },
            }
        })
        .reduce(Acc::default, merge);

    ScanStats {
        count,
        scale,
        admissible: acc.admissible,
        improvements: acc.improvements,
        max_d_q: acc.max_d_q,
        d_p: base.d_p,
        margin: acc.max_d_q.map(|m| base.d_p - m),
        rng_seed,
        solver_failures: acc.failures,
        max_pairing_distance: acc.max_pair,
        distribution: "gaussian".into(),
        evidence: "statistical".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_matches_definition() {
        let p = Perturbation::new(3.0, vec![Complex64::new(0.0, 4.0), Complex64::new(12.0, 0.0)]).unwrap();
        assert_eq!(p.norm, 13.0);
        assert!(Perturbation::new(f64::NAN, vec![]).is_err());
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_perturbation(8, 1e-3, 42, 17);
        let b = sample_perturbation(8, 1e-3, 42, 17);
        let c = sample_perturbation(8, 1e-3, 42, 18);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.dzeta.len(), 7);
    }

    #[test]
    fn zero_scale_samples_are_zero() {
        let p = sample_perturbation(9, 0.0, 1, 3);
        assert_eq!(p.norm, 0.0);
    }
}
