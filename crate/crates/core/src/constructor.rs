//! Square nonlinear systems whose solutions are candidate polynomials, and a
//! damped Newton solver for them.
//!
//! Unknowns are `(beta, a, b, c, d_1, d_2[, d_3])`. Components of the
//! residual, in order:
//!
//! 1. `beta^2 + b beta + c - (beta - a)^2`, which puts all critical points
//!    at one distance from `beta`;
//! 2. `r1, r0` of `n P mod (z^2 + d_i z + 1)` for each `i`;
//! 3. for even `n` only, `n P(-1)`.
//!
//! `P` is scaled by `n` to make it monic.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::candidate::{build_candidate, pair_count, CandidateParams};
use crate::certifier::{certify_all, PropertyReport};
use crate::error::{Error, Result};
use crate::linalg::{solve_square, Matrix};
use crate::poly::divmod_unit_quadratic;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    /// Converged once `||F||_inf` drops below this.
    pub tolerance: f64,
    /// Central-difference step, scaled by `max(1, |x_i|)`.
    pub fd_step: f64,
    pub max_condition: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    pub min_damping: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            tolerance: 1e-12,
            fd_step: 1e-7,
            max_condition: 1e14,
            armijo: 1e-4,
            min_damping: 1.0 / 1024.0,
        }
    }
}

/// The unknown names for degree `n`.
pub fn unknowns(n: usize) -> Vec<String> {
    let mut names: Vec<String> = ["beta", "a", "b", "c"].iter().map(|s| s.to_string()).collect();
    names.extend((1..=pair_count(n)).map(|i| format!("d{i}")));
    names
}

/// The residual map of degree `n` as a value.
#[derive(Debug, Clone)]
pub struct ResidualSystem {
    pub n: usize,
    pub unknowns: Vec<String>,
}

impl ResidualSystem {
    pub fn new(n: usize) -> Result<Self> {
        if n < 5 {
            return Err(Error::InvalidCandidate(format!("n = {n} < 5")));
        }
        Ok(Self {
            n,
            unknowns: unknowns(n),
        })
    }

    pub fn dimension(&self) -> usize {
        self.unknowns.len()
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        residual(self.n, x)
    }
}

pub fn residual(n: usize, x: &[f64]) -> Result<Vec<f64>> {
    let pairs = pair_count(n);
    if x.len() != 4 + pairs {
        return Err(Error::Shape(format!(
            "n = {n} needs {} unknowns, got {}",
            4 + pairs,
            x.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("residual input"));
    }
    let (beta, a, b, c) = (x[0], x[1], x[2], x[3]);
    let params = CandidateParams {
        n,
        beta,
        a,
        b,
        c,
        d: x[4..].to_vec(),
    };
    let p = build_candidate(&params)?;
    let monic: Vec<f64> = p.coeffs().iter().map(|z| z.re * n as f64).collect();

    let mut out = Vec::with_capacity(x.len());
    out.push(beta * beta + b * beta + c - (beta - a) * (beta - a));
    for &d in &x[4..] {
        let (_, r1, r0) = divmod_unit_quadratic(&monic, d);
        out.push(r1);
        out.push(r0);
    }
    if n % 2 == 0 {
        let at = p.eval(Complex64::new(-1.0, 0.0));
        out.push(at.re * n as f64);
    }
    Ok(out)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn half_sq(v: &[f64]) -> f64 {
    0.5 * v.iter().map(|x| x * x).sum::<f64>()
}

/// Central finite-difference Jacobian.
pub fn jacobian(n: usize, x: &[f64], step: f64) -> Result<Matrix> {
    let dim = x.len();
    let mut jac = Matrix::zeros(dim, dim);
    let mut xp = x.to_vec();
    for j in 0..dim {
        let h = step * x[j].abs().max(1.0);
        xp[j] = x[j] + h;
        let fp = residual(n, &xp)?;
        xp[j] = x[j] - h;
        let fm = residual(n, &xp)?;
        xp[j] = x[j];
        for i in 0..dim {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub residual_norm: f64,
    /// Why the iteration stopped when it did not converge.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagnostic: Option<String>,
}

/// Damped Newton with Armijo backtracking on `||F||^2 / 2`.
///
/// A singular Jacobian (condition estimate above the limit) is an error; a
/// stalled line search or exhausted iteration budget is reported through
/// `converged = false`.
pub fn newton_solve(n: usize, x0: &[f64], opts: &NewtonOptions) -> Result<NewtonOutcome> {
    let mut x = x0.to_vec();
    let mut fx = residual(n, &x)?;
    let mut norm = inf_norm(&fx);
    for iter in 0..opts.max_iterations {
        if norm < opts.tolerance {
            return Ok(NewtonOutcome {
                x,
                converged: true,
                iterations: iter,
                residual_norm: norm,
                diagnostic: None,
            });
        }
        let jac = jacobian(n, &x, opts.fd_step)?;
        let rhs: Vec<f64> = fx.iter().map(|v| -v).collect();
        let dx = solve_square(&jac, &rhs, opts.max_condition)?;

        let phi = half_sq(&fx);
        let mut lambda = 1.0;
        let accepted = loop {
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + lambda * b).collect();
            // the directional derivative of phi along dx is -2 phi
            if let Ok(ft) = residual(n, &trial) {
                if half_sq(&ft) <= (1.0 - 2.0 * opts.armijo * lambda) * phi {
                    break Some((trial, ft));
                }
            }
            lambda *= 0.5;
            if lambda < opts.min_damping {
                break None;
            }
        };
        match accepted {
            Some((trial, ft)) => {
                x = trial;
                fx = ft;
                norm = inf_norm(&fx);
            }
            None => {
                // at the rounding floor the full step is harmless; otherwise stop
                let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
                match residual(n, &trial) {
                    Ok(ft) if inf_norm(&ft) < opts.tolerance => {
                        return Ok(NewtonOutcome {
                            residual_norm: inf_norm(&ft),
                            x: trial,
                            converged: true,
                            iterations: iter + 1,
                            diagnostic: None,
                        });
                    }
                    _ => {
                        return Ok(NewtonOutcome {
                            x,
                            converged: false,
                            iterations: iter + 1,
                            residual_norm: norm,
                            diagnostic: Some("line search stalled".into()),
                        });
                    }
                }
            }
        }
    }
    let converged = norm < opts.tolerance;
    Ok(NewtonOutcome {
        x,
        converged,
        iterations: opts.max_iterations,
        residual_norm: norm,
        diagnostic: (!converged).then(|| "iteration limit reached".into()),
    })
}

/// One line of the construction log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionLog {
    pub seed_index: usize,
    pub seed: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub residual_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solution: Option<Vec<f64>>,
    /// `None` when the seed did not converge or duplicated an earlier one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub overall: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Construction {
    /// Certified candidates sorted by `beta`.
    pub candidates: Vec<(CandidateParams, PropertyReport)>,
    pub log: Vec<ConstructionLog>,
}

/// Converged solutions closer than this (componentwise) are duplicates.
pub const DEDUP_TOL: f64 = 1e-6;

/// Solves from every seed in parallel, deduplicates the converged solutions
/// in seed order, certifies each and keeps those passing all of A–H.
pub fn construct(n: usize, seeds: &[Vec<f64>], opts: &NewtonOptions) -> Result<Construction> {
    ResidualSystem::new(n)?;
    let outcomes: Vec<Result<NewtonOutcome>> = seeds.par_iter().map(|s| newton_solve(n, s, opts)).collect();

    let mut log = Vec::with_capacity(seeds.len());
    let mut unique: Vec<(usize, Vec<f64>)> = Vec::new();
    for (k, (seed, outcome)) in seeds.iter().zip(outcomes).enumerate() {
        let mut entry = ConstructionLog {
            seed_index: k,
            seed: seed.clone(),
            converged: false,
            iterations: 0,
            residual_norm: f64::NAN,
            solution: None,
            overall: None,
            note: None,
        };
        match outcome {
            Ok(out) => {
                entry.converged = out.converged;
                entry.iterations = out.iterations;
                entry.residual_norm = out.residual_norm;
                entry.note = out.diagnostic;
                if out.converged {
                    let dup = unique.iter().find(|(_, u)| {
                        u.iter().zip(&out.x).all(|(p, q)| (p - q).abs() < DEDUP_TOL)
                    });
                    match dup {
                        Some((first, _)) => entry.note = Some(format!("duplicate of seed {first}")),
                        None => unique.push((k, out.x.clone())),
                    }
                    entry.solution = Some(out.x);
                }
            }
            Err(e) => entry.note = Some(e.to_string()),
        }
        log.push(entry);
    }

    let certified: Vec<(usize, Result<(CandidateParams, PropertyReport)>)> = unique
        .par_iter()
        .map(|(k, x)| {
            let res = CandidateParams::from_vector(n, x).and_then(|p| {
                let report = certify_all(&p)?;
                Ok((p, report))
            });
            (*k, res)
        })
        .collect();

    let mut candidates = Vec::new();
    for (k, res) in certified {
        match res {
            Ok((p, report)) => {
                log[k].overall = Some(report.overall);
                if !report.overall {
                    let failed: Vec<String> = report.failures().iter().map(|f| f.to_string()).collect();
                    log[k].note = Some(format!("failed {}", failed.join("")));
                } else {
                    candidates.push((p, report));
                }
            }
            Err(e) => {
                log[k].overall = Some(false);
                log[k].note = Some(e.to_string());
            }
        }
    }
    candidates.sort_by(|x, y| x.0.beta.total_cmp(&y.0.beta));
    Ok(Construction { candidates, log })
}

/// Coarse grid seeds for exploring degrees without published values.
///
/// `beta` over 0.70..=0.90 and `a` over -0.25..=-0.05 in steps of 0.05,
/// strictly increasing `d` tuples from -1.5..=1.5 in steps of 0.5. `b` and
/// `c` put the complex critical points at distance `beta - a` from `beta`
/// with real part `beta - (beta - a) / 2`.
pub fn discovery_seeds(n: usize) -> Vec<Vec<f64>> {
    let betas: Vec<f64> = (0..=4).map(|k| 0.70 + 0.05 * k as f64).collect();
    let avals: Vec<f64> = (0..=4).map(|k| -0.25 + 0.05 * k as f64).collect();
    let dgrid: Vec<f64> = (0..=6).map(|k| -1.5 + 0.5 * k as f64).collect();
    let pairs = pair_count(n);

    let mut dsets: Vec<Vec<f64>> = vec![vec![]];
    for _ in 0..pairs {
        dsets = dsets
            .into_iter()
            .flat_map(|prefix| {
                dgrid
                    .iter()
                    .filter(|d| prefix.last().is_none_or(|last| **d > *last + 1e-9))
                    .map(|d| {
                        let mut v = prefix.clone();
                        v.push(*d);
                        v
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }

    let mut seeds = Vec::new();
    for &beta in &betas {
        for &a in &avals {
            let radius = beta - a;
            let re = beta - radius / 2.0;
            let b = -2.0 * re;
            let c = radius * radius - beta * beta - b * beta;
            for d in &dsets {
                let mut x = vec![beta, a, b, c];
                x.extend_from_slice(d);
                seeds.push(x);
            }
        }
    }
    seeds
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_component_by_hand() {
        // beta = 1, a = 0, b = -2, c = 1: 1 - 2 + 1 - 1 = -1
        let r = residual(8, &[1.0, 0.0, -2.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(r[0], -1.0);
        assert_eq!(r.len(), 6);
        assert_eq!(residual(9, &[1.0, 0.0, -2.0, 1.0, 0.0, 0.0, 0.0]).unwrap().len(), 7);
    }

    #[test]
    fn shape_checked() {
        assert!(residual(9, &[1.0, 0.0, -2.0, 1.0, 0.0, 0.0]).is_err());
        assert!(ResidualSystem::new(4).is_err());
        assert_eq!(ResidualSystem::new(9).unwrap().dimension(), 7);
    }

    #[test]
    fn discovery_grid_size() {
        // 25 (beta, a) pairs times C(7, k) increasing d tuples
        assert_eq!(discovery_seeds(8).len(), 25 * 21);
        assert_eq!(discovery_seeds(9).len(), 25 * 35);
        for s in discovery_seeds(8) {
            let (beta, a, b, c) = (s[0], s[1], s[2], s[3]);
            assert!((beta * beta + b * beta + c - (beta - a).powi(2)).abs() < 1e-12);
        }
    }
}
